#include "anosov/io.hpp"

#include <algorithm>
#include <cstdio>

#include "anosov/error.hpp"

namespace anosov::io {

namespace {

// DOM builder that stores floating point literals as their source text.
class ExactSax : public nlohmann::json_sax<Json> {
 public:
  explicit ExactSax(Json& root) : dom_(root) {}

  bool null() override { return dom_.null(); }
  bool boolean(bool v) override { return dom_.boolean(v); }
  bool number_integer(number_integer_t v) override { return dom_.number_integer(v); }
  bool number_unsigned(number_unsigned_t v) override { return dom_.number_unsigned(v); }
  bool number_float(number_float_t, const string_t& s) override {
    string_t copy = s;
    return dom_.string(copy);
  }
  bool string(string_t& v) override { return dom_.string(v); }
  bool binary(binary_t& v) override { return dom_.binary(v); }
  bool start_object(std::size_t n) override { return dom_.start_object(n); }
  bool key(string_t& v) override { return dom_.key(v); }
  bool end_object() override { return dom_.end_object(); }
  bool start_array(std::size_t n) override { return dom_.start_array(n); }
  bool end_array() override { return dom_.end_array(); }
  bool parse_error(std::size_t pos, const std::string& token, const nlohmann::detail::exception& e) override {
    error_ = "at byte " + std::to_string(pos) + " near '" + token + "': " + e.what();
    return false;
  }
  const std::string& error() const { return error_; }

 private:
  nlohmann::detail::json_sax_dom_parser<Json> dom_;
  std::string error_;
};

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) fail(std::string("missing field '") + name + "'");
  return j.at(name);
}

void expect_array(const Json& j, const std::string& what) {
  if (!j.is_array()) fail(what + " must be an array");
}

std::vector<long> long_vector(const Json& j, const std::string& what) {
  expect_array(j, what);
  std::vector<long> out;
  for (const auto& v : j) out.push_back(read_long(v));
  return out;
}

std::vector<double> double_vector(const Json& j, const std::string& what) {
  expect_array(j, what);
  std::vector<double> out;
  for (const auto& v : j) out.push_back(read_double(v));
  return out;
}

conjugacy::TrigField parse_field(const Json& j, std::size_t n) {
  conjugacy::TrigField f;
  if (j.is_null()) return f;
  if (!j.is_object()) fail("perturbation entries must be objects");
  f.epsilon = j.contains("epsilon") ? read_double(j.at("epsilon")) : 1.0;
  const Json& freqs = field(j, "frequencies");
  const Json& coeffs = field(j, "coefficients");
  expect_array(freqs, "frequencies");
  expect_array(coeffs, "coefficients");
  if (freqs.size() != coeffs.size()) fail("frequencies and coefficients differ in length");
  const Json* cos = j.contains("cos_coefficients") ? &j.at("cos_coefficients") : nullptr;
  if (cos) {
    expect_array(*cos, "cos_coefficients");
    if (cos->size() != freqs.size()) fail("cos_coefficients and frequencies differ in length");
  }
  for (std::size_t t = 0; t < freqs.size(); ++t) {
    conjugacy::TrigTerm term;
    term.frequency = long_vector(freqs[t], "frequency");
    term.sin_coeffs = double_vector(coeffs[t], "coefficient");
    if (cos) term.cos_coeffs = double_vector((*cos)[t], "cos coefficient");
    if (term.frequency.size() != n || term.sin_coeffs.size() != n || (cos && term.cos_coeffs.size() != n))
      fail("trigonometric term does not match the torus dimension");
    f.terms.push_back(std::move(term));
  }
  return f;
}

}  // namespace

Json parse_json(std::string_view text) {
  Json root;
  ExactSax sax(root);
  bool ok = false;
  try {
    ok = Json::sax_parse(text.begin(), text.end(), &sax);
  } catch (const nlohmann::json::exception& e) {
    fail(e.what());
  }
  if (!ok) fail(sax.error().empty() ? "malformed JSON" : sax.error());
  return root;
}

std::string input_hash(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Rational read_rational(const Json& v) {
  if (v.is_number_integer()) return Rational(Integer(v.dump(), 10));
  if (v.is_string()) {
    try {
      return parse_rational(v.get<std::string>());
    } catch (const Error&) {
      fail("not a number: '" + v.get<std::string>() + "'");
    }
  }
  if (v.is_number_float()) return rational_from_double(v.get<double>());
  fail("expected a number, got " + v.dump());
}

double read_double(const Json& v) {
  if (v.is_number()) return v.get<double>();
  return to_double(read_rational(v));
}

long read_long(const Json& v) {
  if (v.is_number_integer()) return v.get<long>();
  Rational r = read_rational(v);
  if (r.get_den() != 1 || !r.get_num().fits_slong_p()) fail("expected an integer, got " + v.dump());
  return r.get_num().get_si();
}

RawAction parse_action(const Json& j) {
  RawAction a;
  a.dim = static_cast<int>(read_long(field(j, "dim")));
  if (a.dim < 1) fail("dim must be positive");
  const auto n = static_cast<std::size_t>(a.dim);
  const Json& gens = field(j, "generators");
  expect_array(gens, "generators");
  if (gens.empty()) fail("at least one generator required");
  for (const auto& g : gens) {
    expect_array(g, "generator");
    IntMatrix m(n, n);
    if (g.size() == n * n && (g.empty() || !g[0].is_array())) {
      for (std::size_t i = 0; i < n * n; ++i) m(i / n, i % n) = Integer(read_long(g[i]));
    } else {
      if (g.size() != n) fail("generator has the wrong shape");
      for (std::size_t r = 0; r < n; ++r) {
        expect_array(g[r], "generator row");
        if (g[r].size() != n) fail("generator row has the wrong length");
        for (std::size_t c = 0; c < n; ++c) m(r, c) = Integer(read_long(g[r][c]));
      }
    }
    a.generators.push_back(m);
  }
  if (j.contains("labels")) {
    expect_array(j.at("labels"), "labels");
    for (const auto& l : j.at("labels")) {
      if (!l.is_string()) fail("labels must be strings");
      a.labels.push_back(l.get<std::string>());
    }
    if (a.labels.size() != a.generators.size()) fail("one label per generator required");
  }
  return a;
}

resonance::SpectrumBands parse_bands(const Json& j) {
  const Json& intervals = field(j, "intervals");
  expect_array(intervals, "intervals");
  std::vector<Rational> lambda, mu;
  for (const auto& iv : intervals) {
    if (!iv.is_array() || iv.size() != 2) fail("each interval must be a pair");
    lambda.push_back(read_rational(iv[0]));
    mu.push_back(read_rational(iv[1]));
  }
  std::vector<int> dims(lambda.size(), 1);
  if (j.contains("block_dims")) {
    auto d = long_vector(j.at("block_dims"), "block_dims");
    if (d.size() != lambda.size()) fail("one block dimension per interval required");
    for (std::size_t i = 0; i < d.size(); ++i) dims[i] = static_cast<int>(d[i]);
  }
  try {
    return resonance::make_bands(lambda, mu, dims);
  } catch (const Error& e) {
    fail(e.what());
  }
}

normalform::BlockedPolynomialMap parse_polynomial_map(const Json& j) {
  auto bands = parse_bands(field(j, "bands"));
  int degree = j.contains("degree") ? static_cast<int>(read_long(j.at("degree"))) : 0;
  if (degree <= 0) degree = std::max(1, bands.mu.back() < 0 ? resonance::degree_bound(bands) : 1);
  normalform::BlockedPolynomialMap f(bands, degree);
  const int dim = bands.total_dim();
  const auto blocks = bands.coordinate_blocks();
  const Json& terms = field(j, "terms");
  expect_array(terms, "terms");
  try {
    for (const auto& t : terms) {
      if (t.contains("monomial")) {
        const long coord = read_long(field(t, "coordinate"));
        auto mono = long_vector(t.at("monomial"), "monomial");
        if (coord < 1 || coord > dim || mono.size() != static_cast<std::size_t>(dim)) fail("bad coefficient triple");
        normalform::Monomial m(mono.begin(), mono.end());
        f.add(static_cast<int>(coord - 1), m, f.coefficient(static_cast<int>(coord - 1), m) + read_rational(field(t, "value")));
        continue;
      }
      const long block = read_long(field(t, "block"));
      auto s = long_vector(field(t, "multidegree"), "multidegree");
      if (block < 1 || block > static_cast<long>(bands.count()) || s.size() != bands.count())
        fail("bad block or multidegree");
      int total = 0;
      for (long v : s) {
        if (v < 0) fail("negative multidegree");
        total += static_cast<int>(v);
      }
      std::vector<normalform::Monomial> monos;
      for (auto& m : normalform::monomials_of_degree(dim, total))
        if (f.multidegree(m) == std::vector<int>(s.begin(), s.end())) monos.push_back(m);
      std::vector<int> coords;
      for (int c = 0; c < dim; ++c)
        if (blocks[static_cast<std::size_t>(c)] == block - 1) coords.push_back(c);
      const Json& rows = field(t, "coefficients");
      expect_array(rows, "coefficients");
      if (rows.size() != coords.size()) fail("coefficient block needs one row per coordinate of the block");
      for (std::size_t r = 0; r < coords.size(); ++r) {
        expect_array(rows[r], "coefficient row");
        if (rows[r].size() != monos.size()) fail("coefficient row needs one entry per monomial of the multidegree");
        for (std::size_t c = 0; c < monos.size(); ++c)
          f.add(coords[r], monos[c], f.coefficient(coords[r], monos[c]) + read_rational(rows[r][c]));
      }
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseError) throw;
    fail(e.what());
  }
  return f;
}

conjugacy::ToralPerturbation PerturbationInput::build() const {
  const auto n = static_cast<std::size_t>(action.dim);
  std::vector<conjugacy::PerturbationMap> maps;
  if (psi) {
    conjugacy::PsiDiffeo diffeo(*psi, n);
    for (std::size_t i = 0; i < action.rank(); ++i) {
      bool on = std::find(psi_generators.begin(), psi_generators.end(), i) != psi_generators.end();
      maps.push_back(on ? conjugacy::psi_map(action.generators[i], diffeo) : conjugacy::zero_map(n));
    }
    return conjugacy::ToralPerturbation(action, std::move(maps));
  }
  return conjugacy::trig_perturbation(action, fields);
}

PerturbationInput parse_perturbation(const Json& j) {
  PerturbationInput in;
  RawAction raw = parse_action(field(j, "action"));
  in.action = spectra::validate_action(raw.generators, raw.labels);
  const auto n = static_cast<std::size_t>(in.action.dim);
  if (j.contains("solving_generator")) {
    long g = read_long(j.at("solving_generator"));
    if (g < 1 || g > static_cast<long>(in.action.rank())) fail("solving_generator out of range");
    in.solving_generator = static_cast<std::size_t>(g - 1);
  }
  if (j.contains("psi")) {
    in.psi = parse_field(j.at("psi"), n);
    if (j.contains("psi_generators")) {
      for (long g : long_vector(j.at("psi_generators"), "psi_generators")) {
        if (g < 1 || g > static_cast<long>(in.action.rank())) fail("psi_generators entry out of range");
        in.psi_generators.push_back(static_cast<std::size_t>(g - 1));
      }
    } else {
      for (std::size_t i = 0; i < in.action.rank(); ++i) in.psi_generators.push_back(i);
    }
  }
  if (j.contains("generators")) {
    if (in.psi) fail("give either psi or per-generator perturbations");
    const Json& g = j.at("generators");
    expect_array(g, "generators");
    if (g.size() > in.action.rank()) fail("more perturbations than generators");
    for (const auto& entry : g) in.fields.push_back(parse_field(entry, n));
  }
  return in;
}

RootRequest parse_root_request(const Json& j) {
  RootRequest r;
  const Json& type = field(j, "type");
  if (!type.is_string()) fail("type must be a string");
  try {
    r.type = rootsys::parse_type(type.get<std::string>());
  } catch (const Error& e) {
    fail(e.what());
  }
  r.rank = static_cast<int>(read_long(field(j, "rank")));
  if (j.contains("multiplicities")) {
    const Json& m = j.at("multiplicities");
    if (!m.is_object()) fail("multiplicities must be an object");
    for (const auto& [k, v] : m.items()) r.multiplicities[k] = static_cast<int>(read_long(v));
  }
  return r;
}

}  // namespace anosov::io
