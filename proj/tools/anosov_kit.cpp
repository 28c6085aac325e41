#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "anosov/chambers.hpp"
#include "anosov/conjugacy.hpp"
#include "anosov/error.hpp"
#include "anosov/io.hpp"
#include "anosov/normalform.hpp"
#include "anosov/resonance.hpp"
#include "anosov/rootsys.hpp"
#include "anosov/spectra.hpp"

using namespace anosov;
using io::Json;

namespace {

constexpr const char* kSchemaVersion = "1";

enum Exit { kPass = 0, kParse = 1, kFail = 2, kInconclusive = 3 };

struct Config {
  std::string input;
  std::string output;
  std::string format = "json";
  double tol = 0;
  std::size_t grid = 0;
  int degree = 0;
  std::uint64_t seed = 1;
  // conjugate
  std::string dump;
  std::string fourier;
  std::size_t probe_samples = 48;
  bool no_probe = false;
  // rootsys
  std::string type;
  int rank = 0;
};

Json interval(const Interval& v) { return Json::array({v.lo, v.hi}); }

Json intervals(const std::vector<Interval>& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(interval(x));
  return out;
}

Json rationals(const std::vector<Rational>& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

Json error_json(const Error& e) { return {{"code", std::string(error_name(e.code()))}, {"message", e.what()}}; }

int exit_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::ParseError:
    case ErrorCode::InvalidType:
    case ErrorCode::InvalidBands:
      return kParse;
    case ErrorCode::ResolutionInsufficient:
    case ErrorCode::UndecidedEquality:
    case ErrorCode::UndecidedSign:
    case ErrorCode::UndecidedProportionality:
    case ErrorCode::EnclosureTooWide:
    case ErrorCode::BoxExhausted:
      return kInconclusive;
    default:
      return kFail;
  }
}

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void render_text(const Json& j, const std::string& prefix, std::ostream& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) render_text(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array() && std::any_of(j.begin(), j.end(), [](const Json& v) { return v.is_structured(); })) {
    for (std::size_t i = 0; i < j.size(); ++i) render_text(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else {
    out << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

void emit(const Json& report, const Config& cfg) {
  std::ostringstream text;
  if (cfg.format == "text")
    render_text(report, "", text);
  else
    text << report.dump(2) << "\n";
  if (cfg.output.empty() || cfg.output == "-") {
    std::cout << text.str();
  } else {
    std::ofstream out(cfg.output, std::ios::binary);
    if (!out) throw Error(ErrorCode::ParseError, "cannot write " + cfg.output);
    out << text.str();
  }
}

Json header(const std::string& command, const std::string& input) {
  return {{"schema_version", kSchemaVersion}, {"command", command}, {"input_hash", io::input_hash(input)}};
}

// ---- analyze ----

Json functional_json(const LyapunovFunctional& f) {
  Json exact = Json::array();
  for (const auto& e : f.exact) exact.push_back(e ? Json(to_string(*e)) : Json(nullptr));
  return {{"label", f.label}, {"multiplicity", f.multiplicity}, {"coefficients", intervals(f.coeffs)},
          {"exact", exact}, {"classes", f.classes}};
}

Json coarse_json(const chambers::CoarseDecomposition& c, const std::vector<LyapunovFunctional>& fs) {
  Json spaces = Json::array();
  for (const auto& s : c.spaces) {
    Json members = Json::array(), coeffs = Json::array();
    for (int m : s.halfspace.members) members.push_back(fs[static_cast<std::size_t>(m)].label);
    for (const auto& k : s.coefficients) coeffs.push_back(k.exact ? Json(to_string(*k.exact)) : interval(k.value));
    Json normal = s.halfspace.exact_normal ? rationals(*s.halfspace.exact_normal) : intervals(s.halfspace.normal);
    spaces.push_back({{"members", members},
                      {"bottom", fs[static_cast<std::size_t>(s.bottom)].label},
                      {"coefficients", coeffs},
                      {"dimension", s.dimension},
                      {"normal", normal}});
  }
  return {{"spaces", spaces}, {"neutral_dimension", c.neutral_dimension}, {"total_dimension", c.total_dimension()}};
}

int cmd_analyze(const Config& cfg) {
  const std::string input = read_input(cfg.input);
  Json report = header("analyze", input);
  auto raw = io::parse_action(io::parse_json(input));

  spectra::ActionSpec action;
  try {
    action = spectra::validate_action(raw.generators, raw.labels);
  } catch (const spectra::ActionRejected& e) {
    Json v = Json::array();
    for (const auto& x : e.violations())
      v.push_back({{"code", std::string(error_name(x.code))}, {"indices", x.indices}, {"message", x.message}});
    report["rejected"] = v;
    report["verdict"] = "fail";
    emit(report, cfg);
    return kFail;
  }
  report["action"] = {{"dim", action.dim}, {"rank", action.rank()}, {"labels", action.labels}};

  auto js = spectra::joint_spectrum(action, cfg.tol > 0 ? cfg.tol : 1e-12);
  auto fs = spectra::lyapunov_functionals(action, js);
  Json classes = Json::array();
  for (const auto& c : js.classes)
    classes.push_back({{"index", c.index},
                       {"dimension", c.dimension},
                       {"block", c.block},
                       {"minimal_polynomial", c.minimal_polynomial.to_string()},
                       {"moduli_log", intervals(c.moduli_log)}});
  report["spectrum"] = {{"separator", js.separator}, {"classes", classes}};
  Json fj = Json::array();
  for (const auto& f : fs) fj.push_back(functional_json(f));
  report["functionals"] = fj;

  spectra::SpectralCertifier cert(action, js, fs);
  try {
    auto coarse = chambers::coarse_decomposition(fs, &cert);
    report["coarse"] = coarse_json(coarse, fs);
    try {
      auto arr = chambers::weyl_chambers(fs, coarse, &cert);
      Json ch = Json::array();
      for (const auto& c : arr.chambers) ch.push_back({{"signs", c.signs}, {"regular_element", c.regular_element}});
      report["chambers"] = {{"walls", arr.walls.size()}, {"count", arr.chambers.size()}, {"chambers", ch}};
      if (action.rank() >= 2) {
        auto t1 = chambers::check_theorem1_combinatorics(fs, coarse, arr);
        report["theorem1"] = {{"combinatorics_pass", t1.combinatorics_pass},
                              {"ergodicity_verified", t1.ergodicity_verified},
                              {"ergodicity_note", t1.ergodicity_note}};
      }
    } catch (const Error& e) {
      report["chambers"] = {{"error", error_json(e)}};
    }
  } catch (const Error& e) {
    report["coarse"] = {{"error", error_json(e)}};
  }

  Json anosov = Json::array(), mixing = Json::array();
  for (std::size_t i = 0; i < action.rank(); ++i) {
    std::vector<long> e(action.rank(), 0);
    e[i] = 1;
    anosov.push_back(spectra::is_anosov_element(action, fs, e));
    mixing.push_back(spectra::is_weak_mixing(action.generators[i]));
  }
  report["generators"] = {{"anosov", anosov}, {"weak_mixing", mixing}};

  auto cor = spectra::check_corollary4_hypotheses(action);
  Json failures = Json::array();
  if (!cor.applicable) failures.push_back("RankTooLow");
  if (!cor.semisimple.overall) failures.push_back("NotSemisimple");
  if (!cor.anosov_element && !cor.box_exhausted) failures.push_back("NotAnosov");
  if (cor.roots_of_unity == spectra::Verdict::Fail) failures.push_back("RootOfUnity");
  Json c4 = {{"applicable", cor.applicable},
             {"semisimple", cor.semisimple.overall},
             {"anosov_element", cor.anosov_element ? Json(*cor.anosov_element) : Json(nullptr)},
             {"anosov_source", cor.anosov_source},
             {"box_exhausted", cor.box_exhausted},
             {"roots_of_unity", std::string(spectra::verdict_name(cor.roots_of_unity))},
             {"kernel_ranks", cor.kernel_ranks},
             {"weak_mixing_generators", cor.weak_mixing_generators},
             {"failures", failures},
             {"notes", cor.notes},
             {"verdict", std::string(spectra::verdict_name(cor.verdict))}};
  if (cor.witness)
    c4["witness"] = {{"element", cor.witness->element}, {"block", cor.witness->block}, {"order", cor.witness->order}};
  report["corollary4"] = c4;
  report["verdict"] = std::string(spectra::verdict_name(cor.verdict));
  emit(report, cfg);
  switch (cor.verdict) {
    case spectra::Verdict::Pass: return kPass;
    case spectra::Verdict::Fail: return kFail;
    default: return kInconclusive;
  }
}

// ---- resonances ----

Json bands_json(const resonance::SpectrumBands& b) {
  Json iv = Json::array();
  for (std::size_t i = 0; i < b.count(); ++i) iv.push_back(Json::array({to_string(b.lambda[i]), to_string(b.mu[i])}));
  return {{"intervals", iv}, {"block_dims", b.block_dims}};
}

int cmd_resonances(const Config& cfg) {
  const std::string input = read_input(cfg.input);
  Json report = header("resonances", input);
  auto bands = io::parse_bands(io::parse_json(input));
  report["bands"] = bands_json(bands);
  const bool narrow = resonance::is_narrow_band(bands);
  report["narrow_band"] = narrow;
  if (!narrow) report["warning"] = "NotNarrowBand";
  auto d = resonance::sr_group_descriptor(bands);
  Json rel = Json::array();
  int nontrivial = 0;
  for (const auto& r : d.relations) {
    rel.push_back({{"block", r.target_block + 1}, {"exponents", r.exponents}, {"degree", r.degree()},
                   {"trivial", r.trivial}});
    if (!r.trivial) ++nontrivial;
  }
  report["degree_bound"] = d.degree_bound;
  report["relations"] = rel;
  report["nontrivial_relations"] = nontrivial;
  report["monomial_count"] = to_string(d.monomial_count);
  report["regime"] = resonance::normal_form_regime(d);
  emit(report, cfg);
  return kPass;
}

// ---- normalform ----

Json map_json(const normalform::BlockedPolynomialMap& f) {
  Json terms = Json::array();
  for (const auto& t : normalform::terms(f))
    terms.push_back({{"coordinate", t.coordinate + 1},
                     {"block", t.block + 1},
                     {"monomial", t.monomial},
                     {"multidegree", t.multidegree},
                     {"value", to_string(t.value)}});
  return {{"degree", f.degree()}, {"terms", terms}};
}

int cmd_normalform(const Config& cfg) {
  const std::string input = read_input(cfg.input);
  Json report = header("normalform", input);
  const Json j = io::parse_json(input);
  std::vector<normalform::BlockedPolynomialMap> maps;
  if (j.contains("maps")) {
    if (!j.at("maps").is_array() || j.at("maps").empty()) throw Error(ErrorCode::ParseError, "maps must be a nonempty array");
    for (const auto& m : j.at("maps")) maps.push_back(io::parse_polynomial_map(m));
  } else {
    maps.push_back(io::parse_polynomial_map(j));
  }
  report["bands"] = bands_json(maps.front().bands());
  report["degree_bound"] = resonance::degree_bound(maps.front().bands());
  auto results = normalform::normalize_periodic_orbit(maps, cfg.degree);
  Json out = Json::array();
  bool ok = true;
  for (const auto& r : results) {
    auto sr = normalform::is_subresonance_type(r.normal);
    ok = ok && r.residual == 0 && sr.ok;
    out.push_back({{"change", map_json(r.change)},
                   {"normal", map_json(r.normal)},
                   {"residual", to_string(r.residual)},
                   {"normal_is_subresonance", sr.ok}});
  }
  report["period"] = maps.size();
  report["results"] = out;
  report["verdict"] = ok ? "pass" : "fail";
  emit(report, cfg);
  return ok ? kPass : kFail;
}

// ---- conjugate ----

int cmd_conjugate(const Config& cfg) {
  const std::string input = read_input(cfg.input);
  Json report = header("conjugate", input);
  auto in = io::parse_perturbation(io::parse_json(input));
  auto pert = in.build();
  const std::size_t n = pert.dim();

  conjugacy::SolveOptions opt;
  opt.resolution = cfg.grid > 0 ? cfg.grid : (n <= 2 ? 512 : n == 3 ? 128 : 32);
  if (cfg.tol > 0) opt.tol = cfg.tol;
  Json c1 = Json::array();
  for (std::size_t i = 0; i < pert.rank(); ++i) c1.push_back(pert.map(i).c1_bound());
  report["perturbation"] = {{"c1_norm_bound", pert.c1_norm_bound()},
                            {"per_generator_c1", c1},
                            {"solving_generator", in.solving_generator + 1},
                            {"psi", in.psi.has_value()}};
  Json defects = Json::array();
  for (std::size_t i = 0; i < pert.rank(); ++i)
    for (std::size_t j = i + 1; j < pert.rank(); ++j)
      defects.push_back({{"pair", {i + 1, j + 1}}, {"defect", conjugacy::commutation_defect(pert, i, j, 256, cfg.seed)}});
  report["commutation"] = defects;

  conjugacy::ConjugacyField h;
  try {
    h = conjugacy::solve_conjugacy(pert, in.solving_generator, opt);
  } catch (const Error& e) {
    report["error"] = error_json(e);
    report["verdict"] = e.code() == ErrorCode::ResolutionInsufficient ? "inconclusive" : "fail";
    emit(report, cfg);
    return exit_for(e);
  }
  report["field"] = {{"resolution", h.resolution},
                     {"iterations", h.iterations},
                     {"residual", h.residual},
                     {"residual_history", h.residual_history},
                     {"sup_norm", h.sup_norm()},
                     {"contraction_rate", h.contraction_rate},
                     {"smallness", h.smallness},
                     {"tol", opt.tol}};
  auto iw = conjugacy::verify_intertwining(h, pert, opt.tol);
  report["intertwining"] = {{"residuals", iw.residuals},
                            {"interpolation_budget", iw.interpolation_budget},
                            {"rigid", iw.rigid}};
  bool solving_is_psi = in.psi && std::find(in.psi_generators.begin(), in.psi_generators.end(),
                                            in.solving_generator) != in.psi_generators.end();
  if (solving_is_psi) report["psi_recovery_error"] = conjugacy::distance_to(h, *in.psi);

  int code = iw.rigid ? kPass : kFail;
  if (!cfg.no_probe) {
    try {
      if (!spectra::is_semisimple(pert.base()).overall)
        throw Error(ErrorCode::PreconditionFailed, "base linear part is not semisimple");
      auto js = spectra::joint_spectrum(pert.base());
      auto fs = spectra::lyapunov_functionals(pert.base(), js);
      spectra::SpectralCertifier cert(pert.base(), js, fs);
      auto coarse = chambers::coarse_decomposition(fs, &cert);
      auto dirs = conjugacy::coarse_directions(pert.base(), fs, coarse);
      conjugacy::ProbeOptions po;
      po.samples = cfg.probe_samples;
      po.seed = cfg.seed;
      auto rep = conjugacy::regularity_probe(h, pert, dirs, po);
      Json dj = Json::array();
      for (const auto& d : rep.directions)
        dj.push_back({{"label", d.direction.label},
                      {"space", d.direction.space + 1},
                      {"vector", d.direction.vector},
                      {"scales", d.scales},
                      {"first_differences", d.first_differences},
                      {"second_differences", d.second_differences},
                      {"holder_exponent", d.holder_exponent},
                      {"second_exponent", d.second_exponent},
                      {"classification", d.classification}});
      report["regularity"] = {{"orbit_half_length", rep.orbit_half_length}, {"directions", dj}};
    } catch (const Error& e) {
      report["regularity"] = {{"error", error_json(e)}};
      if (e.code() == ErrorCode::ResolutionInsufficient && code == kPass) code = kInconclusive;
    }
  }
  if (!cfg.dump.empty()) {
    std::ofstream out(cfg.dump, std::ios::binary);
    if (!out) throw Error(ErrorCode::ParseError, "cannot write " + cfg.dump);
    conjugacy::write_grid_dump(h, out);
  }
  if (!cfg.fourier.empty()) {
    Json table = Json::array();
    for (const auto& c : conjugacy::fourier_table(h))
      table.push_back({{"component", c.component + 1}, {"frequency", c.frequency}, {"re", c.value.real()},
                       {"im", c.value.imag()}});
    std::ofstream out(cfg.fourier, std::ios::binary);
    if (!out) throw Error(ErrorCode::ParseError, "cannot write " + cfg.fourier);
    out << Json{{"dim", h.dim}, {"resolution", h.resolution}, {"coefficients", table}}.dump(2) << "\n";
  }
  report["verdict"] = code == kPass ? "pass" : code == kFail ? "fail" : "inconclusive";
  emit(report, cfg);
  return code;
}

// ---- rootsys ----

int cmd_rootsys(const Config& cfg) {
  io::RootRequest req;
  std::string input;
  if (!cfg.input.empty()) {
    input = read_input(cfg.input);
    req = io::parse_root_request(io::parse_json(input));
  } else {
    if (cfg.type.empty()) throw Error(ErrorCode::ParseError, "give --input or --type and --rank");
    req.type = rootsys::parse_type(cfg.type);
    req.rank = cfg.rank;
    input = rootsys::type_name(req.type) + "_" + std::to_string(req.rank);
  }
  Json report = header("rootsys", input);
  auto sys = rootsys::build_root_system(req.type, req.rank, req.multiplicities);
  auto data = rootsys::weyl_flow_lyapunov_data(sys);
  auto smooth = rootsys::smoothness_class_report(sys, data);
  Json roots = Json::array();
  for (const auto& r : sys.roots)
    roots.push_back({{"label", r.label}, {"coords", rationals(r.coords)}, {"key", r.key},
                     {"multiplicity", r.multiplicity}});
  report["system"] = sys.label();
  report["roots"] = roots;
  report["root_count"] = sys.roots.size();
  report["expected_root_count"] = rootsys::expected_root_count(sys.type, sys.rank);
  report["coarse"] = coarse_json(data.coarse, data.functionals);
  report["coefficients_ok"] = data.coefficients_ok;
  report["warnings"] = data.warnings;
  Json pairs = Json::array();
  for (const auto& [a, b] : smooth.doubled_pairs) pairs.push_back(Json::array({a, b}));
  report["smoothness"] = {{"class", smooth.smoothness}, {"reason", smooth.reason}, {"doubled_pairs", pairs},
                          {"regime", smooth.regime}};
  emit(report, cfg);
  return kPass;
}

void add_common(CLI::App* sub, Config& cfg) {
  sub->add_option("--input", cfg.input, "input JSON file ('-' for stdin)");
  sub->add_option("--output", cfg.output, "report file (default stdout)");
  sub->add_option("--format", cfg.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  sub->add_option("--tol", cfg.tol, "tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--grid", cfg.grid, "grid points per axis")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 16));
  sub->add_option("--degree", cfg.degree, "truncation degree (0 = degree bound)")->check(CLI::NonNegativeNumber);
  sub->add_option("--seed", cfg.seed, "seed for sampled diagnostics");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rigidity toolkit for algebraic Anosov actions"};
  app.require_subcommand(1);
  Config cfg;
  auto* analyze = app.add_subcommand("analyze", "spectra, chambers and rigidity hypotheses of a toral action");
  auto* resonances = app.add_subcommand("resonances", "sub-resonance relations of spectrum bands");
  auto* normal = app.add_subcommand("normalform", "polynomial normal form of a contraction");
  auto* conj = app.add_subcommand("conjugate", "solve and probe the conjugacy of a perturbed action");
  auto* roots = app.add_subcommand("rootsys", "restricted root system and smoothness class");
  for (auto* sub : {analyze, resonances, normal, conj, roots}) add_common(sub, cfg);
  conj->add_option("--dump", cfg.dump, "binary grid dump of u");
  conj->add_option("--fourier", cfg.fourier, "JSON Fourier table of u");
  conj->add_option("--probe-samples", cfg.probe_samples, "sample points of the regularity probe")
      ->check(CLI::PositiveNumber);
  conj->add_flag("--no-probe", cfg.no_probe, "skip the regularity probe");
  roots->add_option("--type", cfg.type, "A, B, C, D or BC");
  roots->add_option("--rank", cfg.rank, "rank");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kParse;
  }

  try {
    if (*analyze) return cmd_analyze(cfg);
    if (*resonances) return cmd_resonances(cfg);
    if (*normal) return cmd_normalform(cfg);
    if (*conj) return cmd_conjugate(cfg);
    if (*roots) return cmd_rootsys(cfg);
  } catch (const Error& e) {
    std::string command = app.get_subcommands().front()->get_name();
    Json report = {{"schema_version", kSchemaVersion}, {"command", command}, {"error", error_json(e)}};
    try {
      emit(report, cfg);
    } catch (const Error&) {
    }
    std::cerr << "anosov-kit: " << e.what() << "\n";
    return exit_for(e);
  }
  return kParse;
}
