#include "anosov/rootsys.hpp"

#include <algorithm>
#include <cctype>

#include "anosov/error.hpp"

namespace anosov::rootsys {

RootType parse_type(const std::string& text) {
  std::string letters;
  for (char c : text)
    if (std::isalpha(static_cast<unsigned char>(c))) letters.push_back(static_cast<char>(std::toupper(c)));
  if (letters == "A") return RootType::A;
  if (letters == "B") return RootType::B;
  if (letters == "C") return RootType::C;
  if (letters == "D") return RootType::D;
  if (letters == "BC") return RootType::BC;
  throw Error(ErrorCode::InvalidType, "unknown root system type '" + text + "'");
}

std::string type_name(RootType t) {
  switch (t) {
    case RootType::A: return "A";
    case RootType::B: return "B";
    case RootType::C: return "C";
    case RootType::D: return "D";
    case RootType::BC: return "BC";
  }
  return "?";
}

std::size_t expected_root_count(RootType type, int rank) {
  const auto n = static_cast<std::size_t>(rank);
  switch (type) {
    case RootType::A: return n * (n + 1);
    case RootType::B:
    case RootType::C: return 2 * n * n;
    case RootType::D: return 2 * n * (n - 1);
    case RootType::BC: return 2 * n * n + 2 * n;
  }
  return 0;
}

namespace {

std::string e(int i) { return "e" + std::to_string(i + 1); }

std::string negate_label(const std::string& s) {
  std::string out = "-";
  for (char c : s) {
    if (c == '+') out += '-';
    else if (c == '-') out += '+';
    else out += c;
  }
  return out;
}

}  // namespace

RestrictedRootSystem build_root_system(RootType type, int rank, const std::map<std::string, int>& multiplicities) {
  const int min_rank = type == RootType::D ? 2 : 1;
  if (rank < min_rank) throw Error(ErrorCode::InvalidType, type_name(type) + "_" + std::to_string(rank) + " is not valid");

  std::vector<std::string> keys;
  switch (type) {
    case RootType::A: keys = {"ei-ej"}; break;
    case RootType::B: keys = {"ei", "ei+-ej"}; break;
    case RootType::C: keys = {"2ei", "ei+-ej"}; break;
    case RootType::D: keys = {"ei+-ej"}; break;
    case RootType::BC: keys = {"ei", "2ei", "ei+-ej"}; break;
  }
  for (const auto& [k, m] : multiplicities) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end())
      throw Error(ErrorCode::InvalidType, "multiplicity key '" + k + "' does not apply to type " + type_name(type));
    if (m < 1) throw Error(ErrorCode::InvalidType, "multiplicities must be positive");
  }
  auto mult = [&](const std::string& k) {
    auto it = multiplicities.find(k);
    return it == multiplicities.end() ? 1 : it->second;
  };

  RestrictedRootSystem sys;
  sys.type = type;
  sys.rank = rank;
  std::vector<Root> positive;
  const auto r = static_cast<std::size_t>(rank);
  auto add = [&](std::vector<Rational> c, std::string label, std::string key) {
    positive.push_back({std::move(c), std::move(label), key, mult(key)});
  };

  if (type == RootType::A) {
    // e_i - e_j on H = (t_1, ..., t_n, -sum t).
    for (int i = 0; i <= rank; ++i)
      for (int j = i + 1; j <= rank; ++j) {
        std::vector<Rational> c(r, Rational(0));
        auto coordinate = [&](int idx, int sign) {
          if (idx < rank) {
            c[static_cast<std::size_t>(idx)] += sign;
          } else {
            for (auto& v : c) v -= sign;
          }
        };
        coordinate(i, 1);
        coordinate(j, -1);
        add(c, e(i) + "-" + e(j), "ei-ej");
      }
  } else {
    if (type == RootType::B || type == RootType::BC)
      for (int i = 0; i < rank; ++i) {
        std::vector<Rational> c(r, Rational(0));
        c[static_cast<std::size_t>(i)] = 1;
        add(c, e(i), "ei");
      }
    if (type == RootType::C || type == RootType::BC)
      for (int i = 0; i < rank; ++i) {
        std::vector<Rational> c(r, Rational(0));
        c[static_cast<std::size_t>(i)] = 2;
        add(c, "2" + e(i), "2ei");
      }
    for (int i = 0; i < rank; ++i)
      for (int j = i + 1; j < rank; ++j)
        for (int sign : {-1, 1}) {
          std::vector<Rational> c(r, Rational(0));
          c[static_cast<std::size_t>(i)] = 1;
          c[static_cast<std::size_t>(j)] = sign;
          add(c, e(i) + (sign > 0 ? "+" : "-") + e(j), "ei+-ej");
        }
  }

  sys.roots = positive;
  for (const auto& p : positive) {
    Root neg = p;
    for (auto& v : neg.coords) v = -v;
    neg.label = negate_label(p.label);
    sys.roots.push_back(neg);
  }
  return sys;
}

WeylFlowData weyl_flow_lyapunov_data(const RestrictedRootSystem& system) {
  WeylFlowData data;
  for (const auto& root : system.roots)
    data.functionals.push_back(exact_functional(root.coords, root.multiplicity, root.label));
  data.coarse = chambers::coarse_decomposition(data.functionals);
  if (system.rank < 2) data.warnings.push_back("rank 1: rigidity statements need rank at least 2");
  for (const auto& space : data.coarse.spaces)
    for (const auto& c : space.coefficients)
      if (!c.exact || (*c.exact != 1 && *c.exact != 2)) data.coefficients_ok = false;
  return data;
}

SmoothnessReport smoothness_class_report(const RestrictedRootSystem& system, const WeylFlowData& data) {
  SmoothnessReport r;
  for (const auto& space : data.coarse.spaces) {
    const auto& members = space.halfspace.members;
    for (std::size_t i = 0; i < members.size(); ++i)
      if (space.coefficients[i].exact && *space.coefficients[i].exact == 2)
        r.doubled_pairs.emplace_back(system.roots[static_cast<std::size_t>(space.bottom)].label,
                                     system.roots[static_cast<std::size_t>(members[i])].label);
  }
  if (r.doubled_pairs.empty()) {
    r.smoothness = "C4";
    r.reason = "no positively proportional roots";
    r.regime = "linear: no nontrivial sub-resonance relations";
  } else {
    r.smoothness = "C6";
    r.reason = "doubled roots:";
    for (const auto& [a, b] : r.doubled_pairs) r.reason += " " + b + "=2*(" + a + ")";
    r.regime = "polynomial: 2:1 quadratic sub-resonance terms";
  }
  return r;
}

}  // namespace anosov::rootsys
