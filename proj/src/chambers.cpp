#include "anosov/chambers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "anosov/error.hpp"
#include "anosov/simplex.hpp"

namespace anosov::chambers {

namespace {

enum class CoordState { Zero, NonZero, Unknown };

CoordState state(const LyapunovFunctional& f, std::size_t a) {
  if (f.exact[a]) return *f.exact[a] == 0 ? CoordState::Zero : CoordState::NonZero;
  return f.coeffs[a].excludes_zero() ? CoordState::NonZero : CoordState::Unknown;
}

Interval coord(const LyapunovFunctional& f, std::size_t a) {
  if (f.exact[a] && *f.exact[a] == 0) return Interval(0.0);
  return f.coeffs[a];
}

Interval enclose_rational(const Rational& q) {
  double d = to_double(q);
  if (rational_from_double(d) == q) return Interval(d);
  return {Interval::down(d), Interval::up(d)};
}

bool is_nonzero(const LyapunovFunctional& f) {
  for (std::size_t a = 0; a < f.rank(); ++a)
    if (state(f, a) == CoordState::NonZero) return true;
  if (f.is_zero()) return false;
  throw Error(ErrorCode::UndecidedSign, "functional '" + f.label + "' cannot be separated from zero");
}

// Sign of f(a) for an integer point; 0 if undecided.
int sign_at(const LyapunovFunctional& f, const std::vector<long>& a) {
  if (f.fully_exact()) {
    std::vector<Rational> q;
    for (long v : a) q.emplace_back(v);
    return sgn(*f.exact_value(q));
  }
  return f(a).sign();
}

int sign_at(const std::vector<Interval>& normal, const std::optional<std::vector<Rational>>& exact,
            const std::vector<Rational>& x) {
  if (exact) {
    Rational s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (*exact)[i] * x[i];
    return sgn(s);
  }
  Interval s(0.0);
  for (std::size_t i = 0; i < x.size(); ++i) s += normal[i] * enclose_rational(x[i]);
  return s.sign();
}

}  // namespace

int CoarseDecomposition::total_dimension() const {
  int d = neutral_dimension;
  for (const auto& s : spaces) d += s.dimension;
  return d;
}

std::optional<Ratio> proportionality(const std::vector<LyapunovFunctional>& fs, std::size_t i, std::size_t j,
                                     const RelationCertifier* certifier) {
  const auto& a = fs[i];
  const auto& b = fs[j];
  const std::size_t k = a.rank();
  if (b.rank() != k) throw Error(ErrorCode::ShapeMismatch, "functionals of different rank");
  std::vector<std::size_t> nonzero;
  for (std::size_t c = 0; c < k; ++c) {
    CoordState sa = state(a, c), sb = state(b, c);
    if (sa == CoordState::Unknown || sb == CoordState::Unknown)
      throw Error(ErrorCode::UndecidedProportionality,
                  "coordinate " + std::to_string(c) + " of '" + a.label + "' or '" + b.label + "' straddles zero");
    if (sa != sb) return std::nullopt;
    if (sa == CoordState::NonZero) nonzero.push_back(c);
  }
  if (nonzero.empty()) throw Error(ErrorCode::PreconditionFailed, "proportionality of zero functionals");
  const std::size_t p = nonzero.front();

  if (a.fully_exact() && b.fully_exact()) {
    Rational r = *a.exact[p] / *b.exact[p];
    for (auto c : nonzero)
      if (*a.exact[c] != r * *b.exact[c]) return std::nullopt;
    return Ratio{enclose_rational(r), r};
  }

  Interval r = coord(a, p) / coord(b, p);
  for (auto c : nonzero) {
    if (c == p) continue;
    Interval minor = coord(a, p) * coord(b, c) - coord(a, c) * coord(b, p);
    if (minor.excludes_zero()) return std::nullopt;
  }
  if (nonzero.size() == 1) {
    if (a.exact[p] && b.exact[p]) {
      Rational q = *a.exact[p] / *b.exact[p];
      return Ratio{enclose_rational(q), q};
    }
    return Ratio{r, std::nullopt};
  }
  Rational q;
  double tol = std::max(r.width(), 1e-12 * std::abs(r.mid()));
  if (!rationalize(r.mid(), tol, 64, q))
    throw Error(ErrorCode::UndecidedProportionality,
                "'" + a.label + "' and '" + b.label + "' agree to enclosure width but the ratio is not a small rational");
  if (!certifier)
    throw Error(ErrorCode::UndecidedProportionality,
                "'" + a.label + "' and '" + b.label + "' need an exact certificate and none is available");
  auto verdict = certifier->proportional(i, j, q);
  if (!verdict)
    throw Error(ErrorCode::UndecidedProportionality,
                "certifier could not decide '" + a.label + "' = " + to_string(q) + " * '" + b.label + "'");
  if (!*verdict) return std::nullopt;
  return Ratio{enclose_rational(q), q};
}

CoarseDecomposition coarse_decomposition(const std::vector<LyapunovFunctional>& functionals,
                                         const RelationCertifier* certifier) {
  CoarseDecomposition out;
  out.rank = functionals.empty() ? 0 : functionals.front().rank();

  struct Group {
    int rep;
    std::vector<int> members;
    std::vector<Ratio> ratios;
  };
  std::vector<Group> groups;
  for (std::size_t idx = 0; idx < functionals.size(); ++idx) {
    const auto& f = functionals[idx];
    if (!is_nonzero(f)) {
      out.neutral.push_back(static_cast<int>(idx));
      out.neutral_dimension += f.multiplicity;
      continue;
    }
    bool placed = false;
    for (auto& g : groups) {
      auto r = proportionality(functionals, idx, static_cast<std::size_t>(g.rep), certifier);
      if (r && r->value.positive()) {
        g.members.push_back(static_cast<int>(idx));
        g.ratios.push_back(*r);
        placed = true;
        break;
      }
    }
    if (!placed) groups.push_back({static_cast<int>(idx), {static_cast<int>(idx)}, {Ratio{Interval(1.0), Rational(1)}}});
  }

  for (auto& g : groups) {
    std::size_t bottom = 0;
    for (std::size_t m = 1; m < g.members.size(); ++m)
      if (g.ratios[m].value.mid() < g.ratios[bottom].value.mid()) bottom = m;
    struct Entry {
      int member;
      Coefficient c;
    };
    std::vector<Entry> entries;
    for (std::size_t m = 0; m < g.members.size(); ++m) {
      Coefficient c;
      if (m == bottom) {
        c = {Interval(1.0), Rational(1)};
      } else {
        c.value = g.ratios[m].value / g.ratios[bottom].value;
        if (g.ratios[m].exact && g.ratios[bottom].exact) {
          c.exact = *g.ratios[m].exact / *g.ratios[bottom].exact;
          c.value = enclose_rational(*c.exact);
        }
      }
      entries.push_back({g.members[m], c});
    }
    std::stable_sort(entries.begin(), entries.end(),
                     [](const Entry& x, const Entry& y) { return x.c.value.mid() < y.c.value.mid(); });

    CoarseLyapunovSpace space;
    space.bottom = g.members[bottom];
    const auto& fb = functionals[static_cast<std::size_t>(space.bottom)];
    std::size_t pivot = 0;
    while (state(fb, pivot) != CoordState::NonZero) ++pivot;
    if (fb.fully_exact()) {
      Rational scale = anosov::abs(*fb.exact[pivot]);
      std::vector<Rational> n;
      for (const auto& e : fb.exact) n.push_back(*e / scale);
      for (const auto& v : n) space.halfspace.normal.push_back(enclose_rational(v));
      space.halfspace.exact_normal = n;
    } else {
      Interval scale = coord(fb, pivot);
      if (scale.negative()) scale = -scale;
      for (std::size_t c = 0; c < fb.rank(); ++c)
        space.halfspace.normal.push_back(c == pivot ? Interval(fb.coeffs[c].sign() > 0 ? 1.0 : -1.0) : coord(fb, c) / scale);
    }
    for (const auto& e : entries) {
      space.halfspace.members.push_back(e.member);
      space.coefficients.push_back(e.c);
      space.dimension += functionals[static_cast<std::size_t>(e.member)].multiplicity;
    }
    out.spaces.push_back(std::move(space));
  }
  return out;
}

ChamberArrangement weyl_chambers(const std::vector<LyapunovFunctional>& functionals, const RelationCertifier* certifier) {
  return weyl_chambers(functionals, coarse_decomposition(functionals, certifier), certifier);
}

ChamberArrangement weyl_chambers(const std::vector<LyapunovFunctional>& functionals, const CoarseDecomposition& coarse,
                                 const RelationCertifier* certifier) {
  ChamberArrangement arr;
  arr.rank = coarse.rank;
  const std::size_t k = arr.rank;
  if (k == 0) throw Error(ErrorCode::RankTooLow, "arrangement in R^0");

  for (std::size_t s = 0; s < coarse.spaces.size(); ++s) {
    const auto& space = coarse.spaces[s];
    std::size_t pivot = 0;
    while (space.halfspace.normal[pivot].mid() == 0.0) ++pivot;
    int orient = space.halfspace.normal[pivot].mid() > 0 ? 1 : -1;
    int found = -1;
    for (std::size_t w = 0; w < arr.walls.size() && found < 0; ++w) {
      auto other = static_cast<std::size_t>(coarse.spaces[static_cast<std::size_t>(arr.walls[w].spaces.front())].bottom);
      auto r = proportionality(functionals, static_cast<std::size_t>(space.bottom), other, certifier);
      if (r) found = static_cast<int>(w);
    }
    if (found >= 0) {
      arr.walls[static_cast<std::size_t>(found)].spaces.push_back(static_cast<int>(s));
      arr.walls[static_cast<std::size_t>(found)].orientation.push_back(orient);
      arr.space_wall.push_back(found);
      continue;
    }
    Wall wall;
    for (const auto& v : space.halfspace.normal) wall.normal.push_back(orient > 0 ? v : -v);
    if (space.halfspace.exact_normal) {
      std::vector<Rational> n;
      for (const auto& v : *space.halfspace.exact_normal) n.push_back(orient > 0 ? v : Rational(-v));
      wall.exact_normal = n;
      wall.lp_normal = n;
    } else {
      for (const auto& v : wall.normal) wall.lp_normal.push_back(rational_from_double(v.mid()));
    }
    wall.spaces.push_back(static_cast<int>(s));
    wall.orientation.push_back(orient);
    arr.space_wall.push_back(static_cast<int>(arr.walls.size()));
    arr.walls.push_back(std::move(wall));
  }

  const std::size_t nw = arr.walls.size();
  std::vector<std::vector<Rational>> rows;
  std::vector<int> signs;
  std::function<void(const MarginResult&)> dfs = [&](const MarginResult& last) {
    if (signs.size() == nw) {
      Chamber c;
      c.signs = signs;
      c.witness = last.x;
      for (std::size_t w = 0; w < nw; ++w)
        if (sign_at(arr.walls[w].normal, arr.walls[w].exact_normal, c.witness) != signs[w])
          throw Error(ErrorCode::UndecidedSign, "chamber witness too close to wall " + std::to_string(w));
      arr.chambers.push_back(std::move(c));
      return;
    }
    for (int s : {1, -1}) {
      std::vector<Rational> row;
      for (const auto& v : arr.walls[signs.size()].lp_normal) row.push_back(Rational(s) * v);
      rows.push_back(std::move(row));
      signs.push_back(s);
      auto res = max_margin(rows, k);
      if (res.margin > 0) dfs(res);
      signs.pop_back();
      rows.pop_back();
    }
  };
  MarginResult root;
  root.margin = 1;
  root.x.assign(k, Rational(0));
  if (nw == 0) {
    root.x[0] = 1;
    arr.chambers.push_back({{}, root.x, {}});
  } else {
    dfs(root);
  }
  for (std::size_t c = 0; c < arr.chambers.size(); ++c)
    arr.chambers[c].regular_element = find_regular_element(arr, c, functionals, coarse);
  return arr;
}

std::vector<long> find_regular_element(const ChamberArrangement& arr, std::size_t chamber,
                                       const std::vector<LyapunovFunctional>& functionals,
                                       const CoarseDecomposition& coarse) {
  const auto& ch = arr.chambers.at(chamber);
  const std::size_t k = arr.rank;
  auto accepts = [&](const std::vector<long>& a) {
    bool any = false;
    for (long v : a) any = any || v != 0;
    if (!any) return false;
    for (std::size_t s = 0; s < coarse.spaces.size(); ++s) {
      auto w = static_cast<std::size_t>(arr.space_wall[s]);
      int orient = 0;
      for (std::size_t t = 0; t < arr.walls[w].spaces.size(); ++t)
        if (arr.walls[w].spaces[t] == static_cast<int>(s)) orient = arr.walls[w].orientation[t];
      int expected = ch.signs.empty() ? 0 : ch.signs[w] * orient;
      for (int m : coarse.spaces[s].halfspace.members)
        if (sign_at(functionals[static_cast<std::size_t>(m)], a) != expected) return false;
    }
    return true;
  };

  std::vector<double> x(k);
  double scale = 0;
  for (std::size_t i = 0; i < k; ++i) {
    x[i] = to_double(ch.witness[i]);
    scale = std::max(scale, std::abs(x[i]));
  }
  for (auto& v : x) v /= scale;
  for (long s = 1; s <= 4096; ++s) {
    std::vector<long> a(k);
    for (std::size_t i = 0; i < k; ++i) a[i] = std::lround(static_cast<double>(s) * x[i]);
    if (accepts(a)) return a;
  }
  Integer den = lcm_of_denominators(ch.witness);
  std::vector<long> a;
  for (const auto& v : ch.witness) {
    Rational scaled = v * Rational(den);
    if (!scaled.get_num().fits_slong_p()) throw Error(ErrorCode::UndecidedSign, "regular element overflows");
    a.push_back(scaled.get_num().get_si());
  }
  if (!accepts(a)) throw Error(ErrorCode::UndecidedSign, "no certified regular element in chamber " + std::to_string(chamber));
  return a;
}

Theorem1Report check_theorem1_combinatorics(const std::vector<LyapunovFunctional>& functionals,
                                            const CoarseDecomposition& coarse,
                                            const ChamberArrangement& arr) {
  if (coarse.rank < 2)
    throw Error(ErrorCode::RankTooLow, "rank " + std::to_string(coarse.rank) + ": walls contain no nonzero point");
  Theorem1Report report;
  report.ergodicity_note =
      "ergodicity of the wall subgroup on the coarse space is not checked here; it follows from the "
      "weak-mixing criterion for toral actions or must be asserted by the user";
  report.combinatorics_pass = true;
  for (std::size_t s = 0; s < coarse.spaces.size(); ++s) {
    const auto& space = coarse.spaces[s];
    Theorem1Entry e;
    e.space = static_cast<int>(s);
    const auto& n = space.halfspace.normal;
    std::size_t p = 0;
    while (n[p].mid() == 0.0) ++p;
    std::size_t q = p == 0 ? 1 : 0;
    e.wall_point.point.assign(coarse.rank, Interval(0.0));
    e.wall_point.point[p] = n[q];
    e.wall_point.point[q] = -n[p];
    if (space.halfspace.exact_normal) {
      const auto& en = *space.halfspace.exact_normal;
      std::vector<Rational> pt(coarse.rank, Rational(0));
      pt[p] = en[q];
      pt[q] = -en[p];
      Integer den = lcm_of_denominators(pt);
      std::vector<Integer> lattice;
      for (const auto& v : pt) lattice.push_back(Rational(v * Rational(den)).get_num());
      e.wall_point.lattice = lattice;
    }

    auto w = static_cast<std::size_t>(arr.space_wall[s]);
    int orient = 0;
    for (std::size_t t = 0; t < arr.walls[w].spaces.size(); ++t)
      if (arr.walls[w].spaces[t] == static_cast<int>(s)) orient = arr.walls[w].orientation[t];
    for (const auto& ch : arr.chambers)
      if (ch.signs[w] * orient < 0) e.elements.push_back(ch.regular_element);

    for (std::size_t f = 0; f < functionals.size(); ++f) {
      if (std::find(coarse.neutral.begin(), coarse.neutral.end(), static_cast<int>(f)) != coarse.neutral.end()) continue;
      bool all_negative = !e.elements.empty();
      for (const auto& b : e.elements)
        if (sign_at(functionals[f], b) >= 0) all_negative = false;
      if (all_negative) e.intersection.push_back(static_cast<int>(f));
    }
    std::vector<int> members = space.halfspace.members;
    std::sort(members.begin(), members.end());
    e.matches = e.intersection == members;
    report.combinatorics_pass = report.combinatorics_pass && e.matches;
    report.entries.push_back(std::move(e));
  }
  return report;
}

}  // namespace anosov::chambers
