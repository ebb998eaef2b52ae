#pragma once

// Weights g, the potential kernel Phi_g, Fekete sums over effective
// divisors, and epsilon-regularized energies.
//
// Non-archimedean regularized energies are single kernel evaluations at the
// disk points pi_eps(z); this keeps the negativity and lower-bound checks
// exact.  Archimedean regularizations are uniform circle measures; the one
// closed form used is the circle potential
//   int log|x - y| dm_{C(c,r)}(y) = log max{|x - c|, r},
// which reduces every double integral to a single bounded periodic
// quadrature (uniform trapezoid, N and 2N nodes, agreement flag at 1e-6).

#include <berkfekete/berkovich.hpp>

#include <functional>
#include <numbers>
#include <string>
#include <vector>

namespace berkfekete {

struct HolderData {
  double C = 0;
  double kappa = 1;
  bool estimated = false;  // true when C came from sampling rather than analysis
};

// A continuous weight on the Berkovich line.  eval_exact, when set, returns
// g(S) as an exact multiple of log p.  `normalized` is declared, not
// computed: no finite algorithm certifies V_g = 0 for an arbitrary weight.
struct Weight {
  std::string label;
  FieldMode mode = FieldMode::archimedean();
  std::function<double(const BerkPoint&)> eval;
  std::function<std::optional<Rat>(const BerkPoint&)> eval_exact;  // may be empty
  double sup_abs = 0;
  bool sup_estimated = false;
  std::optional<HolderData> holder;
  bool normalized = false;
};

inline Weight zero_weight(const FieldMode& mode) {
  Weight g;
  g.label = "zero";
  g.mode = mode;
  g.eval = [](const BerkPoint&) { return 0.0; };
  if (mode.is_padic()) g.eval_exact = [](const BerkPoint&) { return std::optional<Rat>(Rat(0)); };
  g.sup_abs = 0;
  g.holder = HolderData{0.0, 1.0, false};
  // V_0 = 0 only non-archimedean (the Gauss point carries the equilibrium
  // mass); over C the zero weight is not normalized.
  g.normalized = mode.is_padic();
  return g;
}

// g0(z) = log max{1,|z|} - (1/2) log(1 + |z|^2), the archimedean weight of
// the monomial square map.  Constants are derived, not sampled:
// sup |g0| = (1/2) log 2 at |z| = 1, and g0 is 1-Lipschitz for the
// spherical arc metric (radial gradient r/(1+r^2) times the conformal
// factor 1+r^2, maximized at r = 1), hence (pi/2)-Lipschitz for the
// chordal metric since arc/chord <= pi/2.
inline double g0_value(const std::complex<double>& z) {
  double t = std::abs(z);
  return t <= 1.0 ? -0.5 * std::log1p(t * t) : -0.5 * std::log1p(1.0 / (t * t));
}

inline Weight g0_weight() {
  Weight g;
  g.label = "g0";
  g.mode = FieldMode::archimedean();
  g.eval = [](const BerkPoint& s) { return s.is_inf() ? 0.0 : g0_value(s.center().cplx()); };
  g.sup_abs = 0.5 * std::log(2.0);
  g.holder = HolderData{std::numbers::pi / 2.0, 1.0, false};
  g.normalized = true;
  return g;
}

// g o h; an isometry of the chordal sphere preserves sup, the Holder data
// and (for U_K) normalization.
inline Weight compose_with_mobius(const Weight& g, const Mobius& h, const FieldMode& mode) {
  h.require_in_uk(mode);
  Weight out = g;
  out.label = g.label + ".h";
  out.eval = [g, h, mode](const BerkPoint& s) { return g.eval(mobius_apply(h, s, mode)); };
  if (g.eval_exact) {
    auto inner = g.eval_exact;
    out.eval_exact = [inner, h, mode](const BerkPoint& s) { return inner(mobius_apply(h, s, mode)); };
  }
  return out;
}

// finite multiset of distinct classical points with positive multiplicities
struct Divisor {
  struct Entry {
    ProjPoint point;
    long long mult = 1;
  };
  std::vector<Entry> entries;

  static Divisor from_entries(std::vector<Entry> e) {
    if (e.empty()) throw precondition_error("Divisor: must be nonempty");
    for (size_t i = 0; i < e.size(); ++i) {
      if (e[i].mult < 1) throw precondition_error("Divisor: multiplicities must be positive");
      for (size_t j = i + 1; j < e.size(); ++j)
        if (e[i].point == e[j].point) throw precondition_error("Divisor: points must be distinct");
    }
    Divisor z;
    z.entries = std::move(e);
    return z;
  }
  static Divisor of_points(const std::vector<ProjPoint>& pts) {
    std::vector<Entry> e;
    e.reserve(pts.size());
    for (const auto& p : pts) e.push_back({p, 1});
    return from_entries(std::move(e));
  }

  size_t size() const { return entries.size(); }
  bool mult_one() const {
    for (const auto& e : entries)
      if (e.mult != 1) return false;
    return true;
  }
  long long degree() const {
    long long d = 0;
    for (const auto& e : entries) d += e.mult;
    return d;
  }
  long long diag_mass() const {  // (Z x Z)(diag)
    long long d = 0;
    for (const auto& e : entries) d += e.mult * e.mult;
    return d;
  }
};

inline Divisor mobius_divisor(const Mobius& h, const Divisor& z, const FieldMode& mode) {
  std::vector<Divisor::Entry> e;
  e.reserve(z.entries.size());
  for (const auto& en : z.entries) e.push_back({mobius_apply(h, en.point, mode), en.mult});
  return Divisor::from_entries(std::move(e));
}

// a Fekete/energy quantity; when `exact` is set the value is exact*log(p)
struct EnergyValue {
  std::optional<Rat> exact;
  double approx = 0;
  std::optional<std::uint64_t> log_base_prime;
};

inline double phi_g(const BerkPoint& a, const BerkPoint& b, const Weight& g,
                    const FieldMode& mode) {
  return kernel_can(a, b, mode).log_real() - g.eval(a) - g.eval(b);
}

inline std::optional<Rat> phi_g_exact(const BerkPoint& a, const BerkPoint& b, const Weight& g,
                                      const FieldMode& mode) {
  if (!g.eval_exact || mode.is_arch()) return std::nullopt;
  auto k = kernel_can(a, b, mode).log_coeff();
  if (!k) return std::nullopt;
  auto ga = g.eval_exact(a);
  auto gb = g.eval_exact(b);
  if (!ga || !gb) return std::nullopt;
  return *k - *ga - *gb;
}

// (Z,Z)_g: sum of Phi_g over ordered pairs of distinct support points,
// weighted by multiplicities; the diagonal is excluded.
inline EnergyValue fekete_sum(const Divisor& z, const Weight& g, const FieldMode& mode) {
  EnergyValue out;
  bool exact_ok = mode.is_padic() && static_cast<bool>(g.eval_exact);
  Rat acc(0);
  double facc = 0;
  std::vector<BerkPoint> pts;
  pts.reserve(z.size());
  for (const auto& e : z.entries) pts.push_back(BerkPoint::classical(e.point));
  for (size_t i = 0; i < pts.size(); ++i) {
    for (size_t j = i + 1; j < pts.size(); ++j) {
      double m = 2.0 * static_cast<double>(z.entries[i].mult * z.entries[j].mult);
      facc += m * phi_g(pts[i], pts[j], g, mode);
      if (exact_ok) {
        auto e = phi_g_exact(pts[i], pts[j], g, mode);
        if (e)
          acc += Rat(2 * z.entries[i].mult * z.entries[j].mult) * *e;
        else
          exact_ok = false;
      }
    }
  }
  out.approx = facc;
  if (exact_ok) {
    out.exact = acc;
    out.log_base_prime = mode.prime();
    out.approx = rat_to_double(acc) * mode.log_prime();
  }
  return out;
}

// formula (F,F)_g = 2 sum_{w != z} Phi_g(z,w) + (F\{z}, F\{z})_g,
// both sides computed independently
inline bool fekete_recursion_check(const Divisor& f, const ProjPoint& z, const Weight& g,
                                   const FieldMode& mode, double tol = 1e-9) {
  if (!f.mult_one() || f.size() < 2)
    throw precondition_error("fekete_recursion_check: needs a mult-1 divisor with #F >= 2");
  auto lhs = fekete_sum(f, g, mode);
  std::vector<Divisor::Entry> rest;
  bool found = false;
  for (const auto& e : f.entries) {
    if (e.point == z && !found)
      found = true;
    else
      rest.push_back(e);
  }
  if (!found) throw precondition_error("fekete_recursion_check: z must belong to F");

  auto zb = BerkPoint::classical(z);
  double cross = 0;
  Rat cross_exact(0);
  bool exact_ok = mode.is_padic() && static_cast<bool>(g.eval_exact);
  for (const auto& e : rest) {
    cross += phi_g(zb, BerkPoint::classical(e.point), g, mode);
    if (exact_ok) {
      auto ex = phi_g_exact(zb, BerkPoint::classical(e.point), g, mode);
      if (ex)
        cross_exact += *ex;
      else
        exact_ok = false;
    }
  }
  if (rest.empty()) return lhs.exact ? *lhs.exact == 0 : std::abs(lhs.approx) <= tol;
  auto tail = fekete_sum(Divisor::from_entries(rest), g, mode);
  if (exact_ok && lhs.exact && tail.exact)
    return *lhs.exact == Rat(2) * cross_exact + *tail.exact;
  double rhs = 2.0 * cross + tail.approx;
  return std::abs(lhs.approx - rhs) <= tol * std::max(1.0, std::abs(lhs.approx) + std::abs(rhs));
}

// ---- archimedean circle quadrature -----------------------------------------

struct QuadStatus {
  bool converged = true;
  double disagreement = 0;

  void merge(const QuadStatus& o) {
    converged = converged && o.converged;
    disagreement += o.disagreement;
  }
};

namespace detail {

constexpr int kQuadNodes = 4096;
constexpr double kQuadTol = 1e-6;

template <class F>
double circle_mean(F&& f, int n) {
  double s = 0;
  for (int k = 0; k < n; ++k) s += f(2.0 * std::numbers::pi * k / n);
  return s / n;
}

template <class F>
double quad_circle(F&& f, QuadStatus& status) {
  double coarse = circle_mean(f, kQuadNodes);
  double fine = circle_mean(f, 2 * kQuadNodes);
  double dis = std::abs(fine - coarse);
  status.merge({dis <= kQuadTol, dis});
  return fine;
}

struct Circle {
  std::complex<double> center;
  double radius;
};

inline Circle regularization_circle(const ProjPoint& z, double eps) {
  // [inf]_eps = iota_*[0]_eps is the uniform measure on the circle |w| = 1/eps
  if (z.is_inf()) return {{0.0, 0.0}, 1.0 / eps};
  return {z.value().cplx(), eps};
}

}  // namespace detail

// int int Phi_g d([z]_eps x [w]_eps).  Non-archimedean: a single kernel
// evaluation at disk points (z = w included; the self-kernel is finite).
// Archimedean: circle potentials plus quadrature.
struct PairEnergy {
  double value = 0;
  std::optional<Rat> exact;
  QuadStatus quad;
};

inline PairEnergy regularized_pair_energy(const ProjPoint& z, const ProjPoint& w,
                                          const Magnitude& eps, const Weight& g,
                                          const FieldMode& mode) {
  PairEnergy out;
  if (mode.is_padic()) {
    BerkPoint a = pi_epsilon(z, eps, mode), b = pi_epsilon(w, eps, mode);
    out.value = phi_g(a, b, g, mode);
    out.exact = phi_g_exact(a, b, g, mode);
    if (out.exact) out.value = rat_to_double(*out.exact) * mode.log_prime();
    return out;
  }
  double e = eps.to_double();
  if (!(e > 0.0) || e > 1.0) throw precondition_error("regularized_pair_energy: eps in (0,1]");
  auto c1 = detail::regularization_circle(z, e);
  auto c2 = detail::regularization_circle(w, e);
  // A = int int log|x-y|; the inner integral is the circle potential
  double A = detail::quad_circle(
      [&](double th) {
        std::complex<double> x = c1.center + c1.radius * std::polar(1.0, th);
        return std::log(std::max(std::abs(x - c2.center), c2.radius));
      },
      out.quad);
  auto spherical_terms = [&](const detail::Circle& c) {
    return detail::quad_circle(
        [&](double th) {
          std::complex<double> x = c.center + c.radius * std::polar(1.0, th);
          return 0.5 * std::log1p(std::norm(x)) +
                 g.eval(BerkPoint::classical(ProjPoint::affine_cplx(x)));
        },
        out.quad);
  };
  out.value = A - spherical_terms(c1) - spherical_terms(c2);
  return out;
}

struct RegEnergy {
  EnergyValue value;
  QuadStatus quad;
};

// (Z_eps, Z_eps)_g: all ordered pairs, diagonal included
inline RegEnergy regularized_fekete_sum(const Divisor& z, const Magnitude& eps, const Weight& g,
                                        const FieldMode& mode) {
  RegEnergy out;
  bool exact_ok = mode.is_padic() && static_cast<bool>(g.eval_exact);
  Rat acc(0);
  double facc = 0;
  for (size_t i = 0; i < z.size(); ++i) {
    for (size_t j = i; j < z.size(); ++j) {
      long long m = z.entries[i].mult * z.entries[j].mult * (i == j ? 1 : 2);
      auto pe = regularized_pair_energy(z.entries[i].point, z.entries[j].point, eps, g, mode);
      out.quad.merge(pe.quad);
      facc += static_cast<double>(m) * pe.value;
      if (exact_ok) {
        if (pe.exact)
          acc += Rat(m) * *pe.exact;
        else
          exact_ok = false;
      }
    }
  }
  out.value.approx = facc;
  if (exact_ok) {
    out.value.exact = acc;
    out.value.log_base_prime = mode.prime();
    out.value.approx = rat_to_double(acc) * mode.log_prime();
  }
  return out;
}

// Analytic upper bound for the restricted modulus of continuity around F:
// eta <= C' eps^(1/kappa) with C' = C 2^(1/kappa) non-archimedean and C' = C
// archimedean; eta_hat adds eps in the archimedean case.  The bound is
// uniform in F, which is why F does not enter the value; empirical sampling
// could only lower-bound the sup and would invalidate inequality checking.
inline double modulus_eta_hat(const Weight& g, const Divisor& /*F*/, double eps,
                              const FieldMode& mode) {
  if (eps < 0 || eps > 1) throw precondition_error("modulus_eta_hat: eps in [0,1]");
  if (!g.holder)
    throw precondition_error(
        "modulus_eta_hat: weight '" + g.label + "' has no Holder data; supply (C, kappa)");
  double cprime = mode.is_padic() ? g.holder->C * std::pow(2.0, 1.0 / g.holder->kappa)
                                  : g.holder->C;
  return cprime * std::pow(eps, 1.0 / g.holder->kappa) + (mode.is_arch() ? eps : 0.0);
}

// Diagnostic sampled lower bound for eta_{g,F}(eps); reported for
// comparison with the analytic bound, never used in checks.
inline double modulus_eta_sampled(const Weight& g, const Divisor& f, double eps,
                                  const FieldMode& mode, int samples = 64) {
  double best = 0;
  std::uint64_t state = 0x9e3779b97f4a7c15ull;
  auto next = [&]() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return static_cast<double>(state % 1000003) / 1000003.0;
  };
  for (const auto& e : f.entries) {
    auto zb = BerkPoint::classical(e.point);
    double gz = g.eval(zb);
    for (int i = 0; i < samples; ++i) {
      BerkPoint s = zb;
      if (mode.is_padic()) {
        // disk points around z at small radius; d(z, pi_delta(z)) <= delta
        Rat expo(-1 - static_cast<long long>(next() * 6), 1 + static_cast<long long>(next() * 3));
        s = pi_epsilon(e.point.is_inf() ? ProjPoint::infinity() : e.point,
                       Magnitude::p_power(mode.prime(), expo), mode);
      } else {
        if (e.point.is_inf()) continue;
        std::complex<double> zc = e.point.value().cplx();
        double ang = 2 * std::numbers::pi * next();
        s = BerkPoint::classical(
            ProjPoint::affine_cplx(zc + 0.9 * eps * std::polar(1.0, ang)));
      }
      if (small_metric(zb, s, mode) <= eps) best = std::max(best, std::abs(g.eval(s) - gz));
    }
  }
  return best;
}

struct NegativityReport {
  EnergyValue value;
  bool holds = false;
  QuadStatus quad;
};

// negativity (Z_eps, Z_eps)_g <= V_g = 0 for normalized g
inline NegativityReport negativity_check(const Divisor& z, const Magnitude& eps, const Weight& g,
                                         const FieldMode& mode) {
  if (!g.normalized) throw precondition_error("negativity_check: weight must be normalized");
  auto reg = regularized_fekete_sum(z, eps, g, mode);
  NegativityReport rep;
  rep.value = reg.value;
  rep.quad = reg.quad;
  rep.holds = rep.value.exact ? *rep.value.exact <= 0 : rep.value.approx <= 1e-6;
  return rep;
}

struct LowerBoundReport {
  double lhs = 0, rhs = 0;
  std::optional<Rat> lhs_exact, rhs_exact;
  bool exact = false;
  bool holds = false;
  QuadStatus quad;
};

// (Z_eps,Z_eps)_g >= (Z,Z)_g + 2 sum_{w != inf} m_w^2 log[w,inf]
//                    - 2 sum_w m_w^2 g(w) + (log eps) (ZxZ)(diag)
//                    - 2 (deg Z)^2 eta_hat_{g,supp Z}(eps)
inline LowerBoundReport lower_bound_check(const Divisor& z, const Magnitude& eps, const Weight& g,
                                          const FieldMode& mode) {
  LowerBoundReport rep;
  auto reg = regularized_fekete_sum(z, eps, g, mode);
  rep.quad = reg.quad;
  rep.lhs = reg.value.approx;
  rep.lhs_exact = reg.value.exact;

  double eta = modulus_eta_hat(g, z, eps.to_double(), mode);
  bool eta_exact_zero = mode.is_padic() && g.holder && g.holder->C == 0;

  auto base = fekete_sum(z, g, mode);
  bool exact_ok = mode.is_padic() && base.exact.has_value() && eta_exact_zero &&
                  eps.log_coeff().has_value() && static_cast<bool>(g.eval_exact);
  Rat acc = base.exact ? *base.exact : Rat(0);
  double facc = base.approx;
  for (const auto& e : z.entries) {
    Rat m2(e.mult * e.mult);
    if (!e.point.is_inf()) {
      auto cw = chordal(e.point, ProjPoint::infinity(), mode);
      facc += 2.0 * static_cast<double>(m2) * cw.log_real();
      if (exact_ok) acc += Rat(2) * m2 * *cw.log_coeff();
    }
    double gw = g.eval(BerkPoint::classical(e.point));
    facc -= 2.0 * static_cast<double>(m2) * gw;
    if (exact_ok) acc -= Rat(2) * m2 * *g.eval_exact(BerkPoint::classical(e.point));
  }
  facc += eps.log_real() * static_cast<double>(z.diag_mass());
  facc -= 2.0 * static_cast<double>(z.degree() * z.degree()) * eta;
  if (exact_ok) acc += *eps.log_coeff() * Rat(z.diag_mass());

  rep.rhs = facc;
  if (exact_ok && rep.lhs_exact) {
    rep.rhs_exact = acc;
    rep.rhs = rat_to_double(acc) * mode.log_prime();
    rep.exact = true;
    rep.holds = *rep.lhs_exact >= acc;
  } else {
    rep.holds = rep.lhs >= rep.rhs - 1e-6;
  }
  return rep;
}

}  // namespace berkfekete
