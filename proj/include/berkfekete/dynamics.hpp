#pragma once

// Polynomial dynamics: iteration on classical points and disks, escape-rate
// dynamical Green functions, Lipschitz/Holder estimation for iterates, and
// the exact periodic-point Fekete experiment.

#include <berkfekete/exactpoly.hpp>
#include <berkfekete/potential.hpp>

#include <cmath>
#include <random>

namespace berkfekete {

class PolyMap {
 public:
  static PolyMap from_rational(RatPoly f, const FieldMode& mode, bool allow_low_degree = false) {
    if (mode.is_arch()) throw precondition_error("PolyMap: rational coefficients need p-adic mode");
    PolyMap p(mode);
    p.rat_ = std::move(f);
    p.check_degree(p.rat_.degree(), allow_low_degree);
    return p;
  }
  static PolyMap from_complex(std::vector<std::complex<double>> coeffs,
                              bool allow_low_degree = false) {
    while (!coeffs.empty() && coeffs.back() == std::complex<double>(0, 0)) coeffs.pop_back();
    PolyMap p(FieldMode::archimedean());
    p.cx_ = std::move(coeffs);
    p.check_degree(static_cast<int>(p.cx_.size()) - 1, allow_low_degree);
    return p;
  }
  // f_lambda = z^d + lambda
  static PolyMap monic_plus_constant(int d, Rat lambda, const FieldMode& mode) {
    std::vector<Rat> c(static_cast<size_t>(d) + 1, Rat(0));
    c[0] = std::move(lambda);
    c.back() = 1;
    return from_rational(RatPoly::from_coeffs(std::move(c)), mode);
  }

  const FieldMode& mode() const { return mode_; }
  int degree() const { return mode_.is_arch() ? static_cast<int>(cx_.size()) - 1 : rat_.degree(); }
  const RatPoly& rational_poly() const { return rat_; }
  const std::vector<std::complex<double>>& complex_coeffs() const { return cx_; }

  std::complex<double> eval(std::complex<double> z) const {
    std::complex<double> acc(0, 0);
    for (auto it = cx_.rbegin(); it != cx_.rend(); ++it) acc = acc * z + *it;
    return acc;
  }
  std::complex<double> eval_derivative(std::complex<double> z) const {
    std::complex<double> acc(0, 0);
    for (size_t i = cx_.size(); i-- > 1;) acc = acc * z + double(i) * cx_[i];
    return acc;
  }
  // z^d + lambda shape detection (non-archimedean quantitative results
  // cover exactly this family)
  std::optional<Rat> lambda_if_monic_plus_constant() const {
    if (mode_.is_arch() || rat_.degree() < 2 || rat_.leading() != 1) return std::nullopt;
    for (int i = 1; i < rat_.degree(); ++i)
      if (rat_[i] != 0) return std::nullopt;
    return rat_[0];
  }

 private:
  explicit PolyMap(FieldMode m) : mode_(m) {}
  void check_degree(int d, bool allow_low) const {
    if (d < 2 && !allow_low) throw precondition_error("PolyMap: degree must be >= 2");
    if (d < 1) throw precondition_error("PolyMap: degree must be >= 1");
  }
  FieldMode mode_;
  RatPoly rat_;
  std::vector<std::complex<double>> cx_;
};

// Taylor coefficients of f at a, by repeated synthetic division.
inline std::vector<Rat> taylor_at(const RatPoly& f, const Rat& a) {
  std::vector<Rat> cur = f.coeffs();
  std::vector<Rat> tay;
  tay.reserve(cur.size());
  while (!cur.empty()) {
    const size_t m = cur.size() - 1;
    std::vector<Rat> r(cur.size());
    r[m] = cur[m];
    for (size_t i = m; i-- > 0;) r[i] = cur[i] + a * r[i + 1];
    tay.push_back(r[0]);
    cur.assign(r.begin() + 1, r.end());
  }
  return tay;
}

// Image of the Berkovich point D(a, r): D(f(a), max_{k>=1} |c_k(a)| r^k)
// with c_k the Taylor coefficients of f at a.
inline BerkPoint poly_image_disk(const PolyMap& f, const BerkPoint& s, const FieldMode& mode) {
  if (mode.is_arch()) throw unsupported_mode_error("poly_image_disk: non-archimedean only");
  if (!s.is_disk()) throw precondition_error("poly_image_disk: input must be a disk");
  auto tay = taylor_at(f.rational_poly(), s.center().rat());
  Magnitude radius = Magnitude::zero(mode);
  for (size_t k = 1; k < tay.size(); ++k) {
    Magnitude term = mag_mul(magnitude(Scalar::rational(tay[k]), mode),
                             mag_pow(s.radius(), Rat(static_cast<long long>(k))));
    radius = mag_max(radius, term);
  }
  return BerkPoint::disk(tay[0], radius);
}

struct GreenResult {
  double value = 0;
  std::optional<Rat> exact;  // multiple of log p when the orbit resolves exactly
  bool converged = true;
  double err_estimate = 0;
  int iterations = 0;
};

namespace detail {

// magnitude thresholds past which the leading term of f dominates forever:
// R_esc = max{1, |a_d|^(-1/(d-1)), max_{k<d} |a_k/a_d|^(1/(d-k))}
inline Magnitude escape_threshold(const PolyMap& f, const FieldMode& mode) {
  const auto& c = f.rational_poly().coeffs();
  const int d = f.degree();
  Magnitude lead = magnitude(Scalar::rational(c[d]), mode);
  Magnitude r = Magnitude::one(mode);
  r = mag_max(r, mag_pow(lead, Rat(-1, d - 1)));
  for (int k = 0; k < d; ++k) {
    if (c[k] == 0) continue;
    Magnitude m = mag_div(magnitude(Scalar::rational(c[k]), mode), lead);
    r = mag_max(r, mag_pow(m, Rat(1, d - k)));
  }
  return r;
}

inline size_t rat_bits(const Rat& q) {
  return boost::multiprecision::msb(boost::multiprecision::abs(
             boost::multiprecision::numerator(q)) + 1) +
         boost::multiprecision::msb(boost::multiprecision::denominator(q));
}

}  // namespace detail

// g_f(S) = -lim (log[f^n(S), inf]_can)/d^n + log[S, inf]_can, by escape-rate
// truncation.  Non-archimedean orbits resolve exactly in two cases: once the
// sup-magnitude M over the disk exceeds the escape threshold the recursion
// M' = |a_d| M^d holds forever and the limit telescopes to
// (e(M) + e(a_d)/(d-1))/d^n as a rational multiple of log p; and when all
// coefficients and the point are integral the orbit stays in O_K and the
// limit is exactly 0.  Otherwise the truncated tail is reported with a
// coarse error bound.
inline GreenResult escape_green(const PolyMap& f, const BerkPoint& s, int n_max = 64,
                                double tol = 1e-9) {
  const FieldMode& mode = f.mode();
  if (s.is_inf()) throw precondition_error("escape_green: S must not be infinity");
  const int d = f.degree();
  GreenResult out;

  if (mode.is_arch()) {
    if (!s.is_classical()) throw unsupported_mode_error("escape_green: no disks over C");
    const double R = 1e8;
    const auto& c = f.complex_coeffs();
    const double lead = std::abs(c.back());
    std::complex<double> z0 = s.center().cplx(), z = z0;
    const double base = -0.5 * std::log1p(std::norm(z0));  // log[z0, inf]
    for (int n = 0; n <= n_max; ++n) {
      double az = std::abs(z);
      if (az > R) {
        // G = log|z_n|/d^n + log|a_d|/(d^n (d-1)), tail error O(R^-1)
        double dn = std::pow(double(d), n);
        double slack = 0;
        for (size_t k = 0; k + 1 < c.size(); ++k)
          slack += std::abs(c[k]) / lead / std::pow(R, double(c.size() - 1 - k));
        out.value = std::log(az) / dn + std::log(lead) / (dn * (d - 1)) + base;
        out.err_estimate = 2.0 * (slack + 1.0 / (R * R)) / (dn * (d - 1));
        out.converged = out.err_estimate <= tol;
        out.iterations = n;
        return out;
      }
      if (n < n_max) z = f.eval(z);
    }
    // bounded (or slowly escaping) orbit: increments of the escape-rate
    // sequence are bounded by a constant depending only on f, so the
    // remaining tail is O(d^-n_max); the constant below is coarse
    double dn = std::pow(double(d), n_max);
    double sum_abs = 0;
    for (const auto& ck : c) sum_abs += std::abs(ck);
    double cf = std::log(2.0 + sum_abs) + std::abs(std::log(lead)) + (d + 1) * std::log(2.0);
    out.value = 0.5 * std::log1p(std::norm(z)) / dn + base;
    out.err_estimate = cf / (dn * (d - 1));
    out.converged = out.err_estimate <= tol;
    out.iterations = n_max;
    return out;
  }

  // non-archimedean: track center (exact) and radius; M = max{|a|, r}
  const RatPoly& poly = f.rational_poly();
  const Magnitude thresh = detail::escape_threshold(f, mode);
  const Rat lead_e = *magnitude(Scalar::rational(poly.leading()), mode).log_coeff();
  Magnitude kinf0 = kernel_inf(s, mode);
  const Rat base = *kinf0.log_coeff();

  bool integral_map = true;
  for (const auto& q : poly.coeffs())
    integral_map = integral_map && padic_valuation(q, mode.prime()).value_or(1) >= 0;

  BerkPoint cur = s;
  const size_t bit_budget = size_t(1) << 21;
  for (int n = 0; n <= n_max; ++n) {
    Magnitude m = mag_max(magnitude(cur.center(), mode), diam(cur, mode));
    if (m > thresh) {
      Rat g_coeff = (*m.log_coeff() + lead_e / (d - 1)) / rat_pow(Rat(d), n);
      out.exact = g_coeff + base;
      out.value = rat_to_double(*out.exact) * mode.log_prime();
      out.iterations = n;
      return out;
    }
    if (integral_map && m <= Magnitude::one(mode)) {
      // orbit stays in O_K: [f^n(S), inf]_can = 1 for all n, so the limit
      // term vanishes exactly
      out.exact = base;
      out.value = rat_to_double(base) * mode.log_prime();
      out.iterations = n;
      return out;
    }
    if (n == n_max || detail::rat_bits(cur.center().rat()) > bit_budget) {
      double dn = std::pow(double(d), n);
      double mlog = std::max(0.0, m.log_real());
      out.value = mlog / dn + rat_to_double(base) * mode.log_prime();
      out.err_estimate =
          (mlog + (1.0 + std::abs(rat_to_double(lead_e))) * mode.log_prime() + 1.0) / dn;
      out.converged = out.err_estimate <= tol;
      out.iterations = n;
      return out;
    }
    if (cur.is_disk())
      cur = poly_image_disk(f, cur, mode);
    else
      cur = BerkPoint::classical_rat(poly.eval(cur.center().rat()));
  }
  return out;  // unreachable
}

// --- Lipschitz constants of iterates for the chordal metric ----------------

namespace detail {

inline double log_sigma2(const std::complex<double>& w) {  // log(1 + |w|^2)
  double a = std::abs(w);
  return a > 1e8 ? 2.0 * std::log(a) : std::log1p(a * a);
}

// log of the spherical derivative sup of f^n over a two-chart grid.  Deep in
// the escape region every further spherical factor is below 1, so truncating
// there keeps the running value an upper bound for the point's contribution.
inline double lipschitz_log_grid(const PolyMap& f, int n) {
  double best = -std::numeric_limits<double>::infinity();
  auto probe = [&](std::complex<double> z) {
    double logderiv = 0;
    const double start = log_sigma2(z);
    std::complex<double> w = z;
    for (int k = 0; k < n; ++k) {
      if (std::abs(w) > 1e80) break;
      double fp = std::abs(f.eval_derivative(w));
      if (fp == 0) return;  // critical orbit: spherical derivative 0
      logderiv += std::log(fp);
      w = f.eval(w);
    }
    best = std::max(best, logderiv + start - log_sigma2(w));
  };
  const int nr = 48, nt = 96;
  for (int i = 0; i <= nr; ++i) {
    double r = double(i) / nr;
    for (int j = 0; j < nt; ++j) {
      auto z = std::polar(r, 2 * std::numbers::pi * (j + 0.13) / nt);
      probe(z);
      if (r > 0) probe(std::complex<double>(1, 0) / z);
    }
  }
  return best;
}

constexpr double kLipschitzSafety = 1.1;

}  // namespace detail

// Upper estimate M_n for the Lipschitz constant of f^n on (P^1, [z,w]).
// Archimedean: grid supremum of the spherical derivative times a safety
// factor of 1.1 (heuristic, flagged through green weights).  Non-archimedean
// f = z^d + lambda with |lambda| > d^(d/(d-1)): the exact closed-form bound
// (|lambda|^(1/d))^(n(d-1)) * (|lambda|^(1/d))^2.
inline double chordal_lipschitz(const PolyMap& f, int n) {
  if (n < 1) throw precondition_error("chordal_lipschitz: n >= 1");
  if (f.mode().is_arch())
    return std::exp(detail::lipschitz_log_grid(f, n)) * detail::kLipschitzSafety;
  auto lambda = f.lambda_if_monic_plus_constant();
  if (!lambda)
    throw unsupported_mode_error(
        "chordal_lipschitz: non-archimedean bound is available for z^d + lambda only");
  const int d = f.degree();
  double alam = magnitude(Scalar::rational(*lambda), f.mode()).to_double();
  if (!(alam > std::pow(double(d), double(d) / (d - 1))))
    throw precondition_error("chordal_lipschitz: requires |lambda| > d^(d/(d-1))");
  return std::pow(alam, double(n * (d - 1) + 2) / d);
}

// Holder exponent: kappa just above limsup log(M_n^(1/n))/log d.  For
// z^d + lambda the limsup is log(|lambda|^((d-1)/d))/log d exactly.
inline double holder_exponent(const PolyMap& f, double delta = 0.01) {
  const int d = f.degree();
  if (f.mode().is_padic()) {
    auto lambda = f.lambda_if_monic_plus_constant();
    if (!lambda)
      throw unsupported_mode_error("holder_exponent: non-archimedean case covers z^d + lambda only");
    double log_lam = magnitude(Scalar::rational(*lambda), f.mode()).log_real();
    return (double(d - 1) / d) * log_lam / std::log(double(d)) + delta;
  }
  double best = 0;
  for (int n = 3; n <= 8; ++n) {
    double ln = detail::lipschitz_log_grid(f, n) + std::log(detail::kLipschitzSafety);
    best = std::max(best, ln / (n * std::log(double(d))));
  }
  return best + delta;
}

// The weight g_f (normalized by Fact-level declaration); sup and Holder
// constants are sampled heuristics, flagged as estimated.
inline Weight green_weight(const PolyMap& f) {
  Weight g;
  g.label = "green";
  g.mode = f.mode();
  g.normalized = true;
  g.eval = [f](const BerkPoint& s) { return escape_green(f, s).value; };
  if (f.mode().is_padic())
    g.eval_exact = [f](const BerkPoint& s) { return escape_green(f, s).exact; };

  double sup = 0;
  if (f.mode().is_arch()) {
    for (int i = 0; i <= 24; ++i) {
      for (int j = 0; j < 48; ++j) {
        auto z = std::polar(double(i) / 24, 2 * std::numbers::pi * j / 48);
        sup = std::max(sup, std::abs(g.eval(BerkPoint::classical(ProjPoint::affine_cplx(z)))));
        if (i > 0)
          sup = std::max(sup, std::abs(g.eval(BerkPoint::classical(
                                  ProjPoint::affine_cplx(std::complex<double>(1, 0) / z)))));
      }
    }
  } else {
    for (int e = -3; e <= 3; ++e) {
      Rat q = rat_pow(Rat(static_cast<long long>(f.mode().prime())), e);
      sup = std::max(sup, std::abs(g.eval(BerkPoint::classical_rat(q))));
      sup = std::max(sup, std::abs(g.eval(BerkPoint::disk(Rat(0), Magnitude::p_power(
                                              f.mode().prime(), Rat(e))))));
    }
  }
  g.sup_abs = sup * 1.1;
  g.sup_estimated = true;

  double kappa = holder_exponent(f);
  double c_est = 0;
  if (f.mode().is_arch()) {
    std::mt19937_64 rng(0xBEEFull);
    std::normal_distribution<double> gauss(0, 1);
    for (int i = 0; i < 4000; ++i) {
      std::complex<double> a(gauss(rng), gauss(rng)), b(gauss(rng), gauss(rng));
      auto pa = ProjPoint::affine_cplx(a), pb = ProjPoint::affine_cplx(b);
      double ch = chordal(pa, pb, f.mode()).to_double();
      if (ch < 1e-9) continue;
      double diff = std::abs(g.eval(BerkPoint::classical(pa)) - g.eval(BerkPoint::classical(pb)));
      c_est = std::max(c_est, diff / std::pow(ch, 1.0 / kappa));
    }
  }
  g.holder = HolderData{c_est * 1.1, kappa, true};
  return g;
}

// --- the exact periodic-point experiment ------------------------------------

struct PeriodicFeketeReport {
  EnergyValue sum;              // Fekete sum over the period-n points
  EnergyValue predicted;        // n d^n ((d-1)/d) log|lambda|
  double ratio = 0;             // sum / (d^n * n * log d)
  double ratio_predicted = 0;   // log(|lambda|^((d-1)/d)) / log d
  bool match = false;
  bool squarefree = false;
  bool single_slope = false;
  long long point_count = 0;    // d^n
  int n = 0;
  int degree = 0;
};

// Fekete sum of g_f over P_n = Fix(f^n) for f = z^d + lambda, computed as
// log|disc(f^n(z) - z)|_p.  On P_n the weight equals log[.,inf], which turns
// Phi_g(z,w) into log|z-w|, and the discriminant of the (monic, squarefree)
// F_n packages the product of all pairwise differences.  The Newton-polygon
// single-slope certificate pins |z| = |lambda|^(1/d) on P_n.
inline PeriodicFeketeReport periodic_fekete(std::uint64_t p, int d, const Rat& lambda, int n,
                                            long long degree_cap = 64) {
  auto mode = FieldMode::padic(p);
  if (d < 2) throw precondition_error("periodic_fekete: d >= 2");
  if (n < 1) throw precondition_error("periodic_fekete: n >= 1");
  auto vd = padic_valuation(Rat(d), p);
  if (!vd || *vd != 0) throw precondition_error("periodic_fekete: requires |d|_p = 1");
  double alam = magnitude(Scalar::rational(lambda), mode).to_double();
  if (!(alam > std::pow(double(d), double(d) / (d - 1))))
    throw precondition_error("periodic_fekete: requires |lambda| > d^(d/(d-1))");
  double dn_real = std::pow(double(d), n);
  if (dn_real > double(degree_cap))
    throw precondition_error("periodic_fekete: d^n exceeds the degree cap");
  const long long dn = static_cast<long long>(dn_real + 0.5);

  PeriodicFeketeReport rep;
  rep.n = n;
  rep.degree = d;
  rep.point_count = dn;
  rep.ratio_predicted =
      magnitude(Scalar::rational(lambda), mode).log_real() * (double(d - 1) / d) /
      std::log(double(d));

  auto f = PolyMap::monic_plus_constant(d, lambda, mode);
  RatPoly Fn = poly_iterate(f.rational_poly(), n) - RatPoly::identity();
  rep.squarefree = squarefree_check(Fn);

  auto np = newton_polygon(Fn, p);
  const Rat v_lam = -*magnitude(Scalar::rational(lambda), mode).log_coeff();
  rep.single_slope = np.single_slope() && np.segments[0].slope == Rat(-v_lam) / d &&
                     np.segments[0].length == dn;

  const Rat disc_e = -Rat(*padic_valuation(discriminant(Fn), p));
  rep.sum.exact = disc_e;
  rep.sum.log_base_prime = p;
  rep.sum.approx = rat_to_double(disc_e) * mode.log_prime();

  Rat pred = Rat(n) * Rat(dn) * Rat(d - 1, d) * Rat(-v_lam);
  rep.predicted.exact = pred;
  rep.predicted.log_base_prime = p;
  rep.predicted.approx = rat_to_double(pred) * mode.log_prime();

  rep.match = rep.squarefree && rep.single_slope && disc_e == pred;
  rep.ratio = rep.sum.approx / (double(dn) * n * std::log(double(d)));
  return rep;
}

// Common value of g_f on the certified period-n points: the orbit of a point
// of P_n stays inside {|z| = |lambda|^(1/d)} by periodicity, so the escape
// term vanishes and g_f = log[.,inf] = -(1/d) log|lambda| there.
inline EnergyValue green_on_certified_periodic(std::uint64_t p, int d, const Rat& lambda, int n,
                                               long long degree_cap = 64) {
  auto rep = periodic_fekete(p, d, lambda, n, degree_cap);
  if (!rep.squarefree || !rep.single_slope)
    throw precondition_error("green_on_certified_periodic: certificates failed");
  auto mode = FieldMode::padic(p);
  EnergyValue v;
  v.exact = -(*magnitude(Scalar::rational(lambda), mode).log_coeff()) / Rat(d);
  v.log_base_prime = p;
  v.approx = rat_to_double(*v.exact) * mode.log_prime();
  return v;
}

}  // namespace berkfekete
