#pragma once

// Checkers for the Mahler-type inequalities.  Each produces a BoundReport
// with both sides, the slack, and an exactness tag.  Non-archimedean left
// sides are exact rationals times log p while right sides mix log p and
// log N, so `holds` is always decided in floating point with an interval
// padding of 1e-12 in exact mode; float mode uses a relative 1e-9.

#include <berkfekete/potential.hpp>

#include <string>
#include <vector>

namespace berkfekete {

struct BoundReport {
  std::string name;
  double lhs = 0;
  double rhs = 0;
  double slack = 0;  // rhs - lhs
  bool holds = false;
  enum class Exactness { Exact, Float } exactness = Exactness::Float;
  struct Meta {
    long long n_points = 0;
    double epsilon = 0;
    std::string weight;
    double C = 0;
    double Cprime = 0;
    double kappa = 1;
    int eps_K = 0;
    double sup_abs = 0;
    bool sup_estimated = false;
  } meta;
};

namespace detail {

inline BoundReport finish_report(std::string name, double lhs, double rhs, bool exact_lhs,
                                 BoundReport::Meta meta) {
  BoundReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = rhs - lhs;
  r.exactness = exact_lhs ? BoundReport::Exactness::Exact : BoundReport::Exactness::Float;
  double tol = exact_lhs ? 1e-12 : 1e-9 * (std::abs(lhs) + std::abs(rhs) + 1.0);
  r.holds = r.slack >= -tol;
  r.meta = std::move(meta);
  return r;
}

inline BoundReport::Meta weight_meta(const Weight& g, const FieldMode& mode, long long n,
                                     double eps) {
  BoundReport::Meta m;
  m.n_points = n;
  m.epsilon = eps;
  m.weight = g.label;
  m.sup_abs = g.sup_abs;
  m.sup_estimated = g.sup_estimated;
  m.eps_K = mode.is_arch() ? 1 : 0;
  if (g.holder) {
    m.C = g.holder->C;
    m.kappa = g.holder->kappa;
    m.Cprime = mode.is_padic() ? g.holder->C * std::pow(2.0, 1.0 / g.holder->kappa) : g.holder->C;
  }
  return m;
}

}  // namespace detail

// Classical Mahler estimate:
// sum_{i != j} (log|z_i - z_j| - log max{1,|z_i|} - log max{1,|z_j|}) <= N log N.
// Non-archimedean the left side is the chordal Fekete sum (the max-norm
// normalization) and is exact; archimedean the max{1,|.|} normalization is
// kept as stated, which differs from the Euclidean chordal denominator.
inline BoundReport mahler_classical_check(const std::vector<Scalar>& points,
                                          const FieldMode& mode) {
  for (size_t i = 0; i < points.size(); ++i)
    for (size_t j = i + 1; j < points.size(); ++j)
      if (points[i] == points[j])
        throw precondition_error("mahler_classical_check: points must be distinct");
  if (points.empty()) throw precondition_error("mahler_classical_check: empty configuration");

  const size_t n = points.size();
  bool exact = mode.is_padic();
  double lhs = 0;
  Rat acc(0);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      if (exact) {
        auto k = chordal(ProjPoint::affine(points[i]), ProjPoint::affine(points[j]), mode);
        acc += Rat(2) * *k.log_coeff();
      } else {
        double zi = std::abs(points[i].cplx()), zj = std::abs(points[j].cplx());
        lhs += 2.0 * (std::log(std::abs(points[i].cplx() - points[j].cplx())) -
                      std::log(std::max(1.0, zi)) - std::log(std::max(1.0, zj)));
      }
    }
  }
  if (exact) lhs = rat_to_double(acc) * mode.log_prime();
  double rhs = double(n) * std::log(double(n));
  BoundReport::Meta meta;
  meta.n_points = static_cast<long long>(n);
  meta.weight = "none";
  meta.eps_K = mode.is_arch() ? 1 : 0;
  return detail::finish_report("mahler_classical", lhs, rhs, exact, std::move(meta));
}

// (F,F)_g <= (#F) log(1/eps) + 2 (#F)^2 eta_hat_{g,F}(eps) + 2 (#F) sup|g|
inline BoundReport mahler_general_check(const Weight& g, const Divisor& f, double eps,
                                        const FieldMode& mode) {
  if (!(eps > 0) || eps > 1) throw precondition_error("mahler_general_check: eps in (0,1]");
  if (!f.mult_one()) throw precondition_error("mahler_general_check: divisor must be mult-1");
  auto sum = fekete_sum(f, g, mode);
  const double n = static_cast<double>(f.size());
  double rhs = n * std::log(1.0 / eps) + 2.0 * n * n * modulus_eta_hat(g, f, eps, mode) +
               2.0 * n * g.sup_abs;
  return detail::finish_report("mahler_general", sum.approx, rhs, sum.exact.has_value(),
                               detail::weight_meta(g, mode, f.size(), eps));
}

// (F,F)_g <= kappa (#F) log(#F) + 2(#F)(C' + eps_K (#F)^(1-kappa) + sup|g|),
// the eps = (#F)^(-kappa) specialization of the general bound.
inline BoundReport holder_bound_check(const Weight& g, const Divisor& f, const FieldMode& mode) {
  if (!g.holder) throw precondition_error("holder_bound_check: weight needs Holder data");
  if (g.holder->kappa < 1) throw precondition_error("holder_bound_check: kappa >= 1");
  if (!f.mult_one()) throw precondition_error("holder_bound_check: divisor must be mult-1");
  auto sum = fekete_sum(f, g, mode);
  const double n = static_cast<double>(f.size());
  const double kappa = g.holder->kappa;
  const double cprime =
      mode.is_padic() ? g.holder->C * std::pow(2.0, 1.0 / kappa) : g.holder->C;
  const double eps_k = mode.is_arch() ? 1.0 : 0.0;
  double rhs = kappa * n * std::log(n) +
               2.0 * n * (cprime + eps_k * std::pow(n, 1.0 - kappa) + g.sup_abs);
  auto meta = detail::weight_meta(g, mode, f.size(), std::pow(n, -kappa));
  return detail::finish_report("holder_bound", sum.approx, rhs, sum.exact.has_value(),
                               std::move(meta));
}

// Variant for F avoiding infinity: the general right side plus the strictly
// positive term -2 sum_{w in F} log[w, inf].  Never sharper than the
// general bound.
inline BoundReport finite_variant_check(const Weight& g, const Divisor& f, double eps,
                                        const FieldMode& mode) {
  for (const auto& e : f.entries)
    if (e.point.is_inf()) throw precondition_error("finite_variant_check: F must avoid infinity");
  auto base = mahler_general_check(g, f, eps, mode);
  double extra = 0;
  for (const auto& e : f.entries)
    extra -= 2.0 * chordal(e.point, ProjPoint::infinity(), mode).log_real();
  BoundReport r = base;
  r.name = "mahler_finite_variant";
  r.rhs = base.rhs + extra;
  r.slack = r.rhs - r.lhs;
  double tol = r.exactness == BoundReport::Exactness::Exact
                   ? 1e-12
                   : 1e-9 * (std::abs(r.lhs) + std::abs(r.rhs) + 1.0);
  r.holds = r.slack >= -tol;
  if (r.rhs < base.rhs - 1e-12)
    throw std::runtime_error("finite_variant_check: extra term must be nonnegative");
  return r;
}

struct RatioRow {
  long long n = 0;
  double fekete = 0;
  double ratio = 0;        // (F,F)_g / (N log N)
  double bound_ratio = 0;  // kappa + 2(C' + eps_K N^(1-kappa) + sup|g|)/log N
};

// ratios of Fekete sums against N log N along a family of divisors
inline std::vector<RatioRow> asymp_ratio_scan(const Weight& g,
                                              const std::vector<Divisor>& family,
                                              const FieldMode& mode) {
  if (!g.holder) throw precondition_error("asymp_ratio_scan: weight needs Holder data");
  std::vector<RatioRow> rows;
  rows.reserve(family.size());
  const double kappa = g.holder->kappa;
  const double cprime =
      mode.is_padic() ? g.holder->C * std::pow(2.0, 1.0 / kappa) : g.holder->C;
  const double eps_k = mode.is_arch() ? 1.0 : 0.0;
  for (const auto& f : family) {
    if (f.size() < 2) throw precondition_error("asymp_ratio_scan: #F >= 2 required");
    RatioRow row;
    row.n = static_cast<long long>(f.size());
    row.fekete = fekete_sum(f, g, mode).approx;
    const double n = static_cast<double>(row.n);
    row.ratio = row.fekete / (n * std::log(n));
    row.bound_ratio =
        kappa + 2.0 * (cprime + eps_k * std::pow(n, 1.0 - kappa) + g.sup_abs) / std::log(n);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace berkfekete
