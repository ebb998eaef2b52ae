#pragma once

// Exact univariate polynomial algebra over big rationals: composition and
// iteration, resultants, discriminants, Newton polygons.  Everything here
// is exact; degrees in scope are small (at most the iteration degree cap),
// so coefficients are stored dense in ascending order.

#include <berkfekete/scalars.hpp>

#include <algorithm>
#include <utility>
#include <vector>

namespace berkfekete {

class RatPoly {
 public:
  RatPoly() = default;
  // ascending coefficients, constant term first; trailing zeros stripped
  static RatPoly from_coeffs(std::vector<Rat> c) {
    RatPoly p;
    p.c_ = std::move(c);
    p.normalize();
    return p;
  }
  static RatPoly constant(Rat a) { return from_coeffs({std::move(a)}); }
  static RatPoly identity() { return from_coeffs({Rat(0), Rat(1)}); }
  // a * z^k
  static RatPoly monomial(Rat a, int k) {
    std::vector<Rat> c(static_cast<size_t>(k) + 1, Rat(0));
    c.back() = std::move(a);
    return from_coeffs(std::move(c));
  }

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero poly
  const std::vector<Rat>& coeffs() const { return c_; }
  const Rat& operator[](size_t i) const { return c_[i]; }
  const Rat& leading() const {
    if (is_zero()) throw precondition_error("RatPoly: zero polynomial has no leading coefficient");
    return c_.back();
  }

  Rat eval(const Rat& x) const {
    Rat acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  RatPoly derivative() const {
    if (degree() < 1) return RatPoly();
    std::vector<Rat> d(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * Rat(static_cast<long long>(i));
    return from_coeffs(std::move(d));
  }

  friend RatPoly operator+(const RatPoly& a, const RatPoly& b) {
    std::vector<Rat> c(std::max(a.c_.size(), b.c_.size()), Rat(0));
    for (size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
    for (size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
    return from_coeffs(std::move(c));
  }
  friend RatPoly operator-(const RatPoly& a, const RatPoly& b) {
    std::vector<Rat> c(std::max(a.c_.size(), b.c_.size()), Rat(0));
    for (size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
    for (size_t i = 0; i < b.c_.size(); ++i) c[i] -= b.c_[i];
    return from_coeffs(std::move(c));
  }
  friend RatPoly operator*(const RatPoly& a, const RatPoly& b) {
    if (a.is_zero() || b.is_zero()) return RatPoly();
    std::vector<Rat> c(a.c_.size() + b.c_.size() - 1, Rat(0));
    for (size_t i = 0; i < a.c_.size(); ++i)
      for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return from_coeffs(std::move(c));
  }
  friend RatPoly operator*(const Rat& s, const RatPoly& a) {
    std::vector<Rat> c(a.c_);
    for (auto& x : c) x *= s;
    return from_coeffs(std::move(c));
  }
  friend bool operator==(const RatPoly& a, const RatPoly& b) { return a.c_ == b.c_; }

 private:
  void normalize() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<Rat> c_;
};

inline RatPoly poly_compose(const RatPoly& f, const RatPoly& g) {
  RatPoly acc;
  const auto& c = f.coeffs();
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * g + RatPoly::constant(*it);
  return acc;
}

inline RatPoly poly_iterate(const RatPoly& f, int n) {
  if (n < 1) throw precondition_error("poly_iterate: n must be >= 1");
  RatPoly acc = f;
  for (int i = 1; i < n; ++i) acc = poly_compose(f, acc);
  return acc;
}

namespace detail {

// Scale each coefficient to an integer; returns the common denominator
// multiplier m with m*P integral.
inline BigInt integral_scale(const RatPoly& p) {
  BigInt m(1);
  for (const auto& q : p.coeffs()) {
    BigInt d = boost::multiprecision::denominator(q);
    m = boost::multiprecision::lcm(m, d);
  }
  return m;
}

// Determinant by fraction-free (Bareiss) elimination; exact over Z.
inline BigInt bareiss_det(std::vector<std::vector<BigInt>>& m) {
  const size_t n = m.size();
  BigInt prev(1);
  int sign = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      size_t r = k + 1;
      while (r < n && m[r][k] == 0) ++r;
      if (r == n) return BigInt(0);
      std::swap(m[k], m[r]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i) {
      for (size_t j = k + 1; j < n; ++j) {
        m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]) / prev;
      }
      m[i][k] = 0;
    }
    prev = m[k][k];
  }
  return sign > 0 ? m[n - 1][n - 1] : -m[n - 1][n - 1];
}

}  // namespace detail

// Res(P,Q) = lc(P)^deg Q * prod_{P(a)=0} Q(a), via the Sylvester determinant.
inline Rat resultant(const RatPoly& P, const RatPoly& Q) {
  if (P.is_zero() || Q.is_zero()) throw precondition_error("resultant: zero polynomial");
  const int dp = P.degree(), dq = Q.degree();
  if (dp == 0) return rat_pow(P.leading(), dq);
  if (dq == 0) return rat_pow(Q.leading(), dp);

  const BigInt mp = detail::integral_scale(P), mq = detail::integral_scale(Q);
  std::vector<BigInt> ip(dp + 1), iq(dq + 1);
  for (int i = 0; i <= dp; ++i)
    ip[i] = boost::multiprecision::numerator(Rat(P[i] * mp));
  for (int i = 0; i <= dq; ++i)
    iq[i] = boost::multiprecision::numerator(Rat(Q[i] * mq));

  const size_t n = static_cast<size_t>(dp + dq);
  std::vector<std::vector<BigInt>> syl(n, std::vector<BigInt>(n, BigInt(0)));
  for (int r = 0; r < dq; ++r)
    for (int i = 0; i <= dp; ++i) syl[r][r + dp - i] = ip[i];
  for (int r = 0; r < dp; ++r)
    for (int i = 0; i <= dq; ++i) syl[dq + r][r + dq - i] = iq[i];

  BigInt det = detail::bareiss_det(syl);
  // det = Res(mp*P, mq*Q) = mp^dq * mq^dp * Res(P,Q)
  Rat denom = Rat(boost::multiprecision::pow(mp, dq)) * Rat(boost::multiprecision::pow(mq, dp));
  return Rat(det) / denom;
}

// disc(P) = (-1)^(n(n-1)/2) Res(P, P') / lc(P)
inline Rat discriminant(const RatPoly& P) {
  const int n = P.degree();
  if (n < 2) throw precondition_error("discriminant: degree must be >= 2");
  Rat r = resultant(P, P.derivative()) / P.leading();
  return (static_cast<long long>(n) * (n - 1) / 2) % 2 == 0 ? r : Rat(-r);
}

namespace detail {

inline BigInt int_content(const std::vector<BigInt>& c) {
  BigInt g(0);
  for (const auto& x : c) g = boost::multiprecision::gcd(g, x);
  return g == 0 ? BigInt(1) : g;
}

// primitive integer image of a rational polynomial, ascending coefficients
inline std::vector<BigInt> primitive_part(const RatPoly& p) {
  BigInt m = integral_scale(p);
  std::vector<BigInt> c(p.coeffs().size());
  for (size_t i = 0; i < c.size(); ++i)
    c[i] = boost::multiprecision::numerator(Rat(p[i] * m));
  BigInt g = int_content(c);
  for (auto& x : c) x /= g;
  if (!c.empty() && c.back() < 0)
    for (auto& x : c) x = -x;
  return c;
}

// pseudo-remainder of integer polynomials (lc(B)^(degA-degB+1) * A mod B)
inline std::vector<BigInt> pseudo_rem(std::vector<BigInt> a, const std::vector<BigInt>& b) {
  const BigInt lb = b.back();
  while (a.size() >= b.size()) {
    BigInt la = a.back();
    for (auto& x : a) x *= lb;
    const size_t shift = a.size() - b.size();
    for (size_t i = 0; i < b.size(); ++i) a[shift + i] -= la * b[i];
    while (!a.empty() && a.back() == 0) a.pop_back();
  }
  return a;
}

}  // namespace detail

// monic gcd over Q via a primitive pseudo-remainder sequence
inline RatPoly poly_gcd(const RatPoly& P, const RatPoly& Q) {
  if (P.is_zero()) return Q;
  if (Q.is_zero()) return P;
  auto a = detail::primitive_part(P), b = detail::primitive_part(Q);
  if (a.size() < b.size()) std::swap(a, b);
  while (!b.empty()) {
    auto r = detail::pseudo_rem(a, b);
    if (!r.empty()) {
      BigInt g = detail::int_content(r);
      for (auto& x : r) x /= g;
    }
    a = std::move(b);
    b = std::move(r);
  }
  std::vector<Rat> c(a.size());
  for (size_t i = 0; i < a.size(); ++i) c[i] = Rat(a[i]) / Rat(a.back());
  return RatPoly::from_coeffs(std::move(c));
}

inline bool squarefree_check(const RatPoly& P) {
  if (P.degree() < 1) throw precondition_error("squarefree_check: degree must be >= 1");
  return poly_gcd(P, P.derivative()).degree() == 0;
}

// Newton polygon of P at p: lower convex hull of {(i, v_p(a_i)) : a_i != 0}.
// Sign convention: a segment of slope s and horizontal length l certifies
// exactly l roots of magnitude p^s (so root valuation -s); zero roots are
// reported separately via zero_roots rather than as a slope -infinity
// segment.  With this orientation z^2 - z + 1/9 at p = 3 has the single
// segment (slope 1, length 2): both roots have magnitude 3.
struct NewtonPolygon {
  struct Segment {
    Rat slope;
    long long length;
  };
  std::vector<Segment> segments;
  long long zero_roots = 0;

  bool single_slope() const { return zero_roots == 0 && segments.size() == 1; }
};

inline NewtonPolygon newton_polygon(const RatPoly& P, std::uint64_t p) {
  if (P.is_zero()) throw precondition_error("newton_polygon: zero polynomial");
  if (!is_prime_u64(p)) throw config_error("newton_polygon: p is not prime");
  NewtonPolygon np;
  size_t first = 0;
  while (P[first] == 0) ++first;  // z^k factor: k roots of magnitude 0
  np.zero_roots = static_cast<long long>(first);

  std::vector<std::pair<long long, long long>> pts;  // (i, v_p(a_i))
  for (size_t i = first; i < P.coeffs().size(); ++i) {
    if (P[i] == 0) continue;
    pts.emplace_back(static_cast<long long>(i), *padic_valuation(P[i], p));
  }
  // lower hull, left to right; drop b whenever it is on or above segment a->pt
  std::vector<std::pair<long long, long long>> hull;
  for (const auto& pt : pts) {
    while (hull.size() >= 2) {
      auto& a = hull[hull.size() - 2];
      auto& b = hull[hull.size() - 1];
      BigInt cross = BigInt(b.first - a.first) * BigInt(pt.second - a.second) -
                     BigInt(b.second - a.second) * BigInt(pt.first - a.first);
      if (cross > 0) break;  // b strictly below: genuine hull vertex
      hull.pop_back();
    }
    hull.push_back(pt);
  }
  for (size_t i = 0; i + 1 < hull.size(); ++i) {
    // hull slope m gives length-many roots of valuation -m, magnitude p^m
    Rat m(hull[i + 1].second - hull[i].second, hull[i + 1].first - hull[i].first);
    np.segments.push_back({std::move(m), hull[i + 1].first - hull[i].first});
  }
  return np;
}

}  // namespace berkfekete
