#pragma once

// Points of the projective line and of its Berkovich analytification
// (types I-III; type IV points are out of scope), together with the four
// kernels used throughout: the normalized chordal metric on classical
// points, the Hsia kernel, the generalized Hsia kernel with respect to the
// Gauss point, and the small model metric.
//
// Infinity conventions.  The degenerate values follow the two quotient
// conventions "inf/(inf^2) = 0" and "0/(0^2) = inf" attached to the Gromov
// and Hsia quotients: kernel_can(inf, inf) = 0 and hsia(S, inf) = +inf for
// every S (consistently, hsia = diam of the join and diam(inf) = +inf).
// The paper does not spell these degenerate pairs out individually; each
// branch is unit-tested.

#include <berkfekete/scalars.hpp>

#include <array>
#include <utility>

namespace berkfekete {

class ProjPoint {
 public:
  static ProjPoint infinity() {
    ProjPoint z;
    z.inf_ = true;
    return z;
  }
  static ProjPoint affine(Scalar v) {
    ProjPoint z;
    z.v_ = std::move(v);
    return z;
  }
  static ProjPoint affine_rat(Rat q) { return affine(Scalar::rational(std::move(q))); }
  static ProjPoint affine_cplx(std::complex<double> c) { return affine(Scalar::complex_val(c)); }

  bool is_inf() const { return inf_; }
  const Scalar& value() const {
    if (inf_) throw precondition_error("ProjPoint: infinity has no affine value");
    return v_;
  }
  friend bool operator==(const ProjPoint& a, const ProjPoint& b) {
    if (a.inf_ != b.inf_) return false;
    return a.inf_ || a.v_ == b.v_;
  }
  friend bool operator!=(const ProjPoint& a, const ProjPoint& b) { return !(a == b); }

 private:
  ProjPoint() = default;
  bool inf_ = false;
  Scalar v_;
};

// max{1, |z|}
inline Magnitude one_max(const Magnitude& m) { return mag_max(Magnitude::one(m.mode()), m); }

// Normalized chordal metric [z,w] in [0,1]; [0,inf] = 1.
inline Magnitude chordal(const ProjPoint& z, const ProjPoint& w, const FieldMode& mode) {
  if (z.is_inf() && w.is_inf()) return Magnitude::zero(mode);
  if (z.is_inf() || w.is_inf()) {
    const Scalar& a = (z.is_inf() ? w : z).value();
    if (mode.is_arch()) {
      double t = std::abs(a.cplx());
      return Magnitude::arch(1.0 / std::sqrt(1.0 + t * t));
    }
    return mag_div(Magnitude::one(mode), one_max(magnitude(a, mode)));
  }
  const Scalar &a = z.value(), &b = w.value();
  Magnitude num = magnitude(a - b, mode);
  if (mode.is_arch()) {
    double ta = std::abs(a.cplx()), tb = std::abs(b.cplx());
    return Magnitude::arch(num.to_double() / std::sqrt((1.0 + ta * ta) * (1.0 + tb * tb)));
  }
  return mag_div(num, mag_mul(one_max(magnitude(a, mode)), one_max(magnitude(b, mode))));
}

// A point of the Berkovich line: a classical affine point, a disk D(a, r)
// with 0 < r < inf (types II/III), or infinity.  Disks exist only in
// non-archimedean mode.
class BerkPoint {
 public:
  enum class Kind { Classical, Disk, Infinity };

  static BerkPoint classical(const ProjPoint& z) {
    if (z.is_inf()) return infinity();
    BerkPoint s;
    s.kind_ = Kind::Classical;
    s.center_ = z.value();
    return s;
  }
  static BerkPoint classical_rat(Rat q) { return classical(ProjPoint::affine_rat(std::move(q))); }
  static BerkPoint disk(Rat center, Magnitude radius) {
    if (radius.mode().is_arch())
      throw unsupported_mode_error("BerkPoint: disks exist only in non-archimedean mode");
    if (!radius.is_finite() || radius.is_zero())
      throw precondition_error("BerkPoint: disk radius must satisfy 0 < r < inf");
    BerkPoint s;
    s.kind_ = Kind::Disk;
    s.center_ = Scalar::rational(std::move(center));
    s.radius_ = radius;
    return s;
  }
  static BerkPoint infinity() {
    BerkPoint s;
    s.kind_ = Kind::Infinity;
    return s;
  }
  static BerkPoint gauss(const FieldMode& mode) {
    return disk(Rat(0), Magnitude::one(mode));
  }

  Kind kind() const { return kind_; }
  bool is_inf() const { return kind_ == Kind::Infinity; }
  bool is_disk() const { return kind_ == Kind::Disk; }
  bool is_classical() const { return kind_ == Kind::Classical; }
  const Scalar& center() const {
    if (is_inf()) throw precondition_error("BerkPoint: infinity has no center");
    return center_;
  }
  const Magnitude& radius() const {
    if (!is_disk()) throw precondition_error("BerkPoint: not a disk");
    return *radius_;
  }
  ProjPoint as_classical() const {
    if (is_inf()) return ProjPoint::infinity();
    if (is_disk()) throw precondition_error("BerkPoint: a disk is not a classical point");
    return ProjPoint::affine(center_);
  }

 private:
  BerkPoint() = default;
  Kind kind_ = Kind::Infinity;
  Scalar center_;
  std::optional<Magnitude> radius_;
};

inline Magnitude diam(const BerkPoint& s, const FieldMode& mode) {
  switch (s.kind()) {
    case BerkPoint::Kind::Classical: return Magnitude::zero(mode);
    case BerkPoint::Kind::Disk: return s.radius();
    default: return Magnitude::infinite(mode);
  }
}

// Smallest point above both inputs in the disk partial order; the join of
// D(a,r) and D(b,s) is D(a, max{r, s, |a-b|}), classical points counting
// as radius-0 disks.  Non-archimedean only.
inline BerkPoint join(const BerkPoint& a, const BerkPoint& b, const FieldMode& mode) {
  if (mode.is_arch()) throw unsupported_mode_error("join: archimedean mode has no disk order");
  if (a.is_inf() || b.is_inf()) return BerkPoint::infinity();
  const Rat &ca = a.center().rat(), &cb = b.center().rat();
  Magnitude r = diam(a, mode);
  r = mag_max(r, diam(b, mode));
  r = mag_max(r, magnitude(Scalar::rational(ca - cb), mode));
  if (r.is_zero()) return BerkPoint::classical_rat(ca);  // both classical and equal
  return BerkPoint::disk(ca, r);
}

// Berkovich point equality; disks are equal iff radii agree and the centers
// are within the common radius (the containment criterion).
inline bool berk_equal(const BerkPoint& a, const BerkPoint& b, const FieldMode& mode) {
  if (a.is_inf() || b.is_inf()) return a.is_inf() && b.is_inf();
  if (a.is_disk() != b.is_disk()) return false;
  if (!a.is_disk()) return a.center() == b.center();
  if (a.radius() != b.radius()) return false;
  Magnitude d = magnitude(Scalar::rational(a.center().rat() - b.center().rat()), mode);
  return d <= a.radius();
}

// partial order: a <= b iff the disk of a is contained in the disk of b
inline bool berk_leq(const BerkPoint& a, const BerkPoint& b, const FieldMode& mode) {
  if (b.is_inf()) return true;
  if (a.is_inf()) return false;
  Magnitude ra = diam(a, mode), rb = diam(b, mode);
  if (ra > rb) return false;
  Magnitude d = magnitude(Scalar::rational(a.center().rat() - b.center().rat()), mode);
  return d <= rb;
}

// Hsia kernel |S - S'|_inf: diameter of the join, which restricts to
// |z - w| on classical points; any pair involving infinity gives +inf.
inline Magnitude hsia(const BerkPoint& a, const BerkPoint& b, const FieldMode& mode) {
  if (mode.is_arch()) {
    if (a.is_inf() || b.is_inf()) return Magnitude::infinite(mode);
    return Magnitude::arch(std::abs(a.center().cplx() - b.center().cplx()));
  }
  return diam(join(a, b, mode), mode);
}

// [S, inf]_can = 1 / max{1, |a|, r}
inline Magnitude kernel_inf(const BerkPoint& s, const FieldMode& mode) {
  if (s.is_inf()) return Magnitude::zero(mode);
  if (s.is_classical()) return chordal(s.as_classical(), ProjPoint::infinity(), mode);
  Magnitude m = one_max(magnitude(s.center(), mode));
  m = mag_max(m, s.radius());
  return mag_div(Magnitude::one(mode), m);
}

// Quotient form of the generalized Hsia kernel:
// [S,S']_can = |S-S'|_inf * [S,inf]_can * [S',inf]_can.
inline Magnitude kernel_can_quotient(const BerkPoint& a, const BerkPoint& b,
                                     const FieldMode& mode) {
  if (a.is_inf() && b.is_inf()) return Magnitude::zero(mode);
  if (a.is_inf()) return kernel_inf(b, mode);
  if (b.is_inf()) return kernel_inf(a, mode);
  if (mode.is_arch()) return chordal(a.as_classical(), b.as_classical(), mode);
  return mag_mul(hsia(a, b, mode), mag_mul(kernel_inf(a, mode), kernel_inf(b, mode)));
}

// Gromov form: diam(S'') / diam(S_can join S'')^2 where S'' is the tree
// median of S, S' and the Gauss point.  The median is the smallest of the
// three pairwise joins; of those three, the two largest always coincide.
inline Magnitude kernel_can_gromov(const BerkPoint& a, const BerkPoint& b,
                                   const FieldMode& mode) {
  if (mode.is_arch()) return kernel_can_quotient(a, b, mode);
  if (a.is_inf() && b.is_inf()) return Magnitude::zero(mode);  // inf/(inf^2) = 0
  const BerkPoint can = BerkPoint::gauss(mode);
  BerkPoint med = BerkPoint::infinity();
  if (a.is_inf() || b.is_inf()) {
    med = join(a.is_inf() ? b : a, can, mode);
  } else {
    std::array<BerkPoint, 3> joins = {join(a, b, mode), join(a, can, mode), join(b, can, mode)};
    med = joins[0];
    for (const auto& j : joins)
      if (berk_leq(j, med, mode)) med = j;
  }
  Magnitude denom = diam(join(can, med, mode), mode);
  return mag_div(diam(med, mode), mag_mul(denom, denom));
}

inline Magnitude kernel_can(const BerkPoint& a, const BerkPoint& b, const FieldMode& mode) {
  return kernel_can_quotient(a, b, mode);
}

// Small model metric d(S,S') = [S,S']_can - ([S,S]_can + [S',S']_can)/2;
// restricts to the chordal metric on classical points.
inline double small_metric(const BerkPoint& a, const BerkPoint& b, const FieldMode& mode) {
  double self_a = kernel_can(a, a, mode).to_double();
  double self_b = kernel_can(b, b, mode).to_double();
  return kernel_can(a, b, mode).to_double() - (self_a + self_b) / 2.0;
}

// epsilon-regularization point: pi_eps(z) = D(z, eps) for affine z, and
// the involution image D(0, 1/eps) for z = infinity.
inline BerkPoint pi_epsilon(const ProjPoint& z, const Magnitude& eps, const FieldMode& mode) {
  if (mode.is_arch())
    throw unsupported_mode_error("pi_epsilon: archimedean regularization is measure-based");
  if (!eps.is_finite() || eps.is_zero() || eps > Magnitude::one(mode))
    throw precondition_error("pi_epsilon: eps must satisfy 0 < eps <= 1");
  if (z.is_inf()) return BerkPoint::disk(Rat(0), mag_div(Magnitude::one(mode), eps));
  return BerkPoint::disk(z.value().rat(), eps);
}

// An element of PGL(2): z -> (a z + b)/(c z + d).  Validation restricts to
// the isometry group U_K: PGL(2, O_K) non-archimedean (entries of modulus
// at most 1, unit determinant) and PSU(2) archimedean.
struct Mobius {
  Scalar a, b, c, d;

  static Mobius from_entries(Scalar a, Scalar b, Scalar c, Scalar d) {
    return Mobius{std::move(a), std::move(b), std::move(c), std::move(d)};
  }
  static Mobius identity_rat() {
    return from_entries(Scalar::rational(Rat(1)), Scalar::rational(Rat(0)),
                        Scalar::rational(Rat(0)), Scalar::rational(Rat(1)));
  }
  static Mobius identity_cplx() {
    return from_entries(Scalar::complex_val({1, 0}), Scalar::complex_val({0, 0}),
                        Scalar::complex_val({0, 0}), Scalar::complex_val({1, 0}));
  }
  // the involution z -> 1/z, an element of U_K in both modes
  static Mobius involution(const FieldMode& mode) {
    if (mode.is_arch())
      return from_entries(Scalar::complex_val({0, 0}), Scalar::complex_val({1, 0}),
                          Scalar::complex_val({1, 0}), Scalar::complex_val({0, 0}));
    return from_entries(Scalar::rational(Rat(0)), Scalar::rational(Rat(1)),
                        Scalar::rational(Rat(1)), Scalar::rational(Rat(0)));
  }

  Scalar det() const { return a * d - b * c; }
  // adjugate; equals the inverse up to the (unit) determinant, so it
  // represents h^-1 in PGL and stays in U_K
  Mobius inverse() const { return from_entries(d, -b, -c, a); }
  Mobius compose(const Mobius& o) const {  // (*this) after o
    return from_entries(a * o.a + b * o.c, a * o.b + b * o.d,
                        c * o.a + d * o.c, c * o.b + d * o.d);
  }

  void require_in_uk(const FieldMode& mode) const {
    if (mode.is_padic()) {
      auto one = Magnitude::one(mode);
      for (const Scalar* e : {&a, &b, &c, &d})
        if (magnitude(*e, mode) > one)
          throw precondition_error("Mobius: entry outside O_K");
      if (!(magnitude(det(), mode) == one))
        throw precondition_error("Mobius: determinant is not a unit");
      return;
    }
    auto ca = a.cplx(), cb = b.cplx(), cc = c.cplx(), cd = d.cplx();
    double unitary = std::abs(std::norm(ca) + std::norm(cb) - 1.0) +
                     std::abs(std::norm(cc) + std::norm(cd) - 1.0) +
                     std::abs(ca * std::conj(cc) + cb * std::conj(cd));
    if (unitary > 1e-9 || std::abs(std::abs(det().cplx()) - 1.0) > 1e-9)
      throw precondition_error("Mobius: matrix is not in PSU(2)");
  }
};

inline ProjPoint mobius_apply(const Mobius& h, const ProjPoint& z, const FieldMode& mode) {
  h.require_in_uk(mode);
  if (z.is_inf()) {
    if (h.c.is_zero()) return ProjPoint::infinity();
    return ProjPoint::affine(h.a / h.c);
  }
  Scalar denom = h.c * z.value() + h.d;
  if (denom.is_zero()) return ProjPoint::infinity();
  return ProjPoint::affine((h.a * z.value() + h.b) / denom);
}

namespace detail {

// affine z -> alpha z + beta on a disk: D(x, r) -> D(alpha x + beta, |alpha| r)
inline BerkPoint affine_disk(const Scalar& alpha, const Scalar& beta, const BerkPoint& s,
                             const FieldMode& mode) {
  Rat center = alpha.rat() * s.center().rat() + beta.rat();
  if (s.is_classical()) return BerkPoint::classical_rat(std::move(center));
  return BerkPoint::disk(std::move(center), mag_mul(magnitude(alpha, mode), s.radius()));
}

// the involution on disks: D(x,r) -> D(1/x, r/|x|^2) if |x| > r, else D(0, 1/r)
inline BerkPoint iota_point(const BerkPoint& s, const FieldMode& mode) {
  if (s.is_inf()) return BerkPoint::classical_rat(Rat(0));
  Magnitude cm = magnitude(s.center(), mode);
  if (s.is_classical()) {
    if (s.center().rat() == 0) return BerkPoint::infinity();
    return BerkPoint::classical_rat(Rat(1) / s.center().rat());
  }
  if (cm > s.radius())
    return BerkPoint::disk(Rat(1) / s.center().rat(), mag_div(s.radius(), mag_mul(cm, cm)));
  return BerkPoint::disk(Rat(0), mag_div(Magnitude::one(mode), s.radius()));
}

}  // namespace detail

// Action of h in U_K on Berkovich points.  Classical points map through the
// fractional-linear formula; a disk maps through the decomposition of h into
// affine maps and the involution (c = 0: purely affine; c != 0:
// h = affine2 o iota o affine1 with affine1(z) = cz + d and
// affine2(w) = (bc - ad)/c * w + a/c), each factor acting exactly on disks.
inline BerkPoint mobius_apply(const Mobius& h, const BerkPoint& s, const FieldMode& mode) {
  h.require_in_uk(mode);
  if (s.is_classical() || s.is_inf())
    return BerkPoint::classical(mobius_apply(h, s.as_classical(), mode));
  if (mode.is_arch())
    throw unsupported_mode_error("mobius_apply: no disks in archimedean mode");
  if (h.c.is_zero()) {
    return detail::affine_disk(h.a / h.d, h.b / h.d, s, mode);
  }
  BerkPoint w = detail::affine_disk(h.c, h.d, s, mode);
  w = detail::iota_point(w, mode);  // disk in, disk out
  Scalar coef = (h.b * h.c - h.a * h.d) / h.c;
  Scalar shift = h.a / h.c;
  return detail::affine_disk(coef, shift, w, mode);
}

}  // namespace berkfekete
