#pragma once

// Field-of-scalars layer: exact big rationals carrying a p-adic absolute
// value in non-archimedean mode, complex doubles in archimedean mode, and
// the Magnitude algebra shared by every kernel in the library.
//
// Non-archimedean magnitudes are stored as exact rational exponents e with
// |x| = p^e (so e = -v_p(x) for a rational scalar x).  Rational exponents
// are needed because radii such as |lambda|^(1/d) live in the divisible
// value group.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

namespace berkfekete {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

struct config_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct precondition_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct unsupported_mode_error : precondition_error {
  using precondition_error::precondition_error;
};
struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline double rat_to_double(const Rat& q) { return static_cast<double>(q); }

inline Rat rat_pow(Rat base, long long e) {
  if (e < 0) {
    if (base == 0) throw precondition_error("rat_pow: 0 to a negative power");
    base = Rat(1) / base;
    e = -e;
  }
  Rat r(1);
  while (e) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

// Deterministic Miller-Rabin, exact for all 64-bit inputs.
inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  auto mulmod = [](std::uint64_t a, std::uint64_t b, std::uint64_t m) -> std::uint64_t {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
  };
  auto powmod = [&](std::uint64_t a, std::uint64_t e, std::uint64_t m) -> std::uint64_t {
    std::uint64_t res = 1;
    a %= m;
    while (e) {
      if (e & 1) res = mulmod(res, a, m);
      a = mulmod(a, a, m);
      e >>= 1;
    }
    return res;
  };
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 0; i < r - 1; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

// Ambient field: archimedean (K = C) or non-archimedean (Q embedded in Q_p).
// Every value in a computation shares one FieldMode.
class FieldMode {
 public:
  static FieldMode archimedean() { return FieldMode(0); }
  static FieldMode padic(std::uint64_t p) {
    if (!is_prime_u64(p)) throw config_error("FieldMode: p = " + std::to_string(p) + " is not prime");
    return FieldMode(p);
  }

  bool is_arch() const { return p_ == 0; }
  bool is_padic() const { return p_ != 0; }
  std::uint64_t prime() const {
    if (is_arch()) throw precondition_error("FieldMode: no prime in archimedean mode");
    return p_;
  }
  double log_prime() const { return std::log(static_cast<double>(prime())); }

  friend bool operator==(const FieldMode& a, const FieldMode& b) { return a.p_ == b.p_; }
  friend bool operator!=(const FieldMode& a, const FieldMode& b) { return !(a == b); }

 private:
  explicit FieldMode(std::uint64_t p) : p_(p) {}
  std::uint64_t p_;
};

// v_p of a reduced rational; nullopt encodes v_p(0) = +infinity.
inline std::optional<long long> padic_valuation(const Rat& q, std::uint64_t p) {
  if (!is_prime_u64(p)) throw config_error("padic_valuation: p is not prime");
  if (q == 0) return std::nullopt;
  const BigInt pp(p);
  auto count = [&](BigInt n) -> long long {
    if (n < 0) n = -n;
    long long v = 0;
    BigInt quo, rem;
    for (;;) {
      boost::multiprecision::divide_qr(n, pp, quo, rem);
      if (rem != 0) break;
      n = quo;
      ++v;
    }
    return v;
  };
  return count(boost::multiprecision::numerator(q)) - count(boost::multiprecision::denominator(q));
}

// A scalar of the ambient field: complex double (archimedean) or exact
// rational (non-archimedean).  Binary operations require matching kinds.
class Scalar {
 public:
  Scalar() : v_(Rat(0)) {}
  static Scalar rational(Rat q) { return Scalar(std::move(q)); }
  static Scalar complex_val(std::complex<double> z) { return Scalar(z); }

  bool is_rational() const { return std::holds_alternative<Rat>(v_); }
  bool is_complex() const { return !is_rational(); }
  const Rat& rat() const {
    if (!is_rational()) throw precondition_error("Scalar: not a rational scalar");
    return std::get<Rat>(v_);
  }
  std::complex<double> cplx() const {
    if (is_rational()) throw precondition_error("Scalar: not a complex scalar");
    return std::get<std::complex<double>>(v_);
  }
  bool is_zero() const {
    return is_rational() ? rat() == 0 : cplx() == std::complex<double>(0.0, 0.0);
  }
  bool matches(const FieldMode& mode) const { return mode.is_padic() == is_rational(); }

  friend Scalar operator+(const Scalar& a, const Scalar& b) {
    return a.zip(b, [](auto x, auto y) { return x + y; });
  }
  friend Scalar operator-(const Scalar& a, const Scalar& b) {
    return a.zip(b, [](auto x, auto y) { return x - y; });
  }
  friend Scalar operator*(const Scalar& a, const Scalar& b) {
    return a.zip(b, [](auto x, auto y) { return x * y; });
  }
  friend Scalar operator/(const Scalar& a, const Scalar& b) {
    if (b.is_zero()) throw precondition_error("Scalar: division by zero");
    return a.zip(b, [](auto x, auto y) { return x / y; });
  }
  Scalar operator-() const {
    return is_rational() ? Scalar(Rat(-rat())) : Scalar(-cplx());
  }
  friend bool operator==(const Scalar& a, const Scalar& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

 private:
  explicit Scalar(Rat q) : v_(std::move(q)) {}
  explicit Scalar(std::complex<double> z) : v_(z) {}

  template <class F>
  Scalar zip(const Scalar& o, F op) const {
    if (is_rational() != o.is_rational())
      throw precondition_error("Scalar: mixed archimedean/non-archimedean operands");
    if (is_rational()) return Scalar(Rat(op(rat(), o.rat())));
    return Scalar(op(cplx(), o.cplx()));
  }

  std::variant<Rat, std::complex<double>> v_;
};

// An absolute value |x| >= 0.  Archimedean: a nonnegative double (possibly
// +inf).  Non-archimedean: exact, one of 0, p^e with e rational, +inf.
class Magnitude {
 public:
  enum class State : unsigned char { Zero, Finite, Inf };

  static Magnitude arch(double v) {
    if (std::isnan(v) || v < 0) throw precondition_error("Magnitude: negative or NaN");
    Magnitude m(FieldMode::archimedean());
    m.value_ = v;
    m.state_ = v == 0 ? State::Zero : (std::isinf(v) ? State::Inf : State::Finite);
    return m;
  }
  // |x| = p^e
  static Magnitude p_power(std::uint64_t p, Rat e) {
    Magnitude m(FieldMode::padic(p));
    m.state_ = State::Finite;
    m.exp_ = std::move(e);
    return m;
  }
  static Magnitude zero(const FieldMode& mode) {
    Magnitude m(mode);
    m.state_ = State::Zero;
    return m;
  }
  static Magnitude one(const FieldMode& mode) {
    return mode.is_arch() ? arch(1.0) : p_power(mode.prime(), Rat(0));
  }
  static Magnitude infinite(const FieldMode& mode) {
    Magnitude m(mode);
    m.state_ = State::Inf;
    if (mode.is_arch()) m.value_ = std::numeric_limits<double>::infinity();
    return m;
  }

  const FieldMode& mode() const { return mode_; }
  bool is_zero() const { return state_ == State::Zero; }
  bool is_infinite() const { return state_ == State::Inf; }
  bool is_finite() const { return state_ == State::Finite; }
  bool is_one() const {
    if (state_ != State::Finite) return false;
    return mode_.is_arch() ? value_ == 1.0 : exp_ == 0;
  }

  // exponent e with |x| = p^e; the spec's t is -e
  const Rat& exponent() const {
    if (mode_.is_arch() || state_ != State::Finite)
      throw precondition_error("Magnitude: no finite p-adic exponent");
    return exp_;
  }
  Rat valuation() const { return -exponent(); }

  double to_double() const {
    if (mode_.is_arch()) return value_;
    switch (state_) {
      case State::Zero: return 0.0;
      case State::Inf: return std::numeric_limits<double>::infinity();
      default: return std::pow(static_cast<double>(mode_.prime()), rat_to_double(exp_));
    }
  }
  // log|x|; -inf at zero, +inf at infinity
  double log_real() const {
    if (mode_.is_arch()) {
      return value_ == 0 ? -std::numeric_limits<double>::infinity() : std::log(value_);
    }
    switch (state_) {
      case State::Zero: return -std::numeric_limits<double>::infinity();
      case State::Inf: return std::numeric_limits<double>::infinity();
      default: return rat_to_double(exp_) * mode_.log_prime();
    }
  }
  // log|x| as an exact multiple of log p; nullopt if unavailable
  std::optional<Rat> log_coeff() const {
    if (mode_.is_arch() || state_ != State::Finite) return std::nullopt;
    return exp_;
  }

  friend int mag_cmp(const Magnitude& a, const Magnitude& b) {
    a.require_same_mode(b);
    if (a.mode_.is_arch()) return a.value_ < b.value_ ? -1 : (a.value_ > b.value_ ? 1 : 0);
    auto rank = [](State s) { return s == State::Zero ? 0 : (s == State::Finite ? 1 : 2); };
    if (rank(a.state_) != rank(b.state_)) return rank(a.state_) < rank(b.state_) ? -1 : 1;
    if (a.state_ != State::Finite) return 0;
    return a.exp_ < b.exp_ ? -1 : (a.exp_ > b.exp_ ? 1 : 0);
  }
  friend bool operator==(const Magnitude& a, const Magnitude& b) { return mag_cmp(a, b) == 0; }
  friend bool operator!=(const Magnitude& a, const Magnitude& b) { return mag_cmp(a, b) != 0; }
  friend bool operator<(const Magnitude& a, const Magnitude& b) { return mag_cmp(a, b) < 0; }
  friend bool operator<=(const Magnitude& a, const Magnitude& b) { return mag_cmp(a, b) <= 0; }
  friend bool operator>(const Magnitude& a, const Magnitude& b) { return mag_cmp(a, b) > 0; }
  friend bool operator>=(const Magnitude& a, const Magnitude& b) { return mag_cmp(a, b) >= 0; }

  friend Magnitude mag_mul(const Magnitude& a, const Magnitude& b) {
    a.require_same_mode(b);
    if (a.mode_.is_arch()) return arch(a.value_ * b.value_);
    if (a.is_zero() || b.is_zero()) {
      if (a.is_infinite() || b.is_infinite())
        throw precondition_error("mag_mul: 0 * infinity");
      return zero(a.mode_);
    }
    if (a.is_infinite() || b.is_infinite()) return infinite(a.mode_);
    return p_power(a.mode_.prime(), a.exp_ + b.exp_);
  }
  friend Magnitude mag_div(const Magnitude& a, const Magnitude& b) {
    a.require_same_mode(b);
    if (b.is_zero()) throw precondition_error("mag_div: division by zero magnitude");
    if (a.mode_.is_arch()) return arch(b.is_infinite() && a.is_infinite()
                                           ? throw precondition_error("mag_div: inf/inf")
                                           : a.value_ / b.value_);
    if (b.is_infinite()) {
      if (a.is_infinite()) throw precondition_error("mag_div: inf/inf");
      return zero(a.mode_);
    }
    if (a.is_zero()) return zero(a.mode_);
    if (a.is_infinite()) return infinite(a.mode_);
    return p_power(a.mode_.prime(), a.exp_ - b.exp_);
  }
  friend Magnitude mag_max(const Magnitude& a, const Magnitude& b) {
    return mag_cmp(a, b) >= 0 ? a : b;
  }
  friend Magnitude mag_min(const Magnitude& a, const Magnitude& b) {
    return mag_cmp(a, b) <= 0 ? a : b;
  }
  friend Magnitude mag_pow(const Magnitude& m, const Rat& r) {
    if (m.is_zero() || m.is_infinite()) {
      if (r <= 0) throw precondition_error("mag_pow: zero/infinite base needs positive exponent");
      return m;
    }
    if (m.mode_.is_arch()) return arch(std::pow(m.value_, rat_to_double(r)));
    return p_power(m.mode_.prime(), m.exp_ * r);
  }

 private:
  explicit Magnitude(FieldMode mode) : mode_(mode) {}
  void require_same_mode(const Magnitude& o) const {
    if (mode_ != o.mode_) throw precondition_error("Magnitude: mixed field modes");
  }

  FieldMode mode_;
  double value_ = 0.0;          // archimedean only
  State state_ = State::Zero;   // non-archimedean only
  Rat exp_;                     // non-archimedean finite only
};

inline Magnitude magnitude(const Scalar& x, const FieldMode& mode) {
  if (!x.matches(mode)) throw precondition_error("magnitude: scalar kind does not match mode");
  if (mode.is_arch()) return Magnitude::arch(std::abs(x.cplx()));
  auto v = padic_valuation(x.rat(), mode.prime());
  if (!v) return Magnitude::zero(mode);
  return Magnitude::p_power(mode.prime(), Rat(-*v));
}

inline double to_log_real(const Magnitude& m) { return m.log_real(); }

inline std::string rat_to_string(const Rat& q) { return q.str(); }

inline Rat rat_from_string(const std::string& s) {
  try {
    Rat q(s);
    return q;
  } catch (const std::exception&) {
    throw parse_error("invalid rational literal: '" + s + "'");
  }
}

}  // namespace berkfekete
