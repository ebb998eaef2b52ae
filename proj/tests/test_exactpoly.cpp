#include <catch2/catch_amalgamated.hpp>

#include <berkfekete/exactpoly.hpp>

#include <random>

using namespace berkfekete;

namespace {

RatPoly P(std::vector<Rat> asc) { return RatPoly::from_coeffs(std::move(asc)); }

Rat rq(std::mt19937_64& rng, long long lim = 20) {
  std::uniform_int_distribution<long long> num(-lim, lim);
  std::uniform_int_distribution<long long> den(1, lim);
  return Rat(num(rng), den(rng));
}

RatPoly random_poly(std::mt19937_64& rng, int deg) {
  std::vector<Rat> c(static_cast<size_t>(deg) + 1);
  for (auto& x : c) x = rq(rng);
  while (c.back() == 0) c.back() = rq(rng);
  return RatPoly::from_coeffs(std::move(c));
}

}  // namespace

TEST_CASE("compose and iterate") {
  RatPoly f = P({Rat(1, 9), Rat(0), Rat(1)});  // z^2 + 1/9
  CHECK(poly_iterate(f, 1) == f);
  CHECK(poly_iterate(f, 2) == P({Rat(10, 81), Rat(0), Rat(2, 9), Rat(0), Rat(1)}));
  CHECK(poly_iterate(P({Rat(0), Rat(0), Rat(1)}), 3) == RatPoly::monomial(Rat(1), 8));
  CHECK(poly_iterate(f, 3).degree() == 8);
  CHECK_THROWS_AS(poly_iterate(f, 0), precondition_error);

  // deg(f o g) = deg f * deg g on random pairs
  std::mt19937_64 rng(11);
  for (int i = 0; i < 30; ++i) {
    RatPoly a = random_poly(rng, 1 + static_cast<int>(rng() % 4));
    RatPoly b = random_poly(rng, 1 + static_cast<int>(rng() % 4));
    CHECK(poly_compose(a, b).degree() == a.degree() * b.degree());
  }
}

TEST_CASE("resultant fixed examples") {
  CHECK(resultant(P({Rat(-1), Rat(0), Rat(1)}), P({Rat(-2), Rat(1)})) == Rat(3));
  CHECK(resultant(P({Rat(-1), Rat(1)}), P({Rat(-1), Rat(0), Rat(1)})) == Rat(0));
  CHECK(resultant(P({Rat(1, 9), Rat(-1), Rat(1)}), P({Rat(-1), Rat(2)})) == Rat(-5, 9));
  CHECK_THROWS_AS(resultant(RatPoly(), P({Rat(1)})), precondition_error);
}

TEST_CASE("discriminant fixed examples") {
  CHECK(discriminant(P({Rat(1, 9), Rat(-1), Rat(1)})) == Rat(5, 9));
  CHECK(discriminant(P({Rat(1), Rat(-2), Rat(1)})) == Rat(0));  // (z-1)^2
  // frozen oracle value for F_2 = f^2(z) - z with f = z^2 + 1/9
  RatPoly F2 = P({Rat(10, 81), Rat(-1), Rat(2, 9), Rat(0), Rat(1)});
  CHECK(discriminant(F2) == Rat(-148955, 6561));
  CHECK_THROWS_AS(discriminant(P({Rat(1), Rat(2)})), precondition_error);
}

TEST_CASE("disc(z^2+bz+c) = b^2-4c on random rationals") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 100; ++i) {
    Rat b = rq(rng), c = rq(rng);
    CHECK(discriminant(P({c, b, Rat(1)})) == b * b - 4 * c);
  }
}

TEST_CASE("resultant properties on random polynomials") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    RatPoly a = random_poly(rng, 1 + static_cast<int>(rng() % 4));
    RatPoly b = random_poly(rng, 1 + static_cast<int>(rng() % 4));
    Rat r = resultant(a, b), s = resultant(b, a);
    // Res(P,Q) = (-1)^(deg P deg Q) Res(Q,P)
    CHECK(r == ((a.degree() * b.degree()) % 2 == 0 ? s : Rat(-s)));
    // common-root construction: both multiplied by (z - t)
    Rat t = rq(rng);
    RatPoly lin = P({-t, Rat(1)});
    CHECK(resultant(a * lin, b * lin) == 0);
    CHECK((resultant(a, b) == 0) == (poly_gcd(a, b).degree() > 0));
  }
}

TEST_CASE("newton polygon fixed examples") {
  auto np = newton_polygon(P({Rat(1, 9), Rat(-1), Rat(1)}), 3);
  REQUIRE(np.segments.size() == 1);
  CHECK(np.zero_roots == 0);
  CHECK(np.segments[0].slope == Rat(1));  // both roots of magnitude 3^1 = 3
  CHECK(np.segments[0].length == 2);
  CHECK(np.single_slope());

  auto np2 = newton_polygon(P({Rat(-3), Rat(1)}), 3);
  REQUIRE(np2.segments.size() == 1);
  CHECK(np2.segments[0].slope == Rat(-1));  // one root of magnitude 1/3
  CHECK(np2.segments[0].length == 1);

  auto np3 = newton_polygon(P({Rat(0), Rat(-1), Rat(1)}), 5);  // z^2 - z
  CHECK(np3.zero_roots == 1);
  REQUIRE(np3.segments.size() == 1);
  CHECK(np3.segments[0].slope == Rat(0));  // the root 1
  CHECK(np3.segments[0].length == 1);
  CHECK(!np3.single_slope());

  // independently derived multi-segment case: z^3 - (1/3)z^2 + 9z - 27 at p=3
  auto np4 = newton_polygon(P({Rat(-27), Rat(9), Rat(-1, 3), Rat(1)}), 3);
  REQUIRE(np4.segments.size() == 2);
  CHECK(np4.segments[0].slope == Rat(-2));
  CHECK(np4.segments[0].length == 2);
  CHECK(np4.segments[1].slope == Rat(1));
  CHECK(np4.segments[1].length == 1);

  CHECK_THROWS_AS(newton_polygon(RatPoly(), 3), precondition_error);
}

TEST_CASE("newton polygon slope sum matches the root product valuation") {
  std::mt19937_64 rng(31337);
  const std::uint64_t primes[] = {2, 3, 5};
  for (int i = 0; i < 200; ++i) {
    RatPoly a = random_poly(rng, 1 + static_cast<int>(rng() % 5));
    std::uint64_t p = primes[rng() % 3];
    if (a[0] == 0) continue;  // keep the nonzero-root bookkeeping simple here
    auto np = newton_polygon(a, p);
    Rat sum(0);
    long long total_len = 0;
    Rat prev_slope;
    bool first = true;
    for (const auto& seg : np.segments) {
      if (!first) CHECK(prev_slope < seg.slope);  // slopes strictly increasing
      prev_slope = seg.slope;
      first = false;
      sum += seg.slope * seg.length;
      total_len += seg.length;
    }
    CHECK(total_len == a.degree());
    // prod |roots| = |a_0 / lc|: exponents match exactly
    Rat expected(-*padic_valuation(a[0], p) + *padic_valuation(a.leading(), p));
    CHECK(sum == expected);
  }
}

TEST_CASE("squarefree_check") {
  CHECK(squarefree_check(P({Rat(1, 9), Rat(-1), Rat(1)})));
  CHECK(!squarefree_check(P({Rat(1), Rat(-2), Rat(1)})));
  CHECK(squarefree_check(P({Rat(10, 81), Rat(-1), Rat(2, 9), Rat(0), Rat(1)})));
  CHECK_THROWS_AS(squarefree_check(P({Rat(5)})), precondition_error);

  std::mt19937_64 rng(77);
  for (int i = 0; i < 40; ++i) {
    RatPoly a = random_poly(rng, 1 + static_cast<int>(rng() % 3));
    CHECK(!squarefree_check(a * a));
  }
}
