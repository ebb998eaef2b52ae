#include <catch2/catch_amalgamated.hpp>

#include <berkfekete/berkovich.hpp>

#include "generators.hpp"

using namespace berkfekete;
namespace gen = berkfekete::testgen;

namespace {
const FieldMode kArch = FieldMode::archimedean();
const FieldMode kP3 = FieldMode::padic(3);
}  // namespace

TEST_CASE("chordal fixed values") {
  CHECK(chordal(ProjPoint::affine_rat(Rat(0)), ProjPoint::infinity(), kP3).is_one());
  CHECK(chordal(ProjPoint::affine_cplx({0, 0}), ProjPoint::infinity(), kArch).to_double() ==
        Catch::Approx(1.0));
  CHECK(chordal(ProjPoint::affine_cplx({1, 0}), ProjPoint::affine_cplx({0, 1}), kArch)
            .to_double() == Catch::Approx(0.70710678).epsilon(1e-7));
  // p=3: [3, 1/3] = |3 - 1/3| / (1 * 3) = 3/3 = 1
  CHECK(chordal(ProjPoint::affine_rat(Rat(3)), ProjPoint::affine_rat(Rat(1, 3)), kP3).is_one());
  CHECK(chordal(ProjPoint::infinity(), ProjPoint::infinity(), kP3).is_zero());
}

TEST_CASE("join fixed values") {
  auto ninth = Magnitude::p_power(3, Rat(-2));
  auto a = BerkPoint::disk(Rat(0), ninth);
  auto b = BerkPoint::disk(Rat(1), ninth);
  CHECK(berk_equal(join(a, b, kP3), BerkPoint::gauss(kP3), kP3));
  CHECK(berk_equal(join(a, a, kP3), a, kP3));
  CHECK(join(a, BerkPoint::infinity(), kP3).is_inf());
  CHECK_THROWS_AS(join(a, b, kArch), unsupported_mode_error);

  // result dominates both inputs and is minimal among sampled upper bounds
  std::mt19937_64 rng(404);
  for (int i = 0; i < 300; ++i) {
    auto s = gen::berk_point(rng, kP3), t = gen::berk_point(rng, kP3);
    auto j = join(s, t, kP3);
    CHECK(berk_leq(s, j, kP3));
    CHECK(berk_leq(t, j, kP3));
    auto u = gen::berk_point(rng, kP3);
    if (berk_leq(s, u, kP3) && berk_leq(t, u, kP3)) CHECK(berk_leq(j, u, kP3));
  }
}

TEST_CASE("hsia fixed values") {
  auto a = BerkPoint::disk(Rat(0), Magnitude::p_power(3, Rat(-1)));
  auto b = BerkPoint::disk(Rat(1), Magnitude::p_power(3, Rat(-2)));
  CHECK(hsia(a, b, kP3).is_one());  // max{|0-1|, 1/3, 1/9} = 1
  CHECK(hsia(BerkPoint::gauss(kP3), BerkPoint::gauss(kP3), kP3).is_one());
  CHECK(hsia(BerkPoint::classical_rat(Rat(0)), BerkPoint::classical_rat(Rat(1)), kP3).is_one());
  CHECK(hsia(a, BerkPoint::infinity(), kP3).is_infinite());
  CHECK(hsia(BerkPoint::infinity(), BerkPoint::infinity(), kP3).is_infinite());
  CHECK(hsia(BerkPoint::classical_rat(Rat(5)), BerkPoint::classical_rat(Rat(5)), kP3).is_zero());
}

TEST_CASE("hsia ultrametric on finite points") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    auto x = gen::berk_point(rng, kP3), y = gen::berk_point(rng, kP3), z = gen::berk_point(rng, kP3);
    if (x.is_inf() || y.is_inf() || z.is_inf()) continue;
    CHECK(hsia(x, z, kP3) <= mag_max(hsia(x, y, kP3), hsia(y, z, kP3)));
  }
}

TEST_CASE("kernel_can fixed values") {
  auto can = BerkPoint::gauss(kP3);
  CHECK(kernel_can(can, can, kP3).is_one());
  CHECK(kernel_inf(BerkPoint::disk(Rat(0), Magnitude::p_power(3, Rat(1))), kP3) ==
        Magnitude::p_power(3, Rat(-1)));  // [D(0,3), inf] = 1/3
  // |z| <= 1: [z, D(z, 1/3)] = 1/3
  auto z = BerkPoint::classical_rat(Rat(2, 5));
  auto dz = BerkPoint::disk(Rat(2, 5), Magnitude::p_power(3, Rat(-1)));
  CHECK(kernel_can(z, dz, kP3) == Magnitude::p_power(3, Rat(-1)));
  CHECK(kernel_can(BerkPoint::infinity(), BerkPoint::infinity(), kP3).is_zero());
  CHECK(kernel_can_gromov(BerkPoint::infinity(), BerkPoint::infinity(), kP3).is_zero());
}

TEST_CASE("quotient and Gromov forms agree exactly") {
  for (std::uint64_t p : {2ull, 3ull, 5ull}) {
    auto mode = FieldMode::padic(p);
    std::mt19937_64 rng(1000 + p);
    for (int i = 0; i < 4000; ++i) {
      auto a = gen::berk_point(rng, mode), b = gen::berk_point(rng, mode);
      auto q = kernel_can_quotient(a, b, mode);
      auto g = kernel_can_gromov(a, b, mode);
      REQUIRE(q == g);
      CHECK(q <= Magnitude::one(mode));
      CHECK(q == kernel_can_quotient(b, a, mode));  // symmetry
    }
  }
}

TEST_CASE("kernel_can restricts to chordal on classical points") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 500; ++i) {
    Rat x = gen::rational(rng), y = gen::rational(rng);
    auto k = kernel_can(BerkPoint::classical_rat(x), BerkPoint::classical_rat(y), kP3);
    CHECK(k == chordal(ProjPoint::affine_rat(x), ProjPoint::affine_rat(y), kP3));
  }
}

TEST_CASE("small_metric fixed values and comparison bound") {
  auto z = BerkPoint::classical_rat(Rat(1, 2));
  CHECK(small_metric(z, z, kP3) == 0.0);
  auto dz = BerkPoint::disk(Rat(1, 2), Magnitude::p_power(3, Rat(-1)));
  CHECK(small_metric(z, dz, kP3) == Catch::Approx(1.0 / 6.0));
  // archimedean: d is the chordal metric itself
  auto a = ProjPoint::affine_cplx({0.3, -0.4}), b = ProjPoint::affine_cplx({-1.1, 0.25});
  CHECK(small_metric(BerkPoint::classical(a), BerkPoint::classical(b), kArch) ==
        Catch::Approx(chordal(a, b, kArch).to_double()));

  // d(z, S) >= [z, S]_can / 2 for classical z; exactly, via the kernel form
  std::mt19937_64 rng(7);
  for (int i = 0; i < 3000; ++i) {
    auto zz = (rng() % 6 == 0) ? BerkPoint::infinity() : BerkPoint::classical_rat(gen::rational(rng));
    auto s = gen::berk_point(rng, kP3);
    CHECK(kernel_can(zz, s, kP3) >= kernel_can(s, s, kP3));
    double d = small_metric(zz, s, kP3);
    CHECK(d >= kernel_can(zz, s, kP3).to_double() / 2.0 - 1e-12);
  }
}

TEST_CASE("pi_epsilon fixed values") {
  auto third = Magnitude::p_power(3, Rat(-1));
  CHECK(berk_equal(pi_epsilon(ProjPoint::affine_rat(Rat(0)), third, kP3),
                   BerkPoint::disk(Rat(0), third), kP3));
  auto at_inf = pi_epsilon(ProjPoint::infinity(), third, kP3);
  CHECK(berk_equal(at_inf, BerkPoint::disk(Rat(0), Magnitude::p_power(3, Rat(1))), kP3));
  // self-kernel consistency: [pi_eps(inf), pi_eps(inf)]_can = eps
  CHECK(kernel_can(at_inf, at_inf, kP3) == third);
  // [pi_eps(z), inf]_can = 1 for |z| <= 1
  CHECK(kernel_can(pi_epsilon(ProjPoint::affine_rat(Rat(1, 2)), third, kP3),
                   BerkPoint::infinity(), kP3)
            .is_one());
  CHECK_THROWS_AS(pi_epsilon(ProjPoint::affine_rat(Rat(0)), Magnitude::p_power(3, Rat(1)), kP3),
                  precondition_error);
  CHECK_THROWS_AS(pi_epsilon(ProjPoint::affine_cplx({0, 0}), Magnitude::arch(0.5), kArch),
                  unsupported_mode_error);
}

TEST_CASE("mobius fixed values") {
  auto id = Mobius::identity_rat();
  auto s = BerkPoint::disk(Rat(2), Magnitude::p_power(3, Rat(-1)));
  CHECK(berk_equal(mobius_apply(id, s, kP3), s, kP3));

  auto iota = Mobius::involution(kP3);
  CHECK(berk_equal(mobius_apply(iota, BerkPoint::disk(Rat(0), Magnitude::p_power(3, Rat(-1))), kP3),
                   BerkPoint::disk(Rat(0), Magnitude::p_power(3, Rat(1))), kP3));
  // |a| = 1/3 > 1/9: D(3, 1/9) -> D(1/3, (1/9)/(1/9)) = D(1/3, 1)
  CHECK(berk_equal(mobius_apply(iota, BerkPoint::disk(Rat(3), Magnitude::p_power(3, Rat(-2))), kP3),
                   BerkPoint::disk(Rat(1, 3), Magnitude::one(kP3)), kP3));

  auto bad = Mobius::from_entries(Scalar::rational(Rat(1, 3)), Scalar::rational(Rat(0)),
                                  Scalar::rational(Rat(0)), Scalar::rational(Rat(1)));
  CHECK_THROWS_AS(mobius_apply(bad, s, kP3), precondition_error);
}

TEST_CASE("U_K acts isometrically") {
  std::mt19937_64 rng(9001);
  for (int i = 0; i < 400; ++i) {
    auto h = gen::uk_element_padic(rng, kP3);
    auto a = gen::berk_point(rng, kP3), b = gen::berk_point(rng, kP3);
    auto ha = mobius_apply(h, a, kP3), hb = mobius_apply(h, b, kP3);
    REQUIRE(kernel_can(ha, hb, kP3) == kernel_can(a, b, kP3));
    CHECK(small_metric(ha, hb, kP3) == Catch::Approx(small_metric(a, b, kP3)).margin(1e-15));
    // h^-1 undoes h up to Berkovich equality
    CHECK(berk_equal(mobius_apply(h.inverse(), ha, kP3), a, kP3));
  }
  // archimedean PSU(2) preserves the chordal metric
  for (int i = 0; i < 400; ++i) {
    auto h = gen::uk_element_arch(rng);
    auto a = ProjPoint::affine_cplx(gen::sphere_point(rng));
    auto b = ProjPoint::affine_cplx(gen::sphere_point(rng));
    auto ha = mobius_apply(h, a, kArch), hb = mobius_apply(h, b, kArch);
    CHECK(chordal(ha, hb, kArch).to_double() ==
          Catch::Approx(chordal(a, b, kArch).to_double()).margin(1e-9));
  }
}
