#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tcg/analysis.hpp"

#include <cmath>

using namespace tcg;

namespace {

const WindowSpec kSlow = WindowSpec::gaussian(8.0);

}  // namespace

TEST_CASE("classification") {
  Eigen::Matrix2d j;
  j << 0.0, 1.0, -2.0, -0.3;
  const auto r = classify(j);
  CHECK(r.stable);
  for (auto e : {r.eig1, r.eig2}) {
    const auto res = e * e - r.trace * e + r.det;
    CHECK(std::abs(res) <= 1e-10);
  }
  j << 0.0, 1.0, 0.01, -0.3;
  CHECK_FALSE(classify(j).stable);
}

TEST_CASE("closed forms") {
  CHECK(closed_form_lambda0(3, 0.05, 0.0) == doctest::Approx(0.0707107).epsilon(1e-6));
  CHECK(closed_form_lambda0(5, 0.1, 0.0) == doctest::Approx(std::sqrt(0.02 / 0.96)).epsilon(1e-14));
  // O(Gamma^4) agreement of the exact ratio and its expansion.
  CHECK(std::abs(closed_form_lambda0(5, 0.1, 0.0) - std::sqrt(0.02 * 1.04)) <= 1e-3);
  {
    const long double g2 = 0.01L;
    const long double x = 1.0L - 4.0L * g2 + 16.0L * g2 * g2;
    const long double v = std::sqrt(8.0L / 25.0L * (std::sqrt(12.5L * g2 + x * x) - x));
    CHECK(closed_form_lambda0(7, 0.1, 0.0) == doctest::Approx(double(v)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(closed_form_lambda0(4, 0.1, 0.0), DomainError);
  CHECK_THROWS_AS(closed_form_lambda0(5, 0.6, 0.0), DomainError);
}

TEST_CASE("engine thresholds") {
  const KapitzaThreshold t3(3, kSlow);
  const auto r = t3.lambda0(0.1, 0.0);
  REQUIRE(r.found);
  CHECK(r.value == doctest::Approx(0.141421356).epsilon(1e-8));
  CHECK(r.hi - r.lo <= 1e-10);
  CHECK(t3.det({0.1, r.lo, 0.0, 1.0}) * t3.det({0.1, r.hi, 0.0, 1.0}) <= 0.0);

  const KapitzaThreshold t5(5, kSlow);
  const auto r5 = t5.lambda0(0.1, 0.05);
  CHECK(std::abs(r5.value / closed_form_lambda0(5, 0.1, 0.05) - 1.0) <= 1e-4);

  CHECK(t3.lambda0(1e-3, 0.0).value <= 2e-3);
  CHECK_FALSE(t3.lambda0(0.1, 0.0, 0.1).found);
}

TEST_CASE("threshold cache matches direct assembly") {
  const KapitzaThreshold t5(5, kSlow);
  const KapitzaParams p{0.15, 0.2, 0.02, 1.0};
  TruncationPolicy pol;
  pol.n_max = 5;
  const auto direct = jacobian_at(effective_generator(kapitza_matrix(p), kSlow, pol), 0.0);
  CHECK((t5.jacobian(p) - direct).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("first-order upper boundary") {
  CHECK(lambda_c_first_order(0.0, 0.0).value == doctest::Approx(0.454163).epsilon(1e-5 / 0.454));
  for (double g : {0.1, 0.2})
    CHECK(std::abs(lambda_c_first_order(g, 0.0).value - lambda_c_undamped(g)) <= 1e-8);
  CHECK(std::abs(lambda_c_first_order(0.1, 0.05).value - lambda_c_series(0.1, 0.05)) <= 1e-3);

  // The limit cycle at the boundary is attracting in both frames.
  const double g = 0.1, b = 0.05;
  const double l = lambda_c_first_order(g, b).value;
  TruncationPolicy pol;
  pol.n_max = 1;
  for (int frame : {1, 2}) {
    const auto a = effective_generator(ct_frame(frame, {g, l, b, 1.0}, 0.5), kSlow, pol).evaluate(0.0);
    const Eigen::Matrix2d m = -a.m.real().topLeftCorner(2, 2);
    const auto st = classify(-m);
    CHECK(st.eig1.real() < 0.0);
    CHECK(st.eig2.real() < 0.0);
  }
}

TEST_CASE("floquet oracle") {
  const auto m0 = monodromy(0.1, 0.0, 0.0);
  CHECK_FALSE(m0.stable);
  CHECK(std::max(std::abs(m0.trace), 0.0) > 2.0);
  for (double b : {0.0, 0.05}) {
    const auto m = monodromy(0.1, b, 0.2);
    CHECK(m.liouville_defect <= 1e-8);
  }
  const auto fb = floquet_bounds(0.1, 0.0);
  REQUIRE(fb.lower.found);
  REQUIRE(fb.upper.found);
  CHECK(std::abs(fb.lower.value / closed_form_lambda0(7, 0.1, 0.0) - 1.0) <= 0.01);
  CHECK(std::abs(fb.upper.value / lambda_c_first_order(0.1, 0.0).value - 1.0) <= 0.02);
  CHECK(monodromy(0.1, 0.0, 0.5 * (fb.lower.value + fb.upper.value)).stable);
}
