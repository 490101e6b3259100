#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tcg/algebra.hpp"

#include <random>

using namespace tcg;

namespace {

PsOp term(cplx c, int k, int a, int dth, int dp) {
  PsOp o;
  o.add(PsKey{k, a, dth, dp}, c);
  return o;
}

PsOp random_psop(std::mt19937& rng, int nterms) {
  std::uniform_int_distribution<int> k(-2, 2), a(0, 2), d(0, 2), c(-3, 3);
  PsOp o;
  for (int i = 0; i < nterms; ++i)
    o.add(PsKey{k(rng), a(rng), d(rng), d(rng)}, cplx(c(rng), c(rng)));
  return o;
}

bool same(const PsOp& a, const PsOp& b) { return a.terms == b.terms; }

MatrixOp random_matrix(std::mt19937& rng, int d) {
  std::normal_distribution<double> n;
  Eigen::MatrixXcd m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = cplx(n(rng), n(rng));
  return MatrixOp(m);
}

}  // namespace

TEST_CASE("Leibniz examples") {
  const PsOp dp = term(1.0, 0, 0, 0, 1);
  const PsOp p = term(1.0, 0, 1, 0, 0);
  CHECK(same(compose(dp, p), add(term(1.0, 0, 1, 0, 1), PsOp::identity())));

  const PsOp dth = term(1.0, 0, 0, 1, 0);
  const PsOp e = term(1.0, 1, 0, 0, 0);
  CHECK(same(compose(dth, e), add(term(1.0, 1, 0, 1, 0), term(cplx(0, 1), 1, 0, 0, 0))));

  const PsOp edp = term(1.0, 1, 0, 0, 1);
  CHECK(same(commutator(dth, edp), term(cplx(0, 1), 1, 0, 0, 1)));
}

TEST_CASE("matrix compose reverses order") {
  Eigen::MatrixXcd a(1, 1), b(1, 1);
  a << 2.0;
  b << cplx(0.0, 3.0);
  CHECK(std::abs(compose(MatrixOp(a), MatrixOp(b)).m(0, 0) - cplx(0.0, 6.0)) < 1e-15);
  std::mt19937 rng(1);
  const MatrixOp x = random_matrix(rng, 3), y = random_matrix(rng, 3);
  CHECK((compose(x, y).m - y.m * x.m).norm() < 1e-14);
  CHECK_THROWS_AS(compose(x, MatrixOp::zero(2)), DimensionMismatch);
}

TEST_CASE("linear field as PsOp follows the matrix convention") {
  // Linear fields on (theta, p) act on polynomial coordinates; composition of
  // operators on p must match B*A on coordinate vectors.
  const PsOp la = add(term(1.0, 0, 1, 1, 0), term(2.0, 0, 1, 0, 1));  // p d_th + 2p d_p
  const PsOp lb = term(3.0, 0, 1, 0, 1);                              // 3p d_p
  Eigen::MatrixXcd A(2, 2), B(2, 2);
  A << 0, 1, 0, 2;  // rows: L theta = p, L p = 2p
  B << 0, 0, 0, 3;
  const MatrixOp ab = compose(MatrixOp(A), MatrixOp(B));
  const PhaseFn pfn = PhaseFn::monomial(1.0, 0, 1);
  const PhaseFn lalb_p = compose(la, lb).apply(pfn);
  CHECK(std::abs(lalb_p(0.0, 1.0) - ab.m(1, 1)) < 1e-15);
}

TEST_CASE("PsOp associativity is exact") {
  std::mt19937 rng(42);
  for (int i = 0; i < 100; ++i) {
    const PsOp a = random_psop(rng, 3), b = random_psop(rng, 3), c = random_psop(rng, 3);
    CHECK(same(compose(compose(a, b), c), compose(a, compose(b, c))));
  }
}

TEST_CASE("PsOp commutator antisymmetry and Jacobi are exact") {
  std::mt19937 rng(9);
  for (int i = 0; i < 50; ++i) {
    const PsOp a = random_psop(rng, 3), b = random_psop(rng, 3), c = random_psop(rng, 3);
    CHECK(same(commutator(a, b), scale(commutator(b, a), -1.0)));
    CHECK(commutator(a, a).terms.empty());
    const PsOp j = add(add(commutator(a, commutator(b, c)), commutator(b, commutator(c, a))),
                       commutator(c, commutator(a, b)));
    CHECK(j.terms.empty());
  }
}

TEST_CASE("matrix Jacobi identity") {
  std::mt19937 rng(2);
  for (int i = 0; i < 20; ++i) {
    const MatrixOp a = random_matrix(rng, 3), b = random_matrix(rng, 3), c = random_matrix(rng, 3);
    const MatrixOp j = add(add(commutator(a, commutator(b, c)), commutator(b, commutator(c, a))),
                           commutator(c, commutator(a, b)));
    CHECK(norm_inf(j) <= 1e-12);
    CHECK(norm_inf(commutator(a, a)) == 0.0);
  }
}

TEST_CASE("product caps drop and count terms") {
  ps_reset_dropped();
  const PsOp big = term(1.0, 10, 7, 0, 0);
  const PsOp prod = compose(big, big);
  CHECK(prod.terms.empty());
  CHECK(ps_dropped_terms() == 1);
  ps_reset_dropped();
}

TEST_CASE("vector field of a pendulum-like operator") {
  const double g2 = 0.3, beta = 0.1;
  PsOp l0 = PsOp::from_fn(PhaseFn::monomial(1.0, 0, 1), 1, 0);
  l0 = add(l0, PsOp::from_fn(PhaseFn::sin_theta() * cplx(g2) - PhaseFn::monomial(beta, 0, 1), 0, 1));
  const VectorField v = vector_field(l0);
  for (double th : {0.2, -1.1}) {
    for (double p : {0.0, 0.7}) {
      CHECK(std::abs(v.f_theta(th, p) - p) < 1e-15);
      CHECK(std::abs(v.f_p(th, p) - (g2 * std::sin(th) - beta * p)) < 1e-15);
    }
  }
  CHECK(v.higher_derivative_terms == 0);
  const VectorField z = vector_field(PsOp::zero());
  CHECK(z.f_theta.terms.empty());
  CHECK(z.f_p.terms.empty());
}

TEST_CASE("split recovers hamiltonian and dissipator") {
  const PhaseFn h = PhaseFn::monomial(0.5, 0, 2);
  const SplitResult free = split_hamiltonian_dissipator(PsOp::poisson(h));
  CHECK((free.h_eff - h).is_zero(1e-15));
  CHECK(free.d_eff.is_zero());
  CHECK(!free.flagged);

  const PhaseFn H = PhaseFn::monomial(0.5, 0, 2) + PhaseFn::cos_theta() * cplx(0.2) +
                    PhaseFn::sin_theta() * PhaseFn::monomial(0.3, 0, 1);
  const PhaseFn D = PhaseFn::monomial(-0.05, 0, 2) + PhaseFn::cos_theta() * PhaseFn::monomial(0.1, 0, 2);
  const PsOp g = add(PsOp::poisson(H), PsOp::double_bracket(D));
  const SplitResult s = split_hamiltonian_dissipator(g);
  CHECK((s.h_eff - H).is_zero(1e-15));
  CHECK((s.d_eff - D).is_zero(1e-15));
}

TEST_CASE("split round trip reproduces the vector field") {
  std::mt19937 rng(4);
  for (int i = 0; i < 50; ++i) {
    const PsOp g = random_psop(rng, 6);
    const SplitResult s = split_hamiltonian_dissipator(g, 1.0);
    const VectorField a = vector_field(g);
    const VectorField b = reconstruct(s, 1.0);
    CHECK((a.f_theta - b.f_theta).is_zero(1e-14));
    CHECK((a.f_p - b.f_p).is_zero(1e-14));
    for (const auto& [key, c] : s.d_eff.terms) CHECK(key.a >= 2);
    CHECK(s.h_eff.terms.count(PhaseKey{0, 0}) == 0);
  }
}

TEST_CASE("constant force is flagged as non integrable") {
  const PsOp g = term(0.5, 0, 0, 0, 1);
  const SplitResult s = split_hamiltonian_dissipator(g);
  CHECK(s.flagged);
  const VectorField b = reconstruct(s);
  CHECK(std::abs(b.f_p(0.3, 0.2) - 0.5) < 1e-15);
}

TEST_CASE("dump format is sorted one term per line") {
  const PsOp o = add(term(2.0, 1, 0, 0, 1), term(cplx(0, -1), -1, 2, 1, 0));
  CHECK(o.dump() == "(0,-1) -1 2 1 0\n(2,0) 1 0 0 1\n");
}

TEST_CASE("dynkin projection") {
  const std::vector<FreeOp> letters{FreeOp::letter(0), FreeOp::letter(1)};
  const auto one = dynkin_project<FreeOp>({{Word{0}, 2.0}}, letters);
  CHECK(norm_inf(sub(one.lie_part, scale(letters[0], 2.0))) == 0.0);
  CHECK(norm_inf(one.remainder) == 0.0);

  const auto pair = dynkin_project<FreeOp>({{Word{0, 1}, 1.0}, {Word{1, 0}, -1.0}}, letters);
  CHECK(norm_inf(pair.remainder) < 1e-15);

  const auto sym = dynkin_project<FreeOp>({{Word{0, 0}, 1.0}}, letters);
  CHECK(norm_inf(sym.lie_part) == 0.0);
  CHECK(norm_inf(sym.remainder) == 1.0);
}

TEST_CASE("reality defect") {
  CHECK(PhaseFn::sin_theta(2).reality_defect() == 0.0);
  CHECK(PhaseFn::monomial(cplx(0, 1), 1, 0).reality_defect() > 0.5);
}
