#include <doctest.h>

#include <cmath>
#include <limits>

#include "helpers.hpp"
#include "oracles.hpp"
#include "qsc/errors.hpp"
#include "qsc/random.hpp"
#include "qsc/semigroup.hpp"

using namespace qsc;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_SUITE("semigroup-functional") {
  TEST_CASE("weighted norms") {
    Rng rng(21);
    const DensityMatrix s = random_density(3, rng, 0.02);
    for (double p : {-2.0, -0.5, 0.3, 1.0, 2.0}) CHECK(weighted_lp_norm(Operator::identity(3), p, s) == doctest::Approx(1.0).epsilon(1e-12));
    const Operator x = random_psd(3, 3, rng);
    CHECK(weighted_lp_norm(x, 1.0, s) == doctest::Approx(s.op().trace_product(x)).epsilon(1e-12));
    CHECK_THROWS_AS(weighted_lp_norm(x, 0.0, s), DomainError);
    CHECK_THROWS_AS(weighted_lp_norm(random_psd(3, 1, rng), -1.0, s), DomainError);

    for (int k = 0; k < 100; ++k) {
      const DensityMatrix sig = random_density(2 + k % 3, rng, 0.01);
      const Operator g = random_positive(sig.dim(), rng);
      double prev = -kInf;
      for (double p : {-1.0, -0.5, 0.5, 0.9, 1.0, 2.0}) {
        const double v = weighted_lp_norm(g, p, sig);
        CHECK(v >= prev * (1 - 1e-12));
        prev = v;
      }
    }
  }

  TEST_CASE("depolarizing semigroup") {
    Rng rng(22);
    const DensityMatrix sigma = random_density(3, rng, 0.05);
    const SemigroupSpec spec(sigma);
    CHECK(spec.mlsi_lower_bound == 0.25);
    const Operator x = random_hermitian(3, rng);
    CHECK(max_abs_diff(depolarize_heisenberg(x, 0, spec).matrix(), x.matrix()) <= 1e-15);
    const CMatrix limit = sigma.op().trace_product(x) * CMatrix::Identity(3, 3);
    CHECK(max_abs_diff(depolarize_heisenberg(x, 50, spec).matrix(), limit) <= 1e-15);
    CHECK(max_abs_diff(depolarize_heisenberg(Operator::identity(3), 0.7, spec).matrix(), CMatrix::Identity(3, 3)) <= 1e-15);
    CHECK_THROWS_AS(depolarize_heisenberg(x, -1, spec), DomainError);
    CHECK_THROWS_AS(SemigroupSpec(DensityMatrix::pure(th::ket({1, 0}))), ValidationError);

    for (double t : {0.1, 0.5, 1.0})
      for (double s : {0.1, 0.5, 1.0}) {
        const Operator lhs = depolarize_heisenberg(depolarize_heisenberg(x, s, spec), t, spec);
        CHECK(max_abs_diff(lhs.matrix(), depolarize_heisenberg(x, t + s, spec).matrix()) <= 1e-12);
      }

    CHECK(max_abs_diff(depolarize_schrodinger(sigma, 0.8, spec).matrix(), sigma.matrix()) <= 1e-15);
    const DensityMatrix r = random_density(3, rng);
    CHECK(max_abs_diff(depolarize_schrodinger(r, 0, spec).matrix(), r.matrix()) <= 1e-15);
    double worst = 0;
    for (int k = 0; k < 1000; ++k) {
      const DensityMatrix y = random_density(3, rng);
      const Operator xx = random_hermitian(3, rng);
      const double t = uniform01(rng) * 3;
      worst = std::max(worst, std::abs(y.op().trace_product(depolarize_heisenberg(xx, t, spec)) -
                                       depolarize_schrodinger(y, t, spec).op().trace_product(xx)));
    }
    CHECK(worst <= 1e-12);
  }

  TEST_CASE("tensorized semigroup") {
    Rng rng(23);
    std::vector<DensityMatrix> sites{random_density(2, rng, 0.05), random_density(2, rng, 0.05), random_density(2, rng, 0.05)};
    const Operator a = random_hermitian(2, rng);
    CHECK(max_abs_diff(tensor_depolarize(a, 0.4, std::span(sites).first(1)).matrix(),
                       depolarize_heisenberg(a, 0.4, SemigroupSpec(sites[0])).matrix()) <= 1e-14);
    const Operator b = random_hermitian(2, rng), c = random_hermitian(2, rng);
    const Operator abc = tensor(tensor(a, b), c);
    const Operator want = tensor(tensor(depolarize_heisenberg(a, 0.3, SemigroupSpec(sites[0])),
                                        depolarize_heisenberg(b, 0.3, SemigroupSpec(sites[1]))),
                                 depolarize_heisenberg(c, 0.3, SemigroupSpec(sites[2])));
    CHECK(max_abs_diff(tensor_depolarize(abc, 0.3, sites).matrix(), want.matrix()) <= 1e-13);
    CHECK(max_abs_diff(tensor_depolarize(Operator::identity({2, 2, 2}), 0.9, sites).matrix(), CMatrix::Identity(8, 8)) <=
          1e-14);
    CHECK_THROWS_AS(tensor_depolarize(a.with_dims({2}), 0.1, sites), DimensionError);
  }

  TEST_CASE("psi map") {
    Rng rng(24);
    const DensityMatrix ry = random_density(2, rng, 0.05);
    const Operator t = random_test(2, rng);
    CHECK(max_abs_diff(psi_map(t, 0, 2.0, ry).matrix(), t.matrix()) <= 1e-15);
    CHECK(max_abs_diff(psi_map(t, 0.6, 1.0, ry).matrix(), depolarize_heisenberg(t, 0.6, SemigroupSpec(ry)).matrix()) <=
          1e-15);
    const double tt = 0.6, g = 1.7;
    CHECK(ry.op().trace_product(psi_map(t, tt, g, ry)) ==
          doctest::Approx((std::exp(-tt) + g * (1 - std::exp(-tt))) * ry.op().trace_product(t)).epsilon(1e-13));
    CHECK_THROWS_AS(psi_map(t, 0.6, 0.9, ry), DomainError);
    const Operator t2 = tensor(t, t);
    CHECK(max_abs_diff(tensor_psi(t2, tt, g, ry).matrix(), tensor(psi_map(t, tt, g, ry), psi_map(t, tt, g, ry)).matrix()) <=
          1e-14);
  }

  TEST_CASE("reverse hypercontractivity") {
    Rng rng(25);
    std::vector<DensityMatrix> one{random_density(2, rng, 0.05)};
    CHECK(rhc_time_threshold(-1, 0.5) == doctest::Approx(std::log(4.0)));
    CHECK(check_rhc(Operator::identity(2), one, -1, 0.5, std::log(4.0)).margin == doctest::Approx(0.0).epsilon(1e-14));
    CHECK_THROWS_AS(check_rhc(Operator::identity(2), one, -1, 0.5, 1.0), PreconditionError);
    // 0 < q < 1 only holds here for maximally mixed sigma; non-commuting G breaks it
    std::vector<DensityMatrix> flat{DensityMatrix::maximally_mixed(2)};
    for (int k = 0; k < 50; ++k) {
      const Operator g = random_positive(2, rng);
      CHECK(check_rhc(g, flat, -1, 0.5, std::log(4.0)).margin >= -1e-9);
      CHECK(check_rhc(g, one, -2, -0.5, rhc_time_threshold(-2, -0.5)).margin >= -1e-9);
    }
    std::vector<DensityMatrix> three{random_density(2, rng, 0.05), random_density(2, rng, 0.05), random_density(2, rng, 0.05)};
    for (int k = 0; k < 20; ++k) {
      const Operator g = random_positive(8, rng).with_dims({2, 2, 2});
      const double p = -1.5 + uniform01(rng), q = p + (-0.2 - p) * uniform01(rng);
      CHECK(check_rhc(g, three, p, q, rhc_time_threshold(p, q)).margin >= -1e-9);
    }
  }

  TEST_CASE("Araki-Lieb-Thirring and reverse forms") {
    Rng rng(26);
    const Operator a = random_psd(3, 3, rng), b = random_psd(3, 3, rng);
    CHECK(std::abs(check_alt(a, b, 1.0).margin) <= 1e-12);
    const double da[] = {0.3, 1.2, 2}, db[] = {0.5, 0.1, 4};
    CHECK(std::abs(check_alt(Operator::diagonal(da), Operator::diagonal(db), 0.4).margin) <= 1e-13);
    for (int k = 0; k < 100; ++k) CHECK(check_alt(random_psd(3, 1 + k % 3, rng), random_psd(3, 3, rng), 0.5).margin >= -1e-10);

    const DensityMatrix sigma = random_density(2, rng, 0.05);
    CHECK(std::abs(check_reverse_holder(Operator::identity(2), Operator::identity(2), 0.5, sigma).margin) <= 1e-12);
    for (int k = 0; k < 100; ++k)
      CHECK(check_reverse_holder(random_psd(2, 2, rng), random_positive(2, rng), 0.5, sigma).margin >= -1e-9);
    const DensityMatrix s1 = DensityMatrix::maximally_mixed(1);
    const double one[] = {2.0}, other[] = {3.0};
    CHECK(std::abs(check_reverse_holder(Operator::diagonal(one), Operator::diagonal(other), 0.5, s1).margin) <= 1e-12);
    CHECK_THROWS_AS(check_reverse_holder(a, b, 0.0, DensityMatrix::maximally_mixed(3)), DomainError);

    CHECK(std::abs(check_reverse_alt(a, b, 1.0, kInf, kInf).margin) <= 1e-12);
    for (int k = 0; k < 100; ++k)
      CHECK(check_reverse_alt(random_psd(2, 2, rng), random_psd(2, 2, rng), 0.5, 4, 4).margin >= -1e-9);
    CHECK_THROWS_AS(check_reverse_alt(a, b, 0.5, 3, 4), PreconditionError);

    // commuting pair: lhs and rhs reduce to sums over eigenvalues
    const double r = 0.5;
    double tr_ar_br = 0, na = 0, nb = 0;
    for (int i = 0; i < 3; ++i) {
      tr_ar_br += std::pow(da[i] * db[i], r);
      na += std::pow(da[i], (1 - r) / 2 * 4);
      nb += std::pow(db[i], (1 - r) / 2 * 4);
    }
    const double lhs = std::pow(tr_ar_br, r) * std::pow(na, 0.25 * 2 * r) * std::pow(nb, 0.25 * 2 * r);
    const InequalityMargin m = check_reverse_alt(Operator::diagonal(da), Operator::diagonal(db), r, 4, 4);
    CHECK(m.lhs == doctest::Approx(lhs).epsilon(1e-12));
    CHECK(m.rhs == doctest::Approx(tr_ar_br).epsilon(1e-12));
  }
}
