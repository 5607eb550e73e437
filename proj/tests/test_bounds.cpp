#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "qsc/bounds.hpp"
#include "qsc/entropy.hpp"
#include "qsc/errors.hpp"
#include "qsc/random.hpp"

using namespace qsc;

namespace {

CQSource noisy_binary(double w = 0.9) {
  return CQSource({"0", "1"}, {0.5, 0.5}, {th::noisy_pure(th::ket({1, 0}), w), th::noisy_pure(th::ket({1, 1}), w)});
}

CQSource flat_binary() {
  const DensityMatrix s = DensityMatrix::maximally_mixed(2);
  return CQSource({"0", "1"}, {0.4, 0.6}, {s, s});
}

DeltaStarOptions quick() {
  DeltaStarOptions o;
  o.starts = 16;
  return o;
}

double mi(const CQSource& s) { return mutual_information(s.joint(), {0}).nats; }

}  // namespace

TEST_SUITE("converse-bounds") {
  TEST_CASE("closed-form constants") {
    const double want = 2 * std::log(4.0) * std::sqrt(6 * std::log(16.0)) + 2 * std::sqrt(4 * std::log(8.0));
    CHECK(k_eps(2, 2, 2, 0.5) == doctest::Approx(want).epsilon(1e-14));
    const double a = 3 * std::log(2.0) * std::sqrt(6 * std::log(4.0)) + 2 * std::sqrt(std::log(2.0));
    CHECK(a_constant(2, 2, 2, 1, 0.5, 0.5) == doctest::Approx(a).epsilon(1e-14));
    CHECK(stein_threshold(2, 2, 0.5) == doctest::Approx(6 * std::log(16.0)).epsilon(1e-14));
    for (double x : {1.5, 2.0, 3.0}) {
      CHECK(k_eps(x + 0.1, 2, 2, 0.5) > k_eps(x, 2, 2, 0.5));
      CHECK(k_eps(2, x + 0.1, 2, 0.5) > k_eps(2, x, 2, 0.5));
      CHECK(a_constant(x + 0.1, 2, 2, 1, 0.5, 0.5) > a_constant(x, 2, 2, 1, 0.5, 0.5));
      CHECK(a_constant(2, x + 0.1, 2, 1, 0.5, 0.5) > a_constant(2, x, 2, 1, 0.5, 0.5));
    }
    for (double e : {0.1, 0.5, 0.8}) CHECK(k_eps(2, 2, 2, e + 0.05) > k_eps(2, 2, 2, e));
    CHECK(k_source(2, 2, 2, 0.5) == doctest::Approx(2 * std::log(4.0) * std::sqrt(6 * std::log(16.0)) +
                                                    2 * std::sqrt(2 * std::log(4.0)))
                                        .epsilon(1e-14));
  }

  TEST_CASE("theta lower estimate") {
    const CQSource s = noisy_binary();
    const std::vector<DensityMatrix> alt{th::noisy_pure(th::ket({1, 0}), 0.5), th::noisy_pure(th::ket({1, 1}), 0.5)};
    const ThetaEstimate full = theta_n_lower(s, alt, 1, 5.0);
    double want = 0;
    for (int x = 0; x < 2; ++x) want += 0.5 * relative_entropy(s.state(x), alt[x].op()).nats;
    CHECK(full.value == doctest::Approx(want).epsilon(1e-12));
    CHECK(full.encoders == 1);

    const ThetaEstimate one = theta_n_lower(s, alt, 1, 0.0);
    const DensityMatrix alt_y = DensityMatrix::trusted(make_trusted(0.5 * alt[0].matrix() + 0.5 * alt[1].matrix(), {2}));
    CHECK(one.value == doctest::Approx(relative_entropy(s.rho_y(), alt_y.op()).nats).epsilon(1e-12));

    const ThetaEstimate indep = theta_n_lower(s, {s.rho_y(), s.rho_y()}, 1, 5.0);
    CHECK(indep.value == doctest::Approx(mi(s)).epsilon(1e-12));

    const double r = 0.5 * std::log(2.0);
    const ThetaEstimate t1 = theta_n_lower(s, alt, 1, r), t2 = theta_n_lower(s, alt, 2, r);
    CHECK(2 * t1.value <= 2 * t2.value + 1e-9);
    CHECK(t2.encoders == 16);
    CHECK(theta_n_lower(s, alt, 2, r, true, Execution::serial).value == t2.value);

    CHECK_THROWS_AS(theta_n_lower(s, alt, 1, 0.3, false), PreconditionError);
    CHECK_THROWS_AS(theta_n_lower(s, {alt[0]}, 1, 0.3), DimensionError);
  }

  TEST_CASE("Stein objective and F_q points") {
    const CQSource s = noisy_binary(0.7);
    const SteinObjective id = stein_independence_objective(s, StochasticChannel::identity(2));
    CHECK(id.i_uy == doctest::Approx(mi(s)).epsilon(1e-12));
    CHECK(id.i_ux == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    const SteinObjective k = stein_independence_objective(s, StochasticChannel::constant(2));
    CHECK(std::abs(k.i_uy) <= 1e-12);
    CHECK(std::abs(k.i_ux) <= 1e-12);
    Rng rng(51);
    for (int j = 0; j < 50; ++j) {
      RMatrix m(2, 3);
      for (int x = 0; x < 2; ++x) {
        const auto row = random_dirichlet(3, rng);
        for (int u = 0; u < 3; ++u) m(x, u) = row[u];
      }
      const SteinObjective o = stein_independence_objective(s, StochasticChannel(m));
      CHECK(o.i_uy <= o.i_ux + 1e-9);
    }
    // two independent letters: the product channel adds
    const CQSource s2 = product_source(s, 2);
    RMatrix m(2, 2);
    m << 0.8, 0.2, 0.3, 0.7;
    RMatrix mm(4, 4);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int u = 0; u < 2; ++u)
          for (int v = 0; v < 2; ++v) mm(2 * a + b, 2 * u + v) = m(a, u) * m(b, v);
    const SteinObjective single = stein_independence_objective(s, StochasticChannel(m));
    const SteinObjective pair = stein_independence_objective(s2, StochasticChannel(mm));
    CHECK(pair.i_uy == doctest::Approx(2 * single.i_uy).epsilon(1e-10));
    CHECK(pair.i_ux == doctest::Approx(2 * single.i_ux).epsilon(1e-10));
    CHECK_THROWS_AS(stein_independence_objective(s, StochasticChannel::identity(3)), DimensionError);

    const double hy = von_neumann_entropy(s.rho_y()).nats;
    const FqPoint fi = fq_point(s, StochasticChannel::identity(2), 1.0);
    CHECK(fi.value == doctest::Approx(2 * hy - mi(s)).epsilon(1e-12));
    CHECK(fi.feasible);
    CHECK(fq_point(s, StochasticChannel::constant(2), 0.0).value == doctest::Approx(2 * hy).epsilon(1e-12));
    CHECK(fq_point(s, StochasticChannel::identity(2), std::log(2.0) + 1e-12).feasible);
    CHECK(!fq_point(s, StochasticChannel::identity(2), std::log(2.0) - 1e-9).feasible);
  }

  TEST_CASE("constrained bottleneck supremum") {
    const CQSource s = noisy_binary();
    CHECK(std::abs(bottleneck_sup_constrained(s, 0.0, 3, quick()).value) <= 1e-6);
    const ConstrainedSup top = bottleneck_sup_constrained(s, std::log(2.0) + 0.1, 3, quick());
    CHECK(top.value == doctest::Approx(mi(s)).epsilon(1e-5));
    CHECK(top.lagrangian_curve.size() == 61);
    double prev = -1;
    for (double r : {0.05, 0.15, 0.3, 0.5, 0.7}) {
      const double v = bottleneck_sup_constrained(s, r, 3, quick()).value;
      CHECK(v >= prev - 1e-7);
      CHECK(v <= mi(s) + 1e-9);
      prev = v;
    }
  }

  TEST_CASE("Stein strong converse bound") {
    const CQSource s = noisy_binary();
    CHECK_THROWS_AS(sc_bound_stein(s, 0.3, 0.5, 16, 3), PreconditionError);
    SteinBoundOptions opt;
    opt.delta_star = quick();
    const BoundReport b = sc_bound_stein(s, 0.3, 0.5, 20, 3, opt);
    CHECK(b.total == b.first_order + b.second_order + b.third_order);
    CHECK(b.second_order == doctest::Approx(k_eps(s.gamma(), s.eta(), 2, 0.5) / std::sqrt(20.0)));
    CHECK(b.third_order == doctest::Approx(0.1 * std::log(8.0)));
    CHECK(b.constants.at("K_eps") > 0);

    const BoundReport f = sc_bound_stein(flat_binary(), 0.3, 0.5, 100, 3, opt);
    CHECK(std::abs(f.first_order) <= 1e-9);
    CHECK_THROWS_AS(sc_bound_stein(s, 0.3, 1.0, 100, 3), DomainError);
    CHECK_THROWS_AS(sc_bound_stein(s, 0.0, 0.5, 100, 3), DomainError);

    // sound against the exact optimum wherever both are computable
    opt.enforce_threshold = false;
    for (int n : {1, 2})
      for (double r : {0.4, 0.7})
        for (double eps : {0.1, 0.5}) {
          const double beta = brute_force_beta_distributed(s, n, r, eps).beta_min;
          CHECK(-std::log(beta) / n <= sc_bound_stein(s, r, eps, n, 3, opt).total + 1e-6);
        }
  }

  TEST_CASE("key inequality") {
    const CQSource s = noisy_binary(0.8);
    const std::vector<double> mu{0.25, 0.25, 0.25, 0.25};
    DeltaOptions dopt;
    dopt.starts = 8;
    CHECK(verify_key_inequality(mu, s, Operator::identity({2, 2}), 1.5, 0.5, dopt).margin >= 0);
    const InequalityMargin zero = verify_key_inequality(mu, s, Operator::zero(4), 1.5, 0.5, dopt);
    CHECK(zero.lhs == 0.0);
    CHECK(zero.rhs == 0.0);
    Rng rng(52);
    for (int k = 0; k < 40; ++k) {
      const CMatrix v = random_isometry(1, 4, rng);
      const Operator t = make_trusted(v * v.adjoint(), {2, 2});
      std::vector<double> m = random_dirichlet(4, rng);
      CHECK(verify_key_inequality(m, s, t, 1.5, 0.5, dopt).relative() >= -1e-6);
    }
    CHECK_THROWS_AS(verify_key_inequality(mu, s, Operator::identity(4), 1.0, 0.5), DomainError);
    CHECK_THROWS_AS(verify_key_inequality(mu, s, 2.0 * Operator::identity(4), 1.5, 0.5), ValidationError);
    CHECK_THROWS_AS(verify_key_inequality({0.5, 0.2, 0.3}, s, Operator::identity(4), 1.5, 0.5), DimensionError);
  }

  TEST_CASE("image size") {
    const CQSource s = noisy_binary(0.8);
    const DensityMatrix mm = DensityMatrix::maximally_mixed(2);
    const std::vector<double> mu{0.2, 0.3, 0.1, 0.2};
    DeltaOptions dopt;
    dopt.starts = 8;
    const InequalityMargin id = image_size_bound_i(mu, s, mm, Operator::identity(4), 1.0, 0.5, dopt);
    CHECK(id.rhs == doctest::Approx(std::log(0.8)).epsilon(1e-12));
    CHECK(id.margin >= 0);
    CHECK(image_size_bound_i(mu, s, mm, Operator::zero(4), 1.0, 0.5, dopt).vacuous);
    Rng rng(53);
    for (int k = 0; k < 40; ++k) {
      const CMatrix v = random_isometry(1 + k % 3, 4, rng);
      const Operator t = make_trusted(v * v.adjoint(), {2, 2});
      const DensityMatrix sig = random_density(2, rng, 0.1);
      CHECK(image_size_bound_i(random_dirichlet(4, rng), s, sig, t, 0.5 + uniform01(rng), 0.1 + 0.8 * uniform01(rng), dopt)
                .margin >= -1e-6);
    }
    CHECK_THROWS_AS(image_size_bound_i(mu, s, DensityMatrix::pure(th::ket({1, 0})), Operator::identity(4), 1.0, 0.5),
                    PreconditionError);

    const BoundReport ii = image_size_bound_ii(s, mm, 1.0, 0.5, 0.5, 20, 3, quick());
    CHECK(ii.total == ii.first_order + ii.second_order + ii.third_order);
    CHECK(ii.third_order == doctest::Approx(std::log(2.0)));
    CHECK(ii.second_order == doctest::Approx(ii.constants.at("A") * std::sqrt(20.0)));
    CHECK(std::abs(image_size_bound_ii(flat_binary(), mm, 1.0, 0.5, 0.5, 20, 3, quick()).first_order) <= 1e-9);
    CHECK_THROWS_AS(image_size_bound_ii(s, mm, 1.0, 0.5, 0.5, 2, 3, quick()), PreconditionError);
  }

  TEST_CASE("source coding bound") {
    const CQSource s = noisy_binary(0.7);
    const double hy = von_neumann_entropy(s.rho_y()).nats;
    const BoundReport top = source_coding_bound(s, 0.5, 1000, std::log(2.0) + 0.1, 3, quick());
    CHECK(top.first_order == doctest::Approx(hy - mi(s)).epsilon(1e-5));
    const BoundReport zero = source_coding_bound(s, 0.5, 1000, 0.0, 3, quick());
    CHECK(zero.first_order == doctest::Approx(hy).epsilon(1e-5));
    CHECK(zero.total == zero.first_order + zero.second_order + zero.third_order);
    CHECK(zero.second_order < 0);
    double prev = 10;
    for (double l : {0.0, 0.1, 0.2, 0.4, 0.7}) {
      const double v = source_coding_bound(s, 0.5, 1000, l, 3, quick()).first_order;
      CHECK(v <= prev + 1e-7);
      prev = v;
    }
    CHECK_THROWS_AS(source_coding_bound(s, 0.5, 5, 0.1, 3), PreconditionError);
    CHECK_THROWS_AS(source_coding_bound(s, 0.5, 1000, -0.1, 3), DomainError);
  }
}
