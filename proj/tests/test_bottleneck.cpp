#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "oracles.hpp"
#include "qsc/bottleneck.hpp"
#include "qsc/entropy.hpp"
#include "qsc/errors.hpp"
#include "qsc/random.hpp"

using namespace qsc;

namespace {

std::vector<DensityMatrix> orthogonal_pair() {
  return {DensityMatrix::pure(th::ket({1, 0})), DensityMatrix::pure(th::ket({0, 1}))};
}

std::vector<oracle::CM> raw(const std::vector<DensityMatrix>& s) {
  std::vector<oracle::CM> out;
  for (const auto& r : s) out.push_back(r.matrix());
  return out;
}

DeltaStarOptions quick() {
  DeltaStarOptions o;
  o.starts = 16;
  return o;
}

}  // namespace

TEST_SUITE("bottleneck") {
  TEST_CASE("Delta closed forms") {
    const DeltaInstance ortho({0.5, 0.5}, CQChannel(orthogonal_pair()), Operator::identity(2) * 0.5, 2.0);
    const DeltaResult r = delta(ortho);
    CHECK(r.value == doctest::Approx(std::log(2.0)).epsilon(1e-6));
    CHECK(std::max(r.gamma_opt[0], r.gamma_opt[1]) >= 1 - 1e-4);
    REQUIRE(r.grid_value.has_value());
    CHECK(std::abs(*r.grid_value - r.value) <= 1e-3);

    Rng rng(41);
    const std::vector<DensityMatrix> letters{random_density(2, rng), random_density(2, rng), random_density(2, rng)};
    const std::vector<double> mu{0.2, 0.5, 0.3};
    const CQChannel ch(letters);
    const DeltaInstance self(mu, ch, Operator(ch.mixture(mu)), 1.0);
    const DeltaResult rs = delta(self);
    CHECK(std::abs(rs.value) <= 1e-8);
    for (int x = 0; x < 3; ++x) CHECK(rs.gamma_opt[x] == doctest::Approx(mu[x]).epsilon(1e-4));

    const DensityMatrix nu = random_density(2, rng);
    const DeltaInstance flat(mu, CQChannel({nu, nu, nu}), nu.op(), 1.5);
    CHECK(std::abs(delta(flat).value) <= 1e-9);

    CHECK_THROWS_AS(delta(DeltaInstance({0.0, 0.0}, CQChannel(orthogonal_pair()), Operator::identity(2), 1.0)), DomainError);
    CHECK_THROWS_AS(DeltaInstance({0.5, 0.5}, CQChannel(orthogonal_pair()), orthogonal_pair()[0].op(), 1.0), ValidationError);
    CHECK_THROWS_AS(DeltaInstance({0.5, 0.5, 0.0}, CQChannel(orthogonal_pair()), Operator::identity(2), 1.0), DimensionError);
  }

  TEST_CASE("Delta against the grid oracle") {
    Rng rng(42);
    for (int k = 0; k < 24; ++k) {
      const int m = 2 + k % 2, d = 2 + (k / 2) % 2;
      std::vector<DensityMatrix> letters;
      for (int x = 0; x < m; ++x) letters.push_back(random_density(d, rng));
      std::vector<double> mu = random_dirichlet(m, rng);
      if (k % 4 == 3)
        for (auto& v : mu) v *= 0.7;  // unnormalized
      const double c = 1.0 + 0.5 * (k % 3);
      const DensityMatrix nu = random_density(d, rng, 0.05);
      const DeltaInstance inst(mu, CQChannel(letters), nu.op(), c);
      const DeltaResult res = delta(inst);
      const double v = res.value;
      CHECK(v == doctest::Approx(delta_objective(inst, res.gamma_opt)).epsilon(1e-12));
      // near-pure letters curve the objective sharply, so the grid is finer than 1/64
      const double g = oracle::delta_grid(mu, raw(letters), nu.matrix(), c, 256);
      CHECK(v >= g - 1e-9);
      CHECK(v - g <= 1e-3);
    }
  }

  TEST_CASE("variational formula for Delta") {
    Rng rng(43);
    const std::vector<DensityMatrix> letters{random_density(2, rng), random_density(2, rng)};
    const std::vector<double> mu{0.35, 0.55};
    const DensityMatrix nu = random_density(2, rng, 0.05);
    const DeltaInstance inst(mu, CQChannel(letters), nu.op(), 1.5);
    const DeltaResult r = delta(inst);
    const double at_id = delta_variational_value(inst, Operator::identity(2));
    CHECK(at_id == doctest::Approx(std::log(0.9) - 1.5 * std::log(nu.op().trace())).epsilon(1e-12));
    CHECK(delta_variational_value(inst, delta_induced_test(inst, r.gamma_opt)) == doctest::Approx(r.value).epsilon(1e-6));
    for (int k = 0; k < 500; ++k) CHECK(delta_variational_value(inst, random_positive(2, rng)) <= r.value + 1e-8);
    const double neg[] = {-1, 2};
    CHECK_THROWS_AS(delta_variational_value(inst, Operator::diagonal(neg)), DomainError);
  }

  TEST_CASE("posteriors") {
    Rng rng(44);
    const std::vector<DensityMatrix> letters{random_density(2, rng), random_density(2, rng)};
    RMatrix k(2, 3);
    k << 0.5, 0.5, 0.0, 0.1, 0.9, 0.0;
    const ChannelWithPosterior cp = with_posterior({0.4, 0.6}, letters, StochasticChannel(k));
    CHECK(cp.p_u[0] == doctest::Approx(0.26));
    CHECK(cp.p_u[2] == 0.0);
    CHECK(!cp.sigma_y_given_u[2].has_value());
    CHECK(cp.p_x_given_u(0, 0) == doctest::Approx(0.2 / 0.26));
    const CMatrix want = (0.2 * letters[0].matrix() + 0.06 * letters[1].matrix()) / 0.26;
    CHECK(max_abs_diff(cp.sigma_y_given_u[0]->matrix(), want) <= 1e-14);
    CHECK_THROWS_AS(with_posterior({1.0}, letters, StochasticChannel(k)), DimensionError);
  }

  TEST_CASE("Delta* closed forms and oracle") {
    const std::vector<double> q{0.5, 0.5};
    const auto ortho = orthogonal_pair();
    const DensityMatrix ry = DensityMatrix::maximally_mixed(2);
    const DeltaStarResult r = delta_star(q, ortho, ry.op(), 2.0, 3);
    CHECK(r.value == doctest::Approx(std::log(2.0)).epsilon(1e-6));
    CHECK(r.forms_gap <= 1e-9);
    CHECK(oracle::delta_star_grid_binary(q, raw(ortho), 2.0, 64) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

    Rng rng(45);
    const DensityMatrix s = random_density(2, rng);
    CHECK(std::abs(delta_star(q, {s, s}, s.op(), 1.7, 3).value) <= 1e-9);

    for (int k = 0; k < 10; ++k) {
      const std::vector<DensityMatrix> letters{random_density(2, rng), random_density(2, rng)};
      const double q0 = 0.2 + 0.6 * uniform01(rng);
      const std::vector<double> qq{q0, 1 - q0};
      const DensityMatrix rho_y = DensityMatrix::trusted(make_trusted(q0 * letters[0].matrix() + (1 - q0) * letters[1].matrix(), {2}));
      const double c = 1.0 + 0.5 * (k % 3);
      const DeltaStarResult ds = delta_star(qq, letters, rho_y.op(), c, 2, quick());
      const double g = oracle::delta_star_grid_binary(qq, raw(letters), c, 64);
      CHECK(ds.value >= g - 1e-9);
      CHECK(ds.value - g <= 1e-3);
      CHECK(ds.forms_gap <= 1e-9);
      const double dv = delta(DeltaInstance(qq, CQChannel(letters), rho_y.op(), c)).value;
      CHECK(ds.value <= dv + 1e-6);
      CHECK(phi(qq, qq, letters, rho_y, c, 2, quick()).value == doctest::Approx(ds.value).epsilon(1e-8));
    }
    CHECK_THROWS_AS(delta_star(q, ortho, ry.op(), 1.0, 0), DomainError);
  }

  TEST_CASE("Delta* in the alphabet size of U") {
    Rng rng(46);
    const std::vector<DensityMatrix> letters{random_density(2, rng), random_density(2, rng), random_density(2, rng)};
    const std::vector<double> q{0.3, 0.3, 0.4};
    const CQChannel ch(letters);
    const Operator ry(ch.mixture(q));
    double prev = -1;
    std::vector<double> vals;
    for (int u = 1; u <= 5; ++u) {
      const double v = delta_star(q, letters, ry, 2.0, u).value;
      CHECK(v >= prev - 1e-7);
      prev = std::max(prev, v);
      vals.push_back(v);
    }
    CHECK(vals[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::abs(vals[4] - vals[3]) <= 1e-6);
  }

  TEST_CASE("continuity of phi") {
    Rng rng(47);
    for (int k = 0; k < 6; ++k) {
      const std::vector<DensityMatrix> letters{random_density(2, rng, 0.05), random_density(2, rng, 0.05)};
      const double q0 = 0.3 + 0.4 * uniform01(rng);
      const std::vector<double> q{q0, 1 - q0};
      const CQChannel ch(letters);
      const DensityMatrix ry = DensityMatrix::trusted(make_trusted(ch.mixture(q), {2}));
      const double eps = 0.2;
      const double p0 = std::min(q0 * (1 + eps), 1.0);
      const std::vector<double> pt{p0, 1 - p0};
      CHECK(continuity_margin(pt, q, letters, ry, 1.5, eps, 3, quick()).margin >= -1e-5);
      CHECK(continuity_margin(q, q, letters, ry, 1.5, 1e-6, 3, quick()).margin >= -1e-5);
      CHECK_THROWS_AS(continuity_margin({0.99, 0.01}, {0.5, 0.5}, letters, ry, 1.5, 0.1, 3, quick()), PreconditionError);
    }
    const DensityMatrix s = DensityMatrix::maximally_mixed(2);
    // constant channel: only the penalty survives, minimized by an independent U
    CHECK(phi({0.7, 0.3}, {0.5, 0.5}, {s, s}, s, 2.0, 3, quick()).value ==
          doctest::Approx(-classical_kl(std::vector<double>{0.7, 0.3}, std::vector<double>{0.5, 0.5}).nats).epsilon(1e-8));
    CHECK(std::abs(phi({0.5, 0.5}, {0.5, 0.5}, {s, s}, s, 2.0, 3, quick()).value) <= 1e-9);
  }

  TEST_CASE("typical sets") {
    const std::vector<double> q{0.5, 0.5};
    const double delta = 0.9;
    const double thr = 3 * 2 * std::log(2 / delta);
    const int n = static_cast<int>(std::floor(thr)) + 1;
    const TypicalSet ts = typical_set(q, n, delta);
    CHECK(ts.eps_n == doctest::Approx(typical_eps(2, 2, n, delta)));
    CHECK(ts.eps_n < 1);
    CHECK(ts.mass >= 1 - delta);
    std::size_t count = 0;
    double mass = 0;
    for (std::size_t idx = 0; idx < (std::size_t{1} << n); ++idx) {
      int ones = 0;
      for (int b = 0; b < n; ++b) ones += (idx >> b) & 1;
      const bool ok = ones <= (1 + ts.eps_n) * 0.5 * n + 1e-12 && (n - ones) <= (1 + ts.eps_n) * 0.5 * n + 1e-12;
      if (ok) {
        ++count;
        mass += std::pow(0.5, n);
      }
      CHECK((ts.mu_n[idx] > 0) == ok);
    }
    CHECK(ts.members.size() == count);
    CHECK(ts.mass == doctest::Approx(mass).epsilon(1e-12));
    CHECK_THROWS_AS(typical_set(q, n - 1, delta), PreconditionError);
    Limits tiny;
    tiny.max_enumeration = 100;
    CHECK_THROWS_AS(typical_set(q, n + 5, delta, tiny), ResourceError);
  }

  TEST_CASE("single-letterization gap") {
    const DensityMatrix s = DensityMatrix::maximally_mixed(2);
    const CQSource flat({"0", "1"}, {0.5, 0.5}, {s, s});
    DeltaOptions dopt;
    dopt.starts = 8;
    const SingleLetterGap g = single_letter_gap(flat, 1.5, 5, 0.9, 3, dopt, quick());
    CHECK(g.report.first_order == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(g.report.second_order >= 0.0);
    CHECK(g.margin.margin >= 0.0);
    CHECK(g.report.total == g.report.first_order + g.report.second_order + g.report.third_order);
    CHECK_THROWS_AS(single_letter_gap(flat, 1.5, 2, 0.9, 3, dopt, quick()), PreconditionError);
    CHECK_THROWS_AS(single_letter_gap(flat, 1.5, 9, 0.9, 3, dopt, quick()), ResourceError);
  }
}
