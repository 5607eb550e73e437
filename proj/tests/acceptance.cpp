// Acceptance criteria AC1-AC10: one PASS/FAIL line each, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "qsc/bottleneck.hpp"
#include "qsc/bounds.hpp"
#include "qsc/entropy.hpp"
#include "qsc/hypothesis.hpp"
#include "qsc/random.hpp"
#include "qsc/verify.hpp"

using namespace qsc;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

DensityMatrix noisy(double a, double b, double w) {
  CVector v(2);
  v << a, b;
  v.normalize();
  const CMatrix m = w * v * v.adjoint() + (1 - w) * CMatrix::Identity(2, 2) / 2.0;
  return DensityMatrix::trusted(make_trusted(m, {2}));
}

DensityMatrix channel_out(const CMatrix& v, const DensityMatrix& rho, int dout) {
  const CMatrix m = v * rho.matrix() * v.adjoint();
  const int env = static_cast<int>(m.rows()) / dout;
  return partial_trace(DensityMatrix::trusted(make_trusted((m + m.adjoint()) * 0.5, {dout, env})), {0});
}

// Three binary-qubit sources used by AC7 and AC8.
std::vector<CQSource> fixed_sources() {
  return {CQSource({"0", "1"}, {0.5, 0.5}, {noisy(1, 0, 0.9), noisy(1, 1, 0.9)}),
          CQSource({"0", "1"}, {0.3, 0.7}, {noisy(1, 0, 0.8), noisy(0, 1, 0.8)}),
          CQSource({"0", "1"}, {0.6, 0.4}, {noisy(1, 0.3, 0.95), noisy(0.2, 1, 0.6)})};
}

void ac1(Outcome& o) {
  for (const char* name : {"alt", "reverse-holder", "reverse-alt", "rhc"}) {
    const SuiteResult r = run_suite(name, 101, 500);
    o.detail << ' ' << name << ": " << r.rows.size() << " rows, worst " << fmt(r.worst) << ';';
    o.require(r.pass, std::string(name) + " has " + std::to_string(r.violations) + " violations");
  }
}

void ac2(Outcome& o) {
  Rng rng(202);
  double worst_dpi = 0, worst_var = 0, worst_renyi = 0;
  for (int k = 0; k < 1000; ++k) {
    const int d = 2 + k % 3, dout = 2 + (k / 3) % 2, env = (d + dout - 1) / dout + k % 2;
    const CMatrix v = random_isometry(d, dout * env, rng);
    const DensityMatrix a = random_density(d, rng), b = random_density(d, rng, 0.01);
    const DensityMatrix na = channel_out(v, a, dout), nb = channel_out(v, b, dout);
    worst_dpi = std::min(worst_dpi, relative_entropy(a, b.op()).nats - relative_entropy(na, nb.op()).nats);
    const double al = 0.05 + 0.9 * uniform01(rng);
    worst_dpi = std::min(worst_dpi, renyi_relative_entropy(a, b.op(), al).nats - renyi_relative_entropy(na, nb.op(), al).nats);
  }
  for (int k = 0; k < 200; ++k) {
    const int d = 2 + k % 3;
    const DensityMatrix a = random_density(d, rng, 0.01), b = random_density(d, rng, 0.01);
    const Operator opt = matrix_function(matrix_function(a.op(), ScalarMap::log()) - matrix_function(b.op(), ScalarMap::log()),
                                         ScalarMap::exp());
    worst_var = std::max(worst_var, std::abs(relative_entropy_variational_value(a, b.op(), opt).nats -
                                             relative_entropy(a, b.op()).nats));
    // D - D_alpha ~ (1 - alpha) V / 2: states with min eigenvalue >= 0.1 keep V bounded
    const DensityMatrix ra = random_density(d, rng, 0.1), rb = random_density(d, rng, 0.1);
    worst_renyi = std::max(worst_renyi, std::abs(renyi_relative_entropy(ra, rb.op(), 0.999).nats - relative_entropy(ra, rb.op()).nats));
  }
  o.detail << " DPI worst " << fmt(worst_dpi) << "; variational gap " << fmt(worst_var) << "; Renyi(0.999) gap "
           << fmt(worst_renyi);
  o.require(worst_dpi >= -1e-8, "data processing");
  o.require(worst_var <= 1e-8, "variational formula");
  o.require(worst_renyi <= 1e-3, "Renyi limit");
}

void ac3(Outcome& o) {
  Rng rng(303);
  double worst = 0, worst_eq = 0;
  for (int k = 0; k < 200; ++k) {
    const int d = 2 + k % 3;
    const DensityMatrix a = random_density(d, rng), b = random_density(d, rng);
    const double e = 0.01 + 0.9 * uniform01(rng);
    worst = std::max(worst, std::abs(neyman_pearson_beta(a, b, e).beta - oracle::np_beta_dual(a.matrix(), b.matrix(), e)));
    worst_eq = std::max(worst_eq, std::abs(neyman_pearson_beta(a, a, e).beta - (1 - e)));
  }
  o.detail << " oracle gap " << fmt(worst) << "; rho0=rho1 gap " << fmt(worst_eq) << ';';
  o.require(worst <= 1e-9, "oracle agreement");
  o.require(worst_eq <= 1e-12, "beta = 1 - eps");
  // Stein trend at n = 6, eps = 0.1
  const std::vector<std::pair<DensityMatrix, DensityMatrix>> pairs{
      {noisy(1, 0, 0.9), noisy(1, 1, 0.6)}, {noisy(1, 0.5, 0.8), DensityMatrix::maximally_mixed(2)}, {noisy(1, 0, 0.95), noisy(0.3, 1, 0.9)}};
  for (const auto& [r, s] : pairs) {
    const double d = relative_entropy(r, s.op()).nats;
    const double rate = -std::log(neyman_pearson_beta(DensityMatrix::trusted(tensor_power(r.op(), 6)),
                                                   DensityMatrix::trusted(tensor_power(s.op(), 6)), 0.1).beta) / 6;
    o.detail << " D " << fmt(d) << " rate6 " << fmt(rate) << ';';
    o.require(std::abs(rate - d) <= 0.25 * d, "Stein trend");
  }
}

void ac4(Outcome& o) {
  Rng rng(404);
  double worst_grid = 0, below_grid = 0, worst_fine = 0;
  int over = 0;
  for (int k = 0; k < 36; ++k) {
    const int m = 1 + k % 3, d = 2 + (k / 3) % 2;
    const double c = 1.0 + 0.5 * ((k / 6) % 3);
    std::vector<DensityMatrix> letters;
    std::vector<oracle::CM> raw;
    for (int x = 0; x < m; ++x) {
      letters.push_back(random_density(d, rng, 0.01));
      raw.push_back(letters.back().matrix());
    }
    const auto mu = random_dirichlet(m, rng);
    const DensityMatrix nu = random_density(d, rng, 0.05);
    const DeltaResult r = delta(DeltaInstance(mu, CQChannel(letters), nu.op(), c));
    const double g = oracle::delta_grid(mu, raw, nu.matrix(), c, 64);
    if (std::abs(r.value - g) > 1e-3) ++over;
    worst_grid = std::max(worst_grid, std::abs(r.value - g));
    below_grid = std::min(below_grid, r.value - g);
    worst_fine = std::max(worst_fine, std::abs(r.value - oracle::delta_grid(mu, raw, nu.matrix(), c, 512)));
  }
  double worst_pair = -1e300;
  DeltaStarOptions so;
  so.starts = 16;
  for (int k = 0; k < 100; ++k) {
    const int m = 2 + k % 2, d = 2 + (k / 2) % 2;
    std::vector<DensityMatrix> letters;
    for (int x = 0; x < m; ++x) letters.push_back(random_density(d, rng, 0.01));
    const auto q = random_dirichlet(m, rng);
    const CQChannel ch(letters);
    const Operator ry(ch.mixture(q));
    const double c = 1.0 + 0.5 * (k % 3);
    worst_pair = std::max(worst_pair, delta_star(q, letters, ry, c, m + 1, so).value - delta(DeltaInstance(q, ch, ry, c)).value);
  }
  double worst_stab = 0;
  for (int k = 0; k < 5; ++k) {
    std::vector<DensityMatrix> letters{random_density(2, rng, 0.01), random_density(2, rng, 0.01), random_density(2, rng, 0.01)};
    const auto q = random_dirichlet(3, rng);
    const Operator ry(CQChannel(letters).mixture(q));
    const double a = delta_star(q, letters, ry, 2.0, 4).value, b = delta_star(q, letters, ry, 2.0, 6).value;
    worst_stab = std::max(worst_stab, b - a);
  }
  const SuiteResult cont = run_suite("continuity", 404, 20);
  o.detail << " 1/64 grid gap " << fmt(worst_grid) << " (" << over << "/36 over 1e-3, min solver - grid " << fmt(below_grid)
           << "); 1/512 grid gap " << fmt(worst_fine) << "; max(Delta* - Delta) " << fmt(worst_pair) << "; |U| 4->6 gain "
           << fmt(worst_stab) << "; continuity worst " << fmt(cont.worst);
  o.require(worst_grid <= 1e-3, "grid agreement");
  o.require(worst_pair <= 1e-6, "Delta* <= Delta");
  o.require(worst_stab <= 1e-6, "stabilization");
  o.require(cont.pass, "continuity");
}

void ac5(Outcome& o) {
  const SuiteResult r = run_suite("key", 505, 500);
  o.detail << ' ' << r.rows.size() << " rows, worst relative margin " << fmt(r.worst);
  o.require(r.pass && r.relative && r.tolerance == 1e-6, "key inequality");
}

void ac6(Outcome& o) {
  const CQSource src({"0", "1"}, {0.5, 0.5}, {noisy(1, 0, 0.9), noisy(1, 1, 0.9)});
  const SingleLetterGap g = single_letter_gap(src, 1.5, 8, 0.9, 3);
  o.detail << " eta " << fmt(src.eta()) << "; Delta_8 " << fmt(g.delta_n.value) << "; rhs " << fmt(g.report.total)
           << "; margin " << fmt(g.margin.margin);
  o.require(g.margin.margin >= -1e-4, "single-letterization");
}

void ac7(Outcome& o) {
  double worst = 1e300, worst_img = 1e300;
  int count = 0;
  SteinBoundOptions opt;
  opt.enforce_threshold = false;
  for (const CQSource& s : fixed_sources())
    for (int n = 1; n <= 3; ++n)
      for (int w : {1, 2})
        for (double eps : {0.1, 0.5}) {
          const double r = std::log(w + 0.5) / n;
          const auto bf = brute_force_beta_distributed(s, n, r, eps);
          const BoundReport b = sc_bound_stein(s, r, eps, n, 3, opt);
          worst = std::min(worst, b.total - (-std::log(bf.beta_min) / n));
          // image size with the message-0 Neyman-Pearson test
          const CQSource sn = product_source(s, n);
          const EncodedSource enc = apply_encoder(sn, bf.best_encoder);
          const auto& st = enc.states[0] ? *enc.states[0] : *enc.states.back();
          const Operator rho_yn = tensor_power(s.rho_y().op(), n);
          const Operator t = neyman_pearson_beta(st, DensityMatrix::trusted(rho_yn), eps).test;
          for (double c : {0.5, 1.0, 2.0}) {
            const InequalityMargin m = image_size_bound_i(sn.q(), s, s.rho_y(), t, c, 0.5);
            if (!m.vacuous) worst_img = std::min(worst_img, m.margin);
          }
          ++count;
        }
  o.detail << ' ' << count << " instances (n threshold waived); worst bound - rate " << fmt(worst)
           << "; worst image-size margin " << fmt(worst_img);
  o.require(worst >= -1e-6, "strong converse soundness");
  o.require(worst_img >= -1e-6, "image size");
}

void ac8(Outcome& o) {
  double worst_sup = 0, worst_theta = 0;
  for (const CQSource& s : fixed_sources()) {
    const double i = mutual_information(s.joint(), {0}).nats;
    double hx = 0;
    for (double v : s.q()) hx -= v * std::log(v);
    worst_sup = std::max(worst_sup, std::abs(bottleneck_sup_constrained(s, hx + 0.01, 3).value - i));
    const ThetaEstimate th = theta_n_lower(s, {s.rho_y(), s.rho_y()}, 1, std::log(2.0) + 0.01);
    const double d = relative_entropy(s.joint(), s.product_of_marginals().op()).nats;
    worst_theta = std::max(worst_theta, std::abs(th.value - d));
  }
  o.detail << " sup gap " << fmt(worst_sup) << "; theta gap " << fmt(worst_theta);
  o.require(worst_sup <= 1e-5, "constrained sup = I(X;Y)");
  o.require(worst_theta <= 1e-9, "theta_1 = D(rho_XY || rho_X rho_Y)");
}

void ac9(Outcome& o) {
  const SuiteResult r = run_suite("expurgation", 909, 200);
  o.detail << ' ' << r.rows.size() << " rows, worst " << fmt(r.worst);
  o.require(r.pass && r.tolerance == 1e-10, "expurgation postconditions");
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void ac10(Outcome& o) {
  const auto dir = std::filesystem::temp_directory_path();
  std::string outs[2];
  const int threads[2] = {1, 4};
  for (int k = 0; k < 2; ++k) {
    const std::string path = (dir / ("qsc_ac10_" + std::to_string(k) + ".txt")).string();
    const std::string cmd = "OMP_NUM_THREADS=" + std::to_string(threads[k]) + " '" + QSC_CLI_PATH +
                            "' verify --all --seed 7 > '" + path + "'";
    const int rc = std::system(cmd.c_str());
    o.require(rc == 0, "cli exit status with " + std::to_string(threads[k]) + " threads");
    outs[k] = slurp(path);
  }
  o.detail << " outputs " << outs[0].size() << " and " << outs[1].size() << " bytes";
  o.require(!outs[0].empty() && outs[0] == outs[1], "byte-identical output");
}

}  // namespace

int main() {
  struct Criterion {
    const char* id;
    const char* title;
    double budget_s;  // <= 0: no limit
    std::function<void(Outcome&)> fn;
  };
  const Criterion all[] = {
      {"AC1", "functional inequalities", 120, ac1},
      {"AC2", "entropy oracles", 0, ac2},
      {"AC3", "Neyman-Pearson", 180, ac3},
      {"AC4", "Delta machinery", 0, ac4},
      {"AC5", "key inequality", 120, ac5},
      {"AC6", "single-letterization", 600, ac6},
      {"AC7", "strong-converse soundness", 0, ac7},
      {"AC8", "Stein sandwich", 0, ac8},
      {"AC9", "expurgation", 0, ac9},
      {"AC10", "determinism", 0, ac10},
  };
  int failed = 0;
  for (const auto& c : all) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.fn(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0) o.require(secs <= c.budget_s, "runtime over " + std::to_string(int(c.budget_s)) + " s");
    if (!o.pass) ++failed;
    std::printf("%s %s %s (%.1f s):%s\n", c.id, o.pass ? "PASS" : "FAIL", c.title, secs, o.detail.str().c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
