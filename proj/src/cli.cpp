#include "qsc/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qsc/bottleneck.hpp"
#include "qsc/bounds.hpp"
#include "qsc/entropy.hpp"
#include "qsc/errors.hpp"
#include "qsc/model.hpp"
#include "qsc/report.hpp"
#include "qsc/verify.hpp"

namespace qsc {

namespace {

struct Flags {
  std::string model;
  std::string out;
  bool bits = false;
  int n = 1;
  double r = 0.0;
  double r1 = 0.0;
  double eps = 0.5;
  double c = 1.5;
  double delta = 0.5;
  double log_w1 = 0.0;
  int u_size = 0;
  std::string sigma = "rho_y";
  bool waive_threshold = false;
  std::size_t max_encoders = Limits{}.max_encoders;
  std::string suite;
  bool all = false;
  std::uint64_t seed = 0;
  std::size_t instances = 0;
};

std::string str(double v) { return fmt(v); }

int u_size_or_default(const Flags& f, const CQSource& src) {
  return f.u_size > 0 ? f.u_size : static_cast<int>(src.size()) + 1;
}

void common_flags(TextReport& rep, const Flags& f) {
  if (!f.model.empty()) rep.flag("model", f.model);
  rep.flag("bits", f.bits ? "true" : "false");
}

void cmd_entropy(const Flags& f, TextReport& rep) {
  const Model m = load_model(f.model);
  const CQSource& s = m.source;
  common_flags(rep, f);
  rep.row("H(X)", shannon_entropy(s.q()));
  rep.row("S(rho_Y)", von_neumann_entropy(s.rho_y()).nats);
  rep.row("I(X;Y)", mutual_information(s.joint(), {0}).nats);
  rep.row("H(Y|X)", conditional_entropy(s.joint(), 0).nats);
  rep.row("eta", s.eta(), "1");
  rep.row("gamma", s.rho_y_full_rank() ? s.gamma() : std::numeric_limits<double>::infinity(), "1");
  if (m.alt_states) {
    const DensityMatrix alt = cq_state(s.q(), *m.alt_states);
    rep.row("D(rho_XY||alt_XY)", relative_entropy(s.joint(), alt.op()).nats);
  }
}

void cmd_beta(const Flags& f, TextReport& rep) {
  const Model m = load_model(f.model);
  common_flags(rep, f);
  rep.flag("n", std::to_string(f.n));
  rep.flag("r1", str(f.r1));
  rep.flag("eps", str(f.eps));
  Limits lim;
  lim.max_encoders = f.max_encoders;
  const auto res = brute_force_beta_distributed(m.source, f.n, f.r1, f.eps, Execution::parallel, lim);
  rep.row("messages", res.record.constants.at("messages"), "count");
  rep.row("encoders_enumerated", res.record.constants.at("encoders_enumerated"), "count");
  rep.row("beta_min", res.beta_min, "1");
  rep.row("exponent", res.record.first_order);
  for (const auto& [k, v] : res.record.witnesses) rep.note("witness." + k + " = " + v);
}

void cmd_delta(const Flags& f, TextReport& rep) {
  const Model m = load_model(f.model);
  common_flags(rep, f);
  rep.flag("c", str(f.c));
  rep.flag("n", std::to_string(f.n));
  const CQSource src = product_source(m.source, f.n);
  const auto res = delta(DeltaInstance(src.q(), src.channel(), src.rho_y().op(), f.c));
  rep.row("delta", res.value);
  rep.row("delta.fixed_point", res.fixed_point_value);
  if (res.grid_value) rep.row("delta.grid", *res.grid_value);
  for (std::size_t x = 0; x < res.gamma_opt.size(); ++x) rep.row("gamma_opt[" + src.alphabet()[x] + "]", res.gamma_opt[x], "1");
}

void cmd_delta_star(const Flags& f, TextReport& rep) {
  const Model m = load_model(f.model);
  const CQSource& s = m.source;
  const int u = u_size_or_default(f, s);
  common_flags(rep, f);
  rep.flag("c", str(f.c));
  rep.flag("u_size", std::to_string(u));
  const auto res = delta_star(s.q(), s.channel().letter_states(), s.rho_y().op(), f.c, u);
  rep.row("delta_star", res.value);
  rep.row("delta_star.mi_form", res.mi_form);
  rep.row("delta_star.forms_gap", res.forms_gap);
  rep.row("delta_star.kkt_residual", res.kkt_residual, "1");
  for (int uu = 0; uu < u; ++uu)
    for (int x = 0; x < static_cast<int>(s.size()); ++x)
      rep.row("P(u=" + std::to_string(uu) + "|x=" + s.alphabet()[static_cast<std::size_t>(x)] + ")",
              res.best.p_u_given_x(x, uu), "1");
}

void cmd_theta(const Flags& f, TextReport& rep) {
  const Model m = load_model(f.model);
  common_flags(rep, f);
  rep.flag("n", std::to_string(f.n));
  rep.flag("r1", str(f.r1));
  std::vector<DensityMatrix> alt;
  if (m.alt_states) {
    alt = *m.alt_states;
    rep.flag("alternative", "alt_states");
  } else {
    alt.assign(m.source.size(), m.source.rho_y());
    rep.flag("alternative", "independence");
  }
  Limits lim;
  lim.max_encoders = f.max_encoders;
  const auto res = theta_n_lower(m.source, alt, f.n, f.r1, true, Execution::parallel, lim);
  rep.row("theta_n_lower", res.value);
  rep.row("encoders_enumerated", static_cast<double>(res.encoders), "count");
}

void cmd_sc_bound(const Flags& f, TextReport& rep) {
  const Model m = load_model(f.model);
  const int u = u_size_or_default(f, m.source);
  common_flags(rep, f);
  rep.flag("r", str(f.r));
  rep.flag("eps", str(f.eps));
  rep.flag("n", std::to_string(f.n));
  rep.flag("u_size", std::to_string(u));
  rep.flag("threshold", f.waive_threshold ? "waived" : "enforced");
  SteinBoundOptions opt;
  opt.enforce_threshold = !f.waive_threshold;
  rep.bound(sc_bound_stein(m.source, f.r, f.eps, f.n, u, opt));
}

void cmd_image_size(const Flags& f, TextReport& rep) {
  const Model m = load_model(f.model);
  const int u = u_size_or_default(f, m.source);
  common_flags(rep, f);
  rep.flag("c", str(f.c));
  rep.flag("delta", str(f.delta));
  rep.flag("eps", str(f.eps));
  rep.flag("n", std::to_string(f.n));
  rep.flag("sigma", f.sigma);
  rep.flag("u_size", std::to_string(u));
  DensityMatrix sigma;
  if (f.sigma == "rho_y")
    sigma = m.source.rho_y();
  else if (f.sigma == "maximally_mixed")
    sigma = DensityMatrix::maximally_mixed(m.source.output_dim());
  else
    throw ValidationError("--sigma must be rho_y or maximally_mixed");
  rep.bound(image_size_bound_ii(m.source, sigma, f.c, f.delta, f.eps, f.n, u));
}

void cmd_source_bound(const Flags& f, TextReport& rep) {
  const Model m = load_model(f.model);
  const int u = u_size_or_default(f, m.source);
  common_flags(rep, f);
  rep.flag("eps", str(f.eps));
  rep.flag("n", std::to_string(f.n));
  rep.flag("log_w1", str(f.log_w1));
  rep.flag("u_size", std::to_string(u));
  rep.bound(source_coding_bound(m.source, f.eps, f.n, f.log_w1, u));
}

std::vector<std::string> selected_suites(const Flags& f) {
  if (f.all) return suite_names();
  if (f.suite.empty()) throw ValidationError("verify/sweep: give --suite NAME or --all");
  default_instances(f.suite);  // validates the name
  return {f.suite};
}

// verify: a summary per suite followed by its margins table
void cmd_verify(const Flags& f, std::ostream& os, bool& all_pass) {
  all_pass = true;
  for (const auto& name : selected_suites(f)) {
    const std::size_t count = f.instances > 0 ? f.instances : default_instances(name);
    const SuiteResult res = run_suite(name, f.seed, count);
    TextReport rep("verify", f.bits);
    rep.flag("suite", name);
    rep.flag("seed", std::to_string(f.seed));
    rep.flag("instances", std::to_string(count));
    rep.flag("tolerance", str(res.tolerance));
    rep.flag("margin", res.relative ? "relative" : "absolute");
    rep.row("rows", static_cast<double>(res.rows.size()), "count");
    rep.row("violations", static_cast<double>(res.violations), "count");
    rep.row("worst_margin", res.worst, "1");
    rep.note(std::string("result ") + (res.pass ? "PASS" : "FAIL"));
    rep.table(csv_header(res), csv_rows(res));
    rep.write(os);
    all_pass = all_pass && res.pass;
  }
}

// sweep: the raw CSV only
void cmd_sweep(const Flags& f, std::ostream& os) {
  bool first = true;
  for (const auto& name : selected_suites(f)) {
    const std::size_t count = f.instances > 0 ? f.instances : default_instances(name);
    const SuiteResult res = run_suite(name, f.seed, count);
    if (!first) os << "\n";
    first = false;
    os << "# suite " << name << " seed " << f.seed << " instances " << count << "\n";
    const auto h = csv_header(res);
    for (std::size_t i = 0; i < h.size(); ++i) os << (i ? "," : "") << h[i];
    os << "\n";
    for (const auto& r : csv_rows(res)) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
      os << "\n";
    }
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Strong-converse bounds and entropic verifiers for classical-quantum sources", "qsc"};
  app.require_subcommand(1);
  app.fallthrough();  // --bits / --out also accepted after the subcommand
  Flags f;
  app.add_flag("--bits", f.bits, "Report entropic quantities in bits");
  app.add_option("--out", f.out, "Write the report to this file instead of stdout");

  const auto model_opt = [&](CLI::App* s) { s->add_option("--model", f.model, "Model file (JSON)")->required(); };
  auto* entropy = app.add_subcommand("entropy", "Entropic quantities of the source");
  model_opt(entropy);

  auto* beta = app.add_subcommand("beta", "Brute-force distributed Neyman-Pearson type-II error");
  model_opt(beta);
  beta->add_option("--n", f.n, "Block length")->required()->check(CLI::PositiveNumber);
  beta->add_option("--r1", f.r1, "Rate in nats")->required();
  beta->add_option("--eps", f.eps, "Type-I error bound")->required();
  beta->add_option("--max-encoders", f.max_encoders, "Enumeration cap");

  auto* del = app.add_subcommand("delta", "Delta(Q^n, Lambda^n, rho_Y^n, c)");
  model_opt(del);
  del->add_option("--c", f.c, "Weight c > 0")->required();
  del->add_option("--n", f.n, "Block length");

  auto* dstar = app.add_subcommand("delta-star", "Delta*(Q, Lambda, rho_Y, c)");
  model_opt(dstar);
  dstar->add_option("--c", f.c, "Weight c > 0")->required();
  dstar->add_option("--u-size", f.u_size, "Auxiliary alphabet size (default |X|+1)");

  auto* theta = app.add_subcommand("theta", "Encoder lower estimate of theta_n(r1, infinity)");
  model_opt(theta);
  theta->add_option("--n", f.n, "Block length")->required()->check(CLI::PositiveNumber);
  theta->add_option("--r1", f.r1, "Rate in nats")->required();
  theta->add_option("--max-encoders", f.max_encoders, "Enumeration cap");

  auto* sc = app.add_subcommand("sc-bound", "Second-order strong converse bound on the Stein exponent");
  model_opt(sc);
  sc->add_option("--r", f.r, "Rate in nats")->required();
  sc->add_option("--eps", f.eps, "Type-I error bound")->required();
  sc->add_option("--n", f.n, "Block length")->required();
  sc->add_option("--u-size", f.u_size, "Auxiliary alphabet size (default |X|+1)");
  sc->add_flag("--waive-threshold", f.waive_threshold, "Evaluate below the n threshold (formal value only)");

  auto* img = app.add_subcommand("image-size", "Image-size bound (ii)");
  model_opt(img);
  img->add_option("--c", f.c, "Weight c > 0")->required();
  img->add_option("--delta", f.delta, "Covering level delta")->required();
  img->add_option("--eps", f.eps, "Typicality parameter eps")->required();
  img->add_option("--n", f.n, "Block length")->required();
  img->add_option("--sigma", f.sigma, "Reference state: rho_y or maximally_mixed");
  img->add_option("--u-size", f.u_size, "Auxiliary alphabet size (default |X|+1)");

  auto* src = app.add_subcommand("source-bound", "Second-order source-coding converse");
  model_opt(src);
  src->add_option("--eps", f.eps, "Error bound")->required();
  src->add_option("--n", f.n, "Block length")->required();
  src->add_option("--log-w1", f.log_w1, "Helper rate (1/n) ln|W1| in nats")->required();
  src->add_option("--u-size", f.u_size, "Auxiliary alphabet size (default |X|+1)");

  std::string suite_help = "Suite name:";
  for (const auto& s : suite_names()) suite_help += " " + s;
  auto* ver = app.add_subcommand("verify", "Randomized verification suites");
  auto* swp = app.add_subcommand("sweep", "Suite margins as CSV");
  for (auto* s : {ver, swp}) {
    auto* so = s->add_option("--suite", f.suite, suite_help);
    s->add_flag("--all", f.all, "Every suite")->excludes(so);
    s->add_option("--seed", f.seed, "Base seed")->required();
    s->add_option("--instances", f.instances, "Instances per suite (default per suite)");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  std::ofstream file;
  if (!f.out.empty()) {
    file.open(f.out);
    if (!file) {
      err << "error: cannot open " << f.out << "\n";
      return kExitValidation;
    }
  }
  std::ostream& os = f.out.empty() ? out : file;

  try {
    auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "verify") {
      bool pass = true;
      cmd_verify(f, os, pass);
      return kExitOk;
    }
    if (name == "sweep") {
      cmd_sweep(f, os);
      return kExitOk;
    }
    TextReport rep(name, f.bits);
    if (name == "entropy") cmd_entropy(f, rep);
    else if (name == "beta") cmd_beta(f, rep);
    else if (name == "delta") cmd_delta(f, rep);
    else if (name == "delta-star") cmd_delta_star(f, rep);
    else if (name == "theta") cmd_theta(f, rep);
    else if (name == "sc-bound") cmd_sc_bound(f, rep);
    else if (name == "image-size") cmd_image_size(f, rep);
    else if (name == "source-bound") cmd_source_bound(f, rep);
    rep.write(os);
    return kExitOk;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const DimensionError& e) {
    err << "dimension error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const PreconditionError& e) {
    err << "precondition error: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const ResourceError& e) {
    err << "resource error: " << e.what() << "\n";
    return kExitResource;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace qsc
