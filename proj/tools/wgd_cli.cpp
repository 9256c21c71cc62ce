// wgd: command-line front end. Machine output is JSON (JSON lines for
// `sample`); `--pretty` switches to an aligned key/value listing.

#include "wgd/distributions.hpp"
#include "wgd/error.hpp"
#include "wgd/inference.hpp"
#include "wgd/matrix_io.hpp"
#include "wgd/moments.hpp"
#include "wgd/partitions_zonal.hpp"
#include "wgd/sampling.hpp"
#include "wgd/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

using nlohmann::json;
using namespace wgd;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  bool pretty = false;
  std::string output;

  std::string dist = "wgd";
  std::string generator = R"({"kind":"exponential"})";
  std::string sigma_file, x_file, omega_file, psi_file, t_file, a_file;
  std::string params = "{}";
  std::string stat;
  std::string kappa;
  std::string grid;
  std::string suite = "all";
  double n = NAN;
  double alpha = NAN, beta = 0.5;
  double r = 1.0, s = NAN, a = NAN, y = NAN, p = NAN;
  std::vector<double> upper, lower;
  int trunc_k = -1;
  double trunc_tol = -1.0;
  bool as_printed = false;
  std::uint64_t seed = 42;
  int count = 1;
  int m = 1;
  long samples = 200000;
};

json series_json(const SeriesValue& v) {
  json j = {{"terms_used", v.terms_used}, {"last_layer_magnitude", v.last_layer_magnitude},
            {"converged", v.converged}};
  if (v.clamped) j["clamped"] = true;
  return j;
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json complex_json(std::complex<double> c) { return {{"re", number(c.real())}, {"im", number(c.imag())}}; }

Matrix load(const std::string& path, const char* flag) {
  if (path.empty()) throw UsageError(std::string(flag) + " is required");
  return read_matrix_file(path);
}

SpdMatrix load_spd(const std::string& path, const char* flag) { return SpdMatrix::from_entries(load(path, flag)); }

double need(double v, const char* flag) {
  if (std::isnan(v)) throw UsageError(std::string(flag) + " is required");
  return v;
}

ShapeGenerator generator(const Options& o, int m) {
  json j;
  if (!o.generator.empty() && o.generator.front() == '{') {
    try {
      j = json::parse(o.generator);
    } catch (const json::exception& e) {
      throw UsageError(std::string("--generator: invalid JSON: ") + e.what());
    }
  } else {
    j = {{"kind", o.generator}};
  }
  return ShapeGenerator::from_json(j, o.n, m);
}

Truncation truncation(const Options& o) {
  Truncation t = Truncation::from_env();
  if (o.trunc_k >= 0) t.max_degree = o.trunc_k;
  if (o.trunc_tol > 0) t.tolerance = o.trunc_tol;
  return t;
}

Formula formula(const Options& o) { return o.as_printed ? Formula::AsPrinted : Formula::Corrected; }

json rng_json(const Options& o) { return {{"algorithm", RngStream::algorithm}, {"seed", o.seed}}; }

struct Report {
  json result = json::object();
  json diagnostics = json::object();
  bool ok = true;
};

bool is_special_case(const std::string& name) {
  for (const auto& s : special_case_names())
    if (s == name) return true;
  return false;
}

Report cmd_eval(const Options& o) {
  Report rep;
  const SpdMatrix sigma = load_spd(o.sigma_file, "--sigma");
  const SpdMatrix x = load_spd(o.x_file, "--x");
  const int m = sigma.dim();
  const Truncation trunc = truncation(o);
  rep.result["dist"] = o.dist;
  rep.diagnostics["series"] = nullptr;
  if (is_special_case(o.dist)) {
    json params;
    try {
      params = json::parse(o.params);
    } catch (const json::exception& e) {
      throw UsageError(std::string("--params: invalid JSON: ") + e.what());
    }
    const SpecialCase sc = special_case(o.dist, sigma, need(o.n, "--n"), params);
    rep.result["logpdf"] = number(wgd_logpdf(sc.params, x));
    rep.result["log_normalizer"] = sc.log_normalizer;
    rep.result["printed_log_normalizer"] = number(sc.printed_log_normalizer);
    rep.result["normalizer_mismatch"] = sc.mismatch;
    if (!sc.note.empty()) rep.result["note"] = sc.note;
    rep.result["normalizer_method"] = sc.params.gamma0_analytic() ? "analytic" : "quadrature";
    return rep;
  }
  if (o.dist == "ggd") {
    const GgdParams g{sigma, need(o.alpha, "--alpha"), o.beta, generator(o, m)};
    rep.result["logpdf"] = number(ggd_logpdf(g, x, formula(o)));
    rep.result["normalizer_method"] = g.h.has_analytic_mellin() ? "analytic" : "quadrature";
    return rep;
  }
  const WgdParams p(sigma, need(o.n, "--n"), generator(o, m));
  rep.result["normalizer_method"] = p.gamma0_analytic() ? "analytic" : "quadrature";
  if (o.dist == "wgd") {
    rep.result["logpdf"] = number(wgd_logpdf(p, x));
  } else if (o.dist == "iwgd") {
    rep.result["logpdf"] = number(iwgd_logpdf(p, x));
  } else if (o.dist == "ncwgd" || o.dist == "hwgd") {
    const SeriesLogDensity d =
        o.dist == "ncwgd"
            ? ncwgd_logpdf(p, SymMatrix::from_entries(load(o.psi_file, "--psi")), x, trunc)
            : hwgd_logpdf(p, o.upper, o.lower, SymMatrix::from_entries(load(o.omega_file, "--omega")), x, trunc);
    rep.result["logpdf"] = number(d.logpdf);
    rep.result["normalizer_method"] = "series";
    json s = {{"normalizer", series_json(d.normalizer)}};
    if (d.kernel) s["kernel"] = series_json(*d.kernel);
    rep.diagnostics["series"] = s;
  } else {
    throw UsageError("--dist: unknown distribution '" + o.dist + "'");
  }
  return rep;
}

// Parses "lo:hi:count" into count equally spaced points.
std::vector<double> parse_grid(const std::string& g) {
  double lo, hi;
  int count;
  char c1, c2;
  std::istringstream is(g);
  if (!(is >> lo >> c1 >> hi >> c2 >> count) || c1 != ':' || c2 != ':' || count < 2 || !(hi > lo))
    throw UsageError("--grid: expected lo:hi:count with lo < hi and count >= 2");
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) out[i] = lo + (hi - lo) * i / (count - 1);
  return out;
}

Report cmd_moments(const Options& o, std::string& csv) {
  Report rep;
  const SpdMatrix sigma = load_spd(o.sigma_file, "--sigma");
  const WgdParams p(sigma, need(o.n, "--n"), generator(o, sigma.dim()));
  const Truncation trunc = truncation(o);
  const Formula f = formula(o);
  rep.result["stat"] = o.stat;
  rep.result["formula"] = o.as_printed ? "as_printed" : "corrected";
  rep.diagnostics["series"] = nullptr;
  auto put_series = [&](const SeriesValue& v, bool real) {
    rep.result["value"] = real ? number(v.real()) : complex_json(v.value);
    rep.diagnostics["series"] = series_json(v);
  };
  if (o.stat == "det") {
    rep.result["value"] = number(det_moment(p, o.r));
    rep.result["r"] = o.r;
  } else if (o.stat == "trace") {
    put_series(trace_moment(p, o.r, trunc, f), true);
    rep.result["r"] = o.r;
  } else if (o.stat == "zonal") {
    if (o.kappa.empty()) throw UsageError("--kappa is required");
    const Partition k = Partition::parse(o.kappa);
    rep.result["kappa"] = k.to_string();
    rep.result["value"] = number(zonal_expectation(p, k, f));
  } else if (o.stat == "cf") {
    put_series(cf_series(p, SymMatrix::from_entries(load(o.t_file, "--t-file")), trunc), false);
  } else if (o.stat == "laplace") {
    put_series(laplace_series(p, need(o.s, "--s"), trunc, f), true);
    rep.result["s"] = o.s;
  } else if (o.stat == "lmax-cdf") {
    put_series(lmax_cdf(p, need(o.a, "--a"), trunc, f), true);
    rep.result["a"] = o.a;
  } else if (o.stat == "prob-lt") {
    put_series(prob_less_than(p, load_spd(o.a_file, "--a-file"), trunc, f), true);
  } else if (o.stat == "trace-pdf") {
    if (!o.grid.empty()) {
      std::ostringstream os;
      os.precision(17);
      os << "y,density,terms_used,converged\n";
      for (double y : parse_grid(o.grid)) {
        const SeriesValue v = trace_pdf(p, y, trunc, f);
        os << y << ',' << v.real() << ',' << v.terms_used << ',' << (v.converged ? 1 : 0) << '\n';
      }
      csv = os.str();
      return rep;
    }
    put_series(trace_pdf(p, need(o.y, "--y"), trunc, f), true);
    rep.result["y"] = o.y;
  } else {
    throw UsageError("--stat: unknown statistic '" + o.stat + "'");
  }
  return rep;
}

Report cmd_fit(const Options& o) {
  Report rep;
  const SpdMatrix x = load_spd(o.x_file, "--x");
  const MleResult r = mle_sigma(x, need(o.n, "--n"), generator(o, x.dim()));
  rep.result = {{"sigma", matrix_to_json(r.sigma.matrix())},
                {"z", r.z},
                {"iterations", r.iterations},
                {"residual", r.residual},
                {"roots", r.roots}};
  return rep;
}

Report cmd_bayes(const Options& o) {
  Report rep;
  const SpdMatrix x = load_spd(o.x_file, "--x");
  const double n = need(o.n, "--n");
  const ShapeGenerator h = generator(o, x.dim());
  const PriorIW prior{load_spd(o.omega_file, "--omega"), need(o.p, "--p")};
  const Truncation trunc = truncation(o);
  const SeriesValue marg = bayes_marginal_ln(x, n, h, prior, trunc, formula(o));
  rep.result["marginal_ln"] = number(marg.real());
  rep.result["det_sigma_bayes"] = number(bayes_det_sigma(x, n, h, prior, trunc));
  rep.diagnostics["series"] = series_json(marg);
  return rep;
}

Report cmd_identity(const Options& o) {
  Report rep;
  const BetaProductReport b = beta_product_check(o.m, need(o.n, "--n"), need(o.p, "--p"), o.samples, o.seed);
  rep.result = {{"m", b.m},
                {"n", b.n},
                {"p", b.p},
                {"lhs_as_printed", number(b.lhs_as_printed)},
                {"rhs", number(b.rhs)},
                {"integral", number(b.integral)},
                {"integral_std_error", b.integral_std_error},
                {"samples", b.samples},
                {"lhs_rhs_relative_gap", number(b.lhs_rhs_relative_gap)},
                {"integral_z", number(b.integral_z)}};
  rep.diagnostics["rng"] = rng_json(o);
  return rep;
}

Report cmd_verify(const Options& o) {
  Report rep;
  VerifyOptions vo;
  vo.seed = o.seed;
  json checks = json::array();
  int passed = 0;
  const auto results = run_verify(o.suite, vo);
  for (const auto& r : results) {
    checks.push_back(to_json(r));
    passed += r.passed ? 1 : 0;
  }
  rep.result = {{"suite", o.suite}, {"passed", passed}, {"total", results.size()}, {"checks", checks}};
  rep.diagnostics["rng"] = rng_json(o);
  rep.ok = passed == static_cast<int>(results.size());
  return rep;
}

void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
    for (size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else {
    out.emplace_back(prefix, j.is_string() ? j.get<std::string>() : j.dump());
  }
}

std::string pretty(const json& doc) {
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(doc, "", rows);
  size_t w = 0;
  for (const auto& r : rows) w = std::max(w, r.first.size());
  std::ostringstream os;
  for (const auto& [k, v] : rows) os << k << std::string(w + 2 - k.size(), ' ') << v << '\n';
  return os.str();
}

void emit(const Options& o, const std::string& text) {
  if (o.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.output);
  if (!f) throw UsageError("--output: cannot write '" + o.output + "'");
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wishart generator distributions: densities, moments, sampling and estimation"};
  app.require_subcommand(1);
  Options o;
  app.add_flag("--pretty", o.pretty, "Human-readable key/value output");
  app.add_option("--output", o.output, "Write output to this file");

  auto common_model = [&](CLI::App* c) {
    c->add_option("--generator", o.generator, "Shape generator JSON or kind name");
    c->add_option("--n", o.n, "Degrees of freedom")->check(CLI::PositiveNumber);
    c->add_option("--trunc-k", o.trunc_k, "Series truncation degree (default WGD_TRUNC_K or 30)")
        ->check(CLI::Range(0, 2000));
    c->add_option("--trunc-tol", o.trunc_tol, "Series tail tolerance")->check(CLI::PositiveNumber);
    c->add_flag("--as-printed", o.as_printed, "Use the literal published formulas");
  };

  auto* eval = app.add_subcommand("eval", "Log-density of a distribution at X");
  eval->add_option("--dist", o.dist, "wgd | iwgd | ggd | ncwgd | hwgd | special-case name");
  eval->add_option("--sigma", o.sigma_file, "Scale matrix file")->check(CLI::ExistingFile);
  eval->add_option("--x", o.x_file, "Evaluation point file")->check(CLI::ExistingFile);
  eval->add_option("--psi", o.psi_file, "Noncentrality matrix file (ncwgd)")->check(CLI::ExistingFile);
  eval->add_option("--omega", o.omega_file, "Matrix argument file (hwgd)")->check(CLI::ExistingFile);
  eval->add_option("--upper", o.upper, "Upper hypergeometric parameters (hwgd)")->delimiter(',');
  eval->add_option("--lower", o.lower, "Lower hypergeometric parameters (hwgd)")->delimiter(',');
  eval->add_option("--alpha", o.alpha, "ggd shape")->check(CLI::PositiveNumber);
  eval->add_option("--beta", o.beta, "ggd scale")->check(CLI::PositiveNumber);
  eval->add_option("--params", o.params, "Special-case parameters as JSON");
  common_model(eval);

  auto* sample = app.add_subcommand("sample", "Exact draws as JSON lines");
  sample->add_option("--dist", o.dist, "wgd | iwgd");
  sample->add_option("--sigma", o.sigma_file, "Scale matrix file")->check(CLI::ExistingFile);
  sample->add_option("--count", o.count, "Number of draws")->check(CLI::Range(1, 100000000));
  sample->add_option("--seed", o.seed, "RNG seed");
  common_model(sample);

  auto* moments = app.add_subcommand("moments", "Moments, transforms and distribution functions");
  moments->add_option("--stat", o.stat, "det | trace | zonal | cf | laplace | lmax-cdf | prob-lt | trace-pdf")
      ->required();
  moments->add_option("--sigma", o.sigma_file, "Scale matrix file")->check(CLI::ExistingFile);
  moments->add_option("--r", o.r, "Moment order");
  moments->add_option("--kappa", o.kappa, "Partition, e.g. 2,1");
  moments->add_option("--t-file", o.t_file, "Symmetric argument of the characteristic function")
      ->check(CLI::ExistingFile);
  moments->add_option("--a-file", o.a_file, "Upper matrix bound for prob-lt")->check(CLI::ExistingFile);
  moments->add_option("--s", o.s, "Laplace argument");
  moments->add_option("--a", o.a, "Threshold for lmax-cdf");
  moments->add_option("--y", o.y, "Point for trace-pdf");
  moments->add_option("--grid", o.grid, "lo:hi:count, emits CSV (trace-pdf)");
  common_model(moments);

  auto* fit = app.add_subcommand("fit", "Maximum-likelihood scale matrix");
  fit->add_option("--x", o.x_file, "Observation file")->check(CLI::ExistingFile);
  common_model(fit);

  auto* bayes = app.add_subcommand("bayes", "Marginal likelihood and posterior mean of det(Sigma)");
  bayes->add_option("--x", o.x_file, "Observation file")->check(CLI::ExistingFile);
  bayes->add_option("--omega", o.omega_file, "Inverse-Wishart prior scale file")->check(CLI::ExistingFile);
  bayes->add_option("--p", o.p, "Prior degrees of freedom")->check(CLI::PositiveNumber);
  common_model(bayes);

  auto* ident = app.add_subcommand("identity-check", "Beta-product identity audit");
  ident->add_option("--m", o.m, "Dimension")->check(CLI::Range(1, 6));
  ident->add_option("--n", o.n, "Degrees of freedom")->check(CLI::PositiveNumber);
  ident->add_option("--p", o.p, "Exponent parameter")->check(CLI::PositiveNumber);
  ident->add_option("--samples", o.samples, "Importance samples")->check(CLI::Range(100L, 100000000L));
  ident->add_option("--seed", o.seed, "RNG seed");

  auto* verify = app.add_subcommand("verify", "Run the reference checks");
  verify->add_option("--suite", o.suite, "Suite name")->check(CLI::IsMember(verify_suites()));
  verify->add_option("--seed", o.seed, "RNG seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  try {
    if (command == "sample") {
      const SpdMatrix sigma = load_spd(o.sigma_file, "--sigma");
      if (o.dist != "wgd" && o.dist != "iwgd") throw UsageError("--dist: sample supports wgd and iwgd");
      const WgdParams p(sigma, need(o.n, "--n"), generator(o, sigma.dim()));
      RngStream rng(o.seed, 0);
      std::ostringstream os;
      for (const SpdMatrix& x : sample_wgd(p, o.count, rng))
        os << matrix_to_json(o.dist == "wgd" ? x.matrix() : Matrix(x.matrix().inverse())).dump() << '\n';
      emit(o, os.str());
      return 0;
    }
    Report rep;
    std::string csv;
    if (command == "eval") rep = cmd_eval(o);
    else if (command == "moments") rep = cmd_moments(o, csv);
    else if (command == "fit") rep = cmd_fit(o);
    else if (command == "bayes") rep = cmd_bayes(o);
    else if (command == "identity-check") rep = cmd_identity(o);
    else rep = cmd_verify(o);
    if (!csv.empty()) {
      emit(o, csv);
      return 0;
    }
    if (!rep.diagnostics.contains("rng")) rep.diagnostics["rng"] = nullptr;
    if (!rep.diagnostics.contains("series")) rep.diagnostics["series"] = nullptr;
    rep.diagnostics["quadrature"] = {{"abs_tol", 1e-12}, {"rel_tol", 1e-10}};
    const json doc = {{"schema", 1}, {"command", command}, {"result", rep.result}, {"diagnostics", rep.diagnostics}};
    emit(o, o.pretty ? pretty(doc) : doc.dump() + "\n");
    return rep.ok ? 0 : 1;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    const json doc = {{"schema", 1},
                      {"command", command},
                      {"error", {{"kind", std::string(e.name())}, {"message", e.what()}}}};
    std::cout << doc.dump() << '\n';
    std::cerr << "error: " << e.name() << ": " << e.what() << '\n';
    return 1;
  }
}
