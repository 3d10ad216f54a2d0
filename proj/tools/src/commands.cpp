#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mixbound/bounds.hpp"
#include "mixbound/cli.hpp"
#include "mixbound/dp_prior.hpp"
#include "mixbound/dual_witness.hpp"
#include "mixbound/error.hpp"
#include "mixbound/format.hpp"
#include "mixbound/pde_inversion.hpp"
#include "mixbound/posterior.hpp"
#include "mixbound/transport.hpp"

#ifndef MIXBOUND_VERSION
#define MIXBOUND_VERSION "unknown"
#endif

namespace mixbound::cli {

namespace {

using nlohmann::json;

constexpr int kCsvSchema = 1;

struct Outcome {
  std::string csv;
  json summary = json::object();
  std::vector<std::string> warnings;
  std::string display;  // printed when there is no output file
};

std::string f(double v) { return format_double(v); }

json load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError(exit_code::unreadable_file, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw CliError(exit_code::unreadable_file, "cannot parse '" + path + "': " + e.what());
  }
}

struct Ctx {
  const RunConfig& cfg;
  const json& p;

  std::uint64_t count(const char* key) const { return p.at(key).get<std::uint64_t>(); }
  double num(const char* key) const { return p.at(key).get<double>(); }
  std::string text(const char* key) const { return p.at(key).get<std::string>(); }

  ParameterSpace space(std::size_t dim) const { return ParameterSpace(dim, num("R"), num("lambda_min"), num("lambda_max")); }
  ParameterSpace space() const { return space(count("dim")); }
  KernelFamily kernel(std::size_t dim) const { return KernelFamily(parse_kernel(text("kernel")), dim); }
};

std::size_t measure_dim(const json& m) {
  if (!m.is_object() || !m.contains("atoms") || !m.at("atoms").is_array() || m.at("atoms").empty() ||
      !m.at("atoms")[0].is_array())
    throw CliError(exit_code::schema, "measure JSON needs a nonempty \"atoms\" list of points");
  return m.at("atoms")[0].size();
}

MixtureConfig mixture_from(const json& j, const Ctx& c) {
  if (!j.is_object() || !j.contains("mixing") || !j.contains("scale"))
    throw CliError(exit_code::schema, "mixture JSON needs \"mixing\" and \"scale\"");
  const ParameterSpace sp = c.space(measure_dim(j.at("mixing")));
  return MixtureConfig(measure_from_json(j.at("mixing"), sp), scale_from_json(j.at("scale"), sp), sp);
}

const char* kFuzzHeader = "trial,w1,dsig,l1,l1_stderr,bound_unit_constants,ratio\n";

void fuzz_row(std::ostringstream& os, const FuzzRecord& r) {
  os << r.trial << ',' << f(r.w1) << ',' << f(r.dsig) << ',' << f(r.l1) << ',' << f(r.l1_stderr) << ','
     << f(r.bound) << ',' << f(r.ratio) << '\n';
}

Outcome cmd_w1(const Ctx& c) {
  const json pj = load(c.text("p")), qj = load(c.text("q"));
  const ParameterSpace sp = c.space(measure_dim(pj));
  const DiscreteMeasure p = measure_from_json(pj, sp), q = measure_from_json(qj, sp);
  const TransportPlan plan = w1_exact(p, q);
  Outcome o;
  std::ostringstream os;
  if (c.p.at("plan").get<bool>()) {
    os << "i,j,flow,cost_ij\n";
    for (std::size_t i = 0; i < plan.rows; ++i)
      for (std::size_t j = 0; j < plan.cols; ++j)
        if (plan.at(i, j) > 0.0) os << i << ',' << j << ',' << f(plan.at(i, j)) << ',' << f(distance(p.atom(i), q.atom(j))) << '\n';
  } else {
    os << "cost\n" << f(plan.cost) << '\n';
  }
  o.csv = os.str();
  o.summary["cost"] = plan.cost;
  o.display = f(plan.cost) + "\n";
  return o;
}

L1Method method_of(const std::string& m) {
  if (m == "automatic") return L1Method::automatic;
  if (m == "quadrature") return L1Method::quadrature;
  if (m == "importance_mc") return L1Method::importance_mc;
  throw CliError(exit_code::schema, "method must be automatic, quadrature or importance_mc");
}

Outcome cmd_l1(const Ctx& c) {
  const MixtureConfig g = mixture_from(load(c.text("p")), c), h = mixture_from(load(c.text("q")), c);
  const KernelFamily k = c.kernel(g.dim());
  const auto est = l1_distance(g, h, k, c.count("budget"), c.cfg.seed, method_of(c.text("method")));
  Outcome o;
  std::ostringstream os;
  os << "l1,std_error,method,budget\n"
     << f(est.value) << ',' << f(est.std_error) << ',' << to_string(est.method) << ',' << c.count("budget") << '\n';
  o.csv = os.str();
  o.summary["l1"] = est.value;
  o.summary["std_error"] = est.std_error;
  return o;
}

BoundRegime regime_of(const std::string& r) {
  if (r == "kernel_specific") return BoundRegime::kernel_specific;
  if (r == "super_smooth") return BoundRegime::super_smooth;
  if (r == "ordinary_smooth") return BoundRegime::ordinary_smooth;
  if (r == "pde_inversion") return BoundRegime::pde_inversion;
  throw CliError(exit_code::schema, "regime must be kernel_specific, super_smooth, ordinary_smooth or pde_inversion");
}

Outcome cmd_bounds_verify(const Ctx& c) {
  const MixtureConfig g = mixture_from(load(c.text("p")), c), h = mixture_from(load(c.text("q")), c);
  const KernelFamily k = c.kernel(g.dim());
  const BoundRegime regime = regime_of(c.text("regime"));
  const BoundSpec spec = BoundSpec::for_kernel(regime, k);
  FuzzRecord r;
  r.w1 = w1_exact(g.mixing, h.mixing).cost;
  r.dsig = operator_norm_distance(g.scale, h.scale);
  const auto est = l1_distance(g, h, k, c.count("budget"), derive_seed(c.cfg.seed, 0x11, 0));
  r.l1 = est.value;
  r.l1_stderr = est.std_error;
  switch (regime) {
    case BoundRegime::super_smooth: r.bound = bound_supersmooth(spec, k, r.w1, r.dsig); break;
    case BoundRegime::ordinary_smooth: r.bound = bound_ordinary(spec, k, r.w1, r.dsig); break;
    case BoundRegime::pde_inversion: r.bound = bound_pde(spec, k, r.w1, r.dsig); break;
    case BoundRegime::kernel_specific: r.bound = bound_kernel(k, r.w1, r.dsig); break;
  }
  r.ratio = r.bound > 0.0 ? r.l1 / r.bound : INFINITY;
  Outcome o;
  std::ostringstream os;
  os << kFuzzHeader;
  fuzz_row(os, r);
  o.csv = os.str();
  o.summary = {{"w1", r.w1}, {"dsig", r.dsig}, {"l1", r.l1}, {"bound", r.bound}, {"ratio", r.ratio}};
  if (r.bound == 0.0) o.warnings.push_back("bound underflows to zero; ratio is infinite");
  return o;
}

Outcome cmd_bounds_fuzz(const Ctx& c) {
  const ParameterSpace sp = c.space();
  const KernelFamily k = c.kernel(sp.dim);
  const auto report = fuzz_inverse_bound(k, sp, c.count("trials"), c.count("atoms"), c.count("budget"), c.cfg.seed);
  Outcome o;
  std::ostringstream os;
  os << kFuzzHeader;
  for (const auto& r : report.records) fuzz_row(os, r);
  o.csv = os.str();
  o.summary = {{"trials", report.trials},          {"min_ratio", report.min_ratio},
               {"fitted_constant", report.fitted_constant}, {"violations", report.violations},
               {"rejections", report.rejections},  {"argmin_pair", report.argmin_pair}};
  if (report.violations > 0) o.warnings.push_back(std::to_string(report.violations) + " trials fell below the unit-constant bound");
  return o;
}

Outcome cmd_pde_check(const Ctx& c) {
  const ParameterSpace sp = c.space();
  const KernelFamily k(KernelKind::laplace, sp.dim);
  const std::string path = c.text("mixture");
  std::optional<MixtureConfig> g;
  if (!path.empty()) {
    g = mixture_from(load(path), c);
  } else {
    CounterRng rng(c.cfg.seed, 0x9de);
    g = sample_admissible(k, sp, c.count("atoms"), rng);
  }
  const std::uint64_t budget = c.count("budget");
  const auto suite = standard_test_suite(g->space);
  Outcome o;
  std::ostringstream os;
  os << "test_fn_id,residual,budget\n";
  double worst = 0.0;
  for (const auto& phi : suite) {
    const double r = weak_residual(*g, k, phi, budget);
    worst = std::max(worst, std::abs(r));
    os << phi.id() << ',' << f(r) << ',' << budget << '\n';
  }
  o.csv = os.str();
  o.summary = {{"max_abs_residual", worst}, {"mixture", to_json(*g)}};
  if (worst > 1e-3) o.warnings.push_back("a residual exceeds 1e-3");
  return o;
}

DiscreteMeasure random_measure(const ParameterSpace& sp, std::size_t atoms, CounterRng& rng) {
  std::vector<Point> pts;
  std::vector<double> w;
  for (std::size_t i = 0; i < atoms; ++i) {
    pts.push_back(rng.uniform_ball(sp.dim, sp.radius));
    w.push_back(rng.exponential());
  }
  return DiscreteMeasure(std::move(pts), std::move(w), sp);
}

Outcome cmd_dual_witness_demo(const Ctx& c) {
  const ParameterSpace sp = c.space();
  require(sp.dim == 1, ErrorKind::unsupported_dimension, "the witness demo runs on a 1-d grid");
  require(c.count("atoms") >= 1 && c.count("points") >= 2, ErrorKind::domain, "need atoms >= 1 and points >= 2");
  CounterRng rng(c.cfg.seed, 0xd0a1);
  const DiscreteMeasure p = random_measure(sp, c.count("atoms"), rng), q = random_measure(sp, c.count("atoms"), rng);
  const WitnessFunction w = witness_from_transport(p, q);
  const double lambda = c.num("lambda");
  const std::size_t points = c.count("points");
  const Certificate cert = approximation_certificate(w, sp, lambda, points);
  Outcome o;
  std::ostringstream os;
  os << "x,h_ext,h_cutoff,h_bandlimited,gap,bound\n";
  const double lo = -2.0 * sp.radius, hi = 2.0 * sp.radius;
  for (std::size_t i = 0; i < points; ++i) {
    const double x[1] = {lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1)};
    const double ext = mcshane_extend(w, x), cut = witness_cutoff(w, sp, x), band = bandlimit(w, sp, lambda, x);
    os << f(x[0]) << ',' << f(ext) << ',' << f(cut) << ',' << f(band) << ',' << f(std::abs(band - cut)) << ','
       << f(cert.bound) << '\n';
  }
  o.csv = os.str();
  o.summary = {{"w1", w1_exact(p, q).cost}, {"sup_gap", cert.sup_gap}, {"bound", cert.bound},
               {"P", to_json(p)},           {"P_prime", to_json(q)}};
  if (cert.sup_gap > cert.bound + 1e-3) o.warnings.push_back("certificate gap exceeds its bound");
  return o;
}

struct PosteriorSetup {
  KernelFamily kernel;
  MixtureConfig truth;
  DpConfig dp;
  SamplerSettings settings;
  std::vector<std::uint64_t> grid;
  std::uint64_t replicates;
};

PosteriorSetup posterior_setup(const Ctx& c) {
  const ParameterSpace sp = c.space();
  const KernelFamily k = c.kernel(sp.dim);
  std::optional<MixtureConfig> truth;
  if (c.p.contains("truth")) {
    truth = mixture_from(c.p.at("truth"), c);
    if (truth->dim() != sp.dim) throw CliError(exit_code::schema, "truth dimension differs from dim");
  } else {
    Point a(sp.dim, 0.0), b(sp.dim, 0.0);
    a[0] = -0.5 * sp.radius;
    b[0] = 0.5 * sp.radius;
    truth = MixtureConfig(DiscreteMeasure({a, b}, {0.5, 0.5}, sp), SpdScale::isotropic(1.0, sp), sp);
  }
  DpConfig dp;
  dp.concentration = c.num("a");
  dp.base = UniformBall{sp.radius};
  SamplerSettings s;
  s.iters = c.count("iters");
  s.burn_in = c.count("burn_in");
  s.thin = c.count("thin");
  s.seed = c.cfg.seed;
  s.l1_budget = c.count("l1_budget");
  return {k, *truth, dp, s, c.p.at("n_grid").get<std::vector<std::uint64_t>>(), c.count("replicates")};
}

std::string table_csv(const ContractionTable& t) {
  std::ostringstream os;
  os << "n,replicate,median_w1,q90_w1,median_dsig,median_l1,acceptance_warning\n";
  for (const auto& r : t.rows)
    os << r.n << ',' << r.replicate << ',' << f(r.median_w1) << ',' << f(r.q90_w1) << ',' << f(r.median_dsig) << ','
       << f(r.median_l1) << ',' << (r.acceptance_warning ? 1 : 0) << '\n';
  return os.str();
}

ContractionTable read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError(exit_code::unreadable_file, "cannot open '" + path + "'");
  std::string line;
  std::getline(in, line);
  if (line != "n,replicate,median_w1,q90_w1,median_dsig,median_l1,acceptance_warning")
    throw CliError(exit_code::schema, "'" + path + "' is not a contraction table");
  ContractionTable t;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 7) throw CliError(exit_code::schema, "malformed row in '" + path + "'");
    try {
      ContractionRow r;
      r.n = std::stoull(cells[0]);
      r.replicate = std::stoull(cells[1]);
      r.median_w1 = std::stod(cells[2]);
      r.q90_w1 = std::stod(cells[3]);
      r.median_dsig = std::stod(cells[4]);
      r.median_l1 = std::stod(cells[5]);
      r.acceptance_warning = cells[6] == "1";
      t.rows.push_back(r);
    } catch (const std::logic_error&) {
      throw CliError(exit_code::schema, "malformed row in '" + path + "'");
    }
  }
  return t;
}

Outcome cmd_posterior_run(const Ctx& c) {
  const auto s = posterior_setup(c);
  const auto table = contraction_experiment(s.kernel, s.truth, s.grid, s.replicates, s.dp, s.settings);
  Outcome o;
  o.csv = table_csv(table);
  std::size_t flagged = 0;
  for (const auto& r : table.rows) flagged += r.acceptance_warning ? 1 : 0;
  o.summary = {{"rows", table.rows.size()}, {"acceptance_warnings", flagged}, {"truth", to_json(s.truth)}};
  if (flagged > 0) o.warnings.push_back(std::to_string(flagged) + " chains had acceptance rates outside (0.05, 0.95)");
  return o;
}

Outcome cmd_posterior_rates(const Ctx& c) {
  const auto s = posterior_setup(c);
  const std::string path = c.text("table");
  const ContractionTable table =
      path.empty() ? contraction_experiment(s.kernel, s.truth, s.grid, s.replicates, s.dp, s.settings) : read_table(path);
  const RateFit fit = rate_fit(table, s.kernel);
  Outcome o;
  std::ostringstream os;
  os << "n,mean_log_w1,mean_log_dsig,mean_log_l1,theory_w1,theory_dsig,theory_l1\n";
  for (const auto& r : fit.curve) {
    os << r.n << ',' << f(r.mean_log_w1) << ',' << f(r.mean_log_dsig) << ',' << f(r.mean_log_l1);
    if (fit.has_theory)
      os << ',' << f(r.theory_w1) << ',' << f(r.theory_dsig) << ',' << f(r.theory_l1) << '\n';
    else
      os << ",,,\n";
  }
  o.csv = os.str();
  o.summary = {{"slope_w1", fit.slope_w1},
               {"slope_dsig", fit.slope_dsig},
               {"slope_l1", fit.slope_l1},
               {"corrected_slope_w1", fit.corrected_slope_w1},
               {"corrected_slope_dsig", fit.corrected_slope_dsig},
               {"corrected_slope_l1", fit.corrected_slope_l1},
               {"has_theory", fit.has_theory},
               {"note", "theoretical curves are asymptotic; fitted slopes are descriptive at these sample sizes"}};
  return o;
}

Outcome cmd_kernels_probe(const Ctx& c) {
  const ParameterSpace sp = c.space();
  const KernelFamily k = c.kernel(sp.dim);
  const SpdScale scale = SpdScale::isotropic(c.num("scale"), sp);
  const std::size_t points = c.count("points");
  require(points >= 2, ErrorKind::domain, "need points >= 2");
  const double top = c.num("xi_max");
  Outcome o;
  std::ostringstream os;
  os << "t,density,charfn,envelope_lower,envelope_upper\n";
  const Point origin(sp.dim, 0.0);
  for (std::size_t i = 0; i < points; ++i) {
    const double t = top * static_cast<double>(i) / static_cast<double>(points - 1);
    Point x(sp.dim, 0.0);
    x[0] = t;
    const Envelope env = smoothness_envelope(k, t, sp);
    os << f(t) << ',' << f(density(k, x, origin, scale)) << ',' << f(charfn(k, x, scale)) << ',' << f(env.lower) << ','
       << f(env.upper) << '\n';
  }
  o.csv = os.str();
  return o;
}

Outcome dispatch(const RunConfig& cfg) {
  const Ctx c{cfg, cfg.parameters};
  switch (cfg.command) {
    case Command::w1: return cmd_w1(c);
    case Command::l1: return cmd_l1(c);
    case Command::bounds_verify: return cmd_bounds_verify(c);
    case Command::bounds_fuzz: return cmd_bounds_fuzz(c);
    case Command::pde_check: return cmd_pde_check(c);
    case Command::dual_witness_demo: return cmd_dual_witness_demo(c);
    case Command::posterior_run: return cmd_posterior_run(c);
    case Command::posterior_rates: return cmd_posterior_rates(c);
    case Command::kernels_probe: return cmd_kernels_probe(c);
  }
  throw CliError(exit_code::unknown_command, "unknown command");
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw CliError(exit_code::unreadable_file, "cannot write '" + path + "'");
}

}  // namespace

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  try {
    Outcome o = dispatch(cfg);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (const auto& w : o.warnings) err << "warning: " << w << '\n';
    if (cfg.output_path.empty()) {
      out << (o.display.empty() ? o.csv : o.display);
      return exit_code::ok;
    }
    write_file(cfg.output_path, o.csv);
    json sidecar{{"config_echo", serialize(cfg)},
                 {"versions",
                  {{"mixbound", MIXBOUND_VERSION},
                   {"csv_schema", kCsvSchema},
                   {"nlohmann_json",
                    std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." + std::to_string(NLOHMANN_JSON_VERSION_MINOR) +
                        "." + std::to_string(NLOHMANN_JSON_VERSION_PATCH)}}},
                 {"wall_time", wall},
                 {"warnings", o.warnings},
                 {"summary", o.summary}};
    write_file(cfg.output_path + ".json", sidecar.dump(2) + "\n");
    out << (o.display.empty() ? o.summary.dump() + "\n" : o.display);
    return exit_code::ok;
  } catch (const CliError& e) {
    err << "error: " << e.what() << '\n';
    return e.code();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::computation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::computation;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = parse_args(args);
  } catch (const CliError& e) {
    err << "error: " << e.what() << '\n';
    return e.code();
  }
  return execute(cfg, out, err);
}

}  // namespace mixbound::cli
