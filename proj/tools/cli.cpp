#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "finsler/acceptance.hpp"
#include "finsler/classify.hpp"
#include "finsler/connection.hpp"
#include "finsler/corpus.hpp"
#include "finsler/curvature.hpp"
#include "finsler/diffkit.hpp"
#include "finsler/error.hpp"
#include "finsler/geodesic.hpp"
#include "finsler/sampling.hpp"
#include "finsler/warped.hpp"

namespace finsler::cli {

namespace {

struct MetricSource {
  std::string path;
  std::string builtin_name;

  void attach(CLI::App* app) {
    auto* m = app->add_option("--metric", path, "Metric spec (JSON file)");
    auto* b = app->add_option("--builtin", builtin_name, "Built-in metric name (see `metrics`)");
    m->excludes(b);
  }

  Json spec() const {
    if (!builtin_name.empty()) return builtin(builtin_name).spec;
    if (path.empty()) throw Error(ErrorKind::Spec, "one of --metric or --builtin is required");
    return load_spec(path);
  }
};

struct Output {
  std::string path;
  std::string format;

  void attach(CLI::App* app, const std::string& default_format) {
    format = default_format;
    app->add_option("--out", path, "Output file (default: stdout)");
    app->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  }

  void write(const std::string& text) const {
    if (path.empty()) {
      std::cout << text;
      if (!text.empty() && text.back() != '\n') std::cout << '\n';
      return;
    }
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path);
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
  }
};

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidArgument, flag + ": '" + item + "' is not a number");
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json tensor_json(const Matrix& m) {
  Json j = Json::array();
  for (int i = 0; i < m.dim(); ++i) {
    Json row = Json::array();
    for (int k = 0; k < m.dim(); ++k) row.push_back(m(i, k));
    j.push_back(row);
  }
  return j;
}

Json tensor_json(const Tensor3& t) {
  Json j = Json::array();
  for (int i = 0; i < t.dim(); ++i) {
    Json a = Json::array();
    for (int k = 0; k < t.dim(); ++k) {
      Json row = Json::array();
      for (int l = 0; l < t.dim(); ++l) row.push_back(t(i, k, l));
      a.push_back(row);
    }
    j.push_back(a);
  }
  return j;
}

Json scan_json(const ScanReport& s) {
  return {{"label", s.label}, {"samples", s.samples.size()}, {"mean", s.mean},
          {"std", s.std},     {"min", s.min},                {"max", s.max}};
}

int cmd_metrics(const Output& out) {
  Json list = Json::array();
  std::ostringstream text;
  for (const auto& e : list_builtins()) {
    Json item = {{"name", e.name},
                 {"description", e.description},
                 {"curvature", e.curvature_note},
                 {"provenance", e.provenance},
                 {"spec", e.spec}};
    if (e.expected_curvature) item["expected_curvature"] = *e.expected_curvature;
    list.push_back(item);
    text << e.name << "\t" << (e.expected_curvature ? num(*e.expected_curvature) : std::string("-")) << "\t"
         << e.curvature_note << "\t" << e.provenance << "\t" << e.description << "\n";
  }
  out.write(out.format == "json" ? list.dump(2) : text.str());
  return kExitPass;
}

struct ValidateArgs {
  MetricSource metric;
  Output out;
  int samples = 200;
  std::uint64_t seed = 0;
  double tol_homogeneity = 1e-9;
  double tol_fd = 1e-6;
  int fd_samples = 10;
};

int cmd_validate(const ValidateArgs& a, const FDConfig& fd) {
  // Invariants are not enforced here so the report can show what fails.
  const FinslerStructure F = instantiate(a.metric.spec(), {false});
  const ValidationReport v = validate_structure(F, a.samples, a.seed, a.tol_homogeneity);

  // Jet partials of F^2 against the finite-difference oracle.
  double fd_worst = 0.0;
  const int vars = 2 * F.dim();
  for (int s = 0; s < a.fd_samples; ++s) {
    SampleStream rng(a.seed, static_cast<std::uint64_t>(s));
    const LineElement le = sample_line_element(F, rng);
    for (int p = 0; p < vars; ++p) {
      for (int q = -1; q < vars; ++q) {
        if (q >= 0 && q < p) continue;
        const std::vector<int> mi = q < 0 ? std::vector<int>{p} : std::vector<int>{p, q};
        const double exact = partial_f2(F, le, mi);
        const double approx = fd_partial_f2(F, le, mi, fd).value;
        fd_worst = std::max(fd_worst, std::abs(exact - approx) / std::max(a.tol_fd * std::abs(exact), 1e-8));
      }
    }
  }
  const bool fd_pass = fd_worst <= 1.0;
  const bool pass = v.pass && fd_pass;

  if (a.out.format == "csv") {
    std::ostringstream os;
    os << "index,homogeneity_error,euler_error,min_eigenvalue,failure\n";
    for (std::size_t i = 0; i < v.samples.size(); ++i) {
      const auto& s = v.samples[i];
      os << i << "," << num(s.homogeneity_error) << "," << num(s.euler_error) << "," << num(s.min_eigenvalue) << ","
         << s.failure << "\n";
    }
    a.out.write(os.str());
  } else {
    Json failures = Json::array();
    for (std::size_t i = 0; i < v.samples.size(); ++i) {
      const auto& s = v.samples[i];
      if (s.failure.empty() && s.min_eigenvalue > 0.0) continue;
      failures.push_back({{"index", i},
                          {"x", s.le.x},
                          {"y", s.le.y},
                          {"min_eigenvalue", s.min_eigenvalue},
                          {"failure", s.failure}});
    }
    Json j = {{"label", v.label},
              {"samples", v.samples.size()},
              {"seed", a.seed},
              {"max_homogeneity_error", v.max_homogeneity_error},
              {"max_euler_error", v.max_euler_error},
              {"min_eigenvalue", v.min_eigenvalue},
              {"homogeneity_tolerance", v.homogeneity_tolerance},
              {"fd_worst_ratio", fd_worst},
              {"fd_pass", fd_pass},
              {"pass", pass},
              {"failures", failures}};
    a.out.write(j.dump(2));
  }
  std::cerr << (pass ? "PASS" : "FAIL") << " validate " << v.label << ": min eigenvalue " << v.min_eigenvalue
            << ", homogeneity " << v.max_homogeneity_error << ", fd ratio " << fd_worst << "\n";
  return pass ? kExitPass : kExitCheckFailed;
}

LineElement parse_at(const FinslerStructure& F, const std::string& at) {
  const auto v = parse_list(at, "--at");
  const auto n = static_cast<std::size_t>(F.dim());
  if (v.size() != 2 * n) {
    throw Error(ErrorKind::InvalidArgument, "--at expects " + std::to_string(2 * n) + " numbers (x then y)");
  }
  LineElement le{Vector(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n)),
                 Vector(v.begin() + static_cast<std::ptrdiff_t>(n), v.end())};
  F.check(le);
  return le;
}

int cmd_connection_eval(const MetricSource& metric, const std::string& at, const Output& out) {
  const FinslerStructure F = instantiate(metric.spec());
  const LineElement le = parse_at(F, at);
  const ConnectionBundle b = connection_bundle(F, le);
  Json j = {{"label", F.label()},
            {"x", le.x},
            {"y", le.y},
            {"F", F.F(le.x, le.y)},
            {"g", tensor_json(b.g)},
            {"g_inv", tensor_json(b.g_inv)},
            {"C", tensor_json(b.C)},
            {"gamma", tensor_json(b.gamma)},
            {"G", b.G},
            {"NG", tensor_json(b.NG)},
            {"Gamma_star", tensor_json(b.Gamma_star)}};
  out.write(j.dump(2));
  return kExitPass;
}

struct ScanArgs {
  MetricSource metric;
  Output out;
  int samples = 500;
  std::uint64_t seed = 0;
  std::optional<double> expect;
  double tol_curvature = 1e-4;
};

int cmd_curvature_scan(const ScanArgs& a) {
  const FinslerStructure F = instantiate(a.metric.spec());
  const ScanReport s = constancy_scan(F, a.samples, a.seed);
  if (a.out.format == "json") {
    a.out.write(scan_json(s).dump(2));
  } else {
    const int n = F.dim();
    std::ostringstream os;
    for (int i = 1; i <= n; ++i) os << "x" << i << ",";
    for (int i = 1; i <= n; ++i) os << "y" << i << ",";
    for (int i = 1; i <= n; ++i) os << "X" << i << ",";
    os << "K\n";
    for (const auto& f : s.samples) {
      for (double v : f.le.x) os << num(v) << ",";
      for (double v : f.le.y) os << num(v) << ",";
      for (double v : f.X) os << num(v) << ",";
      os << num(f.K) << "\n";
    }
    a.out.write(os.str());
  }
  std::cerr << "scan " << s.label << ": mean " << num(s.mean) << " std " << num(s.std) << " min " << num(s.min)
            << " max " << num(s.max) << "\n";
  if (a.expect) {
    const bool ok = std::abs(s.mean - *a.expect) <= a.tol_curvature * std::max(1.0, std::abs(*a.expect)) &&
                    s.std <= a.tol_curvature * std::max(1.0, std::abs(*a.expect));
    std::cerr << (ok ? "PASS" : "FAIL") << " expected curvature " << num(*a.expect) << "\n";
    return ok ? kExitPass : kExitCheckFailed;
  }
  return kExitPass;
}

struct VerifyArgs {
  MetricSource metric;
  Output out;
  int samples = 100;
  std::uint64_t seed = 0;
  std::string sigma = "auto";
  double tol_adapted = 1e-6;
};

Json components_json(const std::vector<ComponentError>& comps) {
  Json j = Json::object();
  for (const auto& c : comps) j[c.pattern] = c.max_error;
  return j;
}

int cmd_verify_adapted(const VerifyArgs& a) {
  const Json spec = a.metric.spec();
  if (!is_warped_spec(spec)) throw Error(ErrorKind::Spec, "verify adapted needs a warped or sphere_construction spec");
  const WarpedStructure ws = instantiate_warped(spec);
  int sigma = 1;
  Json sigma_json = {{"mode", a.sigma}};
  if (a.sigma == "auto") {
    const SigmaResolution r = resolve_sigma(20, a.seed);
    sigma = r.sigma;
    sigma_json["error_plus"] = r.error_plus;
    sigma_json["error_minus"] = r.error_minus;
  } else {
    sigma = a.sigma == "-1" ? -1 : 1;
  }
  const VerifyReport r = verify_adapted(ws, a.samples, a.seed, sigma, a.tol_adapted);
  Json j = {{"label", r.label},
            {"samples", r.samples},
            {"seed", a.seed},
            {"sigma", r.sigma},
            {"sigma_resolution", sigma_json},
            {"tolerance", r.tolerance},
            {"max_error_cartan", r.max_error_cartan},
            {"max_error_curvature", r.max_error_curvature},
            {"pass_cartan", r.pass_cartan},
            {"pass_curvature", r.pass_curvature},
            {"cartan_components", components_json(r.cartan_components)},
            {"curvature_components", components_json(r.curvature_components)}};
  a.out.write(j.dump(2));
  const bool pass = r.pass_cartan && r.pass_curvature;
  std::cerr << (pass ? "PASS" : "FAIL") << " verify adapted " << r.label << ": Cartan " << r.max_error_cartan
            << ", curvature " << r.max_error_curvature << " (sigma " << r.sigma << ")\n";
  return pass ? kExitPass : kExitCheckFailed;
}

struct ConstructArgs {
  double K = 1.0;
  std::string base_path;
  std::string base_builtin;
  Output out;
  int samples = 200;
  std::uint64_t seed = 0;
  double tol_constancy = 1e-4;
};

int cmd_construct_sphere(const ConstructArgs& a) {
  Json base = a.base_builtin.empty() ? load_spec(a.base_path) : builtin(a.base_builtin).spec;
  base.erase("schema");
  const Json spec = {{"schema", kSchemaVersion}, {"kind", "sphere_construction"}, {"K", a.K}, {"base", base}};
  InstantiateOptions opts;
  opts.construction_samples = a.samples;
  // A base without constant curvature raises construction-precondition (exit 1).
  const std::optional<SphereConstruction> sc = instantiate_sphere(spec, opts);
  const ScanReport s = constancy_scan(sc->warped.total, a.samples, a.seed);
  const double spread = s.std / std::abs(s.mean);
  const bool constant = spread <= a.tol_constancy;
  Json candidates = {{"K", std::abs(s.mean - a.K) <= a.tol_constancy * a.K},
                     {"K^2", std::abs(s.mean - a.K * a.K) <= a.tol_constancy * a.K * a.K}};
  Json j = spec;
  j["measured"] = {{"base_curvature", sc->base_curvature},
                   {"base_scale", sc->base_scale},
                   {"scan", scan_json(s)},
                   {"relative_spread", spread},
                   {"constant", constant},
                   {"matches", candidates}};
  a.out.write(j.dump(2));
  std::cerr << (constant ? "PASS" : "FAIL") << " construct sphere K=" << a.K << ": curvature mean " << num(s.mean)
            << ", std/|mean| " << spread << "\n";
  return constant ? kExitPass : kExitCheckFailed;
}

struct ClassifyArgs {
  std::string phi;
  double rho0 = 0.0;
  double drho0 = 1.0;
  std::string span = "0,3";
  double step = 1e-3;
  int table = 11;
  Output out;
};

int cmd_classify(const ClassifyArgs& a) {
  Expression phi;
  try {
    phi = Expression::parse(a.phi, {"rho"});
  } catch (const Error& e) {
    throw Error(ErrorKind::Spec, std::string("--phi: ") + e.what());
  }
  const auto span = parse_list(a.span, "--span");
  if (span.size() != 2 || !(span[0] < span[1])) throw Error(ErrorKind::InvalidArgument, "--span expects a,b with a < b");
  const ProfileSolution sol = integrate_profile(ProfileRhs::from_expression(phi), a.rho0, a.drho0, span[0], span[1], a.step);
  const CriticalCount cc = count_critical(sol);
  Json points = Json::array();
  for (const auto& p : cc.points) {
    points.push_back({{"t", p.t}, {"kind", to_string(p.kind)}, {"rho_second", p.rho_second}});
  }
  if (!cc.consistent) {
    Json j = {{"critical_points", points}, {"consistent", false}, {"diagnostic", cc.diagnostic}};
    a.out.write(j.dump(2));
    std::cerr << "FAIL classify: " << cc.diagnostic << "\n";
    return kExitCheckFailed;
  }
  const ClassificationReport rep = classify_profile(sol);
  Json table = Json::array();
  const double lo = rep.interval.first;
  const double hi = rep.interval.second;
  for (int i = 1; i < a.table + 1; ++i) {
    const double t = lo + (hi - lo) * i / (a.table + 1);
    Json row = {{"t", t}};
    const auto st = sol.state(t);
    row["rho"] = st[0];
    row["rho_prime"] = st[1];
    try {
      if (rep.case_tag == 'a') row["r"] = reparam_a(sol, t);
      if (rep.case_tag == 'b') row["r"] = reparam_b(sol, t, *rep.c_bar, *rep.t0);
      if (rep.case_tag == 'c') row["theta"] = reparam_c_theta(sol, t, *rep.c_bar, *rep.t0);
      row["conformal_factor"] = conformal_factor(rep, t);
    } catch (const Error& e) {
      row["error"] = e.what();
    }
    table.push_back(row);
  }
  Json j = {{"case", std::string(1, rep.case_tag)},
            {"critical_points", points},
            {"interval", {lo, hi}},
            {"interval_closed", {rep.interval_closed_left, rep.interval_closed_right}},
            {"conformal_model", to_string(rep.model)},
            {"consistent", true},
            {"table", table}};
  if (rep.c_bar) j["c_bar"] = *rep.c_bar;
  if (rep.t0) j["t0"] = *rep.t0;
  a.out.write(j.dump(2));
  return kExitPass;
}

struct GeodesicArgs {
  MetricSource metric;
  Output out;
  std::string x0;
  std::string y0;
  double t_span = 10.0;
  double step = 1e-2;
  double tol_speed = 1e-6;
};

int cmd_geodesic_trace(const GeodesicArgs& a) {
  const FinslerStructure F = instantiate(a.metric.spec());
  const Vector x0 = parse_list(a.x0, "--x0");
  const Vector y0 = parse_list(a.y0, "--y0");
  if (static_cast<int>(x0.size()) != F.dim() || static_cast<int>(y0.size()) != F.dim()) {
    throw Error(ErrorKind::InvalidArgument, "--x0 and --y0 need " + std::to_string(F.dim()) + " components");
  }
  const GeodesicPath p = trace_geodesic(F, x0, y0, a.t_span, a.step);
  if (a.out.format == "json") {
    Json j = {{"label", F.label()},         {"t", p.t},
              {"x", p.x},                   {"y", p.y},
              {"speed", p.speed},           {"left_domain", p.left_domain},
              {"max_speed_error", p.max_speed_error}};
    a.out.write(j.dump(2));
  } else {
    std::ostringstream os;
    os << "t";
    for (int i = 1; i <= F.dim(); ++i) os << ",x" << i;
    for (int i = 1; i <= F.dim(); ++i) os << ",y" << i;
    os << ",speed\n";
    for (std::size_t k = 0; k < p.t.size(); ++k) {
      os << num(p.t[k]);
      for (double v : p.x[k]) os << "," << num(v);
      for (double v : p.y[k]) os << "," << num(v);
      os << "," << num(p.speed[k]) << "\n";
    }
    a.out.write(os.str());
  }
  const bool pass = p.max_speed_error <= a.tol_speed;
  std::cerr << (pass ? "PASS" : "FAIL") << " geodesic: max |F - 1| " << p.max_speed_error
            << (p.left_domain ? ", stopped at the domain boundary at t=" + num(p.t.back()) : std::string()) << "\n";
  return pass ? kExitPass : kExitCheckFailed;
}

int cmd_acceptance(const std::string& suite, std::uint64_t seed) {
  AcceptanceOptions opts;
  opts.seed = seed;
  if (suite != "all") {
    for (double v : parse_list(suite, "--suite")) {
      if (v < 1 || v > 12 || v != std::floor(v)) throw Error(ErrorKind::InvalidArgument, "--suite: criteria are 1..12");
      opts.criteria.insert(static_cast<int>(v));
    }
  }
  bool all = true;
  run_acceptance(opts, [&all](const CriterionResult& r) {
    all = all && r.pass;
    std::cout << format_result(r) << std::endl;
  });
  return all ? kExitPass : kExitCheckFailed;
}

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::Spec:
    case ErrorKind::InvalidArgument:
    case ErrorKind::Config:
    case ErrorKind::DomainEmpty: return kExitInvalid;
    default: return kExitCheckFailed;
  }
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Numerical Finsler geometry: connections, curvature, warped products"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  FDConfig fd;
  app.add_option("--fd-step", fd.step, "Relative finite-difference step")->check(CLI::PositiveNumber);
  app.add_option("--fd-richardson", fd.richardson_levels, "Richardson extrapolation levels")->check(CLI::Range(1, 8));

  Output metrics_out;
  auto* metrics = app.add_subcommand("metrics", "List the built-in metrics");
  metrics_out.attach(metrics, "csv");

  ValidateArgs va;
  auto* validate = app.add_subcommand("validate", "Check homogeneity, Euler identity and positive definiteness");
  va.metric.attach(validate);
  va.out.attach(validate, "json");
  validate->add_option("--samples", va.samples)->check(CLI::PositiveNumber);
  validate->add_option("--seed", va.seed);
  validate->add_option("--tol-homogeneity", va.tol_homogeneity)->check(CLI::PositiveNumber);
  validate->add_option("--tol-fd", va.tol_fd, "Relative jet-vs-FD tolerance")->check(CLI::PositiveNumber);
  validate->add_option("--fd-samples", va.fd_samples)->check(CLI::NonNegativeNumber);

  MetricSource conn_metric;
  Output conn_out;
  std::string conn_at;
  auto* connection = app.add_subcommand("connection", "Connection quantities");
  connection->require_subcommand(1);
  auto* conn_eval = connection->add_subcommand("eval", "Dump g, C, gamma, G, N and Gamma* at a line element");
  conn_metric.attach(conn_eval);
  conn_out.attach(conn_eval, "json");
  conn_eval->add_option("--at", conn_at, "x1,..,xn,y1,..,yn")->required();

  ScanArgs sa;
  auto* curvature = app.add_subcommand("curvature", "Curvature quantities");
  curvature->require_subcommand(1);
  auto* scan = curvature->add_subcommand("scan", "Flag curvature at random flags");
  sa.metric.attach(scan);
  sa.out.attach(scan, "csv");
  scan->add_option("--samples", sa.samples)->check(CLI::Range(2, 1000000));
  scan->add_option("--seed", sa.seed);
  scan->add_option("--expect", sa.expect, "Expected constant curvature");
  scan->add_option("--tol-curvature", sa.tol_curvature)->check(CLI::PositiveNumber);

  VerifyArgs vf;
  auto* verify = app.add_subcommand("verify", "Closed-form comparisons");
  verify->require_subcommand(1);
  auto* adapted = verify->add_subcommand("adapted", "Warped structure vs closed-form Cartan and curvature");
  vf.metric.attach(adapted);
  vf.out.attach(adapted, "json");
  adapted->add_option("--samples", vf.samples)->check(CLI::PositiveNumber);
  adapted->add_option("--seed", vf.seed);
  adapted->add_option("--sigma", vf.sigma)->check(CLI::IsMember({"auto", "+1", "1", "-1"}));
  adapted->add_option("--tol-adapted", vf.tol_adapted)->check(CLI::PositiveNumber);

  ConstructArgs ca;
  auto* construct = app.add_subcommand("construct", "Constructions");
  construct->require_subcommand(1);
  auto* sphere = construct->add_subcommand("sphere", "dt^2 + sin^2(Kt) Kbar^2 gbar over a constant-curvature base");
  sphere->add_option("--K", ca.K)->required()->check(CLI::PositiveNumber);
  auto* base_path = sphere->add_option("--base", ca.base_path, "Base metric spec");
  auto* base_builtin = sphere->add_option("--base-builtin", ca.base_builtin, "Built-in base metric");
  base_path->excludes(base_builtin);
  sphere->require_option(1, 0);
  ca.out.attach(sphere, "json");
  sphere->add_option("--samples", ca.samples)->check(CLI::Range(2, 1000000));
  sphere->add_option("--seed", ca.seed);
  sphere->add_option("--tol-constancy", ca.tol_constancy)->check(CLI::PositiveNumber);

  ClassifyArgs cl;
  auto* classify = app.add_subcommand("classify", "Integrate rho'' = phi(rho) and classify by critical points");
  classify->add_option("--phi", cl.phi, "phi as an expression in rho")->required();
  classify->add_option("--rho0", cl.rho0);
  classify->add_option("--drho0", cl.drho0);
  classify->add_option("--span", cl.span, "t0,t1");
  classify->add_option("--step", cl.step)->check(CLI::PositiveNumber);
  classify->add_option("--table", cl.table, "Rows in the reparametrization table")->check(CLI::Range(1, 10000));
  cl.out.attach(classify, "json");

  GeodesicArgs ga;
  auto* geodesic = app.add_subcommand("geodesic", "Geodesics");
  geodesic->require_subcommand(1);
  auto* trace = geodesic->add_subcommand("trace", "Integrate x'' + 2G(x, x') = 0 at unit speed");
  ga.metric.attach(trace);
  ga.out.attach(trace, "csv");
  trace->add_option("--x0", ga.x0)->required();
  trace->add_option("--y0", ga.y0)->required();
  trace->add_option("--t-span", ga.t_span)->check(CLI::PositiveNumber);
  trace->add_option("--step", ga.step)->check(CLI::PositiveNumber);
  trace->add_option("--tol-speed", ga.tol_speed)->check(CLI::PositiveNumber);

  std::string suite = "all";
  std::uint64_t acc_seed = 0;
  auto* acceptance = app.add_subcommand("acceptance", "Run the acceptance suite");
  acceptance->add_option("--suite", suite, "all or a comma-separated list of criteria");
  acceptance->add_option("--seed", acc_seed);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e) == 0 ? kExitPass : kExitInvalid;
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e) == 0 ? kExitPass : kExitInvalid;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kExitInvalid;
  }

  try {
    if (metrics->parsed()) return cmd_metrics(metrics_out);
    if (validate->parsed()) return cmd_validate(va, fd);
    if (conn_eval->parsed()) return cmd_connection_eval(conn_metric, conn_at, conn_out);
    if (scan->parsed()) return cmd_curvature_scan(sa);
    if (adapted->parsed()) return cmd_verify_adapted(vf);
    if (sphere->parsed()) return cmd_construct_sphere(ca);
    if (classify->parsed()) return cmd_classify(cl);
    if (trace->parsed()) return cmd_geodesic_trace(ga);
    if (acceptance->parsed()) return cmd_acceptance(suite, acc_seed);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const Json::exception& e) {
    std::cerr << "error: spec: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace finsler::cli
