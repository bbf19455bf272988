#include "finsler/corpus.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "finsler/classify.hpp"
#include "finsler/error.hpp"
#include "finsler/expression.hpp"
#include "finsler/sampling.hpp"

namespace finsler {

namespace {

[[noreturn]] void spec_error(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::Spec, (path.empty() ? std::string("spec") : path) + ": " + what);
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string join(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

const Json& need(const Json& spec, const std::string& key, const std::string& path) {
  if (!spec.is_object() || !spec.contains(key)) spec_error(join(path, key), "missing field");
  return spec.at(key);
}

double number(const Json& v, const std::string& path) {
  if (!v.is_number()) spec_error(path, "expected a number");
  return v.get<double>();
}

int dimension(const Json& spec, const std::string& path, int min_dim = 1) {
  const Json& v = need(spec, "n", path);
  if (!v.is_number_integer() || v.get<int>() < min_dim || v.get<int>() > 8) {
    spec_error(join(path, "n"), "expected an integer dimension in [" + std::to_string(min_dim) + ", 8]");
  }
  return v.get<int>();
}

std::vector<std::string> coordinate_names(int n) {
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
  return names;
}

Expression entry(const Json& v, int n, const std::string& path) {
  if (v.is_number()) return Expression::constant(v.get<double>());
  if (!v.is_string()) spec_error(path, "expected a number or an expression string");
  try {
    return Expression::parse(v.get<std::string>(), coordinate_names(n));
  } catch (const Error& e) {
    spec_error(path, e.what());
  }
}

std::vector<Expression> matrix_entries(const Json& m, int n, const std::string& path) {
  if (!m.is_array() || static_cast<int>(m.size()) != n) spec_error(path, "expected " + std::to_string(n) + " rows");
  std::vector<Expression> out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto row_path = join(path, i);
    if (!m[i].is_array() || static_cast<int>(m[i].size()) != n) {
      spec_error(row_path, "expected " + std::to_string(n) + " entries");
    }
    for (std::size_t j = 0; j < m[i].size(); ++j) out.push_back(entry(m[i][j], n, join(row_path, j)));
  }
  return out;
}

std::vector<std::pair<double, double>> box_from(const Json& spec, int n, const std::string& path,
                                                std::vector<std::pair<double, double>> fallback) {
  if (!spec.contains("box")) return fallback;
  const Json& b = spec.at("box");
  const auto bp = join(path, "box");
  if (!b.is_array() || static_cast<int>(b.size()) != n) spec_error(bp, "expected " + std::to_string(n) + " intervals");
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (!b[i].is_array() || b[i].size() != 2) spec_error(join(bp, i), "expected [lo, hi]");
    const double lo = number(b[i][0], join(bp, i));
    const double hi = number(b[i][1], join(bp, i));
    if (!(lo < hi)) spec_error(join(bp, i), "expected lo < hi");
    out.emplace_back(lo, hi);
  }
  return out;
}

// Optional {"x2": [0, null]} open bounds per coordinate.
std::function<bool(std::span<const double>)> domain_from(const Json& spec, int n, const std::string& path) {
  if (!spec.contains("domain")) return {};
  const Json& d = spec.at("domain");
  const auto dp = join(path, "domain");
  if (!d.is_object()) spec_error(dp, "expected an object of coordinate bounds");
  std::vector<std::pair<double, double>> bounds(static_cast<std::size_t>(n),
                                                {-std::numeric_limits<double>::infinity(),
                                                 std::numeric_limits<double>::infinity()});
  const auto names = coordinate_names(n);
  for (const auto& [key, value] : d.items()) {
    auto it = std::find(names.begin(), names.end(), key);
    if (it == names.end()) spec_error(join(dp, key), "unknown coordinate");
    if (!value.is_array() || value.size() != 2) spec_error(join(dp, key), "expected [lo, hi]");
    auto& b = bounds[static_cast<std::size_t>(it - names.begin())];
    if (!value[0].is_null()) b.first = number(value[0], join(dp, key));
    if (!value[1].is_null()) b.second = number(value[1], join(dp, key));
  }
  return [bounds](std::span<const double> x) {
    for (std::size_t i = 0; i < bounds.size(); ++i) {
      if (!(x[i] > bounds[i].first && x[i] < bounds[i].second)) return false;
    }
    return true;
  };
}

struct QuadraticForm {
  int n = 0;
  std::vector<Expression> A;  // row-major

  template <class S>
  S operator()(std::span<const S> x, std::span<const S> y) const {
    S f(0.0);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const Expression& e = A[static_cast<std::size_t>(i * n + j)];
        if (e.is_constant()) {
          const double c = e.constant_value();
          if (c != 0.0) f += y[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j)] * c;
        } else {
          f += y[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j)] * e.eval<S>(x);
        }
      }
    }
    return f;
  }
};

struct RandersForm {
  QuadraticForm alpha;
  std::vector<Expression> beta;

  template <class S>
  S operator()(std::span<const S> x, std::span<const S> y) const {
    using std::sqrt;
    S b(0.0);
    for (std::size_t i = 0; i < beta.size(); ++i) {
      b += y[i] * (beta[i].is_constant() ? S(beta[i].constant_value()) : beta[i].eval<S>(x));
    }
    const S f = sqrt(alpha(x, y)) + b;
    return f * f;
  }
};

struct SpherePolarForm {
  int n = 2;
  double radius = 1.0;

  template <class S>
  S operator()(std::span<const S> x, std::span<const S> y) const {
    using std::sin;
    S factor(radius * radius);
    S f(0.0);
    for (int i = 0; i < n; ++i) {
      if (i > 0) {
        const S s = sin(x[static_cast<std::size_t>(i - 1)]);
        factor = factor * s * s;
      }
      f += factor * y[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
    }
    return f;
  }
};

struct FunkForm {
  template <class S>
  S operator()(std::span<const S> x, std::span<const S> y) const {
    using std::sqrt;
    S xx(0.0);
    S yy(0.0);
    S xy(0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
      xx += x[i] * x[i];
      yy += y[i] * y[i];
      xy += x[i] * y[i];
    }
    const S d = 1.0 - xx;
    const S f = (sqrt(yy * d + xy * xy) + xy) / d;
    return f * f;
  }
};

Matrix evaluate(const std::vector<Expression>& A, int n, std::span<const double> x) {
  Matrix m(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = A[static_cast<std::size_t>(i * n + j)].eval<double>(x);
  }
  return m;
}

std::string label_of(const Json& spec, const std::string& fallback) {
  if (spec.contains("label") && spec.at("label").is_string()) return spec.at("label").get<std::string>();
  return fallback;
}

void check_schema(const Json& spec, const std::string& path) {
  if (!spec.is_object()) spec_error(path, "expected an object");
  if (path.empty()) {
    if (!spec.contains("schema")) spec_error("schema", "missing field");
    if (!spec.at("schema").is_number_integer() || spec.at("schema").get<int>() != kSchemaVersion) {
      spec_error("schema", "unsupported schema version (expected 1)");
    }
  }
}

FinslerStructure build(const Json& spec, const std::string& path, const InstantiateOptions& options);

WarpProfile profile_from(const Json& p, const std::string& path) {
  const std::string kind = need(p, "kind", path).is_string() ? p.at("kind").get<std::string>() : "";
  if (kind == "analytic") {
    const Json& name = need(p, "name", path);
    if (!name.is_string()) spec_error(join(path, "name"), "expected a string");
    std::map<std::string, double> params;
    if (p.contains("params")) {
      if (!p.at("params").is_object()) spec_error(join(path, "params"), "expected an object");
      for (const auto& [k, v] : p.at("params").items()) params[k] = number(v, join(join(path, "params"), k));
    }
    try {
      return WarpProfile::analytic(name.get<std::string>(), params);
    } catch (const Error& e) {
      spec_error(path, e.what());
    }
  }
  if (kind == "ode") {
    const Json& phi = need(p, "phi", path);
    Expression e;
    if (phi.is_number()) {
      e = Expression::constant(phi.get<double>());
    } else if (phi.is_string()) {
      try {
        e = Expression::parse(phi.get<std::string>(), {"rho"});
      } catch (const Error& err) {
        spec_error(join(path, "phi"), err.what());
      }
    } else {
      spec_error(join(path, "phi"), "expected a number or an expression in rho");
    }
    const double rho0 = number(need(p, "rho0", path), join(path, "rho0"));
    const double drho0 = number(need(p, "drho0", path), join(path, "drho0"));
    double t0 = 0.0;
    double t1 = 3.0;
    if (p.contains("span")) {
      const Json& s = p.at("span");
      if (!s.is_array() || s.size() != 2) spec_error(join(path, "span"), "expected [t0, t1]");
      t0 = number(s[0], join(path, "span"));
      t1 = number(s[1], join(path, "span"));
    }
    const double step = p.contains("step") ? number(p.at("step"), join(path, "step")) : 1e-3;
    return profile_from_ode(ProfileRhs::from_expression(e), rho0, drho0, t0, t1, step);
  }
  spec_error(join(path, "kind"), "expected \"analytic\" or \"ode\"");
}

void check_randers(const RandersForm& form, const Chart& chart, const std::string& path) {
  const int n = form.alpha.n;
  for (std::uint64_t i = 0; i < 64; ++i) {
    SampleStream rng(0xbe7a, i);
    const Vector x = sample_point(chart, rng);
    const Matrix a = evaluate(form.alpha.A, n, x);
    Eigen::MatrixXd A(n, n);
    Eigen::VectorXd b(n);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) A(r, c) = 0.5 * (a(r, c) + a(c, r));
      b(r) = form.beta[static_cast<std::size_t>(r)].eval<double>(x);
    }
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success) spec_error(join(path, "alpha"), "alpha is not positive definite");
    const double norm = std::sqrt(b.dot(llt.solve(b)));
    if (!(norm < 1.0)) {
      std::ostringstream os;
      os << "|beta|_alpha = " << norm << " must be below 1";
      spec_error(join(path, "beta"), os.str());
    }
  }
}

FinslerStructure build(const Json& spec, const std::string& path, const InstantiateOptions& options) {
  check_schema(spec, path);
  const Json& kind_v = need(spec, "kind", path);
  if (!kind_v.is_string()) spec_error(join(path, "kind"), "expected a string");
  const std::string kind = kind_v.get<std::string>();

  if (kind == "euclidean") {
    const int n = dimension(spec, path);
    Chart c = Chart::euclidean(n, label_of(spec, "euclidean" + std::to_string(n)));
    c.sample_box = box_from(spec, n, path, c.sample_box);
    QuadraticForm q{n, {}};
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) q.A.push_back(Expression::constant(i == j ? 1.0 : 0.0));
    }
    return FinslerStructure::from_squared(std::move(c), q, {c.label, true, true, std::nullopt});
  }
  if (kind == "riemannian") {
    const int n = dimension(spec, path);
    QuadraticForm q{n, matrix_entries(need(spec, "metric", path), n, join(path, "metric"))};
    Chart c = Chart::euclidean(n, label_of(spec, "riemannian" + std::to_string(n)));
    c.sample_box = box_from(spec, n, path, c.sample_box);
    c.domain = domain_from(spec, n, path);
    const std::string label = c.label;
    return FinslerStructure::from_squared(std::move(c), q, {label, true, true, std::nullopt});
  }
  if (kind == "sphere_polar") {
    const int n = dimension(spec, path, 2);
    const double radius = spec.contains("radius") ? number(spec.at("radius"), join(path, "radius")) : 1.0;
    if (!(radius > 0.0)) spec_error(join(path, "radius"), "radius must be positive");
    Chart c;
    c.dim = n;
    std::ostringstream label;
    label << "sphere_polar" << n << "_r" << radius;
    c.label = label_of(spec, label.str());
    for (int i = 0; i + 1 < n; ++i) c.sample_box.emplace_back(0.3, std::numbers::pi - 0.3);
    c.sample_box.emplace_back(-std::numbers::pi, std::numbers::pi);
    c.sample_box = box_from(spec, n, path, c.sample_box);
    c.domain = [n](std::span<const double> x) {
      for (int i = 0; i + 1 < n; ++i) {
        if (!(x[static_cast<std::size_t>(i)] > 0.0 && x[static_cast<std::size_t>(i)] < std::numbers::pi)) return false;
      }
      return true;
    };
    const std::string l = c.label;
    return FinslerStructure::from_squared(std::move(c), SpherePolarForm{n, radius}, {l, true, true, std::nullopt});
  }
  if (kind == "randers") {
    const int n = dimension(spec, path);
    RandersForm form;
    form.alpha = QuadraticForm{n, matrix_entries(need(spec, "alpha", path), n, join(path, "alpha"))};
    const Json& beta = need(spec, "beta", path);
    if (!beta.is_array() || static_cast<int>(beta.size()) != n) {
      spec_error(join(path, "beta"), "expected " + std::to_string(n) + " entries");
    }
    for (std::size_t i = 0; i < beta.size(); ++i) form.beta.push_back(entry(beta[i], n, join(join(path, "beta"), i)));
    Chart c = Chart::euclidean(n, label_of(spec, "randers" + std::to_string(n)));
    c.sample_box = box_from(spec, n, path, c.sample_box);
    c.domain = domain_from(spec, n, path);
    if (options.check_invariants) check_randers(form, c, path);
    const std::string l = c.label;
    return FinslerStructure::from_squared(std::move(c), form, {l, false, false, std::nullopt});
  }
  if (kind == "funk") {
    const int n = dimension(spec, path);
    Chart c = Chart::euclidean(n, label_of(spec, "funk" + std::to_string(n)));
    c.domain = [](std::span<const double> x) {
      double s = 0.0;
      for (double v : x) s += v * v;
      return s < 1.0;
    };
    c.sample_box = box_from(spec, n, path, c.sample_box);
    const std::string l = c.label;
    return FinslerStructure::from_squared(std::move(c), FunkForm{}, {l, false, false, std::nullopt});
  }
  if (kind == "warped" || kind == "sphere_construction") {
    Json copy = spec;
    copy["schema"] = kSchemaVersion;
    return instantiate_warped(copy, options).total;
  }
  spec_error(join(path, "kind"), "unknown kind '" + kind + "'");
}

}  // namespace

FinslerStructure instantiate(const Json& spec, const InstantiateOptions& options) { return build(spec, "", options); }

bool is_warped_spec(const Json& spec) {
  return spec.is_object() && spec.contains("kind") && spec.at("kind").is_string() &&
         (spec.at("kind") == "warped" || spec.at("kind") == "sphere_construction");
}

std::optional<SphereConstruction> instantiate_sphere(const Json& spec, const InstantiateOptions& options) {
  check_schema(spec, "");
  if (!spec.contains("kind") || spec.at("kind") != "sphere_construction") return std::nullopt;
  const double K = number(need(spec, "K", ""), "K");
  if (!(K > 0.0)) spec_error("K", "K must be positive");
  const FinslerStructure base = build(need(spec, "base", ""), "base", options);
  return build_sphere_metric(K, base, options.construction_samples, 0);
}

WarpedStructure instantiate_warped(const Json& spec, const InstantiateOptions& options) {
  check_schema(spec, "");
  if (!is_warped_spec(spec)) spec_error("kind", "expected \"warped\" or \"sphere_construction\"");
  if (spec.at("kind") == "sphere_construction") return instantiate_sphere(spec, options)->warped;
  const WarpProfile profile = profile_from(need(spec, "profile", ""), "profile");
  const FinslerStructure base = build(need(spec, "base", ""), "base", options);
  try {
    return build_warped(profile, base);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::CriticalPoint || e.kind() == ErrorKind::InvalidArgument) spec_error("profile", e.what());
    throw;
  }
}

Json load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Spec, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::Spec, path + ": " + e.what());
  }
}

std::optional<MetricField> riemannian_metric_field(const Json& spec) {
  if (!spec.is_object() || !spec.contains("kind")) return std::nullopt;
  const std::string kind = spec.at("kind").get<std::string>();
  if (kind == "euclidean") {
    const int n = spec.at("n").get<int>();
    return [n](std::span<const double>) {
      Matrix m(n, 0.0);
      for (int i = 0; i < n; ++i) m(i, i) = 1.0;
      return m;
    };
  }
  if (kind == "riemannian") {
    const int n = spec.at("n").get<int>();
    auto A = matrix_entries(spec.at("metric"), n, "metric");
    return [A, n](std::span<const double> x) {
      Matrix m = evaluate(A, n, x);
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) m(i, j) = m(j, i) = 0.5 * (m(i, j) + m(j, i));
      }
      return m;
    };
  }
  if (kind == "sphere_polar") {
    const int n = spec.at("n").get<int>();
    const double r = spec.contains("radius") ? spec.at("radius").get<double>() : 1.0;
    return [n, r](std::span<const double> x) {
      Matrix m(n, 0.0);
      double f = r * r;
      for (int i = 0; i < n; ++i) {
        if (i > 0) f *= std::sin(x[static_cast<std::size_t>(i - 1)]) * std::sin(x[static_cast<std::size_t>(i - 1)]);
        m(i, i) = f;
      }
      return m;
    };
  }
  return std::nullopt;
}

namespace {

std::vector<BuiltinEntry> make_builtins() {
  const Json unit_s2 = {{"kind", "sphere_polar"}, {"n", 2}, {"radius", 1.0}};
  const Json randers03 = {{"kind", "randers"}, {"n", 2}, {"alpha", {{1, 0}, {0, 1}}}, {"beta", {0.3, 0}}};
  auto with_schema = [](Json j) {
    j["schema"] = kSchemaVersion;
    return j;
  };
  std::vector<BuiltinEntry> v;
  v.push_back({"euclidean2", "flat plane", with_schema({{"kind", "euclidean"}, {"n", 2}}), 0.0, "flat", "closed-form"});
  v.push_back({"euclidean3", "flat space", with_schema({{"kind", "euclidean"}, {"n", 3}}), 0.0, "flat", "closed-form"});
  v.push_back({"sphere_polar2", "unit 2-sphere in polar coordinates", with_schema(unit_s2), 1.0, "constant",
               "closed-form"});
  v.push_back({"sphere_polar3", "unit 3-sphere in polar coordinates",
               with_schema({{"kind", "sphere_polar"}, {"n", 3}, {"radius", 1.0}}), 1.0, "constant", "closed-form"});
  v.push_back({"sphere_polar3_r2", "3-sphere of radius 2",
               with_schema({{"kind", "sphere_polar"}, {"n", 3}, {"radius", 2.0}}), 0.25, "constant", "closed-form"});
  v.push_back({"hyperbolic2", "upper half-plane (dx^2 + dy^2)/y^2",
               with_schema({{"kind", "riemannian"},
                            {"n", 2},
                            {"metric", {{"1/x2^2", 0}, {0, "1/x2^2"}}},
                            {"domain", {{"x2", {0, nullptr}}}},
                            {"box", {{-1, 1}, {0.5, 2}}}}),
               -1.0, "constant", "closed-form"});
  v.push_back({"randers2", "Minkowski Randers norm, b = 0.5",
               with_schema({{"kind", "randers"}, {"n", 2}, {"alpha", {{1, 0}, {0, 1}}}, {"beta", {0.5, 0}}}), 0.0,
               "flat (x-independent)", "closed-form"});
  v.push_back({"randers_var2", "position-dependent Randers metric",
               with_schema({{"kind", "randers"},
                            {"n", 2},
                            {"alpha", {{"1 + 0.2*x2^2", 0}, {0, 1}}},
                            {"beta", {"0.3*cos(x2)", "0.2*x1"}}}),
               std::nullopt, "not constant", "closed-form"});
  v.push_back({"funk2", "Funk metric on the unit disc", with_schema({{"kind", "funk"}, {"n", 2}}), -0.25, "constant",
               "literature"});
  v.push_back({"funk3", "Funk metric on the unit ball", with_schema({{"kind", "funk"}, {"n", 3}}), -0.25, "constant",
               "literature"});
  v.push_back({"warped_sin_s2", "sin-warped product over the unit 2-sphere (round 3-sphere)",
               with_schema({{"kind", "warped"}, {"profile", {{"kind", "analytic"}, {"name", "sin"}}}, {"base", unit_s2}}),
               1.0, "constant", "closed-form"});
  v.push_back({"warped_sinh_randers", "sinh-warped product over a Randers plane, b = 0.3",
               with_schema({{"kind", "warped"}, {"profile", {{"kind", "analytic"}, {"name", "sinh"}}}, {"base", randers03}}),
               std::nullopt, "not constant", "closed-form"});
  v.push_back({"sphere_construction", "constant-curvature construction with K = 1 over the unit 2-sphere",
               with_schema({{"kind", "sphere_construction"}, {"K", 1.0}, {"base", unit_s2}}), std::nullopt,
               "constant (value measured)", "measured"});
  return v;
}

}  // namespace

const std::vector<BuiltinEntry>& list_builtins() {
  static const std::vector<BuiltinEntry> entries = make_builtins();
  return entries;
}

const BuiltinEntry& builtin(const std::string& name) {
  for (const auto& e : list_builtins()) {
    if (e.name == name) return e;
  }
  throw Error(ErrorKind::Spec, "no builtin metric named '" + name + "'");
}

}  // namespace finsler
