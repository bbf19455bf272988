#include "finsler/warped.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "finsler/connection.hpp"
#include "finsler/error.hpp"
#include "finsler/sampling.hpp"

namespace finsler {

namespace {

template <class Rho, class DRho>
WarpProfile make_profile(std::string name, Rho rho, DRho drho, double t_min, double t_max,
                         std::pair<double, double> sample) {
  WarpProfile p;
  p.name = std::move(name);
  p.rho = [rho](const Jet& t) { return Jet(rho(t)); };
  p.rho_prime = [drho](const Jet& t) { return Jet(drho(t)); };
  p.derivatives = [rho, drho](double t) {
    auto space = JetSpace::get(1, 2);
    const Jet d = Jet(drho(Jet::variable(space, 0, t)));
    std::array<double, 4> out{rho(t), d.value(), 0.0, 0.0};
    if (!d.is_scalar()) {
      out[2] = d.coefficients()[1];
      out[3] = 2.0 * d.coefficients()[2];
    }
    return out;
  };
  p.t_min = t_min;
  p.t_max = t_max;
  p.sample_interval = sample;
  return p;
}

double param(const std::map<std::string, double>& params, const std::string& key, double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

char slot(int i) { return i == 0 ? 't' : 'b'; }

// The base line element under le. A Riemannian base does not depend on v, so
// a vanishing v is replaced by a coordinate direction.
LineElement base_element(const WarpedStructure& ws, const LineElement& le) {
  LineElement b;
  b.x.assign(le.x.begin() + 1, le.x.end());
  b.y.assign(le.y.begin() + 1, le.y.end());
  const bool zero = std::all_of(b.y.begin(), b.y.end(), [](double v) { return v == 0.0; });
  if (zero) {
    if (!ws.base.info().riemannian) {
      throw Error(ErrorKind::NonSmoothLocus, "direction along the t-axis over a non-Riemannian base");
    }
    b.y[0] = 1.0;
  }
  return b;
}

std::array<double, 4> profile_at(const WarpedStructure& ws, double t) {
  const auto d = ws.profile.derivatives(t);
  if (d[1] == 0.0) throw Error(ErrorKind::CriticalPoint, "rho' vanishes at t = " + std::to_string(t));
  return d;
}

Tensor4 raise_last_three(const Tensor4& R, const Matrix& g_inv) {
  const int n = R.dim();
  Tensor4 a = R;
  Tensor4 b(n);
  for (int pos = 1; pos <= 3; ++pos) {
    for (int i = 0; i < n; ++i) {
      for (int h = 0; h < n; ++h) {
        for (int j = 0; j < n; ++j) {
          for (int k = 0; k < n; ++k) {
            double s = 0.0;
            for (int r = 0; r < n; ++r) {
              if (pos == 1) s += g_inv(h, r) * a(i, r, j, k);
              if (pos == 2) s += g_inv(j, r) * a(i, h, r, k);
              if (pos == 3) s += g_inv(k, r) * a(i, h, j, r);
            }
            b(i, h, j, k) = s;
          }
        }
      }
    }
    std::swap(a, b);
  }
  return a;
}

}  // namespace

WarpProfile WarpProfile::analytic(const std::string& name, const std::map<std::string, double>& params) {
  constexpr double pi = std::numbers::pi;
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (name == "linear") {
    const double a = param(params, "a", 1.0);
    const double b = param(params, "b", 0.0);
    if (a == 0.0) throw Error(ErrorKind::Spec, "linear profile needs a != 0");
    return make_profile(
        "linear", [a, b]<class T>(const T& t) { return T(t * a + b); }, [a]<class T>(const T&) { return T(a); }, -inf,
        inf, {0.2, 2.0});
  }
  if (name == "sin") {
    return make_profile(
        "sin", []<class T>(const T& t) { using std::cos; return T(-cos(t)); },
        []<class T>(const T& t) { using std::sin; return T(sin(t)); }, 0.0, pi, {0.2, pi - 0.2});
  }
  if (name == "sinh") {
    return make_profile(
        "sinh", []<class T>(const T& t) { using std::cosh; return T(cosh(t)); },
        []<class T>(const T& t) { using std::sinh; return T(sinh(t)); }, 0.0, inf, {0.2, 2.0});
  }
  if (name == "t") {
    return make_profile(
        "t", []<class T>(const T& t) { return T(t * t * 0.5); }, []<class T>(const T& t) { return T(t); }, 0.0, inf,
        {0.2, 2.0});
  }
  if (name == "cos_shift") {
    const double K = param(params, "K", 1.0);
    if (!(K > 0.0)) throw Error(ErrorKind::Spec, "cos_shift profile needs K > 0");
    const double a = param(params, "a", -1.0 / K);
    const double b = param(params, "b", 0.0);
    if (a == 0.0) throw Error(ErrorKind::Spec, "cos_shift profile needs a != 0");
    const double T0 = pi / K;
    return make_profile(
        "cos_shift", [K, a, b]<class T>(const T& t) { using std::cos; return T(cos(t * K) * a + b); },
        [K, a]<class T>(const T& t) { using std::sin; return T(sin(t * K) * (-a * K)); }, 0.0, T0,
        {0.2 / K, (pi - 0.2) / K});
  }
  throw Error(ErrorKind::Spec, "unknown analytic profile '" + name + "'");
}

WarpedStructure build_warped(const WarpProfile& profile, const FinslerStructure& base) {
  const auto [lo, hi] = profile.sample_interval;
  if (!(lo < hi) || lo <= profile.t_min || hi >= profile.t_max) {
    throw Error(ErrorKind::InvalidArgument, "profile sample interval must lie inside its domain");
  }
  constexpr int kGrid = 1000;
  double sign = 0.0;
  for (int i = 0; i <= kGrid; ++i) {
    const double t = lo + (hi - lo) * i / kGrid;
    const double d = profile.derivatives(t)[1];
    if (d == 0.0 || (sign != 0.0 && d * sign < 0.0)) {
      throw Error(ErrorKind::CriticalPoint, "rho' vanishes near t = " + std::to_string(t));
    }
    sign = d;
  }

  const int m = base.dim();
  Chart chart;
  chart.dim = m + 1;
  chart.label = profile.name + "*" + base.chart().label;
  chart.sample_box.push_back(profile.sample_interval);
  for (const auto& r : base.chart().sample_box) chart.sample_box.push_back(r);
  const Chart base_chart = base.chart();
  const double t_min = profile.t_min;
  const double t_max = profile.t_max;
  chart.domain = [base_chart, t_min, t_max](std::span<const double> x) {
    return x[0] > t_min && x[0] < t_max && base_chart.contains(x.subspan(1));
  };

  const FinslerStructure b = base;
  const auto rp_jet = profile.rho_prime;
  const auto derivs = profile.derivatives;
  PhaseFunction<Jet> jet_fn = [b, rp_jet](std::span<const Jet> x, std::span<const Jet> y) {
    const Jet r = rp_jet(x[0]);
    return y[0] * y[0] + r * r * b.F2(x.subspan(1), y.subspan(1));
  };
  PhaseFunction<double> real_fn = [b, derivs](std::span<const double> x, std::span<const double> y) {
    const double r = derivs(x[0])[1];
    return y[0] * y[0] + r * r * b.F2(x.subspan(1), y.subspan(1));
  };
  StructureInfo info;
  info.label = profile.name + "*" + base.label();
  info.reversible = base.info().reversible;
  info.riemannian = base.info().riemannian;
  if (!base.info().riemannian) info.nonsmooth_axis = 0;
  return {profile, base, FinslerStructure(std::move(chart), std::move(jet_fn), std::move(real_fn), std::move(info))};
}

Tensor3 predicted_cartan(const WarpedStructure& ws, const LineElement& le) {
  ws.total.check(le);
  const auto d = profile_at(ws, le.x[0]);
  const LineElement ble = base_element(ws, le);
  const auto bundle = connection_bundle(ws.base, ble);
  const int n = ws.total.dim();
  Tensor3 P(n, 0.0);
  for (int a = 1; a < n; ++a) {
    P(a, 0, a) = d[2] / d[1];
    P(a, a, 0) = d[2] / d[1];
    for (int g = 1; g < n; ++g) {
      for (int b = 1; b < n; ++b) P(a, g, b) = bundle.Gamma_star(a - 1, g - 1, b - 1);
    }
  }
  for (int g = 1; g < n; ++g) {
    for (int b = 1; b < n; ++b) P(0, g, b) = -d[1] * d[2] * bundle.g(g - 1, b - 1);
  }
  return P;
}

Tensor4 predicted_curvature(const WarpedStructure& ws, const LineElement& le, int sigma) {
  ws.total.check(le);
  const auto d = profile_at(ws, le.x[0]);
  const LineElement ble = base_element(ws, le);
  const auto cb = curvature_bundle(ws.base, ble);
  const Matrix& f = cb.g;
  const int n = ws.total.dim();
  const double s = sigma;
  const double c = d[3] / d[1];
  const double rr = d[2] * d[2];
  Tensor4 P(n, 0.0);
  for (int a = 1; a < n; ++a) {
    P(a, 0, a, 0) = s * c;
    P(a, 0, 0, a) = -s * c;
    for (int h = 1; h < n; ++h) {
      for (int j = 1; j < n; ++j) {
        for (int k = 1; k < n; ++k) {
          double v = cb.R_h(a - 1, h - 1, j - 1, k - 1);
          if (a == k) v -= s * rr * f(j - 1, h - 1);
          if (a == j) v += s * rr * f(k - 1, h - 1);
          P(a, h, j, k) = v;
        }
      }
    }
  }
  for (int b = 1; b < n; ++b) {
    for (int g = 1; g < n; ++g) {
      P(0, b, g, 0) = -s * d[1] * d[3] * f(b - 1, g - 1);
      P(0, b, 0, g) = s * d[1] * d[3] * f(b - 1, g - 1);
    }
  }
  return P;
}

VerifyReport verify_adapted(const WarpedStructure& ws, int samples, std::uint64_t seed, int sigma, double tolerance) {
  if (samples < 1) throw Error(ErrorKind::InvalidArgument, "samples must be at least 1");
  struct Local {
    std::map<std::string, double> cartan;
    std::map<std::string, double> curvature;
  };
  std::vector<Local> local(static_cast<std::size_t>(samples));
  const int n = ws.total.dim();
  parallel_for(local.size(), [&](std::size_t idx) {
    SampleStream rng(seed, idx);
    const LineElement le = sample_line_element(ws.total, rng);
    const Tensor3 G = cartan_coefficients(ws.total, le);
    const Tensor3 GP = predicted_cartan(ws, le);
    const Tensor4 R = h_curvature(ws.total, le);
    const Tensor4 RP = predicted_curvature(ws, le, sigma);
    Local& out = local[idx];
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          const std::string key = std::string("Gamma^") + slot(i) + "_" + slot(j) + slot(k);
          const double e = std::abs(G(i, j, k) - GP(i, j, k)) / std::max(1.0, std::abs(GP(i, j, k)));
          out.cartan[key] = std::max(out.cartan[key], e);
          for (int l = 0; l < n; ++l) {
            const std::string rkey = std::string("R^") + slot(i) + "_" + slot(j) + slot(k) + slot(l);
            const double re = std::abs(R(i, j, k, l) - RP(i, j, k, l)) / std::max(1.0, std::abs(RP(i, j, k, l)));
            out.curvature[rkey] = std::max(out.curvature[rkey], re);
          }
        }
      }
    }
  });

  VerifyReport report;
  report.label = ws.total.label();
  report.samples = samples;
  report.sigma = sigma;
  report.tolerance = tolerance;
  std::map<std::string, double> cartan;
  std::map<std::string, double> curvature;
  for (const auto& l : local) {
    for (const auto& [k, v] : l.cartan) cartan[k] = std::max(cartan[k], v);
    for (const auto& [k, v] : l.curvature) curvature[k] = std::max(curvature[k], v);
  }
  for (const auto& [k, v] : cartan) {
    report.cartan_components.push_back({k, v});
    report.max_error_cartan = std::max(report.max_error_cartan, v);
  }
  for (const auto& [k, v] : curvature) {
    report.curvature_components.push_back({k, v});
    report.max_error_curvature = std::max(report.max_error_curvature, v);
  }
  report.pass_cartan = report.max_error_cartan <= tolerance;
  report.pass_curvature = report.max_error_curvature <= tolerance;
  return report;
}

SigmaResolution resolve_sigma(int samples, std::uint64_t seed) {
  auto flat = FinslerStructure::from_squared(
      Chart::euclidean(2, "flat2"),
      []<class S>(std::span<const S>, std::span<const S> y) { return S(y[0] * y[0] + y[1] * y[1]); },
      StructureInfo{"flat2", true, true, std::nullopt});
  const auto ws = build_warped(WarpProfile::analytic("sin"), flat);
  SigmaResolution r;
  r.error_plus = verify_adapted(ws, samples, seed, 1).max_error_curvature;
  r.error_minus = verify_adapted(ws, samples, seed, -1).max_error_curvature;
  r.sigma = r.error_plus <= r.error_minus ? 1 : -1;
  return r;
}

SecondFundamentalForm second_fundamental_form(const WarpedStructure& ws, const LineElement& le) {
  ws.total.check(le);
  if (le.y[0] != 0.0) throw Error(ErrorKind::InvalidArgument, "line element is not tangent to its t-level");
  const auto d = profile_at(ws, le.x[0]);
  const auto rp = ws.profile.rho_prime;
  // Unit normal i_k = rho_k / |grad rho|; in adapted coordinates g^{tt} = 1.
  CovectorField normal = [rp](std::span<const Jet> x, std::span<const Jet>) {
    const Jet r = rp(x[0]);
    std::vector<Jet> w(x.size(), Jet(0.0));
    w[0] = r / sqrt(r * r);
    return w;
  };
  const Matrix M = h_covariant_covector(ws.total, normal, le);
  const Matrix g = fundamental_tensor(ws.total, le);
  const int m = ws.total.dim() - 1;
  SecondFundamentalForm out;
  out.h_form = Matrix(m);
  out.g_level = Matrix(m);
  out.h = -d[2] / std::abs(d[1]);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      out.h_form(a, b) = -M(a + 1, b + 1);
      out.g_level(a, b) = g(a + 1, b + 1);
      out.umbilicity_defect = std::max(out.umbilicity_defect, std::abs(out.h_form(a, b) - out.h * out.g_level(a, b)));
    }
  }
  return out;
}

double norm_squared(const Tensor4& R, const Matrix& g, const Matrix& g_inv) {
  const int n = R.dim();
  const Tensor4 up = raise_last_three(R, g_inv);
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < n; ++a) {
      for (int h = 0; h < n; ++h) {
        for (int j = 0; j < n; ++j) {
          for (int k = 0; k < n; ++k) s += g(i, a) * R(i, h, j, k) * up(a, h, j, k);
        }
      }
    }
  }
  return s;
}

namespace {

Matrix inverse(const Matrix& g) {
  const int n = g.dim();
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = g(i, j);
  }
  const Eigen::MatrixXd inv = m.inverse();
  Matrix out(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out(i, j) = inv(i, j);
  }
  return out;
}

}  // namespace

NormDecomposition curvature_norm_decomposition(const WarpedStructure& ws, const LineElement& le) {
  ws.total.check(le);
  const auto d = profile_at(ws, le.x[0]);
  const int n = ws.total.dim();
  const int m = n - 1;
  const auto cb = curvature_bundle(ws.total, le);
  const Matrix g_inv = inverse(cb.g);
  NormDecomposition out;
  out.total = norm_squared(cb.R_h, cb.g, g_inv);

  Tensor4 axis = cb.R_h;
  for (int i = 1; i < n; ++i) {
    for (int h = 1; h < n; ++h) {
      for (int j = 1; j < n; ++j) {
        for (int k = 1; k < n; ++k) axis(i, h, j, k) = 0.0;
      }
    }
  }
  out.axis_part_direct = norm_squared(axis, cb.g, g_inv);

  const auto bcb = curvature_bundle(ws.base, base_element(ws, le));
  const Matrix& f = bcb.g;
  Tensor4 T = bcb.R_h;
  const double rr = d[2] * d[2];
  for (int a = 0; a < m; ++a) {
    for (int h = 0; h < m; ++h) {
      for (int j = 0; j < m; ++j) {
        for (int k = 0; k < m; ++k) {
          if (a == k) T(a, h, j, k) -= rr * f(j, h);
          if (a == j) T(a, h, j, k) += rr * f(k, h);
        }
      }
    }
  }
  const double rp4 = std::pow(d[1], 4);
  out.base_part = norm_squared(T, f, inverse(f)) / rp4;
  const double c = d[3] / d[1];
  out.axis_part = 4.0 * n * c * c;
  out.axis_part_count = 4.0 * (n - 1) * c * c;
  return out;
}

SphereConstruction build_sphere_metric(double K, const FinslerStructure& base, int base_samples, std::uint64_t seed) {
  if (!(K > 0.0)) throw Error(ErrorKind::InvalidArgument, "K must be positive");
  double base_curvature = 1.0 / (K * K);
  if (base.dim() >= 2) {
    const ScanReport scan = constancy_scan(base, base_samples, seed);
    if (!(scan.mean > 0.0) || scan.std / std::abs(scan.mean) > 1e-4) {
      throw Error(ErrorKind::ConstructionPrecondition,
                  "base curvature is not a positive constant (mean " + std::to_string(scan.mean) + ", std " +
                      std::to_string(scan.std) + ")");
    }
    base_curvature = scan.mean;
  }
  const double scale = base_curvature * base_curvature;
  const FinslerStructure b = base;
  StructureInfo info = base.info();
  info.label = base.label() + "*scaled";
  FinslerStructure scaled(
      base.chart(),
      [b, scale](std::span<const Jet> x, std::span<const Jet> y) { return b.F2(x, y) * scale; },
      [b, scale](std::span<const double> x, std::span<const double> y) { return b.F2(x, y) * scale; }, info);
  SphereConstruction out{build_warped(WarpProfile::analytic("cos_shift", {{"K", K}}), scaled), K, base_curvature,
                         scale};
  return out;
}

}  // namespace finsler
