#include "finsler/chart.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <limits>
#include <cmath>

#include "finsler/connection.hpp"
#include "finsler/error.hpp"
#include "finsler/sampling.hpp"

namespace finsler {

bool Chart::contains(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim) return false;
  for (double v : x) {
    if (!std::isfinite(v)) return false;
  }
  return !domain || domain(x);
}

Chart Chart::euclidean(int dim, std::string label, double half_width) {
  Chart c;
  c.dim = dim;
  c.label = std::move(label);
  c.sample_box.assign(static_cast<std::size_t>(dim), {-half_width, half_width});
  return c;
}

FinslerStructure::FinslerStructure(Chart chart, PhaseFunction<Jet> f2_jet, PhaseFunction<double> f2_real,
                                   StructureInfo info)
    : chart_(std::move(chart)), f2_jet_(std::move(f2_jet)), f2_real_(std::move(f2_real)), info_(std::move(info)) {
  if (chart_.dim < 1) throw Error(ErrorKind::InvalidArgument, "chart dimension must be positive");
  if (static_cast<int>(chart_.sample_box.size()) != chart_.dim) {
    throw Error(ErrorKind::InvalidArgument, "sample box does not match the chart dimension");
  }
}

double FinslerStructure::F(std::span<const double> x, std::span<const double> y) const {
  const double f2 = f2_real_(x, y);
  return std::sqrt(std::max(f2, 0.0));
}

void FinslerStructure::check(const LineElement& le) const {
  if (static_cast<int>(le.x.size()) != dim() || static_cast<int>(le.y.size()) != dim()) {
    throw Error(ErrorKind::InvalidArgument, "line element dimension does not match " + label());
  }
  if (std::all_of(le.y.begin(), le.y.end(), [](double v) { return v == 0.0; })) {
    throw Error(ErrorKind::InvalidArgument, "direction y must be nonzero");
  }
  if (!chart_.contains(le.x)) throw Error(ErrorKind::InvalidArgument, "base point outside the domain of " + label());
}

bool FinslerStructure::near_nonsmooth_axis(std::span<const double> y, double half_angle) const {
  if (!info_.nonsmooth_axis) return false;
  const auto k = static_cast<std::size_t>(*info_.nonsmooth_axis);
  double perp = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    total += y[i] * y[i];
    if (i != k) perp += y[i] * y[i];
  }
  if (total == 0.0) return true;
  return std::sqrt(perp / total) < std::sin(half_angle);
}

std::vector<double> Immersion::jacobian(std::span<const double> u) const {
  auto space = JetSpace::get(source_dim, 1);
  std::vector<Jet> uj;
  for (int a = 0; a < source_dim; ++a) uj.push_back(Jet::variable(space, a, u[static_cast<std::size_t>(a)]));
  const auto x = map(uj);
  std::vector<double> B(static_cast<std::size_t>(target_dim * source_dim), 0.0);
  for (int k = 0; k < target_dim; ++k) {
    const Jet& xk = x[static_cast<std::size_t>(k)];
    if (xk.is_scalar()) continue;
    for (int a = 0; a < source_dim; ++a) {
      B[static_cast<std::size_t>(k * source_dim + a)] = xk.coefficients()[static_cast<std::size_t>(1 + a)];
    }
  }
  return B;
}

Vector Immersion::point(std::span<const double> u) const {
  std::vector<Jet> uj(u.begin(), u.end());
  Vector out;
  for (const Jet& j : map(uj)) out.push_back(j.value());
  return out;
}

ValidationReport validate_structure(const FinslerStructure& F, int samples, std::uint64_t seed,
                                    double homogeneity_tolerance) {
  if (samples < 1) throw Error(ErrorKind::InvalidArgument, "samples must be at least 1");
  ValidationReport report;
  report.label = F.label();
  report.homogeneity_tolerance = homogeneity_tolerance;
  report.samples.resize(static_cast<std::size_t>(samples));
  const int n = F.dim();
  // Sampling itself may throw DomainEmpty; that escapes to the caller.
  parallel_for(report.samples.size(), [&](std::size_t i) {
    SampleStream rng(seed, i);
    ValidationSample& s = report.samples[i];
    s.le = sample_line_element(F, rng);
    const double lambda = rng.uniform(0.0, 4.0);
    try {
      const double f = F.F(s.le.x, s.le.y);
      s.value = f;
      if (!(f > 0.0)) {
        s.failure = "F is not positive";
        return;
      }
      double worst = 0.0;
      for (double l : {2.0, lambda > 0.0 ? lambda : 2.0}) {
        Vector ly = s.le.y;
        for (double& c : ly) c *= l;
        worst = std::max(worst, std::abs(F.F(s.le.x, ly) - l * f) / f);
      }
      s.homogeneity_error = worst;

      auto space = JetSpace::get(n, 2);
      std::vector<Jet> xj(s.le.x.begin(), s.le.x.end());
      std::vector<Jet> yj;
      for (int k = 0; k < n; ++k) yj.push_back(Jet::variable(space, k, s.le.y[static_cast<std::size_t>(k)]));
      const Jet f2 = F.F2(std::span<const Jet>(xj), std::span<const Jet>(yj));
      double euler = 0.0;
      Eigen::MatrixXd g(n, n);
      for (int a = 0; a < n; ++a) {
        const int ia[] = {a};
        euler += s.le.y[static_cast<std::size_t>(a)] * f2.partial(ia);
        for (int b = 0; b < n; ++b) {
          const int ab[] = {a, b};
          g(a, b) = 0.5 * f2.partial(ab);
        }
      }
      s.euler_error = std::abs(euler - 2.0 * f2.value()) / f2.value();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g, Eigen::EigenvaluesOnly);
      s.min_eigenvalue = eig.eigenvalues().minCoeff();
    } catch (const Error& e) {
      s.failure = e.what();
    }
  });

  report.pass = true;
  report.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (const auto& s : report.samples) {
    report.max_homogeneity_error = std::max(report.max_homogeneity_error, s.homogeneity_error);
    report.max_euler_error = std::max(report.max_euler_error, s.euler_error);
    report.min_eigenvalue = std::min(report.min_eigenvalue, s.min_eigenvalue);
    if (!s.failure.empty() || s.homogeneity_error > homogeneity_tolerance || s.euler_error > homogeneity_tolerance ||
        !(s.min_eigenvalue > 0.0)) {
      report.pass = false;
    }
  }
  return report;
}

double f_squared_norm(const FinslerStructure& F, const LineElement& le, std::span<const double> X) {
  const Matrix g = fundamental_tensor(F, le);
  const int n = F.dim();
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) s += g(i, j) * X[static_cast<std::size_t>(i)] * X[static_cast<std::size_t>(j)];
  }
  return s;
}

namespace {

// x(u) and B(u) v over jets: expand the immersion one order deeper around the
// value of u, differentiate, then substitute the displacement u - u0.
std::pair<std::vector<Jet>, std::vector<Jet>> pushforward(const Immersion& im, std::span<const Jet> u,
                                                          std::span<const Jet> v) {
  const int m = im.source_dim;
  int order = 0;
  for (const Jet& j : u) order = std::max(order, j.is_scalar() ? 0 : j.order());
  for (const Jet& j : v) order = std::max(order, j.is_scalar() ? 0 : j.order());
  auto local = JetSpace::get(m, order + 1);
  std::vector<Jet> ul;
  std::vector<Jet> disp;
  for (int a = 0; a < m; ++a) {
    const double u0 = u[static_cast<std::size_t>(a)].value();
    ul.push_back(Jet::variable(local, a, u0));
    disp.push_back(u[static_cast<std::size_t>(a)] - u0);
  }
  const auto X = im.map(ul);
  std::vector<Jet> x;
  std::vector<Jet> w;
  for (int k = 0; k < im.target_dim; ++k) {
    const Jet& Xk = X[static_cast<std::size_t>(k)];
    if (Xk.is_scalar()) {
      x.push_back(Xk);
      w.push_back(Jet(0.0));
      continue;
    }
    x.push_back(compose(Xk, disp));
    Jet wk(0.0);
    for (int a = 0; a < m; ++a) wk += compose(Xk.derivative(a), disp) * v[static_cast<std::size_t>(a)];
    w.push_back(wk);
  }
  return {x, w};
}

}  // namespace

FinslerStructure restrict_to_hypersurface(const FinslerStructure& F, const Immersion& immersion) {
  if (immersion.target_dim != F.dim()) {
    throw Error(ErrorKind::InvalidArgument, "immersion target dimension does not match the structure");
  }
  const int m = immersion.source_dim;
  Chart chart;
  chart.dim = m;
  chart.label = F.chart().label + "|restricted";
  chart.sample_box = immersion.sample_box;
  const Chart outer = F.chart();
  const Immersion im = immersion;
  chart.domain = [outer, im](std::span<const double> u) {
    if (im.domain && !im.domain(u)) return false;
    return outer.contains(im.point(u));
  };

  for (std::uint64_t i = 0; i < 16; ++i) {
    SampleStream rng(0x5eed, i);
    const Vector u = sample_point(chart, rng);
    const auto B = im.jacobian(u);
    Eigen::MatrixXd M(im.target_dim, m);
    for (int k = 0; k < im.target_dim; ++k) {
      for (int a = 0; a < m; ++a) M(k, a) = B[static_cast<std::size_t>(k * m + a)];
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    const auto sv = svd.singularValues();
    if (sv.size() < m || !(sv(m - 1) > 1e-10 * std::max(1.0, sv(0)))) {
      throw Error(ErrorKind::ImmersionDegenerate, "immersion has rank below " + std::to_string(m));
    }
  }

  const FinslerStructure outer_F = F;
  PhaseFunction<Jet> jet_fn = [outer_F, im](std::span<const Jet> u, std::span<const Jet> v) {
    auto [x, w] = pushforward(im, u, v);
    return outer_F.F2(std::span<const Jet>(x), std::span<const Jet>(w));
  };
  PhaseFunction<double> real_fn = [outer_F, im](std::span<const double> u, std::span<const double> v) {
    const auto B = im.jacobian(u);
    const Vector x = im.point(u);
    Vector w(static_cast<std::size_t>(im.target_dim), 0.0);
    for (int k = 0; k < im.target_dim; ++k) {
      for (int a = 0; a < im.source_dim; ++a) {
        w[static_cast<std::size_t>(k)] += B[static_cast<std::size_t>(k * im.source_dim + a)] * v[static_cast<std::size_t>(a)];
      }
    }
    return outer_F.F2(x, w);
  };
  StructureInfo info;
  info.label = F.label() + "|restricted";
  info.reversible = F.info().reversible;
  info.riemannian = F.info().riemannian;
  return FinslerStructure(std::move(chart), std::move(jet_fn), std::move(real_fn), std::move(info));
}

}  // namespace finsler
