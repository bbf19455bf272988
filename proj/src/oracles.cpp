#include "finsler/oracles.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "finsler/error.hpp"

namespace finsler {

namespace {

Eigen::MatrixXd to_eigen(const Matrix& m) {
  Eigen::MatrixXd e(m.dim(), m.dim());
  for (int i = 0; i < m.dim(); ++i) {
    for (int j = 0; j < m.dim(); ++j) e(i, j) = m(i, j);
  }
  return e;
}

// dg(k)(i, j) = d g_ij / dx^k.
std::vector<Matrix> metric_gradient(const MetricField& g, std::span<const double> x, const FDConfig& cfg) {
  const int n = static_cast<int>(x.size());
  std::vector<Matrix> dg(static_cast<std::size_t>(n), Matrix(n));
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      RealFunction gij = [&g, i, j](std::span<const double> z) { return g(z)(i, j); };
      for (int k = 0; k < n; ++k) {
        const int idx[1] = {k};
        const double d = fd_partial(gij, x, idx, cfg).value;
        dg[static_cast<std::size_t>(k)](i, j) = d;
        dg[static_cast<std::size_t>(k)](j, i) = d;
      }
    }
  }
  return dg;
}

}  // namespace

Tensor3 levi_civita_fd(const MetricField& g, std::span<const double> x, const FDConfig& cfg) {
  const int n = static_cast<int>(x.size());
  const auto dg = metric_gradient(g, x, cfg);
  const Eigen::MatrixXd g_inv = to_eigen(g(x)).inverse();
  Tensor3 gamma(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int h = 0; h < n; ++h) {
          s += g_inv(i, h) * (dg[static_cast<std::size_t>(j)](h, k) + dg[static_cast<std::size_t>(k)](h, j) -
                              dg[static_cast<std::size_t>(h)](j, k));
        }
        gamma(i, j, k) = 0.5 * s;
      }
    }
  }
  return gamma;
}

Tensor3 sphere_polar_christoffel(int n, double radius, std::span<const double> x) {
  (void)radius;  // Christoffel symbols are scale invariant
  // g_ii = r^2 prod_{m<i} sin^2 x_m, so d_k log g_ii = 2 cot x_k for k < i.
  Tensor3 gamma(n);
  std::vector<double> h(static_cast<std::size_t>(n), 1.0);
  for (int i = 1; i < n; ++i) {
    const double s = std::sin(x[static_cast<std::size_t>(i - 1)]);
    h[static_cast<std::size_t>(i)] = h[static_cast<std::size_t>(i - 1)] * s * s;
  }
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < i; ++k) {
      const double cot = std::cos(x[static_cast<std::size_t>(k)]) / std::sin(x[static_cast<std::size_t>(k)]);
      // Gamma^i_ik = 1/2 d_k log g_ii
      gamma(i, i, k) = cot;
      gamma(i, k, i) = cot;
      // Gamma^k_ii = -1/2 d_k g_ii / g_kk
      gamma(k, i, i) = -cot * h[static_cast<std::size_t>(i)] / h[static_cast<std::size_t>(k)];
    }
  }
  return gamma;
}

Tensor4 riemann_fd(const MetricField& g, std::span<const double> x, const FDConfig& cfg) {
  const int n = static_cast<int>(x.size());
  FDConfig inner = cfg;
  inner.step = std::max(cfg.step, 1e-4);
  FDConfig outer = cfg;
  outer.step = std::max(cfg.step, 1e-3);
  outer.richardson_levels = std::max(cfg.richardson_levels, 3);
  const Tensor3 gamma = levi_civita_fd(g, x, inner);
  // dgamma[l](i, j, k) = d_l Gamma^i_jk
  std::vector<Tensor3> dgamma(static_cast<std::size_t>(n), Tensor3(n));
  for (int l = 0; l < n; ++l) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = j; k < n; ++k) {
          RealFunction c = [&g, &inner, i, j, k](std::span<const double> z) { return levi_civita_fd(g, z, inner)(i, j, k); };
          const int idx[1] = {l};
          const double d = fd_partial(c, x, idx, outer).value;
          dgamma[static_cast<std::size_t>(l)](i, j, k) = d;
          dgamma[static_cast<std::size_t>(l)](i, k, j) = d;
        }
      }
    }
  }
  Tensor4 R(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
          double r = dgamma[static_cast<std::size_t>(k)](i, l, j) - dgamma[static_cast<std::size_t>(l)](i, k, j);
          for (int m = 0; m < n; ++m) r += gamma(i, k, m) * gamma(m, l, j) - gamma(i, l, m) * gamma(m, k, j);
          R(i, j, k, l) = r;
        }
      }
    }
  }
  return R;
}

double sectional_curvature_fd(const MetricField& g, std::span<const double> x, std::span<const double> y,
                              std::span<const double> X, const FDConfig& cfg) {
  const int n = static_cast<int>(x.size());
  const Tensor4 R = riemann_fd(g, x, cfg);
  const Matrix gm = g(x);
  // R(X, y)y contracted with X.
  double num = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int m = 0; m < n; ++m) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          for (int l = 0; l < n; ++l) {
            num += gm(m, i) * X[static_cast<std::size_t>(m)] * R(i, j, k, l) * y[static_cast<std::size_t>(j)] *
                   X[static_cast<std::size_t>(k)] * y[static_cast<std::size_t>(l)];
          }
        }
      }
    }
  }
  double xx = 0.0, yy = 0.0, xy = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      xx += gm(i, j) * X[static_cast<std::size_t>(i)] * X[static_cast<std::size_t>(j)];
      yy += gm(i, j) * y[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j)];
      xy += gm(i, j) * X[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j)];
    }
  }
  const double den = xx * yy - xy * xy;
  if (!(den > 1e-12 * xx * yy)) throw Error(ErrorKind::FlagDegenerate, "flag is degenerate");
  return num / den;
}

Vector spray_fd(const FinslerStructure& F, const LineElement& le, const FDConfig& cfg) {
  const int n = F.dim();
  Matrix hess_yy(n);
  Matrix hess_xy(n);  // (k, l): d^2 F^2 / dx^k dy^l
  Vector grad_x(static_cast<std::size_t>(n));
  for (int l = 0; l < n; ++l) {
    const int idx_x[1] = {l};
    grad_x[static_cast<std::size_t>(l)] = fd_partial_f2(F, le, idx_x, cfg).value;
    for (int k = 0; k < n; ++k) {
      const int yy[2] = {n + k, n + l};
      hess_yy(k, l) = 0.5 * fd_partial_f2(F, le, yy, cfg).value;
      const int xy[2] = {k, n + l};
      hess_xy(k, l) = fd_partial_f2(F, le, xy, cfg).value;
    }
  }
  const Eigen::MatrixXd g_inv = to_eigen(hess_yy).inverse();
  Vector G(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    for (int l = 0; l < n; ++l) {
      double t = -grad_x[static_cast<std::size_t>(l)];
      for (int k = 0; k < n; ++k) t += hess_xy(k, l) * le.y[static_cast<std::size_t>(k)];
      G[static_cast<std::size_t>(i)] += 0.25 * g_inv(i, l) * t;
    }
  }
  return G;
}

Vector funk_spray(const LineElement& le) {
  double xx = 0.0, yy = 0.0, xy = 0.0;
  for (std::size_t i = 0; i < le.x.size(); ++i) {
    xx += le.x[i] * le.x[i];
    yy += le.y[i] * le.y[i];
    xy += le.x[i] * le.y[i];
  }
  const double d = 1.0 - xx;
  const double F = (std::sqrt(yy * d + xy * xy) + xy) / d;
  Vector G(le.y.size());
  for (std::size_t i = 0; i < G.size(); ++i) G[i] = 0.5 * F * le.y[i];
  return G;
}

}  // namespace finsler
