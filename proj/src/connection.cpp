#include "finsler/connection.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "finsler/error.hpp"

namespace finsler {

namespace detail {

namespace {

void check_conditioning(const SquareTensor<Jet, 2>& g) {
  const int n = g.dim();
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = g(i, j).value();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > kMaxConditionNumber) {
    std::ostringstream os;
    os << "fundamental tensor eigenvalues in [" << lo << ", " << hi << "]";
    throw Error(ErrorKind::SingularMetric, os.str());
  }
}

SquareTensor<Jet, 2> invert(const SquareTensor<Jet, 2>& g) {
  const int n = g.dim();
  SquareTensor<Jet, 2> a = g;
  SquareTensor<Jet, 2> inv(n, Jet(0.0));
  for (int i = 0; i < n; ++i) inv(i, i) = Jet(1.0);
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(a(r, col).value()) > std::abs(a(pivot, col).value())) pivot = r;
    }
    if (pivot != col) {
      for (int c = 0; c < n; ++c) {
        std::swap(a(col, c), a(pivot, c));
        std::swap(inv(col, c), inv(pivot, c));
      }
    }
    const Jet scale = reciprocal(a(col, col));
    for (int c = 0; c < n; ++c) {
      a(col, c) = a(col, c) * scale;
      inv(col, c) = inv(col, c) * scale;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const Jet factor = a(r, col);
      if (factor.value() == 0.0 && std::all_of(factor.coefficients().begin(), factor.coefficients().end(),
                                               [](double c) { return c == 0.0; })) {
        continue;
      }
      for (int c = 0; c < n; ++c) {
        a(r, c) -= factor * a(col, c);
        inv(r, c) -= factor * inv(col, c);
      }
    }
  }
  return inv;
}

}  // namespace

JetGeometry build_jet_geometry(const FinslerStructure& F, const LineElement& le, int order, Depth depth) {
  F.check(le);
  const int n = F.dim();
  JetGeometry geo;
  geo.n = n;
  geo.order = order;
  auto space = JetSpace::get(2 * n, order);
  for (int i = 0; i < n; ++i) {
    geo.x.push_back(Jet::variable(space, i, le.x[static_cast<std::size_t>(i)]));
    geo.y.push_back(Jet::variable(space, n + i, le.y[static_cast<std::size_t>(i)]));
  }
  geo.F2 = F.F2(std::span<const Jet>(geo.x), std::span<const Jet>(geo.y));
  if (geo.F2.is_scalar()) geo.F2 = Jet::constant(space, geo.F2.value());

  std::vector<Jet> dF2(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) dF2[static_cast<std::size_t>(i)] = geo.F2.derivative(n + i);
  geo.g = SquareTensor<Jet, 2>(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      geo.g(i, j) = dF2[static_cast<std::size_t>(i)].derivative(n + j) * 0.5;
      geo.g(j, i) = geo.g(i, j);
    }
  }
  if (depth == Depth::Metric) return geo;

  check_conditioning(geo.g);
  geo.g_inv = invert(geo.g);

  geo.dg_dx = SquareTensor<Jet, 3>(n);
  geo.dg_dy = SquareTensor<Jet, 3>(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        geo.dg_dx(i, j, k) = geo.g(i, j).derivative(k);
        geo.dg_dx(j, i, k) = geo.dg_dx(i, j, k);
        geo.dg_dy(i, j, k) = geo.g(i, j).derivative(n + k);
        geo.dg_dy(j, i, k) = geo.dg_dy(i, j, k);
      }
    }
  }

  // gamma^i_jk = 1/2 g^ih (d_j g_hk + d_k g_hj - d_h g_jk)
  SquareTensor<Jet, 3> lowered(n);
  for (int h = 0; h < n; ++h) {
    for (int j = 0; j < n; ++j) {
      for (int k = j; k < n; ++k) {
        lowered(h, j, k) = (geo.dg_dx(h, k, j) + geo.dg_dx(h, j, k) - geo.dg_dx(j, k, h)) * 0.5;
        lowered(h, k, j) = lowered(h, j, k);
      }
    }
  }
  geo.gamma = SquareTensor<Jet, 3>(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = j; k < n; ++k) {
        Jet s(0.0);
        for (int h = 0; h < n; ++h) s += geo.g_inv(i, h) * lowered(h, j, k);
        geo.gamma(i, j, k) = s;
        geo.gamma(i, k, j) = s;
      }
    }
  }
  geo.G.assign(static_cast<std::size_t>(n), Jet(0.0));
  for (int i = 0; i < n; ++i) {
    Jet s(0.0);
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) s += geo.gamma(i, j, k) * geo.y[static_cast<std::size_t>(j)] * geo.y[static_cast<std::size_t>(k)];
    }
    geo.G[static_cast<std::size_t>(i)] = s * 0.5;
  }
  if (depth == Depth::Spray) return geo;

  geo.NG = SquareTensor<Jet, 2>(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) geo.NG(i, j) = geo.G[static_cast<std::size_t>(i)].derivative(n + j);
  }
  // delta_k g_ij, then Gamma*^i_jk = 1/2 g^ih (delta_j g_hk + delta_k g_hj - delta_h g_jk)
  SquareTensor<Jet, 3> dg(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        Jet s = geo.dg_dx(i, j, k);
        for (int r = 0; r < n; ++r) s -= geo.NG(r, k) * geo.dg_dy(i, j, r);
        dg(i, j, k) = s;
        dg(j, i, k) = s;
      }
    }
  }
  for (int h = 0; h < n; ++h) {
    for (int j = 0; j < n; ++j) {
      for (int k = j; k < n; ++k) {
        lowered(h, j, k) = (dg(h, k, j) + dg(h, j, k) - dg(j, k, h)) * 0.5;
        lowered(h, k, j) = lowered(h, j, k);
      }
    }
  }
  geo.Gamma = SquareTensor<Jet, 3>(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = j; k < n; ++k) {
        Jet s(0.0);
        for (int h = 0; h < n; ++h) s += geo.g_inv(i, h) * lowered(h, j, k);
        geo.Gamma(i, j, k) = s;
        geo.Gamma(i, k, j) = s;
      }
    }
  }
  return geo;
}

Jet delta(const JetGeometry& geo, const Jet& f, int k) {
  if (f.is_scalar()) return Jet(0.0);
  Jet r = f.derivative(k);
  for (int s = 0; s < geo.n; ++s) r -= geo.NG(s, k) * f.derivative(geo.n + s);
  return r;
}

}  // namespace detail

using detail::Depth;

double max_abs(std::span<const double> values) {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

Tensor3 raise_first(const Tensor3& lower, const Matrix& g_inv) {
  const int n = lower.dim();
  Tensor3 out(n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int h = 0; h < n; ++h) s += g_inv(i, h) * lower(h, j, k);
        out(i, j, k) = s;
      }
    }
  }
  return out;
}

Matrix fundamental_tensor(const FinslerStructure& F, const LineElement& le) {
  return detail::values(detail::build_jet_geometry(F, le, 2, Depth::Metric).g);
}

Tensor3 cartan_torsion(const FinslerStructure& F, const LineElement& le) {
  auto geo = detail::build_jet_geometry(F, le, 3, Depth::Spray);
  Tensor3 C = detail::values(geo.dg_dy);
  for (double& c : C.flat()) c *= 0.5;
  return C;
}

Tensor3 formal_christoffel(const FinslerStructure& F, const LineElement& le) {
  return detail::values(detail::build_jet_geometry(F, le, 3, Depth::Spray).gamma);
}

Vector spray(const FinslerStructure& F, const LineElement& le) {
  auto geo = detail::build_jet_geometry(F, le, 3, Depth::Spray);
  Vector G;
  for (const Jet& j : geo.G) G.push_back(j.value());
  return G;
}

Matrix nonlinear_connection(const FinslerStructure& F, const LineElement& le) {
  return detail::values(detail::build_jet_geometry(F, le, 4, Depth::Connection).NG);
}

Tensor3 cartan_coefficients(const FinslerStructure& F, const LineElement& le) {
  return detail::values(detail::build_jet_geometry(F, le, 4, Depth::Connection).Gamma);
}

ConnectionBundle connection_bundle(const FinslerStructure& F, const LineElement& le) {
  auto geo = detail::build_jet_geometry(F, le, 4, Depth::Connection);
  ConnectionBundle b;
  b.le = le;
  b.g = detail::values(geo.g);
  b.g_inv = detail::values(geo.g_inv);
  b.C = detail::values(geo.dg_dy);
  for (double& c : b.C.flat()) c *= 0.5;
  b.gamma = detail::values(geo.gamma);
  for (const Jet& j : geo.G) b.G.push_back(j.value());
  b.NG = detail::values(geo.NG);
  b.Gamma_star = detail::values(geo.Gamma);
  return b;
}

Tensor3 cartan_coefficients_composed(const FinslerStructure& F, const LineElement& le) {
  const ConnectionBundle b = connection_bundle(F, le);
  const int n = F.dim();
  const Tensor3 Cup = raise_first(b.C, b.g_inv);  // C^i_jk
  // delta_k g_hj = d_k g_hj - 2 C_hjm G^m_k, substituted into the Cartan formula.
  Tensor3 out(n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        double s = b.gamma(i, j, k);
        for (int m = 0; m < n; ++m) {
          s -= Cup(i, j, m) * b.NG(m, k) + Cup(i, k, m) * b.NG(m, j);
          for (int h = 0; h < n; ++h) s += b.g_inv(i, h) * b.C(j, k, m) * b.NG(m, h);
        }
        out(i, j, k) = s;
      }
    }
  }
  return out;
}

double delta_x(const FinslerStructure& F, const PhaseField& field, const LineElement& le, int i) {
  auto geo = detail::build_jet_geometry(F, le, 4, Depth::Connection);
  const Jet f = field(std::span<const Jet>(geo.x), std::span<const Jet>(geo.y));
  return detail::delta(geo, f, i).value();
}

namespace {

Matrix covariant_from_jets(const detail::JetGeometry& geo, const std::vector<Jet>& omega) {
  const int n = geo.n;
  Matrix out(n, 0.0);
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      double s = detail::delta(geo, omega[static_cast<std::size_t>(l)], k).value();
      for (int j = 0; j < n; ++j) s -= geo.Gamma(j, l, k).value() * omega[static_cast<std::size_t>(j)].value();
      out(k, l) = s;
    }
  }
  return out;
}

}  // namespace

Matrix h_covariant_covector(const FinslerStructure& F, const CovectorField& field, const LineElement& le) {
  auto geo = detail::build_jet_geometry(F, le, 4, Depth::Connection);
  const auto omega = field(std::span<const Jet>(geo.x), std::span<const Jet>(geo.y));
  if (static_cast<int>(omega.size()) != geo.n) {
    throw Error(ErrorKind::InvalidArgument, "covector field has the wrong number of components");
  }
  return covariant_from_jets(geo, omega);
}

Tensor3 h_covariant_metric(const FinslerStructure& F, const LineElement& le) {
  auto geo = detail::build_jet_geometry(F, le, 4, Depth::Connection);
  const int n = geo.n;
  Tensor3 out(n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        double s = detail::delta(geo, geo.g(i, j), k).value();
        for (int r = 0; r < n; ++r) {
          s -= geo.Gamma(r, i, k).value() * geo.g(r, j).value() + geo.Gamma(r, j, k).value() * geo.g(i, r).value();
        }
        out(i, j, k) = s;
      }
    }
  }
  return out;
}

CovectorField gradient_field(const ScalarField& rho) {
  return [rho](std::span<const Jet> x, std::span<const Jet>) {
    const Jet r = rho.jet(x);
    std::vector<Jet> omega;
    for (std::size_t l = 0; l < x.size(); ++l) omega.push_back(r.is_scalar() ? Jet(0.0) : r.derivative(static_cast<int>(l)));
    return omega;
  };
}

Matrix cfield_residual(const FinslerStructure& F, const ScalarField& rho, const ScalarField& phi,
                       const LineElement& le) {
  auto geo = detail::build_jet_geometry(F, le, 4, Depth::Connection);
  const auto omega = gradient_field(rho)(std::span<const Jet>(geo.x), std::span<const Jet>(geo.y));
  Matrix M = covariant_from_jets(geo, omega);
  const double phi_value = phi(le.x);
  for (int k = 0; k < geo.n; ++k) {
    for (int l = 0; l < geo.n; ++l) M(k, l) -= phi_value * geo.g(k, l).value();
  }
  return M;
}

}  // namespace finsler
