#include "finsler/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "finsler/connection.hpp"
#include "finsler/error.hpp"
#include "finsler/sampling.hpp"

namespace finsler {

CurvatureBundle curvature_bundle(const FinslerStructure& F, const LineElement& le) {
  const auto geo = detail::build_jet_geometry(F, le, 5, detail::Depth::Connection);
  const int n = geo.n;
  CurvatureBundle cb;
  cb.le = le;
  cb.g = detail::values(geo.g);
  const Matrix g_inv = detail::values(geo.g_inv);

  Tensor3 dNG(n);  // (i, j, k) = delta_k G^i_j
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) dNG(i, j, k) = detail::delta(geo, geo.NG(i, j), k).value();
    }
  }
  cb.R_nl = Tensor3(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) cb.R_nl(i, j, k) = dNG(i, j, k) - dNG(i, k, j);
    }
  }

  Tensor4 dGamma(n);  // (i, h, j, k) = delta_k Gamma^i_hj
  for (int i = 0; i < n; ++i) {
    for (int h = 0; h < n; ++h) {
      for (int j = h; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          dGamma(i, h, j, k) = detail::delta(geo, geo.Gamma(i, h, j), k).value();
          dGamma(i, j, h, k) = dGamma(i, h, j, k);
        }
      }
    }
  }
  const Tensor3 Gs = detail::values(geo.Gamma);
  cb.K_tensor = Tensor4(n);
  for (int i = 0; i < n; ++i) {
    for (int h = 0; h < n; ++h) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          double s = dGamma(i, h, j, k) - dGamma(i, h, k, j);
          for (int r = 0; r < n; ++r) s += Gs(r, h, j) * Gs(i, r, k) - Gs(r, h, k) * Gs(i, r, j);
          cb.K_tensor(i, h, j, k) = s;
        }
      }
    }
  }

  Tensor3 C = detail::values(geo.dg_dy);
  for (double& c : C.flat()) c *= 0.5;
  const Tensor3 Cup = raise_first(C, g_inv);
  cb.R_h = cb.K_tensor;
  for (int i = 0; i < n; ++i) {
    for (int h = 0; h < n; ++h) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          double s = 0.0;
          for (int r = 0; r < n; ++r) s += Cup(i, h, r) * cb.R_nl(r, j, k);
          cb.R_h(i, h, j, k) += s;
        }
      }
    }
  }
  return cb;
}

Tensor3 nl_curvature(const FinslerStructure& F, const LineElement& le) { return curvature_bundle(F, le).R_nl; }
Tensor4 k_tensor(const FinslerStructure& F, const LineElement& le) { return curvature_bundle(F, le).K_tensor; }
Tensor4 h_curvature(const FinslerStructure& F, const LineElement& le) { return curvature_bundle(F, le).R_h; }

double flag_curvature(const CurvatureBundle& cb, std::span<const double> X) {
  const int n = cb.g.dim();
  const auto& y = cb.le.y;
  auto gdot = [&](std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) s += cb.g(i, j) * a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)];
    }
    return s;
  };
  const double xx = gdot(X, X);
  const double yy = gdot(y, y);
  const double xy = gdot(X, y);
  const double den = xx * yy - xy * xy;
  if (!(den > kFlagDegeneracy * xx * yy)) throw Error(ErrorKind::FlagDegenerate, "transverse edge is parallel to the flag pole");
  Vector Xlow(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    for (int l = 0; l < n; ++l) Xlow[static_cast<std::size_t>(i)] += cb.g(i, l) * X[static_cast<std::size_t>(l)];
  }
  double num = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int h = 0; h < n; ++h) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          num += Xlow[static_cast<std::size_t>(i)] * cb.R_h(i, h, j, k) * y[static_cast<std::size_t>(h)] *
                 y[static_cast<std::size_t>(j)] * X[static_cast<std::size_t>(k)];
        }
      }
    }
  }
  return num / den;
}

double flag_curvature(const FinslerStructure& F, const LineElement& le, std::span<const double> X) {
  return flag_curvature(curvature_bundle(F, le), X);
}

ScanReport constancy_scan(const FinslerStructure& F, int samples, std::uint64_t seed) {
  if (samples < 2) throw Error(ErrorKind::InvalidArgument, "constancy scan needs at least 2 samples");
  ScanReport report;
  report.label = F.label();
  report.samples.resize(static_cast<std::size_t>(samples));
  const int n = F.dim();
  parallel_for(report.samples.size(), [&](std::size_t i) {
    SampleStream rng(seed, i);
    FlagSample& s = report.samples[i];
    s.le = sample_line_element(F, rng);
    const CurvatureBundle cb = curvature_bundle(F, s.le);
    for (int attempt = 0;; ++attempt) {
      s.X.assign(static_cast<std::size_t>(n), 0.0);
      for (double& c : s.X) c = rng.normal();
      try {
        s.K = flag_curvature(cb, s.X);
        return;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::FlagDegenerate || attempt + 1 >= kMaxRejections) throw;
      }
    }
  });
  double sum = 0.0;
  report.min = std::numeric_limits<double>::infinity();
  report.max = -std::numeric_limits<double>::infinity();
  for (const auto& s : report.samples) {
    sum += s.K;
    report.min = std::min(report.min, s.K);
    report.max = std::max(report.max, s.K);
  }
  report.mean = sum / samples;
  double var = 0.0;
  for (const auto& s : report.samples) var += (s.K - report.mean) * (s.K - report.mean);
  report.std = std::sqrt(var / (samples - 1));
  return report;
}

double antisymmetry_defect(const Tensor3& t) {
  const int n = t.dim();
  double m = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) m = std::max(m, std::abs(t(i, j, k) + t(i, k, j)));
    }
  }
  return m;
}

double antisymmetry_defect(const Tensor4& t) {
  const int n = t.dim();
  double m = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int h = 0; h < n; ++h) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) m = std::max(m, std::abs(t(i, h, j, k) + t(i, h, k, j)));
      }
    }
  }
  return m;
}

}  // namespace finsler
