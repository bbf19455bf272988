#pragma once

// The profile equation rho'' = phi(rho) along t-geodesics: integration,
// critical points, the three-way classification by their number, the
// reparametrizations r(t) and theta(t), and the resulting conformal factors.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "finsler/error.hpp"
#include "finsler/expression.hpp"
#include "finsler/warped.hpp"

namespace finsler {

enum class CriticalKind { LeftEnd, Interior };

struct CriticalPoint {
  double t = 0.0;
  CriticalKind kind = CriticalKind::Interior;
  double rho_second = 0.0;  // phi(rho(t))
};

/// Right-hand side phi(rho), usable over doubles and jets.
struct ProfileRhs {
  std::function<double(double)> real;
  std::function<Jet(const Jet&)> jet;

  static ProfileRhs from_expression(const Expression& e);  // variable "rho"
  static ProfileRhs constant(double c);
};

struct ProfileSolution {
  ProfileRhs phi;
  double step = 1e-3;
  std::vector<double> grid;
  std::vector<double> rho;
  std::vector<double> rho_prime;
  std::vector<CriticalPoint> events;

  /// (rho, rho') at t by an RK4 step from the nearest node at or below t;
  /// reproduces the node values exactly.
  std::array<double, 2> state(double t) const;
  double t_begin() const { return grid.front(); }
  double t_end() const { return grid.back(); }
};

/// Thrown when |rho| exceeds 1e12; carries the solution up to that point.
class ProfileDivergence : public Error {
 public:
  ProfileDivergence(const std::string& what, ProfileSolution partial)
      : Error(ErrorKind::Divergence, what), partial_(std::move(partial)) {}
  const ProfileSolution& partial() const { return partial_; }

 private:
  ProfileSolution partial_;
};

constexpr double kEventTolerance = 1e-12;
constexpr double kBlowUp = 1e12;

ProfileSolution integrate_profile(const ProfileRhs& phi, double rho0, double rho_prime0, double t_begin,
                                  double t_end, double step = 1e-3);

struct CriticalCount {
  int count = 0;
  std::vector<CriticalPoint> points;
  bool consistent = true;
  std::string diagnostic;
};

CriticalCount count_critical(const ProfileSolution& sol);

enum class ConformalModel { Product, EuclideanBall, SpherePolar };

struct ClassificationReport {
  char case_tag = 'a';
  int critical_points = 0;
  std::vector<CriticalPoint> points;
  std::pair<double, double> interval{0.0, 0.0};
  bool interval_closed_left = false;
  bool interval_closed_right = false;
  ConformalModel model = ConformalModel::Product;
  std::optional<double> c_bar;
  std::optional<double> t0;
  ProfileSolution solution;
};

/// Throws Error(NotASolution) when the profile has more than two critical points.
ClassificationReport classify_profile(const ProfileSolution& sol);

std::string to_string(ConformalModel m);
std::string to_string(CriticalKind k);

/// r(t) = integral of dt / rho' from t_ref = clamp(0, span) (case a).
double reparam_a(const ProfileSolution& sol, double t);
/// r(t) = exp(c_bar * integral_{t0}^{t} dt / rho') with one critical point below t (case b).
double reparam_b(const ProfileSolution& sol, double t, double c_bar, double t0);
/// theta(t) = 2 atan exp(c_bar * integral_{t0}^{t} dt / rho') between two critical points (case c).
double reparam_c_theta(const ProfileSolution& sol, double t, double c_bar, double t0);

double conformal_factor(const ClassificationReport& report, double t);

/// A warp profile backed by the profile ODE, usable by build_warped. The
/// domain is the largest event-free interval of the solution containing t=mid.
WarpProfile profile_from_ode(const ProfileRhs& phi, double rho0, double rho_prime0, double t_begin, double t_end,
                             double step = 1e-3);

}  // namespace finsler
