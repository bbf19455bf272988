#include "finsler/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include "finsler/error.hpp"

namespace finsler {

namespace {

void enumerate_degree(int nvars, int degree, std::vector<std::uint8_t>& current, int var,
                      std::vector<std::uint8_t>& out) {
  if (var == nvars - 1) {
    current[var] = static_cast<std::uint8_t>(degree);
    out.insert(out.end(), current.begin(), current.end());
    return;
  }
  for (int e = degree; e >= 0; --e) {
    current[var] = static_cast<std::uint8_t>(e);
    enumerate_degree(nvars, degree - e, current, var + 1, out);
  }
  current[var] = 0;
}

}  // namespace

JetSpace::JetSpace(int nvars, int order) : nvars_(nvars), order_(order) {
  if (nvars < 0 || order < 0 || order > 255) {
    throw Error(ErrorKind::InvalidArgument, "jet space needs nvars >= 0 and 0 <= order <= 255");
  }
  degree_begin_.push_back(0);
  if (nvars == 0) {
    degree_.push_back(0);
    degree_begin_.push_back(1);
    parent_.emplace_back(0, -1);
    prod_begin_ = {0, 1};
    prod_target_ = {0};
    return;
  }
  std::vector<std::uint8_t> current(nvars, 0);
  for (int d = 0; d <= order; ++d) {
    enumerate_degree(nvars, d, current, 0, exponents_);
    degree_begin_.push_back(exponents_.size() / nvars);
  }
  const std::size_t n = size();
  degree_.resize(n);
  for (int d = 0; d <= order; ++d) {
    for (std::size_t i = degree_begin_[d]; i < degree_begin_[d + 1]; ++i) degree_[i] = d;
  }

  std::map<std::vector<std::uint8_t>, std::size_t> lookup;
  for (std::size_t i = 0; i < n; ++i) {
    auto e = exponent(i);
    lookup.emplace(std::vector<std::uint8_t>(e.begin(), e.end()), i);
  }

  raise_.assign(n * nvars, -1);
  parent_.assign(n, {0, -1});
  for (std::size_t i = 0; i < n; ++i) {
    if (degree_[i] == order) continue;
    auto e = exponent(i);
    std::vector<std::uint8_t> up(e.begin(), e.end());
    for (int v = 0; v < nvars; ++v) {
      ++up[v];
      const std::size_t j = lookup.at(up);
      raise_[i * nvars + v] = static_cast<std::ptrdiff_t>(j);
      if (parent_[j].second < 0) parent_[j] = {i, v};
      --up[v];
    }
  }

  prod_begin_.assign(n + 1, 0);
  for (std::size_t a = 0; a < n; ++a) {
    const std::size_t limit = size_up_to(order - degree_[a]);
    prod_begin_[a + 1] = prod_begin_[a] + limit;
  }
  prod_target_.resize(prod_begin_[n]);
  std::vector<std::uint8_t> sum(nvars);
  for (std::size_t a = 0; a < n; ++a) {
    auto ea = exponent(a);
    const std::size_t limit = prod_begin_[a + 1] - prod_begin_[a];
    for (std::size_t b = 0; b < limit; ++b) {
      auto eb = exponent(b);
      for (int v = 0; v < nvars; ++v) sum[v] = static_cast<std::uint8_t>(ea[v] + eb[v]);
      prod_target_[prod_begin_[a] + b] = static_cast<std::uint32_t>(lookup.at(sum));
    }
  }
}

std::shared_ptr<const JetSpace> JetSpace::get(int nvars, int order) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const JetSpace>> registry;
  std::lock_guard lock(mutex);
  auto& slot = registry[{nvars, order}];
  if (!slot) slot = std::make_shared<const JetSpace>(nvars, order);
  return slot;
}

std::size_t JetSpace::size_up_to(int degree) const {
  if (degree < 0) return 0;
  return degree_begin_[static_cast<std::size_t>(std::min(degree, order_)) + 1];
}

std::ptrdiff_t JetSpace::index_of(std::span<const int> multi_index) const {
  std::vector<std::uint8_t> e(nvars_, 0);
  for (int v : multi_index) {
    if (v < 0 || v >= nvars_) throw Error(ErrorKind::InvalidArgument, "multi-index variable out of range");
    ++e[v];
  }
  if (static_cast<int>(multi_index.size()) > order_) return -1;
  std::size_t idx = 0;
  for (int v = 0; v < nvars_; ++v) {
    for (int k = 0; k < e[v]; ++k) idx = static_cast<std::size_t>(raise(idx, v));
  }
  return static_cast<std::ptrdiff_t>(idx);
}

namespace {

const std::shared_ptr<const JetSpace>& scalar_space() {
  static const std::shared_ptr<const JetSpace> space = JetSpace::get(0, 0);
  return space;
}

}  // namespace

Jet::Jet(double value) : space_(scalar_space()), coeffs_{value} {}

Jet Jet::constant(std::shared_ptr<const JetSpace> space, double value) {
  std::vector<double> c(space->size(), 0.0);
  c[0] = value;
  return Jet(std::move(space), std::move(c));
}

Jet Jet::variable(std::shared_ptr<const JetSpace> space, int var, double value) {
  if (var < 0 || var >= space->nvars()) throw Error(ErrorKind::InvalidArgument, "jet variable out of range");
  std::vector<double> c(space->size(), 0.0);
  c[0] = value;
  if (space->order() >= 1) c[static_cast<std::size_t>(space->raise(0, var))] = 1.0;
  return Jet(std::move(space), std::move(c));
}

double Jet::partial(std::span<const int> multi_index) const {
  const std::ptrdiff_t idx = space_->index_of(multi_index);
  if (idx < 0) throw Error(ErrorKind::InvalidArgument, "requested derivative exceeds jet order");
  double factorial = 1.0;
  for (std::uint8_t e : space_->exponent(static_cast<std::size_t>(idx))) {
    for (int k = 2; k <= e; ++k) factorial *= k;
  }
  return factorial * coeffs_[static_cast<std::size_t>(idx)];
}

Jet Jet::derivative(int var) const {
  if (is_scalar()) return Jet(0.0);
  if (order() == 0) throw Error(ErrorKind::InvalidArgument, "cannot differentiate an order-0 jet");
  auto lower = JetSpace::get(nvars(), order() - 1);
  std::vector<double> c(lower->size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto j = static_cast<std::size_t>(space_->raise(i, var));
    c[i] = (space_->exponent(i)[var] + 1) * coeffs_[j];
  }
  return Jet(std::move(lower), std::move(c));
}

Jet Jet::truncated(int order) const {
  if (is_scalar() || order >= this->order()) return *this;
  auto lower = JetSpace::get(nvars(), order);
  return Jet(lower, std::vector<double>(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(lower->size())));
}

Jet Jet::operator-() const {
  Jet r = *this;
  for (double& c : r.coeffs_) c = -c;
  return r;
}

namespace {

void check_compatible(const Jet& a, const Jet& b) {
  if (!a.is_scalar() && !b.is_scalar() && a.nvars() != b.nvars()) {
    throw Error(ErrorKind::InvalidArgument, "jets over different variable sets");
  }
}

}  // namespace

Jet& Jet::operator+=(const Jet& other) {
  check_compatible(*this, other);
  if (other.is_scalar()) {
    coeffs_[0] += other.coeffs_[0];
    return *this;
  }
  if (is_scalar()) {
    const double v = coeffs_[0];
    *this = other;
    coeffs_[0] += v;
    return *this;
  }
  if (other.order() < order()) *this = truncated(other.order());
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& other) { return *this += -other; }

Jet operator*(const Jet& a, const Jet& b) {
  check_compatible(a, b);
  if (a.is_scalar() || b.is_scalar()) {
    const Jet& s = a.is_scalar() ? a : b;
    Jet r = a.is_scalar() ? b : a;
    const double k = s.coeffs_[0];
    for (double& c : r.coeffs_) c *= k;
    return r;
  }
  const auto& space = a.order() <= b.order() ? a.space_ : b.space_;
  const std::size_t n = space->size();
  std::vector<double> r(n, 0.0);
  const double* x = a.coeffs_.data();
  const double* y = b.coeffs_.data();
  for (std::size_t i = 0; i < n; ++i) {
    const double ci = x[i];
    if (ci == 0.0) continue;
    auto targets = space->products_of(i);
    for (std::size_t j = 0; j < targets.size(); ++j) r[targets[j]] += ci * y[j];
  }
  return Jet(space, std::move(r));
}

Jet& Jet::operator*=(const Jet& other) { return *this = *this * other; }

Jet operator/(const Jet& a, const Jet& b) {
  if (b.is_scalar()) {
    if (b.value() == 0.0) throw Error(ErrorKind::NonSmoothLocus, "division by zero");
    return a * Jet(1.0 / b.value());
  }
  return a * reciprocal(b);
}

Jet& Jet::operator/=(const Jet& other) { return *this = *this / other; }

Jet apply_series(const Jet& a, std::span<const double> taylor) {
  if (a.is_scalar() || a.order() == 0) return Jet::constant(a.space_, taylor[0]);
  const int terms = std::min<int>(a.order(), static_cast<int>(taylor.size()) - 1);
  Jet h = a;
  h.coeffs_[0] = 0.0;
  Jet r = Jet::constant(a.space_, taylor[terms]);
  for (int k = terms - 1; k >= 0; --k) {
    r = r * h;
    r.coeffs_[0] += taylor[k];
  }
  return r;
}

Jet compose(const Jet& poly, std::span<const Jet> displacements) {
  const auto& ps = *poly.space_;
  if (static_cast<int>(displacements.size()) != ps.nvars()) {
    throw Error(ErrorKind::InvalidArgument, "compose: argument count mismatch");
  }
  if (ps.nvars() == 0) return Jet(poly.value());
  std::vector<Jet> monomial(ps.size());
  monomial[0] = Jet(1.0);
  Jet result(poly.coeffs_[0]);
  // Displacements vanish at the expansion point, so monomials above the
  // target order contribute nothing.
  int target = 0;
  bool centered = true;
  for (const Jet& d : displacements) {
    target = std::max(target, d.is_scalar() ? 0 : d.order());
    centered = centered && d.value() == 0.0;
  }
  const std::size_t limit = centered ? ps.size_up_to(target) : ps.size();
  for (std::size_t i = 1; i < limit; ++i) {
    const auto [par, var] = ps.parent(i);
    monomial[i] = monomial[par] * displacements[static_cast<std::size_t>(var)];
    if (poly.coeffs_[i] != 0.0) result += monomial[i] * Jet(poly.coeffs_[i]);
  }
  return result;
}

namespace {

std::vector<double> power_series(double a0, double p, int order) {
  std::vector<double> t(order + 1);
  double binom = 1.0;
  const double base = std::pow(a0, p);
  double inv = 1.0;
  for (int k = 0; k <= order; ++k) {
    t[k] = base * binom * inv;
    binom *= (p - k) / (k + 1);
    inv /= a0;
  }
  return t;
}

}  // namespace

Jet reciprocal(const Jet& a) {
  const double a0 = a.value();
  if (a0 == 0.0) throw Error(ErrorKind::NonSmoothLocus, "reciprocal of a jet with zero value");
  std::vector<double> t(a.order() + 1);
  double term = 1.0 / a0;
  for (auto& c : t) {
    c = term;
    term *= -1.0 / a0;
  }
  return apply_series(a, t);
}

Jet sqrt(const Jet& a) {
  const double a0 = a.value();
  if (a0 < 0.0 || (a0 == 0.0 && !a.is_scalar() && a.order() > 0)) {
    throw Error(ErrorKind::NonSmoothLocus, "sqrt of a jet with value " + std::to_string(a0));
  }
  if (a.is_scalar() || a.order() == 0) return apply_series(a, std::vector<double>{std::sqrt(a0)});
  return apply_series(a, power_series(a0, 0.5, a.order()));
}

Jet pow(const Jet& a, double p) {
  const double a0 = a.value();
  if (a0 <= 0.0) throw Error(ErrorKind::NonSmoothLocus, "real power of a non-positive jet");
  return apply_series(a, power_series(a0, p, a.order()));
}

Jet pow(const Jet& a, int p) {
  if (p < 0) return reciprocal(pow(a, -p));
  Jet r(1.0);
  Jet base = a;
  while (p > 0) {
    if (p & 1) r = r * base;
    p >>= 1;
    if (p > 0) base = base * base;
  }
  return r;
}

Jet exp(const Jet& a) {
  std::vector<double> t(a.order() + 1);
  double term = std::exp(a.value());
  for (int k = 0; k <= a.order(); ++k) {
    t[k] = term;
    term /= (k + 1);
  }
  return apply_series(a, t);
}

Jet log(const Jet& a) {
  const double a0 = a.value();
  if (a0 <= 0.0) throw Error(ErrorKind::NonSmoothLocus, "log of a non-positive jet");
  std::vector<double> t(a.order() + 1);
  t[0] = std::log(a0);
  double inv = 1.0;
  for (int k = 1; k <= a.order(); ++k) {
    inv /= a0;
    t[k] = ((k % 2 == 1) ? 1.0 : -1.0) * inv / k;
  }
  return apply_series(a, t);
}

namespace {

// Taylor coefficients of a function whose derivatives cycle with period 4
// (sin, cos) or 2 (sinh, cosh), given the cycle of derivative values.
std::vector<double> cyclic_series(std::span<const double> cycle, int order) {
  std::vector<double> t(order + 1);
  double fact = 1.0;
  for (int k = 0; k <= order; ++k) {
    if (k > 0) fact *= k;
    t[k] = cycle[static_cast<std::size_t>(k) % cycle.size()] / fact;
  }
  return t;
}

}  // namespace

Jet sin(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  const double cycle[] = {s, c, -s, -c};
  return apply_series(a, cyclic_series(cycle, a.order()));
}

Jet cos(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  const double cycle[] = {c, -s, -c, s};
  return apply_series(a, cyclic_series(cycle, a.order()));
}

Jet sinh(const Jet& a) {
  const double s = std::sinh(a.value()), c = std::cosh(a.value());
  const double cycle[] = {s, c};
  return apply_series(a, cyclic_series(cycle, a.order()));
}

Jet cosh(const Jet& a) {
  const double s = std::sinh(a.value()), c = std::cosh(a.value());
  const double cycle[] = {c, s};
  return apply_series(a, cyclic_series(cycle, a.order()));
}

}  // namespace finsler
