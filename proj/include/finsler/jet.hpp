#pragma once

// Truncated multivariate Taylor jets.
//
// A Jet stores the Taylor coefficients c_a = (d^a f)(p) / a! of a function of
// `nvars` variables, for every multi-index a with |a| <= order. Monomials are
// kept in graded order, so the coefficients of a lower-order jet over the same
// variables are a prefix of the higher-order ones. Arithmetic between jets of
// different orders truncates to the smaller order; differentiating a jet drops
// its order by one. This is the derivative engine behind every partial
// derivative in the library: curvature needs fifth mixed derivatives of F^2,
// which a jet of order 5 in the 2n line-element variables carries exactly.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace finsler {

class JetSpace {
 public:
  /// Shared, immutable layout for jets in `nvars` variables truncated at `order`.
  static std::shared_ptr<const JetSpace> get(int nvars, int order);

  JetSpace(int nvars, int order);

  int nvars() const { return nvars_; }
  int order() const { return order_; }
  std::size_t size() const { return degree_begin_.back(); }
  std::size_t size_up_to(int degree) const;

  std::span<const std::uint8_t> exponent(std::size_t idx) const {
    return {exponents_.data() + idx * static_cast<std::size_t>(nvars_), static_cast<std::size_t>(nvars_)};
  }
  int degree(std::size_t idx) const { return degree_[idx]; }

  /// Index of monomial `idx` times x_var, or -1 when that exceeds the order.
  std::ptrdiff_t raise(std::size_t idx, int var) const { return raise_[idx * nvars_ + var]; }
  /// For idx > 0: a (parent, var) pair with monomial(idx) = monomial(parent) * x_var.
  std::pair<std::size_t, int> parent(std::size_t idx) const { return parent_[idx]; }

  std::ptrdiff_t index_of(std::span<const int> multi_index) const;

  // Product table: for monomial a, entries [prod_begin_[a], prod_begin_[a+1])
  // list target indices for b = 0, 1, ... in order.
  std::span<const std::uint32_t> products_of(std::size_t a) const {
    return {prod_target_.data() + prod_begin_[a], prod_begin_[a + 1] - prod_begin_[a]};
  }

 private:
  int nvars_;
  int order_;
  std::vector<std::uint8_t> exponents_;
  std::vector<int> degree_;
  std::vector<std::size_t> degree_begin_;
  std::vector<std::ptrdiff_t> raise_;
  std::vector<std::pair<std::size_t, int>> parent_;
  std::vector<std::size_t> prod_begin_;
  std::vector<std::uint32_t> prod_target_;
};

class Jet {
 public:
  /// A plain scalar: zero variables, order zero.
  Jet() : Jet(0.0) {}
  Jet(double value);  // NOLINT(google-explicit-constructor): scalars mix freely with jets

  static Jet constant(std::shared_ptr<const JetSpace> space, double value);
  static Jet variable(std::shared_ptr<const JetSpace> space, int var, double value);

  const std::shared_ptr<const JetSpace>& space() const { return space_; }
  int nvars() const { return space_->nvars(); }
  int order() const { return space_->order(); }
  bool is_scalar() const { return space_->nvars() == 0; }

  double value() const { return coeffs_[0]; }
  std::span<const double> coefficients() const { return coeffs_; }
  std::span<double> coefficients() { return coeffs_; }

  /// Mixed partial derivative d^|a| f / dx^a at the expansion point.
  double partial(std::span<const int> multi_index) const;

  /// d/dx_var as a jet one order lower.
  Jet derivative(int var) const;
  Jet truncated(int order) const;

  Jet operator-() const;
  Jet& operator+=(const Jet& other);
  Jet& operator-=(const Jet& other);
  Jet& operator*=(const Jet& other);
  Jet& operator/=(const Jet& other);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);

 private:
  Jet(std::shared_ptr<const JetSpace> space, std::vector<double> coeffs)
      : space_(std::move(space)), coeffs_(std::move(coeffs)) {}

  friend Jet apply_series(const Jet& a, std::span<const double> taylor);
  friend Jet compose(const Jet& poly, std::span<const Jet> displacements);

  std::shared_ptr<const JetSpace> space_;
  std::vector<double> coeffs_;
};

/// f(a) where `taylor[k]` = f^(k)(a.value()) / k!; uses as many terms as a's order.
Jet apply_series(const Jet& a, std::span<const double> taylor);

/// Evaluate the polynomial `poly` (in poly.nvars() variables) at the given
/// displacement jets, all living in one target space.
Jet compose(const Jet& poly, std::span<const Jet> displacements);

Jet reciprocal(const Jet& a);
Jet sqrt(const Jet& a);
Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet sinh(const Jet& a);
Jet cosh(const Jet& a);
Jet pow(const Jet& a, double p);
Jet pow(const Jet& a, int p);

}  // namespace finsler
