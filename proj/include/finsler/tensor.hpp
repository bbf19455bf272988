#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace finsler {

/// Dense rank-R array over an n-dimensional index range, row-major.
/// Index positions follow the usual tensor convention of the call site; for
/// example Gamma(i, j, k) stores the coefficient with upper i and lower j, k.
template <class T, int Rank>
class SquareTensor {
 public:
  SquareTensor() = default;
  explicit SquareTensor(int n, const T& fill = T{}) : n_(n), data_(count(n), fill) {}

  int dim() const { return n_; }
  std::size_t size() const { return data_.size(); }

  template <class... I>
  T& operator()(I... idx) {
    static_assert(sizeof...(I) == Rank);
    return data_[offset({static_cast<int>(idx)...})];
  }
  template <class... I>
  const T& operator()(I... idx) const {
    static_assert(sizeof...(I) == Rank);
    return data_[offset({static_cast<int>(idx)...})];
  }

  std::vector<T>& flat() { return data_; }
  const std::vector<T>& flat() const { return data_; }

 private:
  static std::size_t count(int n) {
    std::size_t c = 1;
    for (int r = 0; r < Rank; ++r) c *= static_cast<std::size_t>(n);
    return c;
  }
  std::size_t offset(std::array<int, Rank> idx) const {
    std::size_t o = 0;
    for (int r = 0; r < Rank; ++r) o = o * static_cast<std::size_t>(n_) + static_cast<std::size_t>(idx[r]);
    return o;
  }

  int n_ = 0;
  std::vector<T> data_;
};

using Vector = std::vector<double>;
using Matrix = SquareTensor<double, 2>;
using Tensor3 = SquareTensor<double, 3>;
using Tensor4 = SquareTensor<double, 4>;

}  // namespace finsler
