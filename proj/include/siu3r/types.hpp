#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <cassert>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace siu3r {

// All math runs in double; on-disk tensors are f32 and widen losslessly on load.
using Scalar = double;

// Row-major to match image/tensor memory layout.
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;
using Vec4 = Eigen::Matrix<Scalar, 4, 1>;
using Mat2 = Eigen::Matrix<Scalar, 2, 2>;
using Mat3 = Eigen::Matrix<Scalar, 3, 3>;
using Mat4 = Eigen::Matrix<Scalar, 4, 4>;
using Quat = Eigen::Quaternion<Scalar>;

using Index = std::int64_t;

/// Dense row-major N-d array. Eigen covers rank-2 linear algebra; this covers
/// the rank-3..5 logit/probability stacks (masks, class-query maps).
template <typename T>
class Tensor {
public:
  Tensor() = default;

  explicit Tensor(std::vector<Index> shape, T fill = T{}) : shape_(std::move(shape)) {
    Index n = 1;
    for (Index s : shape_) {
      if (s < 0) throw std::invalid_argument("Tensor: negative extent");
      n *= s;
    }
    data_.assign(static_cast<std::size_t>(n), fill);
  }

  Index rank() const { return static_cast<Index>(shape_.size()); }
  const std::vector<Index>& shape() const { return shape_; }
  Index dim(Index i) const { return shape_[static_cast<std::size_t>(i)]; }
  Index size() const { return static_cast<Index>(data_.size()); }
  bool empty() const { return data_.empty(); }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }

  T& operator[](Index flat) { return data_[static_cast<std::size_t>(flat)]; }
  const T& operator[](Index flat) const { return data_[static_cast<std::size_t>(flat)]; }

  template <typename... Ix>
  T& operator()(Ix... ix) {
    return data_[flat_index(ix...)];
  }
  template <typename... Ix>
  const T& operator()(Ix... ix) const {
    return data_[flat_index(ix...)];
  }

  void fill(T v) { std::fill(data_.begin(), data_.end(), v); }

  bool same_shape(const Tensor& o) const { return shape_ == o.shape_; }

  template <typename... Ix>
  std::size_t flat_index(Ix... ix) const {
    static_assert((std::is_integral_v<Ix> && ...));
    assert(sizeof...(Ix) == shape_.size());
    const Index idx[] = {static_cast<Index>(ix)...};
    Index flat = 0;
    for (std::size_t d = 0; d < shape_.size(); ++d) {
      assert(idx[d] >= 0 && idx[d] < shape_[d]);
      flat = flat * shape_[d] + idx[d];
    }
    return static_cast<std::size_t>(flat);
  }

private:
  std::vector<Index> shape_;
  std::vector<T> data_;
};

// Logits are clamped to +/-kLogitCap before any exp so exported extremes
// cannot produce inf/NaN in sigmoid, softmax, or BCE paths.
inline constexpr Scalar kLogitCap = 30.0;

inline Scalar clamp_logit(Scalar x) { return std::clamp(x, -kLogitCap, kLogitCap); }

inline Scalar sigmoid(Scalar logit) {
  const Scalar x = clamp_logit(logit);
  return x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

inline Scalar logit(Scalar p) {
  p = std::clamp(p, sigmoid(-kLogitCap), sigmoid(kLogitCap));
  return std::log(p / (1.0 - p));
}

/// Softmax of one logit row, expression-friendly over any Eigen vector.
template <typename Derived>
Vec softmax(const Eigen::MatrixBase<Derived>& logits) {
  Vec x = logits.template cast<Scalar>();
  for (Index i = 0; i < x.size(); ++i) x[i] = clamp_logit(x[i]);
  const Scalar m = x.maxCoeff();
  Vec e = (x.array() - m).exp();
  return e / e.sum();
}

/// Arg max with ties broken toward the lower index (what Eigen's maxCoeff does
/// too, but spelled out since determinism is contractual here).
template <typename Derived>
Index argmax_low(const Eigen::MatrixBase<Derived>& v) {
  Index best = 0;
  for (Index i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

inline bool is_finite(Scalar x) { return std::isfinite(x); }

template <typename T>
bool all_finite(const Tensor<T>& t) {
  for (Index i = 0; i < t.size(); ++i)
    if (!std::isfinite(static_cast<double>(t[i]))) return false;
  return true;
}

/// Rotation matrix of a unit quaternion stored (w,x,y,z).
inline Mat3 quat_to_rotation(const Vec4& wxyz) {
  Quat q(wxyz[0], wxyz[1], wxyz[2], wxyz[3]);
  return q.normalized().toRotationMatrix();
}

}  // namespace siu3r
