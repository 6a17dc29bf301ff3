#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "smlab/jet_program.hpp"

namespace smlab {

// Dense cubic and quartic arrays over a small index range.
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(int n) : n_(n), data_(static_cast<std::size_t>(n * n * n), 0.0) {}

  [[nodiscard]] int dim() const { return n_; }
  double& operator()(int i, int j, int k) { return data_[(i * n_ + j) * n_ + k]; }
  double operator()(int i, int j, int k) const { return data_[(i * n_ + j) * n_ + k]; }

 private:
  int n_ = 0;
  std::vector<double> data_;
};

class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(int n) : n_(n), data_(static_cast<std::size_t>(n * n * n * n), 0.0) {}

  [[nodiscard]] int dim() const { return n_; }
  double& operator()(int i, int j, int k, int l) { return data_[((i * n_ + j) * n_ + k) * n_ + l]; }
  double operator()(int i, int j, int k, int l) const {
    return data_[((i * n_ + j) * n_ + k) * n_ + l];
  }
  [[nodiscard]] double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  int n_ = 0;
  std::vector<double> data_;
};

// Value, gradient, Hessian and the third and fourth derivative arrays of a
// program at a point, unpacked from one jet.
struct Derivatives {
  int dim = 0;
  int order = 0;
  double value = 0.0;
  Vector grad;
  Matrix hess;
  Tensor3 d3;
  Tensor4 d4;
};

Derivatives unpack(const Jet& jet);
Derivatives derivatives(const JetProgram& program, const Vector& x, int order = 4);

}  // namespace smlab
