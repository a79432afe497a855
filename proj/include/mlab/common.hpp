#pragma once

#include <Eigen/Dense>
#include <vector>

namespace mlab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Dense rank-3 tensor of shape n*n*n, row-major.  Dimensions here are tiny
/// (2..5), so a flat std::vector is both simple and fast.
class Tensor3 {
 public:
  Tensor3() : n_(0) {}
  explicit Tensor3(int n) : n_(n), d_(static_cast<size_t>(n) * n * n, 0.0) {}

  int dim() const { return n_; }
  double& operator()(int i, int j, int k) { return d_[idx(i, j, k)]; }
  double operator()(int i, int j, int k) const { return d_[idx(i, j, k)]; }

  double max_abs() const {
    double m = 0.0;
    for (double x : d_) m = std::max(m, std::abs(x));
    return m;
  }

 private:
  size_t idx(int i, int j, int k) const {
    return (static_cast<size_t>(i) * n_ + j) * n_ + k;
  }
  int n_;
  std::vector<double> d_;
};

/// Dense rank-4 tensor of shape n*n*n*n, row-major.
class Tensor4 {
 public:
  Tensor4() : n_(0) {}
  explicit Tensor4(int n) : n_(n), d_(static_cast<size_t>(n) * n * n * n, 0.0) {}

  int dim() const { return n_; }
  double& operator()(int l, int i, int j, int k) { return d_[idx(l, i, j, k)]; }
  double operator()(int l, int i, int j, int k) const { return d_[idx(l, i, j, k)]; }

  double max_abs() const {
    double m = 0.0;
    for (double x : d_) m = std::max(m, std::abs(x));
    return m;
  }

 private:
  size_t idx(int l, int i, int j, int k) const {
    return ((static_cast<size_t>(l) * n_ + i) * n_ + j) * n_ + k;
  }
  int n_;
  std::vector<double> d_;
};

}  // namespace mlab
