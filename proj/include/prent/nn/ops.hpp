#pragma once

#include <Eigen/Dense>

#include <cmath>

// Dense building blocks of the transformer encoders, as free functions over
// Eigen expressions. Activations are (sequence x features), row-major.
namespace prent::nn {

template <typename Scalar>
using matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Affine map y = x W^T + b with W stored (out x in) as in the checkpoints.
template <typename Scalar>
struct linear {
  matrix<Scalar> weight;
  vector<Scalar> bias;

  Eigen::Index in_features() const { return weight.cols(); }
  Eigen::Index out_features() const { return weight.rows(); }

  template <typename Derived>
  matrix<Scalar> operator()(const Eigen::MatrixBase<Derived>& x) const {
    matrix<Scalar> y = x * weight.transpose();
    if (bias.size() != 0) y.rowwise() += bias.transpose();
    return y;
  }
};

template <typename Scalar>
struct layer_norm {
  vector<Scalar> gamma;
  vector<Scalar> beta;
  Scalar eps = Scalar(1e-12);

  template <typename Derived>
  matrix<Scalar> operator()(const Eigen::MatrixBase<Derived>& x) const {
    matrix<Scalar> y(x.rows(), x.cols());
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      const Scalar mean = x.row(r).mean();
      const Scalar var = (x.row(r).array() - mean).square().mean();
      const Scalar inv = Scalar(1) / std::sqrt(var + eps);
      y.row(r) = ((x.row(r).array() - mean) * inv).matrix();
    }
    y.array().rowwise() *= gamma.transpose().array();
    y.rowwise() += beta.transpose();
    return y;
  }
};

/// erf-based GELU ("gelu" in the model configs)
template <typename Derived>
auto gelu(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  return x.unaryExpr([](Scalar v) {
    return Scalar(0.5) * v * (Scalar(1) + std::erf(v / std::sqrt(Scalar(2))));
  });
}

/// tanh approximation ("gelu_new" / "gelu_pytorch_tanh")
template <typename Derived>
auto gelu_tanh(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  return x.unaryExpr([](Scalar v) {
    const Scalar c = std::sqrt(Scalar(2) / Scalar(3.14159265358979323846));
    return Scalar(0.5) * v * (Scalar(1) + std::tanh(c * (v + Scalar(0.044715) * v * v * v)));
  });
}

template <typename Derived>
auto relu(const Eigen::MatrixBase<Derived>& x) {
  return x.cwiseMax(typename Derived::Scalar(0));
}

/// numerically stable softmax of each row, in place
template <typename Derived>
void softmax_rows(Eigen::MatrixBase<Derived>& x) {
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const auto m = x.row(r).maxCoeff();
    x.row(r) = (x.row(r).array() - m).exp().matrix();
    x.row(r) /= x.row(r).sum();
  }
}

/// softmax of a vector in double precision, whatever the input scalar
template <typename Derived>
Eigen::VectorXd softmax(const Eigen::MatrixBase<Derived>& logits) {
  Eigen::VectorXd z = logits.template cast<double>();
  z.array() -= z.maxCoeff();
  z = z.array().exp().matrix();
  return z / z.sum();
}

} // namespace prent::nn
