#pragma once

// Forward kernels of the impairment classifier, written against Eigen
// expressions so they work for any scalar type.

#include <Eigen/Dense>

namespace speechagent::sir {

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Per-frame affine map followed by tanh: column t of the result is
// tanh(weight * frames.col(t) + bias).
template <typename DW, typename DB, typename DX>
Mat<typename DW::Scalar> encode_frames(const Eigen::MatrixBase<DW>& weight,
                                       const Eigen::MatrixBase<DB>& bias,
                                       const Eigen::MatrixBase<DX>& frames) {
  Mat<typename DW::Scalar> pre = weight * frames;
  pre.colwise() += bias;
  return pre.array().tanh().matrix();
}

// Max-subtracted softmax; finite for any finite input.
template <typename D>
Vec<typename D::Scalar> softmax(const Eigen::MatrixBase<D>& logits) {
  using Scalar = typename D::Scalar;
  const Scalar peak = logits.maxCoeff();
  Vec<Scalar> e = (logits.array() - peak).exp().matrix();
  return e / e.sum();
}

template <typename D>
Vec<typename D::Scalar> mean_pool(const Eigen::MatrixBase<D>& hidden) {
  return hidden.rowwise().mean();
}

// softmax(query^T hidden) over frames.
template <typename DH, typename DQ>
Vec<typename DH::Scalar> attention_weights(const Eigen::MatrixBase<DH>& hidden,
                                           const Eigen::MatrixBase<DQ>& query) {
  Vec<typename DH::Scalar> scores = hidden.transpose() * query;
  return softmax(scores);
}

template <typename DH, typename DQ>
Vec<typename DH::Scalar> attention_pool(const Eigen::MatrixBase<DH>& hidden,
                                        const Eigen::MatrixBase<DQ>& query) {
  return hidden * attention_weights(hidden, query);
}

// Index of the largest entry; ties go to the lowest index.
template <typename D>
Eigen::Index argmax_first(const Eigen::MatrixBase<D>& v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

}  // namespace speechagent::sir
