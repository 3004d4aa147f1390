#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "speechagent/sir/model.hpp"

namespace oracle {

// Cross-entropy written out with plain loops, independent of the library's
// forward pass.
inline double sir_loss(const speechagent::sir::SirParams& p, speechagent::sir::PoolMode mode,
                       const std::vector<Eigen::MatrixXd>& xs,
                       const std::vector<speechagent::sir::ImpairmentClass>& ys) {
  double total = 0.0;
  for (std::size_t n = 0; n < xs.size(); ++n) {
    const auto& x = xs[n];
    const auto d = p.enc_weight.rows(), f = p.enc_weight.cols(), t_len = x.cols();
    std::vector<std::vector<double>> h(static_cast<std::size_t>(d), std::vector<double>(static_cast<std::size_t>(t_len)));
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index t = 0; t < t_len; ++t) {
        double a = p.enc_bias[i];
        for (Eigen::Index k = 0; k < f; ++k) a += p.enc_weight(i, k) * x(k, t);
        h[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] = std::tanh(a);
      }
    }
    std::vector<double> w(static_cast<std::size_t>(t_len), 1.0 / static_cast<double>(t_len));
    if (mode == speechagent::sir::PoolMode::Attention) {
      double z = 0.0;
      for (Eigen::Index t = 0; t < t_len; ++t) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < d; ++i) s += p.attn_query[i] * h[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)];
        w[static_cast<std::size_t>(t)] = std::exp(s);
        z += w[static_cast<std::size_t>(t)];
      }
      for (auto& v : w) v /= z;
    }
    std::vector<double> emb(static_cast<std::size_t>(d), 0.0);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index t = 0; t < t_len; ++t)
        emb[static_cast<std::size_t>(i)] += w[static_cast<std::size_t>(t)] * h[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)];
    double logits[4];
    double norm = 0.0;
    for (int c = 0; c < 4; ++c) {
      logits[c] = p.out_bias[c];
      for (Eigen::Index i = 0; i < d; ++i) logits[c] += p.out_weight(c, i) * emb[static_cast<std::size_t>(i)];
      norm += std::exp(logits[c]);
    }
    total += std::log(norm) - logits[speechagent::sir::index_of(ys[n])];
  }
  return total / static_cast<double>(xs.size());
}

}  // namespace oracle
