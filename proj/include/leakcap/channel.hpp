#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <vector>

namespace leakcap {

// 1 / ln 2. Multiplying a value in nats by this constant yields bits.
inline constexpr double kBitsPerNat = 1.4426950408889634074;

inline double nats_to_bits(double nats) { return nats * kBitsPerNat; }
inline double bits_to_nats(double bits) { return bits / kBitsPerNat; }

/// -sum_i p(i) ln p(i), with 0 ln 0 = 0. Accepts any dense Eigen expression.
template <typename Derived>
typename Derived::Scalar entropy_nats(const Eigen::MatrixBase<Derived>& p) {
  using Scalar = typename Derived::Scalar;
  Scalar acc(0);
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const Scalar pi = p.derived().coeff(i);
    if (pi > Scalar(0)) acc -= pi * std::log(pi);
  }
  return acc;
}

template <typename Derived>
typename Derived::Scalar entropy_bits(const Eigen::MatrixBase<Derived>& p) {
  return entropy_nats(p) * static_cast<typename Derived::Scalar>(kBitsPerNat);
}

/// Probability distribution over the secrets of a channel.
class Prior {
 public:
  /// Validates non-negativity and unit sum. Deviations of the sum below
  /// 1e-9 are renormalized; anything larger is rejected.
  explicit Prior(Eigen::VectorXd p);

  static Prior uniform(Eigen::Index n);

  const Eigen::VectorXd& probabilities() const { return p_; }
  Eigen::Index size() const { return p_.size(); }
  double operator[](Eigen::Index i) const { return p_(i); }

 private:
  Eigen::VectorXd p_;
};

/// Distribution over the observations of a channel.
class OutputDistribution {
 public:
  explicit OutputDistribution(Eigen::VectorXd q);

  const Eigen::VectorXd& probabilities() const { return q_; }
  Eigen::Index size() const { return q_.size(); }
  double operator[](Eigen::Index j) const { return q_(j); }

 private:
  Eigen::VectorXd q_;
};

/// A leakage channel: labeled secrets, labeled observations, and the
/// conditional probability matrix phi with phi(j, i) = P(output j | secret i).
/// Columns are probability distributions (one per secret).
class Channel {
 public:
  /// phi is stored column-per-secret. Column sums must be 1 within 1e-12
  /// after normalization; columns whose sum deviates by more than 1e-9 are
  /// rejected rather than silently rescaled.
  Channel(std::vector<std::string> input_labels,
          std::vector<std::string> output_labels, Eigen::MatrixXd phi);

  /// Builds from a row-per-secret table (rows(i, j) = P(output j | secret i)),
  /// the layout used by model files; transposes into column form.
  static Channel from_rows(std::vector<std::string> input_labels,
                           std::vector<std::string> output_labels,
                           const Eigen::MatrixXd& rows);

  Eigen::Index num_inputs() const { return phi_.cols(); }
  Eigen::Index num_outputs() const { return phi_.rows(); }
  const Eigen::MatrixXd& matrix() const { return phi_; }
  const std::vector<std::string>& input_labels() const { return input_labels_; }
  const std::vector<std::string>& output_labels() const { return output_labels_; }

  /// True iff every entry is exactly 0 or 1 (each secret yields one output).
  bool is_deterministic() const;

  /// Indices of the observations reachable from the given secret.
  std::vector<Eigen::Index> output_support(Eigen::Index input) const;

 private:
  std::vector<std::string> input_labels_;
  std::vector<std::string> output_labels_;
  Eigen::MatrixXd phi_;
};

/// q = phi * h.
OutputDistribution output_distribution(const Channel& ch, const Prior& h);

/// Shannon entropy of the prior, in bits.
double entropy(const Prior& h);

/// Mutual information between secret and observation, in nats / bits.
/// Terms with zero joint probability contribute zero.
double mutual_information_nats(const Channel& ch, const Prior& h);
double mutual_information(const Channel& ch, const Prior& h);

/// Per-secret divergence D(phi_col_i || q) in nats, the gradient direction of
/// mutual information. Entries where q vanishes on the column's support are
/// +infinity.
Eigen::VectorXd column_divergences_nats(const Eigen::MatrixXd& phi,
                                        const Eigen::VectorXd& q);

}  // namespace leakcap
