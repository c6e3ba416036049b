#include "leakcap/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace leakcap {

namespace {

constexpr double kSumTol = 1e-12;
constexpr double kNormalizeLimit = 1e-9;

[[noreturn]] void fail(const std::string& what) {
  throw std::invalid_argument(what);
}

}  // namespace

Prior::Prior(Eigen::VectorXd p) : p_(std::move(p)) {
  if (p_.size() == 0) fail("prior must have at least one entry");
  for (Eigen::Index i = 0; i < p_.size(); ++i) {
    if (!(p_(i) >= 0.0))
      fail("prior entry " + std::to_string(i) + " is negative or NaN: " +
           std::to_string(p_(i)));
  }
  const double sum = p_.sum();
  if (std::abs(sum - 1.0) > kNormalizeLimit)
    fail("prior entries sum to " + std::to_string(sum) + ", expected 1");
  if (std::abs(sum - 1.0) > kSumTol) p_ /= sum;
}

Prior Prior::uniform(Eigen::Index n) {
  if (n <= 0) fail("prior dimension must be positive");
  return Prior(Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n)));
}

OutputDistribution::OutputDistribution(Eigen::VectorXd q) : q_(std::move(q)) {
  if (q_.size() == 0) fail("output distribution must have at least one entry");
  for (Eigen::Index j = 0; j < q_.size(); ++j) {
    if (!(q_(j) >= 0.0))
      fail("output probability " + std::to_string(j) + " is negative or NaN");
  }
  if (std::abs(q_.sum() - 1.0) > 1e-10)
    fail("output probabilities sum to " + std::to_string(q_.sum()) +
         ", expected 1");
}

Channel::Channel(std::vector<std::string> input_labels,
                 std::vector<std::string> output_labels, Eigen::MatrixXd phi)
    : input_labels_(std::move(input_labels)),
      output_labels_(std::move(output_labels)),
      phi_(std::move(phi)) {
  if (phi_.cols() != static_cast<Eigen::Index>(input_labels_.size()))
    fail("channel has " + std::to_string(phi_.cols()) + " columns but " +
         std::to_string(input_labels_.size()) + " input labels");
  if (phi_.rows() != static_cast<Eigen::Index>(output_labels_.size()))
    fail("channel has " + std::to_string(phi_.rows()) + " rows but " +
         std::to_string(output_labels_.size()) + " output labels");
  if (phi_.rows() == 0 || phi_.cols() == 0) fail("channel must be non-empty");

  const std::set<std::string> in_seen(input_labels_.begin(), input_labels_.end());
  if (in_seen.size() != input_labels_.size()) fail("duplicate input label");
  const std::set<std::string> out_seen(output_labels_.begin(), output_labels_.end());
  if (out_seen.size() != output_labels_.size()) fail("duplicate output label");

  for (Eigen::Index i = 0; i < phi_.cols(); ++i) {
    for (Eigen::Index j = 0; j < phi_.rows(); ++j) {
      const double v = phi_(j, i);
      if (!(v >= 0.0) || v > 1.0 + kSumTol)
        fail("probability for secret '" + input_labels_[i] +
             "', observation '" + output_labels_[j] + "' is outside [0,1]: " +
             std::to_string(v));
    }
    const double sum = phi_.col(i).sum();
    if (std::abs(sum - 1.0) > kNormalizeLimit)
      fail("distribution of secret '" + input_labels_[i] + "' sums to " +
           std::to_string(sum) + ", expected 1");
    if (std::abs(sum - 1.0) > kSumTol) phi_.col(i) /= sum;
  }
}

Channel Channel::from_rows(std::vector<std::string> input_labels,
                           std::vector<std::string> output_labels,
                           const Eigen::MatrixXd& rows) {
  return Channel(std::move(input_labels), std::move(output_labels),
                 rows.transpose());
}

bool Channel::is_deterministic() const {
  for (Eigen::Index i = 0; i < phi_.cols(); ++i)
    for (Eigen::Index j = 0; j < phi_.rows(); ++j)
      if (phi_(j, i) != 0.0 && phi_(j, i) != 1.0) return false;
  return true;
}

std::vector<Eigen::Index> Channel::output_support(Eigen::Index input) const {
  std::vector<Eigen::Index> support;
  for (Eigen::Index j = 0; j < phi_.rows(); ++j)
    if (phi_(j, input) > 0.0) support.push_back(j);
  return support;
}

OutputDistribution output_distribution(const Channel& ch, const Prior& h) {
  if (h.size() != ch.num_inputs())
    fail("prior has " + std::to_string(h.size()) + " entries but channel has " +
         std::to_string(ch.num_inputs()) + " secrets");
  return OutputDistribution(ch.matrix() * h.probabilities());
}

double entropy(const Prior& h) { return entropy_bits(h.probabilities()); }

Eigen::VectorXd column_divergences_nats(const Eigen::MatrixXd& phi,
                                        const Eigen::VectorXd& q) {
  Eigen::VectorXd div(phi.cols());
  for (Eigen::Index i = 0; i < phi.cols(); ++i) {
    double acc = 0.0;
    for (Eigen::Index s = 0; s < phi.rows(); ++s) {
      const double p = phi(s, i);
      if (p <= 0.0) continue;
      if (q(s) <= 0.0) {
        acc = std::numeric_limits<double>::infinity();
        break;
      }
      acc += p * std::log(p / q(s));
    }
    div(i) = acc;
  }
  return div;
}

double mutual_information_nats(const Channel& ch, const Prior& h) {
  if (h.size() != ch.num_inputs())
    fail("prior has " + std::to_string(h.size()) + " entries but channel has " +
         std::to_string(ch.num_inputs()) + " secrets");
  const Eigen::MatrixXd& phi = ch.matrix();
  const Eigen::VectorXd q = phi * h.probabilities();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < phi.cols(); ++i) {
    const double hi = h[i];
    if (hi <= 0.0) continue;  // zero joint mass contributes nothing
    for (Eigen::Index s = 0; s < phi.rows(); ++s) {
      const double p = phi(s, i);
      if (p <= 0.0) continue;
      acc += hi * p * std::log(p / q(s));
    }
  }
  // The sum is non-negative up to rounding; snap stray noise to zero.
  if (acc < 0.0 && acc > -1e-9) acc = 0.0;
  return acc;
}

double mutual_information(const Channel& ch, const Prior& h) {
  return nats_to_bits(mutual_information_nats(ch, h));
}

}  // namespace leakcap
