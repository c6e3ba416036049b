#include "leakcap/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

namespace leakcap {

namespace {

constexpr double kFeasTol = 1e-9;

// ln q with underflow guard; columns keep their own support so a vanishing
// entry only matters where phi is positive.
Eigen::VectorXd safe_log(const Eigen::VectorXd& q) {
  Eigen::VectorXd out(q.size());
  for (Eigen::Index s = 0; s < q.size(); ++s)
    out(s) = std::log(std::max(q(s), 1e-300));
  return out;
}

struct FeasibleRegion {
  std::vector<Eigen::VectorXd> f;  // normalized coefficients
  std::vector<double> bound;
  std::vector<bool> equality;

  explicit FeasibleRegion(const ConstraintSet& cs) {
    for (const auto& c : cs.constraints()) {
      const double scale = c.coeffs.cwiseAbs().maxCoeff();
      f.push_back(c.coeffs / scale);
      bound.push_back(c.bound / scale);
      equality.push_back(c.relation == Relation::Equal);
    }
  }

  // Strict relations are checked as their closures; the search computes the
  // supremum that a strict problem only approaches.
  bool contains(const Eigen::VectorXd& h, double tol) const {
    for (std::size_t k = 0; k < f.size(); ++k) {
      const double slack = f[k].dot(h) - bound[k];
      if (equality[k] ? std::abs(slack) > tol : slack < -tol) return false;
    }
    return true;
  }
};

// Projection onto {sum h = 1, h >= 0}: shift by the largest theta with
// u_k > (prefix_sum_k - 1) / (k+1), then clip.
Eigen::VectorXd project_simplex(Eigen::VectorXd v) {
  const Eigen::Index n = v.size();
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double css = 0.0, theta = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    css += u[k];
    const double t = (css - 1.0) / static_cast<double>(k + 1);
    if (u[k] > t) theta = t;
  }
  return (v.array() - theta).cwiseMax(0.0).matrix();
}

// Dykstra's alternating projections onto the simplex and each constraint's
// halfspace/hyperplane.
Eigen::VectorXd project_feasible(const FeasibleRegion& region, Eigen::VectorXd h,
                                 int cycles = 300) {
  const std::size_t m = region.f.size();
  std::vector<Eigen::VectorXd> corr(m + 1,
                                    Eigen::VectorXd::Zero(h.size()));
  for (int c = 0; c < cycles; ++c) {
    const Eigen::VectorXd before = h;
    for (std::size_t k = 0; k <= m; ++k) {
      const Eigen::VectorXd y = h + corr[k];
      Eigen::VectorXd projected;
      if (k == m) {
        projected = project_simplex(y);
      } else {
        const double slack = region.f[k].dot(y) - region.bound[k];
        if (region.equality[k] || slack < 0.0)
          projected = y - (slack / region.f[k].squaredNorm()) * region.f[k];
        else
          projected = y;
      }
      corr[k] = y - projected;
      h = projected;
    }
    if ((h - before).cwiseAbs().maxCoeff() < 1e-13) break;
  }
  return h;
}

double mi_bits_fast(const Eigen::MatrixXd& phi, const Eigen::VectorXd& col_entropy_nats,
                    const Eigen::VectorXd& h) {
  const Eigen::VectorXd q = phi * h;
  return nats_to_bits(entropy_nats(q) - h.dot(col_entropy_nats));
}

bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(),
                                      b.data() + b.size());
}

// When the equalities pin the prior to one point, evaluate there directly.
std::optional<OracleResult> unique_point_shortcut(const Channel& ch,
                                                  const ConstraintSet& cs,
                                                  const FeasibleRegion& region) {
  std::vector<std::size_t> eq = cs.equality_indices();
  const Eigen::Index n = ch.num_inputs();
  Eigen::MatrixXd A(1 + eq.size(), n);
  Eigen::VectorXd b(1 + eq.size());
  A.row(0).setOnes();
  b(0) = 1.0;
  for (std::size_t r = 0; r < eq.size(); ++r) {
    A.row(1 + r) = region.f[eq[r]].transpose();
    b(1 + r) = region.bound[eq[r]];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  qr.setThreshold(1e-10);
  if (qr.rank() < n) return std::nullopt;
  Eigen::VectorXd h = qr.solve(b);
  if ((A * h - b).cwiseAbs().maxCoeff() > kFeasTol) {
    OracleResult res;
    res.feasible = false;
    return res;
  }
  h = h.cwiseMax(0.0);
  h /= h.sum();
  OracleResult res;
  if (!region.contains(h, 1e-8)) {
    res.feasible = false;
    return res;
  }
  res.capacity_bits = mutual_information(ch, Prior(h));
  res.argmax = h;
  res.iterations = 0;
  res.gap_bits = 0.0;
  return res;
}

OracleResult grid_search(const Channel& ch, const FeasibleRegion& region,
                         double resolution) {
  const Eigen::Index n = ch.num_inputs();
  const int steps = std::max(1, static_cast<int>(std::lround(1.0 / resolution)));
  const Eigen::MatrixXd& phi = ch.matrix();
  Eigen::VectorXd col_entropy(n);
  for (Eigen::Index i = 0; i < n; ++i) col_entropy(i) = entropy_nats(phi.col(i));

  // Equality constraints cannot be hit exactly on a lattice; allow one grid
  // cell of slack for them.
  const double eq_slack = std::max(kFeasTol, 1.0 / static_cast<double>(steps));

  OracleResult best;
  best.feasible = false;
  best.capacity_bits = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd h(n);
  std::vector<int> counts(n, 0);
  long long scanned = 0;

  // Enumerate compositions of `steps` into n parts.
  std::function<void(Eigen::Index, int)> scan = [&](Eigen::Index i, int left) {
    if (i == n - 1) {
      counts[i] = left;
      for (Eigen::Index t = 0; t < n; ++t)
        h(t) = static_cast<double>(counts[t]) / static_cast<double>(steps);
      ++scanned;
      for (std::size_t k = 0; k < region.f.size(); ++k) {
        const double slack = region.f[k].dot(h) - region.bound[k];
        if (region.equality[k] ? std::abs(slack) > eq_slack : slack < -kFeasTol)
          return;
      }
      const double value = mi_bits_fast(phi, col_entropy, h);
      if (!best.feasible || value > best.capacity_bits + 1e-12 ||
          (std::abs(value - best.capacity_bits) <= 1e-12 &&
           lex_less(h, best.argmax))) {
        best.feasible = true;
        best.capacity_bits = value;
        best.argmax = h;
      }
      return;
    }
    for (int c = left; c >= 0; --c) {
      counts[i] = c;
      scan(i + 1, left - c);
    }
  };
  scan(0, steps);

  best.iterations = static_cast<int>(std::min<long long>(
      scanned, std::numeric_limits<int>::max()));
  if (!best.feasible) best.capacity_bits = std::numeric_limits<double>::quiet_NaN();
  return best;
}

OracleResult ascent_search(const Channel& ch, const FeasibleRegion& region,
                           const BruteForceOptions& opts) {
  const Eigen::Index n = ch.num_inputs();
  const Eigen::MatrixXd& phi = ch.matrix();
  Eigen::VectorXd col_entropy(n);
  for (Eigen::Index i = 0; i < n; ++i) col_entropy(i) = entropy_nats(phi.col(i));

  OracleResult best;
  best.feasible = false;
  best.capacity_bits = -std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  int iterations = 0;
  for (int start = 0; start < std::max(1, opts.starts); ++start) {
    Eigen::VectorXd h;
    if (start == 0) {
      h = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    } else {
      h.resize(n);
      for (Eigen::Index i = 0; i < n; ++i)
        h(i) = -std::log(std::max(unit(rng), 1e-16));
      h /= h.sum();
    }
    h = project_feasible(region, h);
    if (!region.contains(h, 1e-7) || std::abs(h.sum() - 1.0) > 1e-7) continue;

    double value = mi_bits_fast(phi, col_entropy, h);
    double step = 0.25;
    for (int it = 0; it < opts.ascent_iterations && step > 1e-12; ++it) {
      ++iterations;
      const Eigen::VectorXd q = phi * h;
      Eigen::VectorXd grad =
          column_divergences_nats(phi, q).cwiseMin(1e3) -
          Eigen::VectorXd::Ones(n);
      Eigen::VectorXd proposal = project_feasible(region, h + step * grad);
      const double proposal_value = mi_bits_fast(phi, col_entropy, proposal);
      if (proposal_value > value + 1e-15) {
        h = proposal;
        value = proposal_value;
        step = std::min(step * 1.25, 1.0);
      } else {
        step *= 0.5;
      }
    }
    if (!best.feasible || value > best.capacity_bits + 1e-12 ||
        (std::abs(value - best.capacity_bits) <= 1e-12 && lex_less(h, best.argmax))) {
      best.feasible = true;
      best.capacity_bits = value;
      best.argmax = h;
    }
  }
  best.iterations = iterations;
  if (!best.feasible) best.capacity_bits = std::numeric_limits<double>::quiet_NaN();
  return best;
}

}  // namespace

OracleResult blahut_arimoto(const Channel& ch, double tol_bits,
                            int max_iterations) {
  if (!(tol_bits > 0.0)) throw std::invalid_argument("tolerance must be positive");
  const Eigen::MatrixXd& phi = ch.matrix();
  const Eigen::Index n = phi.cols();
  const double tol_nats = bits_to_nats(tol_bits);

  Eigen::VectorXd log_h =
      Eigen::VectorXd::Constant(n, -std::log(static_cast<double>(n)));
  Eigen::VectorXd self_info(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double acc = 0.0;
    for (Eigen::Index s = 0; s < phi.rows(); ++s)
      if (phi(s, i) > 0.0) acc += phi(s, i) * std::log(phi(s, i));
    self_info(i) = acc;
  }

  OracleResult res;
  Eigen::VectorXd h(n);
  double lower = 0.0, upper = 0.0;
  for (int iter = 1; iter <= max_iterations; ++iter) {
    h = (log_h.array() - log_h.maxCoeff()).exp();
    h /= h.sum();
    const Eigen::VectorXd q = phi * h;
    const Eigen::VectorXd div = self_info - phi.transpose() * safe_log(q);
    lower = h.dot(div);  // achieved mutual information
    upper = div.maxCoeff();
    res.iterations = iter;
    if (upper - lower < tol_nats) break;
    log_h += div;
  }
  res.capacity_bits = nats_to_bits(std::max(lower, 0.0));
  res.argmax = h;
  res.gap_bits = nats_to_bits(std::max(upper - lower, 0.0));
  return res;
}

OracleResult constrained_brute_force(const Channel& ch, const ConstraintSet& cs,
                                     const BruteForceOptions& opts) {
  if (!cs.empty() && cs.dimension() != ch.num_inputs())
    throw std::invalid_argument("constraint dimension does not match channel");
  const Eigen::Index n = ch.num_inputs();
  FeasibleRegion region(cs);

  if (!cs.equality_indices().empty()) {
    if (auto pinned = unique_point_shortcut(ch, cs, region)) return *pinned;
  }

  SearchMode mode = opts.mode;
  if (mode == SearchMode::Auto) mode = n <= 4 ? SearchMode::Grid : SearchMode::Ascent;
  if (mode == SearchMode::Grid && n > 4)
    throw std::invalid_argument("grid search supports at most 4 secrets, got " +
                                std::to_string(n));

  if (mode == SearchMode::Grid) {
    double resolution = opts.resolution;
    if (resolution <= 0.0) resolution = n <= 3 ? 1.0 / 500 : 1.0 / 100;
    return grid_search(ch, region, resolution);
  }
  return ascent_search(ch, region, opts);
}

}  // namespace leakcap
