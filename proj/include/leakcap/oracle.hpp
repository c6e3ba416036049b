#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <limits>

#include "leakcap/channel.hpp"
#include "leakcap/constraints.hpp"

namespace leakcap {

struct OracleResult {
  double capacity_bits = std::numeric_limits<double>::quiet_NaN();
  Eigen::VectorXd argmax;
  int iterations = 0;
  // Certified upper-lower bound gap for blahut_arimoto; NaN for the search
  // oracles, which carry no certificate.
  double gap_bits = std::numeric_limits<double>::quiet_NaN();
  bool feasible = true;
};

/// Alternating-maximization capacity of an unconstrained channel. Stops when
/// max_i D(phi_i || q) - sum_i h_i D(phi_i || q) drops below tol_bits; the
/// reported capacity is the achieved mutual information (lower bound).
OracleResult blahut_arimoto(const Channel& ch, double tol_bits = 1e-9,
                            int max_iterations = 500000);

enum class SearchMode { Auto, Grid, Ascent };

struct BruteForceOptions {
  // Grid spacing per coordinate; 0 picks 1/500 for n <= 3 and 1/100 for n = 4.
  double resolution = 0.0;
  SearchMode mode = SearchMode::Auto;  // Auto: grid for n <= 4, ascent above
  std::uint64_t seed = 1;
  int starts = 8;              // ascent restarts
  int ascent_iterations = 4000;
};

/// Constrained capacity by exhaustive simplex scan (small n) or multi-start
/// projected gradient ascent. When the equality constraints pin the prior to
/// a single point, evaluates mutual information there directly. Deterministic
/// for a fixed seed. result.feasible is false when no admissible point exists
/// at the requested resolution.
OracleResult constrained_brute_force(const Channel& ch, const ConstraintSet& cs,
                                     const BruteForceOptions& opts = {});

}  // namespace leakcap
