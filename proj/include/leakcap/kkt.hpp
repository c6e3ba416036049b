#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "leakcap/channel.hpp"
#include "leakcap/constraints.hpp"

namespace leakcap {

enum class SolveStatus { Exact, Approximate, Infeasible, NoValidStationaryPoint };

std::string to_string(SolveStatus s);

struct SolveOptions {
  double residual_tol = 1e-10;  // Newton convergence threshold, nats
  double validity_tol = 1e-8;   // dual feasibility / activity / simplex slack
  double strict_margin = 0.0;   // clearance demanded of strict inequalities
  int max_iterations = 200;     // Newton iterations per attempt
  int max_restarts = 10;        // random interior restarts per candidate
  std::uint64_t seed = 1;       // restart sampling
  bool first_valid = false;     // return the first valid candidate found
  int max_enumerated_inequalities = 20;
  int max_support_enumeration_inputs = 12;
  double cross_check_tol_bits = 1e-6;  // multiplier identity vs direct I(h*)
};

struct SolveDiagnostics {
  // Largest stationarity residual over the solution's support, in nats.
  double max_stationarity_residual = std::numeric_limits<double>::quiet_NaN();
  // |capacity via multipliers - mutual information| at the solution, bits.
  double multiplier_identity_gap_bits = std::numeric_limits<double>::quiet_NaN();
  double max_complementary_slackness = std::numeric_limits<double>::quiet_NaN();
  int newton_iterations = 0;
  int restarts = 0;
  int candidates_evaluated = 0;
  bool used_support_fallback = false;
  // Secrets pinned to probability zero. Zero-probability handling goes beyond
  // the multiplier system proper, so it is surfaced here explicitly.
  std::vector<Eigen::Index> boundary_inputs;
  bool valid = false;      // candidate passed every validity check
  std::string rejection;   // first failed check, when !valid
  std::vector<std::string> notes;
};

/// Outcome of a capacity solve: the maximizing prior, the multipliers of the
/// simplex condition (lambda0) and of each user constraint (zero when
/// inactive), the achieved capacity, and diagnostics. Multipliers are scaled
/// to the constraints exactly as stored in the ConstraintSet.
struct KktSolution {
  SolveStatus status = SolveStatus::NoValidStationaryPoint;
  Eigen::VectorXd h;  // empty when no stationary point was found
  double lambda0 = std::numeric_limits<double>::quiet_NaN();
  Eigen::VectorXd lambdas;
  std::vector<std::size_t> active_set;
  double capacity_nats = std::numeric_limits<double>::quiet_NaN();
  double capacity_bits = std::numeric_limits<double>::quiet_NaN();
  SolveDiagnostics diagnostics;

  bool solved() const {
    return status == SolveStatus::Exact || status == SolveStatus::Approximate;
  }
  Prior prior() const;  // throws std::logic_error when h is empty
};

/// Stationarity residual of secret i at (h, lambda), in nats:
///   sum_{s in support(i)} phi(s,i) ln(phi(s,i)/o_s) - 1 + lambda0
///     + sum_k lambda_k f(i,k)
/// For deterministic channels this reduces to -ln(o_{s(i)}) - 1 + lambda0
/// + sum_k lambda_k f(i,k). Throws std::domain_error if an observation in the
/// secret's support has zero probability under h.
double stationarity_residual(const Channel& ch, const Prior& h, double lambda0,
                             const Eigen::VectorXd& lambdas,
                             const ConstraintSet& cs, Eigen::Index input);

/// The square nonlinear system for one active-set candidate: one stationarity
/// row per secret, the simplex row, and one row per active constraint.
/// Unknown layout: x = [h(0..n-1), lambda0, lambda_k for k in active()].
/// Inactive multipliers are fixed to zero and do not appear in x.
class KktSystem {
 public:
  KktSystem(Channel ch, ConstraintSet cs, std::vector<std::size_t> active);

  Eigen::Index unknowns() const;  // n + 1 + |active|
  const std::vector<std::size_t>& active() const { return active_; }

  Eigen::VectorXd residuals(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const;

 private:
  Channel ch_;
  ConstraintSet cs_;
  std::vector<std::size_t> active_;
};

/// Solves the KKT system with the given constraints forced active (equality
/// constraints must always be included). Returns the converged candidate even
/// when it fails a validity check; diagnostics.valid / diagnostics.rejection
/// tell the two apart, and an invalid candidate carries status
/// NoValidStationaryPoint with its h and multipliers still populated.
KktSolution solve_for_active_set(const Channel& ch, const ConstraintSet& cs,
                                 const std::vector<std::size_t>& active,
                                 const SolveOptions& opts = {});

/// Full solve: feasibility pre-pass, then active-set enumeration in order of
/// ascending cardinality, damped Newton per candidate, and selection of the
/// valid candidate with maximum mutual information. Ties within 1e-9 nats go
/// to the smaller active set, then to the lexicographically smaller prior.
KktSolution solve(const Channel& ch, const ConstraintSet& cs,
                  const SolveOptions& opts = {});

/// Capacity implied by the multipliers at a stationary point, in bits:
///   (1/ln 2) * sum_i h_i (1 - lambda0 - sum_k lambda_k f(i,k)).
/// Agrees with mutual_information at any converged stationary point; the
/// solver cross-checks the two and rejects candidates where they disagree.
double capacity_from_multipliers(const Prior& h, double lambda0,
                                 const Eigen::VectorXd& lambdas,
                                 const ConstraintSet& cs);

struct LeakageReport {
  SolveStatus status = SolveStatus::NoValidStationaryPoint;
  double capacity_bits = std::numeric_limits<double>::quiet_NaN();
  double capacity_nats = std::numeric_limits<double>::quiet_NaN();
  double prior_entropy_bits = std::numeric_limits<double>::quiet_NaN();
  // capacity / H(h*), as a percentage; absent when H(h*) = 0.
  std::optional<double> leakage_ratio_percent;
  Eigen::VectorXd h;
  double lambda0 = std::numeric_limits<double>::quiet_NaN();
  Eigen::VectorXd lambdas;
  std::vector<std::size_t> active_set;
};

/// Summary of a solved instance; requires status Exact or Approximate.
LeakageReport leakage_report(const Channel& ch, const KktSolution& solution);

/// Phase-1 feasibility: a prior satisfying the closure of every constraint,
/// or nullopt when the constraint polytope is empty.
std::optional<Eigen::VectorXd> find_feasible_prior(const ConstraintSet& cs,
                                                   Eigen::Index n,
                                                   double tol = 1e-9);

}  // namespace leakcap
