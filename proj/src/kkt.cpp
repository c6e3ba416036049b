#include "leakcap/kkt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "leakcap/oracle.hpp"

namespace leakcap {

namespace {

constexpr double kHFloor = 1e-14;       // line search keeps iterates above this
constexpr double kBoundaryLimit = 1e-9; // an iterate below this counts as a boundary hit
constexpr double kTieTol = 1e-9;        // capacity ties, nats
constexpr double kOffSupportTol = 1e-6; // gradient slack allowed at pinned secrets

std::string to_string_status(SolveStatus s) {
  switch (s) {
    case SolveStatus::Exact: return "exact";
    case SolveStatus::Approximate: return "approximate";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::NoValidStationaryPoint: return "no-valid-stationary-point";
  }
  return "?";
}

struct NormConstraint {
  Eigen::VectorXd f;  // max |f| = 1
  double bound = 0.0;
  Relation relation = Relation::GreaterEqual;
  double scale = 1.0;  // user multiplier = internal multiplier / scale
};

std::vector<NormConstraint> normalize_all(const ConstraintSet& cs) {
  std::vector<NormConstraint> out;
  out.reserve(cs.size());
  for (const auto& c : cs.constraints()) {
    NormConstraint nc;
    nc.scale = c.coeffs.cwiseAbs().maxCoeff();
    nc.f = c.coeffs / nc.scale;
    nc.bound = c.bound / nc.scale;
    nc.relation = c.relation;
    out.push_back(std::move(nc));
  }
  return out;
}

// Square system for one active set restricted to a support of secrets.
// Unknowns: [h at support, lambda0, lambda per active constraint].
// `forced` records the constraints the caller treats as active even when a
// support reduction made some of their rows redundant.
struct ActiveSystem {
  const Eigen::MatrixXd& phi;
  const std::vector<NormConstraint>& cons;
  std::vector<std::size_t> active;
  std::vector<std::size_t> forced;
  std::vector<Eigen::Index> support;
  // per-column output support and self-information sum phi ln phi
  std::vector<std::vector<Eigen::Index>> col_support;
  Eigen::VectorXd col_self_info;

  ActiveSystem(const Eigen::MatrixXd& phi_, const std::vector<NormConstraint>& cons_,
               std::vector<std::size_t> active_, std::vector<Eigen::Index> support_)
      : phi(phi_), cons(cons_), active(std::move(active_)), forced(active),
        support(std::move(support_)) {
    const Eigen::Index n = phi.cols();
    col_support.resize(n);
    col_self_info.setZero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index s = 0; s < phi.rows(); ++s) {
        if (phi(s, i) > 0.0) {
          col_support[i].push_back(s);
          col_self_info(i) += phi(s, i) * std::log(phi(s, i));
        }
      }
    }
  }

  Eigen::Index size() const {
    return static_cast<Eigen::Index>(support.size()) + 1 +
           static_cast<Eigen::Index>(active.size());
  }

  Eigen::VectorXd full_h(const Eigen::VectorXd& x) const {
    Eigen::VectorXd h = Eigen::VectorXd::Zero(phi.cols());
    for (std::size_t t = 0; t < support.size(); ++t) h(support[t]) = x(t);
    return h;
  }

  // D_i = sum_{s in supp(i)} phi(s,i) ln(phi(s,i)/o_s); +inf if o vanishes
  // somewhere on the column's support.
  double divergence(Eigen::Index i, const Eigen::VectorXd& o) const {
    double acc = col_self_info(i);
    for (Eigen::Index s : col_support[i]) {
      if (o(s) <= 0.0) return std::numeric_limits<double>::infinity();
      acc -= phi(s, i) * std::log(o(s));
    }
    return acc;
  }

  bool residuals(const Eigen::VectorXd& x, Eigen::VectorXd& r) const {
    const std::size_t t_n = support.size();
    const std::size_t a_n = active.size();
    const Eigen::VectorXd h = full_h(x);
    const Eigen::VectorXd o = phi * h;
    const double lambda0 = x(t_n);
    r.resize(size());
    for (std::size_t t = 0; t < t_n; ++t) {
      const Eigen::Index i = support[t];
      const double div = divergence(i, o);
      if (!std::isfinite(div)) return false;
      double acc = div - 1.0 + lambda0;
      for (std::size_t a = 0; a < a_n; ++a)
        acc += x(t_n + 1 + a) * cons[active[a]].f(i);
      r(t) = acc;
    }
    r(t_n) = x.head(t_n).sum() - 1.0;
    for (std::size_t a = 0; a < a_n; ++a) {
      const auto& c = cons[active[a]];
      double g = 0.0;
      for (std::size_t t = 0; t < t_n; ++t) g += c.f(support[t]) * x(t);
      r(t_n + 1 + a) = g - c.bound;
    }
    return true;
  }

  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const {
    const std::size_t t_n = support.size();
    const std::size_t a_n = active.size();
    const Eigen::VectorXd h = full_h(x);
    const Eigen::VectorXd o = phi * h;
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(size(), size());
    // d r_i / d h_j = -sum_s phi(s,i) phi(s,j) / o_s
    for (std::size_t ti = 0; ti < t_n; ++ti) {
      const Eigen::Index i = support[ti];
      for (std::size_t tj = 0; tj < t_n; ++tj) {
        const Eigen::Index j = support[tj];
        double acc = 0.0;
        for (Eigen::Index s : col_support[i]) {
          if (phi(s, j) > 0.0 && o(s) > 0.0) acc += phi(s, i) * phi(s, j) / o(s);
        }
        J(ti, tj) = -acc;
      }
      J(ti, t_n) = 1.0;
      for (std::size_t a = 0; a < a_n; ++a)
        J(ti, t_n + 1 + a) = cons[active[a]].f(i);
    }
    for (std::size_t t = 0; t < t_n; ++t) J(t_n, t) = 1.0;
    for (std::size_t a = 0; a < a_n; ++a)
      for (std::size_t t = 0; t < t_n; ++t)
        J(t_n + 1 + a, t) = cons[active[a]].f(support[t]);
    return J;
  }
};

enum class AttemptKind { Converged, Boundary, Stalled };

struct Attempt {
  AttemptKind kind = AttemptKind::Stalled;
  Eigen::VectorXd x;
  int iterations = 0;
};

Attempt damped_newton(const ActiveSystem& sys, Eigen::VectorXd x,
                      const SolveOptions& opts) {
  const std::size_t t_n = sys.support.size();
  Eigen::VectorXd r, rn;
  Attempt out;
  for (int iter = 0; iter <= opts.max_iterations; ++iter) {
    out.iterations = iter;
    if (!sys.residuals(x, r)) {
      out.kind = AttemptKind::Boundary;
      out.x = x;
      return out;
    }
    if (r.cwiseAbs().maxCoeff() <= opts.residual_tol) {
      out.kind = AttemptKind::Converged;
      out.x = x;
      return out;
    }
    if (iter == opts.max_iterations) break;

    const Eigen::MatrixXd J = sys.jacobian(x);
    const Eigen::VectorXd dx = J.completeOrthogonalDecomposition().solve(-r);
    if (!dx.allFinite()) break;

    // keep probabilities strictly positive along the step
    double cap = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < t_n; ++t)
      if (dx(t) < 0.0) cap = std::min(cap, (x(t) - kHFloor) / -dx(t));
    double alpha = std::min(1.0, 0.995 * cap);
    if (alpha <= 0.0) break;

    const double base = r.squaredNorm();
    bool accepted = false;
    for (int ls = 0; ls < 60 && alpha > 1e-14; ++ls, alpha *= 0.5) {
      const Eigen::VectorXd xn = x + alpha * dx;
      if (xn.head(t_n).minCoeff() < kHFloor) continue;
      if (!sys.residuals(xn, rn)) continue;
      if (rn.squaredNorm() <= (1.0 - 1e-4 * alpha) * base) {
        x = xn;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;  // stalled

    if (x.head(t_n).minCoeff() < kBoundaryLimit &&
        rn.cwiseAbs().maxCoeff() > opts.residual_tol) {
      out.kind = AttemptKind::Boundary;
      out.x = x;
      return out;
    }
  }
  out.kind = AttemptKind::Stalled;
  out.x = x;
  return out;
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  a ^= b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2);
  return a;
}

Eigen::VectorXd dirichlet_interior(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::VectorXd h(n);
  for (std::size_t i = 0; i < n; ++i)
    h(i) = -std::log(std::max(unit(rng), 1e-16));
  h /= h.sum();
  h = h.cwiseMax(1e-6);
  h /= h.sum();
  return h;
}

enum class FailKind { None, Boundary, Stalled };

struct Candidate {
  bool have = false;  // a converged stationary point exists
  bool valid = false;
  FailKind failure = FailKind::None;  // why no point was reached / kept
  std::string rejection;
  Eigen::VectorXd h;          // full length
  double lambda0 = 0.0;
  Eigen::VectorXd lam;        // internal scale, one per active constraint
  std::vector<std::size_t> active;  // rows actually carried by the system
  std::vector<std::size_t> forced;  // the active set as chosen/enumerated
  std::vector<Eigen::Index> support;
  std::vector<Eigen::Index> boundary_inputs;
  double mi_nats = -std::numeric_limits<double>::infinity();
  double residual_max = std::numeric_limits<double>::quiet_NaN();
  double comp_slack_max = 0.0;
  double identity_gap_bits = std::numeric_limits<double>::quiet_NaN();
  bool strict_binding = false;
  int iterations = 0;
  int restarts = 0;
  bool fallback = false;
  std::vector<std::string> notes;
};

// true when a beats b under the selection order: larger capacity, then
// smaller active set, then lexicographically smaller prior.
bool better_candidate(const Candidate& a, const Candidate& b) {
  if (!b.have || !b.valid) return a.have && a.valid;
  if (!a.have || !a.valid) return false;
  if (a.mi_nats > b.mi_nats + kTieTol) return true;
  if (b.mi_nats > a.mi_nats + kTieTol) return false;
  if (a.forced.size() != b.forced.size()) return a.forced.size() < b.forced.size();
  return std::lexicographical_compare(a.h.data(), a.h.data() + a.h.size(),
                                      b.h.data(), b.h.data() + b.h.size());
}

struct SolveContext {
  const Channel& ch;
  const ConstraintSet& cs;
  std::vector<NormConstraint> cons;
  SolveOptions opts;

  explicit SolveContext(const Channel& channel, const ConstraintSet& set,
                        const SolveOptions& options)
      : ch(channel), cs(set), cons(normalize_all(set)), opts(options) {}

  // Converged point -> candidate with every validity check applied.
  Candidate assess(const ActiveSystem& sys, const Attempt& attempt,
                   int restarts_used) const {
    Candidate cand;
    cand.active = sys.active;
    cand.forced = sys.forced;
    cand.support = sys.support;
    cand.iterations = attempt.iterations;
    cand.restarts = restarts_used;
    if (attempt.kind != AttemptKind::Converged) return cand;
    cand.have = true;

    const std::size_t t_n = sys.support.size();
    const std::size_t a_n = sys.active.size();
    Eigen::VectorXd x = attempt.x;

    // Clamp stray negative probabilities and renormalize.
    double worst_negative = 0.0;
    for (std::size_t t = 0; t < t_n; ++t) {
      if (x(t) < 0.0) {
        worst_negative = std::min(worst_negative, x(t));
        x(t) = 0.0;
      }
    }
    if (worst_negative < -opts.validity_tol) {
      cand.rejection = "stationary point leaves the simplex (h = " +
                       std::to_string(worst_negative) + ")";
      cand.failure = FailKind::Boundary;
    }
    x.head(t_n) /= x.head(t_n).sum();

    cand.h = sys.full_h(x);
    cand.lambda0 = x(t_n);
    cand.lam = x.tail(a_n);
    for (Eigen::Index i = 0; i < cand.h.size(); ++i)
      if (cand.h(i) == 0.0) cand.boundary_inputs.push_back(i);

    Eigen::VectorXd r;
    if (!sys.residuals(x, r)) {
      cand.rejection = "stationarity undefined after clamping";
      cand.have = false;
      return cand;
    }
    cand.residual_max = r.cwiseAbs().maxCoeff();
    if (cand.rejection.empty() && cand.residual_max > opts.validity_tol)
      cand.rejection = "residual " + std::to_string(cand.residual_max) +
                       " above tolerance after clamping";

    // Dual feasibility for inequality members of the active set.
    for (std::size_t a = 0; a < a_n && cand.rejection.empty(); ++a) {
      const auto& c = cons[sys.active[a]];
      if (c.relation != Relation::Equal && cand.lam(a) < -opts.validity_tol)
        cand.rejection = "negative multiplier " + std::to_string(cand.lam(a)) +
                         " for constraint " + std::to_string(sys.active[a]);
    }

    // Inactive constraints must hold (strict ones as their closures).
    for (std::size_t k = 0; k < cons.size(); ++k) {
      if (std::find(sys.active.begin(), sys.active.end(), k) != sys.active.end())
        continue;
      const bool pruned =
          std::find(sys.forced.begin(), sys.forced.end(), k) != sys.forced.end();
      const double slack = cons[k].f.dot(cand.h) - cons[k].bound;
      const bool violated = (cons[k].relation == Relation::Equal || pruned)
                                ? std::abs(slack) > opts.validity_tol
                                : slack < -opts.validity_tol;
      if (violated && cand.rejection.empty())
        cand.rejection = "inactive constraint " + std::to_string(k) +
                         " violated (slack " + std::to_string(slack) + ")";
      if (cons[k].relation == Relation::StrictlyGreater &&
          slack <= opts.validity_tol)
        cand.strict_binding = true;  // landed on the open boundary
    }
    for (std::size_t a = 0; a < a_n; ++a)
      if (cons[sys.active[a]].relation == Relation::StrictlyGreater)
        cand.strict_binding = true;

    // Without active constraints every direction off the support is feasible,
    // so a pinned secret may not offer first-order improvement. With active
    // constraints the feasible directions are restricted and candidates are
    // compared on achieved mutual information instead.
    if (t_n < static_cast<std::size_t>(ch.num_inputs())) {
      if (!sys.forced.empty()) {
        cand.notes.push_back(
            "zero-probability secrets under active constraints; selected by "
            "achieved mutual information");
      } else {
        const Eigen::VectorXd o = ch.matrix() * cand.h;
        for (Eigen::Index i = 0; i < ch.num_inputs(); ++i) {
          if (std::find(sys.support.begin(), sys.support.end(), i) !=
              sys.support.end())
            continue;
          const double grad = sys.divergence(i, o) - 1.0 + cand.lambda0;
          if (!(grad <= kOffSupportTol) && cand.rejection.empty()) {
            cand.rejection = "pinned secret " + std::to_string(i) +
                             " would improve the objective";
            break;
          }
        }
      }
    }

    // Complementary slackness bookkeeping (zero by construction up to the
    // Newton residual; recorded for diagnostics).
    for (std::size_t a = 0; a < a_n; ++a) {
      const auto& c = cons[sys.active[a]];
      const double slack = c.f.dot(cand.h) - c.bound;
      cand.comp_slack_max =
          std::max(cand.comp_slack_max, std::abs(cand.lam(a) * slack));
    }

    cand.mi_nats = mutual_information_nats(ch, Prior(cand.h));
    double implied = cand.h.sum() - cand.lambda0 * cand.h.sum();
    for (std::size_t a = 0; a < a_n; ++a)
      implied -= cand.lam(a) * cons[sys.active[a]].f.dot(cand.h);
    cand.identity_gap_bits = std::abs(nats_to_bits(cand.mi_nats - implied));
    if (cand.rejection.empty() &&
        cand.identity_gap_bits > opts.cross_check_tol_bits)
      cand.rejection = "capacity from multipliers disagrees with I(h) by " +
                       std::to_string(cand.identity_gap_bits) + " bits";

    cand.valid = cand.rejection.empty();
    return cand;
  }

  // Active constraint gradients (plus the simplex row) must be independent
  // and consistent on the chosen support.
  bool linear_rows_usable(const std::vector<std::size_t>& active,
                          const std::vector<Eigen::Index>& support,
                          std::string* why) const {
    const Eigen::Index t_n = static_cast<Eigen::Index>(support.size());
    Eigen::MatrixXd G(1 + active.size(), t_n);
    Eigen::VectorXd rhs(1 + active.size());
    G.row(0).setOnes();
    rhs(0) = 1.0;
    for (std::size_t a = 0; a < active.size(); ++a) {
      for (Eigen::Index t = 0; t < t_n; ++t)
        G(1 + a, t) = cons[active[a]].f(support[t]);
      rhs(1 + a) = cons[active[a]].bound;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(G);
    qr.setThreshold(1e-10);
    if (qr.rank() < G.rows()) {
      *why = "linearly dependent active constraint gradients";
      return false;
    }
    const Eigen::VectorXd sol = qr.solve(rhs);
    if ((G * sol - rhs).cwiseAbs().maxCoeff() > 1e-9) {
      *why = "inconsistent active constraints";
      return false;
    }
    return true;
  }

  // On a reduced support, rows of the active system can become linearly
  // dependent. Consistent duplicates are dropped (their multipliers stay
  // zero); an inconsistent system means the support is infeasible.
  std::optional<std::vector<std::size_t>> prune_active(
      const std::vector<std::size_t>& active,
      const std::vector<Eigen::Index>& support) const {
    const Eigen::Index t_n = static_cast<Eigen::Index>(support.size());
    Eigen::MatrixXd kept(1 + active.size(), t_n);
    Eigen::VectorXd rhs(1 + active.size());
    kept.row(0).setOnes();
    rhs(0) = 1.0;
    Eigen::Index rows = 1;
    std::vector<std::size_t> out;
    for (std::size_t k : active) {
      Eigen::VectorXd v(t_n);
      for (Eigen::Index t = 0; t < t_n; ++t) v(t) = cons[k].f(support[t]);
      const Eigen::MatrixXd m = kept.topRows(rows).transpose();  // t_n x rows
      const Eigen::VectorXd c = m.colPivHouseholderQr().solve(v);
      if ((m * c - v).cwiseAbs().maxCoeff() > 1e-10) {
        kept.row(rows) = v.transpose();
        rhs(rows) = cons[k].bound;
        ++rows;
        out.push_back(k);
        continue;
      }
      if (std::abs(c.dot(rhs.head(rows)) - cons[k].bound) > 1e-9)
        return std::nullopt;  // e.g. an equality the support cannot meet
    }
    return out;
  }

  Candidate run_support(const std::vector<std::size_t>& forced,
                        const std::vector<std::size_t>& active,
                        const std::vector<Eigen::Index>& support,
                        int max_restarts, std::uint64_t salt,
                        const Eigen::VectorXd* warm_start) const {
    ActiveSystem sys(ch.matrix(), cons, active, support);
    sys.forced = forced;
    const std::size_t t_n = support.size();
    const std::size_t a_n = active.size();

    Attempt last;
    for (int attempt = 0; attempt <= max_restarts; ++attempt) {
      Eigen::VectorXd x(sys.size());
      if (attempt == 0 && warm_start != nullptr) {
        x = *warm_start;
      } else if (attempt == 0) {
        x.head(t_n).setConstant(1.0 / static_cast<double>(t_n));
        x(t_n) = 1.0;
        x.tail(a_n).setZero();
      } else {
        std::mt19937_64 rng(mix(opts.seed, mix(salt, attempt)));
        x.head(t_n) = dirichlet_interior(t_n, rng);
        x(t_n) = 1.0;
        x.tail(a_n).setZero();
      }
      last = damped_newton(sys, x, opts);
      if (last.kind == AttemptKind::Converged) {
        Candidate c = assess(sys, last, attempt);
        c.restarts = attempt;
        return c;
      }
    }
    Candidate c;
    c.active = active;
    c.forced = forced;
    c.support = support;
    c.restarts = max_restarts;
    c.iterations = last.iterations;
    if (last.kind == AttemptKind::Boundary) {
      c.failure = FailKind::Boundary;
      c.rejection = "iterates driven to the simplex boundary";
    } else {
      c.failure = FailKind::Stalled;
      c.rejection = "no convergence";
    }
    return c;
  }

  // Fix subsets of secrets to zero and solve the reduced problems; used when
  // the interior iteration cannot reach a stationary point.
  Candidate support_fallback(const std::vector<std::size_t>& active,
                             std::uint64_t salt) const {
    const Eigen::Index n = ch.num_inputs();
    Candidate best;
    Candidate best_invalid;
    std::vector<Eigen::Index> support;
    std::vector<bool> pick(n);
    for (Eigen::Index size = n - 1; size >= 1; --size) {
      std::fill(pick.begin(), pick.end(), false);
      std::fill(pick.begin(), pick.begin() + size, true);
      do {
        support.clear();
        for (Eigen::Index i = 0; i < n; ++i)
          if (pick[i]) support.push_back(i);
        const auto pruned = prune_active(active, support);
        if (!pruned) continue;
        Candidate c =
            run_support(active, *pruned, support, 2, mix(salt, size), nullptr);
        c.fallback = true;
        if (c.valid && better_candidate(c, best)) best = c;
        if (c.have && !best_invalid.have) best_invalid = c;
      } while (std::prev_permutation(pick.begin(), pick.end()));
    }
    if (best.have) return best;
    if (best_invalid.have) return best_invalid;
    Candidate none;
    none.active = active;
    none.forced = active;
    none.rejection = "no stationary point on any support";
    none.fallback = true;
    return none;
  }

  // Large instances: seed the support and starting point from the numeric
  // search oracle instead of enumerating supports.
  Candidate oracle_seeded(const std::vector<std::size_t>& active,
                          std::uint64_t salt) const {
    OracleResult seed;
    if (cs.empty()) {
      seed = blahut_arimoto(ch, 1e-9);
    } else {
      BruteForceOptions bopts;
      bopts.mode = SearchMode::Ascent;
      bopts.seed = opts.seed;
      seed = constrained_brute_force(ch, cs, bopts);
    }
    if (!seed.feasible || seed.argmax.size() != ch.num_inputs()) {
      Candidate none;
      none.active = active;
      none.forced = active;
      none.rejection = "oracle seeding failed";
      return none;
    }
    std::vector<Eigen::Index> support;
    for (Eigen::Index i = 0; i < seed.argmax.size(); ++i)
      if (seed.argmax(i) > 1e-7) support.push_back(i);
    if (support.empty()) {
      Candidate none;
      none.active = active;
      none.forced = active;
      none.rejection = "oracle seeding produced an empty support";
      return none;
    }
    const auto pruned = prune_active(active, support);
    if (!pruned) {
      Candidate none;
      none.active = active;
      none.forced = active;
      none.rejection = "active constraints unsatisfiable on the seeded support";
      return none;
    }
    Eigen::VectorXd warm(support.size() + 1 + pruned->size());
    double total = 0.0;
    for (std::size_t t = 0; t < support.size(); ++t) total += seed.argmax(support[t]);
    for (std::size_t t = 0; t < support.size(); ++t)
      warm(t) = seed.argmax(support[t]) / total;
    warm(support.size()) = 1.0;
    warm.tail(pruned->size()).setZero();
    Candidate c = run_support(active, *pruned, support, 2, salt, &warm);
    c.fallback = true;
    c.notes.push_back("support seeded from the search oracle");
    return c;
  }

  Candidate solve_active(const std::vector<std::size_t>& active,
                         std::uint64_t salt) const {
    const Eigen::Index n = ch.num_inputs();
    std::vector<Eigen::Index> full(n);
    std::iota(full.begin(), full.end(), 0);
    std::string why;
    if (!linear_rows_usable(active, full, &why)) {
      Candidate c;
      c.active = active;
      c.forced = active;
      c.rejection = why;
      c.notes.push_back(why + "; candidate skipped");
      return c;
    }
    Candidate c = run_support(active, active, full, opts.max_restarts, salt,
                              nullptr);
    if (c.valid) return c;
    // A converged interior point rejected on dual feasibility or a violated
    // inactive constraint settles this active set; only boundary trouble or
    // outright failure warrants the zero-probability fallback.
    if (c.have && c.failure != FailKind::Boundary) return c;
    Candidate fb = (n <= opts.max_support_enumeration_inputs)
                       ? support_fallback(active, mix(salt, 0x5eedULL))
                       : oracle_seeded(active, mix(salt, 0x5eedULL));
    fb.fallback = true;
    if (fb.valid || !c.have) return fb;
    return c;
  }
};

KktSolution candidate_to_solution(const SolveContext& ctx, const Candidate& cand) {
  KktSolution sol;
  sol.diagnostics.valid = cand.valid;
  sol.diagnostics.rejection = cand.rejection;
  sol.diagnostics.newton_iterations = cand.iterations;
  sol.diagnostics.restarts = cand.restarts;
  sol.diagnostics.used_support_fallback = cand.fallback;
  sol.diagnostics.boundary_inputs = cand.boundary_inputs;
  sol.diagnostics.notes = cand.notes;
  if (!cand.have) {
    sol.status = SolveStatus::NoValidStationaryPoint;
    return sol;
  }
  sol.h = cand.h;
  sol.lambda0 = cand.lambda0;
  sol.lambdas = Eigen::VectorXd::Zero(ctx.cons.size());
  for (std::size_t a = 0; a < cand.active.size(); ++a)
    sol.lambdas(cand.active[a]) = cand.lam(a) / ctx.cons[cand.active[a]].scale;
  sol.active_set = cand.forced;
  std::sort(sol.active_set.begin(), sol.active_set.end());
  sol.capacity_nats = cand.mi_nats;
  sol.capacity_bits = nats_to_bits(cand.mi_nats);
  sol.diagnostics.max_stationarity_residual = cand.residual_max;
  sol.diagnostics.multiplier_identity_gap_bits = cand.identity_gap_bits;
  sol.diagnostics.max_complementary_slackness = cand.comp_slack_max;
  sol.status = cand.valid ? (cand.strict_binding ? SolveStatus::Approximate
                                                 : SolveStatus::Exact)
                          : SolveStatus::NoValidStationaryPoint;
  return sol;
}

// Unconstrained deterministic channels in closed form: mass is spread so that
// every reachable observation is equally likely, giving capacity ln K.
KktSolution deterministic_closed_form(const Channel& ch) {
  const Eigen::MatrixXd& phi = ch.matrix();
  const Eigen::Index n = phi.cols();
  std::vector<Eigen::Index> image(n);
  Eigen::VectorXd class_size = Eigen::VectorXd::Zero(phi.rows());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < phi.rows(); ++j) {
      if (phi(j, i) == 1.0) {
        image[i] = j;
        class_size(j) += 1.0;
        break;
      }
    }
  }
  Eigen::Index reachable = 0;
  for (Eigen::Index j = 0; j < phi.rows(); ++j)
    if (class_size(j) > 0.0) ++reachable;

  KktSolution sol;
  sol.h.resize(n);
  for (Eigen::Index i = 0; i < n; ++i)
    sol.h(i) = 1.0 / (static_cast<double>(reachable) * class_size(image[i]));
  const double ln_k = std::log(static_cast<double>(reachable));
  sol.lambda0 = 1.0 - ln_k;
  sol.lambdas.resize(0);
  sol.capacity_nats = ln_k;
  sol.capacity_bits = nats_to_bits(ln_k);
  sol.status = SolveStatus::Exact;

  const Prior h(sol.h);
  double worst = 0.0;
  const Eigen::VectorXd lambdas;
  const ConstraintSet none;
  for (Eigen::Index i = 0; i < n; ++i)
    worst = std::max(worst, std::abs(stationarity_residual(
                                ch, h, sol.lambda0, lambdas, none, i)));
  sol.diagnostics.max_stationarity_residual = worst;
  sol.diagnostics.multiplier_identity_gap_bits = std::abs(
      capacity_from_multipliers(h, sol.lambda0, lambdas, none) -
      mutual_information(ch, h));
  sol.diagnostics.max_complementary_slackness = 0.0;
  sol.diagnostics.valid = true;
  sol.diagnostics.notes.push_back("deterministic channel solved in closed form");
  return sol;
}

}  // namespace

std::string to_string(SolveStatus s) { return to_string_status(s); }

Prior KktSolution::prior() const {
  if (h.size() == 0)
    throw std::logic_error("no stationary point available for this status");
  return Prior(h);
}

double stationarity_residual(const Channel& ch, const Prior& h, double lambda0,
                             const Eigen::VectorXd& lambdas,
                             const ConstraintSet& cs, Eigen::Index input) {
  if (h.size() != ch.num_inputs())
    throw std::invalid_argument("prior has " + std::to_string(h.size()) +
                                " entries but channel has " +
                                std::to_string(ch.num_inputs()) + " secrets");
  if (input < 0 || input >= ch.num_inputs())
    throw std::invalid_argument("secret index out of range");
  if (static_cast<std::size_t>(lambdas.size()) != cs.size())
    throw std::invalid_argument("expected one multiplier per constraint");

  const Eigen::MatrixXd& phi = ch.matrix();
  const Eigen::VectorXd o = phi * h.probabilities();
  double acc = -1.0 + lambda0;
  for (Eigen::Index s = 0; s < phi.rows(); ++s) {
    const double p = phi(s, input);
    if (p <= 0.0) continue;
    if (o(s) <= 0.0)
      throw std::domain_error(
          "observation " + std::to_string(s) +
          " has zero probability but is reachable from secret " +
          std::to_string(input));
    acc += p * std::log(p / o(s));
  }
  for (std::size_t k = 0; k < cs.size(); ++k)
    acc += lambdas(k) * cs[k].coeffs(input);
  return acc;
}

KktSystem::KktSystem(Channel ch, ConstraintSet cs, std::vector<std::size_t> active)
    : ch_(std::move(ch)), cs_(std::move(cs)), active_(std::move(active)) {
  std::sort(active_.begin(), active_.end());
  for (std::size_t k : active_)
    if (k >= cs_.size())
      throw std::invalid_argument("active constraint index out of range");
}

Eigen::Index KktSystem::unknowns() const {
  return ch_.num_inputs() + 1 + static_cast<Eigen::Index>(active_.size());
}

Eigen::VectorXd KktSystem::residuals(const Eigen::VectorXd& x) const {
  if (x.size() != unknowns())
    throw std::invalid_argument("expected " + std::to_string(unknowns()) +
                                " unknowns, got " + std::to_string(x.size()));
  std::vector<NormConstraint> raw;
  for (const auto& c : cs_.constraints())
    raw.push_back({c.coeffs, c.bound, c.relation, 1.0});
  std::vector<Eigen::Index> full(ch_.num_inputs());
  std::iota(full.begin(), full.end(), 0);
  ActiveSystem sys(ch_.matrix(), raw, active_, full);
  Eigen::VectorXd r;
  if (!sys.residuals(x, r))
    throw std::domain_error(
        "an observation reachable from a positive secret has zero probability");
  return r;
}

Eigen::MatrixXd KktSystem::jacobian(const Eigen::VectorXd& x) const {
  if (x.size() != unknowns())
    throw std::invalid_argument("expected " + std::to_string(unknowns()) +
                                " unknowns, got " + std::to_string(x.size()));
  std::vector<NormConstraint> raw;
  for (const auto& c : cs_.constraints())
    raw.push_back({c.coeffs, c.bound, c.relation, 1.0});
  std::vector<Eigen::Index> full(ch_.num_inputs());
  std::iota(full.begin(), full.end(), 0);
  ActiveSystem sys(ch_.matrix(), raw, active_, full);
  return sys.jacobian(x);
}

KktSolution solve_for_active_set(const Channel& ch, const ConstraintSet& cs,
                                 const std::vector<std::size_t>& active,
                                 const SolveOptions& opts) {
  if (!cs.empty() && cs.dimension() != ch.num_inputs())
    throw std::invalid_argument("constraints are over " +
                                std::to_string(cs.dimension()) +
                                " secrets but channel has " +
                                std::to_string(ch.num_inputs()));
  std::vector<std::size_t> act = active;
  std::sort(act.begin(), act.end());
  act.erase(std::unique(act.begin(), act.end()), act.end());
  for (std::size_t k : act)
    if (k >= cs.size())
      throw std::invalid_argument("active constraint index out of range");
  for (std::size_t k : cs.equality_indices())
    if (std::find(act.begin(), act.end(), k) == act.end())
      throw std::invalid_argument(
          "equality constraints must be part of every active set");

  SolveContext ctx(ch, cs, opts);
  Candidate cand = ctx.solve_active(act, 0x7ac7ULL);
  KktSolution sol = candidate_to_solution(ctx, cand);
  sol.diagnostics.candidates_evaluated = 1;
  return sol;
}

KktSolution solve(const Channel& ch, const ConstraintSet& cs,
                  const SolveOptions& opts) {
  if (!cs.empty() && cs.dimension() != ch.num_inputs())
    throw std::invalid_argument("constraints are over " +
                                std::to_string(cs.dimension()) +
                                " secrets but channel has " +
                                std::to_string(ch.num_inputs()));
  const auto inequalities = cs.inequality_indices();
  if (static_cast<int>(inequalities.size()) > opts.max_enumerated_inequalities)
    throw std::invalid_argument(
        "active-set enumeration limited to " +
        std::to_string(opts.max_enumerated_inequalities) +
        " inequality constraints, got " + std::to_string(inequalities.size()));

  if (!find_feasible_prior(cs, ch.num_inputs())) {
    KktSolution sol;
    sol.status = SolveStatus::Infeasible;
    sol.diagnostics.rejection = "no prior satisfies the constraint set";
    return sol;
  }

  if (cs.empty() && ch.is_deterministic()) return deterministic_closed_form(ch);

  SolveContext ctx(ch, cs, opts);
  const auto equalities = cs.equality_indices();
  const std::size_t q_n = inequalities.size();

  Candidate best;
  Candidate first_invalid;
  int evaluated = 0;
  std::vector<std::string> skip_notes;

  std::vector<bool> pick(q_n);
  for (std::size_t size = 0; size <= q_n; ++size) {
    std::fill(pick.begin(), pick.end(), false);
    std::fill(pick.begin(), pick.begin() + size, true);
    bool more = true;
    while (more) {
      std::vector<std::size_t> active = equalities;
      for (std::size_t q = 0; q < q_n; ++q)
        if (pick[q]) active.push_back(inequalities[q]);
      std::sort(active.begin(), active.end());

      Candidate cand = ctx.solve_active(active, mix(0xa11ceULL, ++evaluated));
      for (const auto& note : cand.notes) skip_notes.push_back(note);
      if (cand.valid) {
        if (opts.first_valid) {
          KktSolution sol = candidate_to_solution(ctx, cand);
          sol.diagnostics.candidates_evaluated = evaluated;
          sol.diagnostics.notes.push_back("first valid candidate returned");
          return sol;
        }
        if (better_candidate(cand, best)) best = cand;
      } else if (cand.have && !first_invalid.have) {
        first_invalid = cand;
      }
      more = q_n > 0 && std::prev_permutation(pick.begin(), pick.end());
    }
  }

  Candidate& chosen = best.valid ? best : first_invalid;
  KktSolution sol = candidate_to_solution(ctx, chosen);
  sol.diagnostics.candidates_evaluated = evaluated;
  for (const auto& note : skip_notes)
    if (sol.diagnostics.notes.size() < 8) sol.diagnostics.notes.push_back(note);
  if (!best.valid && !first_invalid.have)
    sol.diagnostics.rejection = "no active set produced a stationary point";
  return sol;
}

double capacity_from_multipliers(const Prior& h, double lambda0,
                                 const Eigen::VectorXd& lambdas,
                                 const ConstraintSet& cs) {
  if (static_cast<std::size_t>(lambdas.size()) != cs.size())
    throw std::invalid_argument("expected one multiplier per constraint");
  if (!cs.empty() && cs.dimension() != h.size())
    throw std::invalid_argument("constraint dimension does not match prior");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < h.size(); ++i) {
    double inner = 1.0 - lambda0;
    for (std::size_t k = 0; k < cs.size(); ++k)
      inner -= lambdas(k) * cs[k].coeffs(i);
    acc += h[i] * inner;
  }
  return nats_to_bits(acc);
}

LeakageReport leakage_report(const Channel& ch, const KktSolution& solution) {
  if (!solution.solved())
    throw std::logic_error("leakage report requires a solved instance, got " +
                           to_string(solution.status));
  LeakageReport report;
  report.status = solution.status;
  report.capacity_bits = solution.capacity_bits;
  report.capacity_nats = solution.capacity_nats;
  report.h = solution.h;
  report.lambda0 = solution.lambda0;
  report.lambdas = solution.lambdas;
  report.active_set = solution.active_set;
  report.prior_entropy_bits = entropy(solution.prior());
  if (report.prior_entropy_bits > 0.0)
    report.leakage_ratio_percent =
        100.0 * report.capacity_bits / report.prior_entropy_bits;
  return report;
}

// ---------------------------------------------------------------------------
// Phase-1 simplex for the feasibility pre-pass.

std::optional<Eigen::VectorXd> find_feasible_prior(const ConstraintSet& cs,
                                                   Eigen::Index n, double tol) {
  if (n <= 0) throw std::invalid_argument("dimension must be positive");
  if (!cs.empty() && cs.dimension() != n)
    throw std::invalid_argument("constraint dimension does not match");

  const auto cons = normalize_all(cs);
  const std::size_t m = cons.size();
  std::size_t slacks = 0;
  for (const auto& c : cons)
    if (c.relation != Relation::Equal) ++slacks;

  const std::size_t rows = m + 1;
  const std::size_t real_cols = n + slacks;
  const std::size_t cols = real_cols + rows;  // plus artificials
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(rows + 1, cols + 1);

  // Row 0: sum h = 1. Row k+1: f.h - s_k = bound (s_k only for inequalities).
  T.block(0, 0, 1, n).setOnes();
  T(0, cols) = 1.0;
  std::size_t slack = 0;
  for (std::size_t k = 0; k < m; ++k) {
    for (Eigen::Index i = 0; i < n; ++i) T(k + 1, i) = cons[k].f(i);
    if (cons[k].relation != Relation::Equal) T(k + 1, n + slack++) = -1.0;
    T(k + 1, cols) = cons[k].bound;
  }
  for (std::size_t r = 0; r < rows; ++r) {
    if (T(r, cols) < 0.0) T.row(r) = -T.row(r);
    T(r, real_cols + r) = 1.0;  // artificial basis
  }

  // Objective: minimize the artificial total. Reduced costs of the real
  // columns are the negated row sums; artificials start at zero.
  std::vector<std::size_t> basis(rows);
  for (std::size_t r = 0; r < rows; ++r) basis[r] = real_cols + r;
  for (std::size_t j = 0; j <= cols; ++j) {
    double colsum = 0.0;
    for (std::size_t r = 0; r < rows; ++r) colsum += T(r, j);
    T(rows, j) = (j >= real_cols && j < cols) ? 0.0 : -colsum;
  }

  const double pivot_tol = 1e-11;
  for (int iter = 0; iter < 10000; ++iter) {
    std::size_t enter = cols;
    for (std::size_t j = 0; j < cols; ++j) {
      if (T(rows, j) < -pivot_tol) {  // Bland's rule: first improving column
        enter = j;
        break;
      }
    }
    if (enter == cols) break;
    std::size_t leave = rows;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < rows; ++r) {
      if (T(r, enter) > pivot_tol) {
        const double ratio = T(r, cols) / T(r, enter);
        if (ratio < best_ratio - 1e-15) {
          best_ratio = ratio;
          leave = r;
        }
      }
    }
    if (leave == rows) break;  // unbounded cannot happen in phase 1
    T.row(leave) /= T(leave, enter);
    for (std::size_t r = 0; r <= rows; ++r) {
      if (r != leave && T(r, enter) != 0.0) T.row(r) -= T(r, enter) * T.row(leave);
    }
    basis[leave] = enter;
  }

  // The objective cell holds -z; feasible iff the artificial total reached 0.
  if (-T(rows, cols) > tol) return std::nullopt;
  double artificial_total = 0.0;
  for (std::size_t r = 0; r < rows; ++r)
    if (basis[r] >= real_cols) artificial_total += T(r, cols);
  if (artificial_total > tol) return std::nullopt;

  Eigen::VectorXd h = Eigen::VectorXd::Zero(n);
  for (std::size_t r = 0; r < rows; ++r)
    if (basis[r] < static_cast<std::size_t>(n)) h(basis[r]) = T(r, cols);
  h = h.cwiseMax(0.0);
  const double sum = h.sum();
  if (sum <= 0.0) return std::nullopt;
  h /= sum;
  return h;
}

}  // namespace leakcap
