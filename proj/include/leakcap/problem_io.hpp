#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "leakcap/channel.hpp"
#include "leakcap/constraints.hpp"
#include "leakcap/kkt.hpp"
#include "leakcap/models.hpp"
#include "leakcap/oracle.hpp"

namespace leakcap {

inline constexpr const char* kToolName = "leakcap";
inline constexpr const char* kToolVersion = "0.1.0";

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Options carried inside a problem file; command-line flags override them.
struct ProblemOptions {
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  bool oracle = false;
  std::optional<double> oracle_resolution;
};

/// A parsed problem: exactly one model (explicit channel, two-thread program,
/// or relay network) plus side conditions resolved against the model's secret
/// labels.
struct ProblemFile {
  std::variant<ThreadedProgramParams, Channel, NetworkModel> model;
  ConstraintSet constraints;
  ProblemOptions options;

  bool is_channel() const { return std::holds_alternative<Channel>(model); }
  bool is_program() const { return std::holds_alternative<ThreadedProgramParams>(model); }
  bool is_network() const { return std::holds_alternative<NetworkModel>(model); }

  /// Compiles the model into its channel (identity for explicit channels).
  Channel build_channel() const;
  std::vector<std::string> secret_labels() const;
};

/// Parses the JSON problem format. Probabilities may be numbers or exact
/// rational strings like "1/3"; constraints may be given as expressions
/// ("h1 >= h2", "h1 - 100*h2 > 0") or as explicit coefficient maps.
/// Throws ParseError with a description of the offending field.
ProblemFile parse_problem(const std::string& text);

/// Canonical JSON for a problem; parse(serialize(p)) reproduces the model.
std::string serialize_problem(const ProblemFile& problem);

enum class ReportFormat { Text, Machine };

struct RunFlags {
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  bool oracle = false;
  bool first_valid = false;
  ReportFormat format = ReportFormat::Text;
};

struct OracleComparison {
  std::string method;  // "blahut-arimoto" or "constrained-search"
  double capacity_bits = 0.0;
  double delta_bits = 0.0;  // solver minus oracle
  int iterations = 0;
  double gap_bits = std::numeric_limits<double>::quiet_NaN();
};

struct ReportDocument {
  std::string tool = kToolName;
  std::string version = kToolVersion;
  std::uint64_t seed = 0;
  ProblemFile problem;
  std::optional<Channel> channel;  // compiled model
  KktSolution solution;
  LeakageReport summary;
  std::optional<OracleComparison> oracle;

  std::string render_text() const;
  /// Byte-stable JSON given identical inputs, seed, and version; numeric
  /// fields are emitted at full round-trip precision.
  std::string render_machine() const;
  std::string render(ReportFormat f) const;
};

struct RunOutcome {
  ReportDocument report;
  int exit_code = 0;  // 0 exact, 2 approximate, 3 infeasible, 4 no stationary point
};

int exit_code_for(SolveStatus status);

/// Builds the channel, runs the solver (plus the oracle cross-check when
/// requested), and packages the report.
RunOutcome run_solve(const ProblemFile& problem, const RunFlags& flags = {});

/// Bundled example problems, keyed by file name.
const std::map<std::string, std::string>& bundled_examples();

}  // namespace leakcap
