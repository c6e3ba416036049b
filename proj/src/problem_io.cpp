#include "leakcap/problem_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace leakcap {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

[[noreturn]] void bail(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what);
}

// Probabilities may be JSON numbers or exact rational strings like "1/3".
double parse_probability(const json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    const auto slash = s.find('/');
    try {
      std::size_t used = 0;
      if (slash == std::string::npos) {
        const double x = std::stod(s, &used);
        if (used != s.size()) bail(where, "malformed number '" + s + "'");
        return x;
      }
      const double num = std::stod(s.substr(0, slash), &used);
      if (used != slash) bail(where, "malformed rational '" + s + "'");
      const double den = std::stod(s.substr(slash + 1), &used);
      if (used != s.size() - slash - 1 || den == 0.0)
        bail(where, "malformed rational '" + s + "'");
      return num / den;
    } catch (const std::invalid_argument&) {
      bail(where, "malformed number '" + s + "'");
    } catch (const std::out_of_range&) {
      bail(where, "number out of range '" + s + "'");
    }
  }
  bail(where, "expected a number or a rational string");
}

// ---------------------------------------------------------------------------
// Linear constraint expressions: "h1 >= h2", "h1 - 100*h2 > 0", ...

struct Token {
  enum Kind { Number, Ident, Plus, Minus, Star, Rel, End } kind = End;
  double value = 0.0;
  std::string text;
};

std::vector<Token> tokenize_expr(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '+') {
      out.push_back({Token::Plus});
      ++i;
    } else if (c == '-') {
      out.push_back({Token::Minus});
      ++i;
    } else if (c == '*') {
      out.push_back({Token::Star});
      ++i;
    } else if (c == '<' || c == '>' || c == '=') {
      std::string rel(1, c);
      if (i + 1 < s.size() && s[i + 1] == '=') {
        rel += '=';
        ++i;
      }
      Token t{Token::Rel};
      t.text = rel;
      out.push_back(t);
      ++i;
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      Token t{Token::Number};
      t.value = std::stod(s.substr(i), &used);
      out.push_back(t);
      i += used;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) ||
                             s[j] == '_'))
        ++j;
      Token t{Token::Ident};
      t.text = s.substr(i, j - i);
      out.push_back(t);
      i = j;
    } else {
      throw ParseError("constraint '" + s + "': unexpected character '" +
                       std::string(1, c) + "'");
    }
  }
  out.push_back({Token::End});
  return out;
}

struct LinearSide {
  std::map<std::string, double> coeffs;
  double constant = 0.0;
};

LinearSide parse_side(const std::vector<Token>& toks, std::size_t& pos,
                      const std::string& expr) {
  LinearSide side;
  double sign = 1.0;
  bool expect_term = true;
  while (true) {
    const Token& t = toks[pos];
    if (expect_term) {
      if (t.kind == Token::Plus) {
        ++pos;
      } else if (t.kind == Token::Minus) {
        sign = -sign;
        ++pos;
      } else if (t.kind == Token::Number) {
        double coeff = t.value;
        ++pos;
        if (toks[pos].kind == Token::Star) ++pos;
        if (toks[pos].kind == Token::Ident) {
          side.coeffs[toks[pos].text] += sign * coeff;
          ++pos;
        } else {
          side.constant += sign * coeff;
        }
        sign = 1.0;
        expect_term = false;
      } else if (t.kind == Token::Ident) {
        side.coeffs[t.text] += sign;
        ++pos;
        sign = 1.0;
        expect_term = false;
      } else {
        throw ParseError("constraint '" + expr + "': expected a term");
      }
    } else {
      if (t.kind == Token::Plus) {
        sign = 1.0;
        ++pos;
        expect_term = true;
      } else if (t.kind == Token::Minus) {
        sign = -1.0;
        ++pos;
        expect_term = true;
      } else {
        return side;  // relation or end
      }
    }
  }
}

Relation relation_from(const std::string& text, const std::string& expr) {
  if (text == "=" || text == "==") return Relation::Equal;
  if (text == ">=") return Relation::GreaterEqual;
  if (text == ">") return Relation::StrictlyGreater;
  if (text == "<=") return Relation::LessEqual;
  if (text == "<") return Relation::StrictlyLess;
  throw ParseError("constraint '" + expr + "': unknown relation '" + text + "'");
}

std::string label_listing(const std::vector<std::string>& labels) {
  std::string out;
  for (const auto& l : labels) {
    if (!out.empty()) out += ", ";
    out += l;
  }
  return out;
}

LinearConstraint compile_expression(const std::string& expr,
                                    const std::vector<std::string>& labels,
                                    const std::string& name) {
  const auto toks = tokenize_expr(expr);
  std::size_t pos = 0;
  const LinearSide lhs = parse_side(toks, pos, expr);
  if (toks[pos].kind != Token::Rel)
    throw ParseError("constraint '" + expr + "': missing relation");
  const Relation rel = relation_from(toks[pos].text, expr);
  ++pos;
  const LinearSide rhs = parse_side(toks, pos, expr);
  if (toks[pos].kind != Token::End)
    throw ParseError("constraint '" + expr + "': trailing tokens");

  Eigen::VectorXd coeffs =
      Eigen::VectorXd::Zero(static_cast<Eigen::Index>(labels.size()));
  auto apply = [&](const std::map<std::string, double>& side, double sign) {
    for (const auto& [label, value] : side) {
      const auto it = std::find(labels.begin(), labels.end(), label);
      if (it == labels.end())
        throw ParseError("constraint '" + expr + "': unknown secret '" + label +
                         "'; valid secrets are: " + label_listing(labels));
      coeffs(it - labels.begin()) += sign * value;
    }
  };
  apply(lhs.coeffs, 1.0);
  apply(rhs.coeffs, -1.0);
  const double bound = rhs.constant - lhs.constant;
  return LinearConstraint(coeffs, rel, bound, name.empty() ? expr : name);
}

LinearConstraint parse_constraint(const json& j,
                                  const std::vector<std::string>& labels,
                                  std::size_t index) {
  const std::string where = "constraints[" + std::to_string(index) + "]";
  if (!j.is_object()) bail(where, "expected an object");
  const std::string name = j.value("name", "");
  if (j.contains("expr")) {
    if (!j.at("expr").is_string()) bail(where, "expr must be a string");
    return compile_expression(j.at("expr").get<std::string>(), labels, name);
  }
  if (!j.contains("coeffs")) bail(where, "needs either expr or coeffs");
  const json& co = j.at("coeffs");
  if (!co.is_object()) bail(where, "coeffs must map secret names to numbers");
  Eigen::VectorXd coeffs =
      Eigen::VectorXd::Zero(static_cast<Eigen::Index>(labels.size()));
  for (const auto& [label, value] : co.items()) {
    const auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end())
      bail(where, "unknown secret '" + label +
                      "'; valid secrets are: " + label_listing(labels));
    coeffs(it - labels.begin()) = parse_probability(value, where);
  }
  const Relation rel = relation_from(j.value("relation", ">="), where);
  const double bound = j.contains("bound")
                           ? parse_probability(j.at("bound"), where + ".bound")
                           : 0.0;
  return LinearConstraint(coeffs, rel, bound, name);
}

// ---------------------------------------------------------------------------

Channel parse_channel(const json& j) {
  if (!j.is_object()) bail("channel", "expected an object");
  if (!j.contains("inputs") || !j.contains("outputs") || !j.contains("matrix"))
    bail("channel", "needs inputs, outputs, and matrix");
  std::vector<std::string> inputs = j.at("inputs").get<std::vector<std::string>>();
  std::vector<std::string> outputs = j.at("outputs").get<std::vector<std::string>>();
  const json& rows = j.at("matrix");
  if (!rows.is_array() || rows.size() != inputs.size())
    bail("channel.matrix", "expected one row per secret (" +
                               std::to_string(inputs.size()) + " rows)");
  Eigen::MatrixXd table(inputs.size(), outputs.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const json& row = rows[i];
    if (!row.is_array() || row.size() != outputs.size())
      bail("channel.matrix", "row " + std::to_string(i) + " needs " +
                                 std::to_string(outputs.size()) + " entries");
    double sum = 0.0;
    for (std::size_t k = 0; k < row.size(); ++k) {
      table(i, k) = parse_probability(row[k], "channel.matrix[" +
                                                  std::to_string(i) + "][" +
                                                  std::to_string(k) + "]");
      sum += table(i, k);
    }
    if (std::abs(sum - 1.0) > 1e-9)
      bail("channel.matrix", "row " + std::to_string(i) + " sums to " +
                                 std::to_string(sum) + ", expected 1");
  }
  try {
    return Channel::from_rows(std::move(inputs), std::move(outputs), table);
  } catch (const std::invalid_argument& e) {
    bail("channel", e.what());
  }
}

ThreadedProgramParams parse_program(const json& j) {
  if (!j.is_object()) bail("program", "expected an object");
  ThreadedProgramParams params;
  if (!j.contains("p") || !j.contains("q")) bail("program", "needs p and q");
  params.reveal_first = parse_probability(j.at("p"), "program.p");
  params.zero_first = parse_probability(j.at("q"), "program.q");
  if (params.reveal_first < 0 || params.reveal_first > 1 ||
      params.zero_first < 0 || params.zero_first > 1)
    bail("program", "p and q must lie in [0,1]");
  return params;
}

NetworkModel parse_network(const json& j) {
  if (!j.is_object()) bail("network", "expected an object");
  for (const char* key : {"nodes", "edges", "senders", "adversary", "receiver"})
    if (!j.contains(key)) bail("network", std::string("missing field ") + key);
  std::vector<std::pair<std::string, std::string>> edges;
  for (const json& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2)
      bail("network.edges", "each edge is a two-element array");
    edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
  }
  try {
    return NetworkModel(j.at("nodes").get<std::vector<std::string>>(), edges,
                        j.at("senders").get<std::vector<std::string>>(),
                        j.at("adversary").get<std::string>(),
                        j.at("receiver").get<std::string>(),
                        j.value("directed", false));
  } catch (const std::invalid_argument& e) {
    bail("network", e.what());
  }
}

std::string format_double(double v, int precision = 12) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

ordered_json problem_to_json(const ProblemFile& p) {
  ordered_json root;
  if (p.is_channel()) {
    const Channel& ch = std::get<Channel>(p.model);
    ordered_json m;
    m["inputs"] = ch.input_labels();
    m["outputs"] = ch.output_labels();
    ordered_json rows = ordered_json::array();
    for (Eigen::Index i = 0; i < ch.num_inputs(); ++i) {
      ordered_json row = ordered_json::array();
      for (Eigen::Index k = 0; k < ch.num_outputs(); ++k)
        row.push_back(ch.matrix()(k, i));
      rows.push_back(row);
    }
    m["matrix"] = rows;
    root["channel"] = m;
  } else if (p.is_program()) {
    const auto& params = std::get<ThreadedProgramParams>(p.model);
    root["program"] = {{"p", params.reveal_first}, {"q", params.zero_first}};
  } else {
    const NetworkModel& net = std::get<NetworkModel>(p.model);
    ordered_json m;
    m["nodes"] = net.nodes();
    ordered_json edges = ordered_json::array();
    for (std::size_t u = 0; u < net.nodes().size(); ++u)
      for (int v : net.successors(static_cast<int>(u)))
        if (net.directed() || static_cast<int>(u) < v)
          edges.push_back({net.node_name(static_cast<int>(u)), net.node_name(v)});
    m["edges"] = edges;
    m["directed"] = net.directed();
    ordered_json senders = ordered_json::array();
    for (int s : net.senders()) senders.push_back(net.node_name(s));
    m["senders"] = senders;
    m["adversary"] = net.node_name(net.adversary());
    m["receiver"] = net.node_name(net.receiver());
    root["network"] = m;
  }

  const auto labels = p.secret_labels();
  ordered_json cons = ordered_json::array();
  for (const auto& c : p.constraints.constraints()) {
    ordered_json jc;
    ordered_json coeffs;
    for (Eigen::Index i = 0; i < c.coeffs.size(); ++i)
      if (c.coeffs(i) != 0.0) coeffs[labels[i]] = c.coeffs(i);
    jc["coeffs"] = coeffs;
    jc["relation"] = to_string(c.relation);
    jc["bound"] = c.bound;
    if (!c.name.empty()) jc["name"] = c.name;
    cons.push_back(jc);
  }
  root["constraints"] = cons;

  ordered_json opts = ordered_json::object();
  if (p.options.tol) opts["tol"] = *p.options.tol;
  if (p.options.seed) opts["seed"] = *p.options.seed;
  if (p.options.oracle) opts["oracle"] = true;
  if (p.options.oracle_resolution)
    opts["oracle_resolution"] = *p.options.oracle_resolution;
  root["options"] = opts;
  return root;
}

}  // namespace

Channel ProblemFile::build_channel() const {
  if (is_channel()) return std::get<Channel>(model);
  if (is_program()) return threaded_program_channel(std::get<ThreadedProgramParams>(model));
  return network_channel(std::get<NetworkModel>(model));
}

std::vector<std::string> ProblemFile::secret_labels() const {
  if (is_channel()) return std::get<Channel>(model).input_labels();
  if (is_program()) return {"h_odd", "h_even"};
  const NetworkModel& net = std::get<NetworkModel>(model);
  std::vector<std::string> labels;
  for (int s : net.senders()) labels.push_back("h" + net.node_name(s));
  return labels;
}

ProblemFile parse_problem(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ParseError("top level must be an object");

  int kinds = 0;
  for (const char* key : {"channel", "program", "network"})
    if (root.contains(key)) ++kinds;
  if (kinds != 1)
    throw ParseError("exactly one of channel, program, or network is required");

  ProblemFile p;
  if (root.contains("channel"))
    p.model = parse_channel(root.at("channel"));
  else if (root.contains("program"))
    p.model = parse_program(root.at("program"));
  else
    p.model = parse_network(root.at("network"));

  const auto labels = p.secret_labels();
  if (root.contains("constraints")) {
    const json& cons = root.at("constraints");
    if (!cons.is_array()) throw ParseError("constraints must be an array");
    for (std::size_t k = 0; k < cons.size(); ++k) {
      try {
        p.constraints.add(parse_constraint(cons[k], labels, k));
      } catch (const std::invalid_argument& e) {
        bail("constraints[" + std::to_string(k) + "]", e.what());
      }
    }
  }

  if (root.contains("options")) {
    const json& o = root.at("options");
    if (!o.is_object()) throw ParseError("options must be an object");
    if (o.contains("tol")) p.options.tol = o.at("tol").get<double>();
    if (o.contains("seed")) p.options.seed = o.at("seed").get<std::uint64_t>();
    if (o.contains("oracle")) p.options.oracle = o.at("oracle").get<bool>();
    if (o.contains("oracle_resolution"))
      p.options.oracle_resolution = o.at("oracle_resolution").get<double>();
  }
  return p;
}

std::string serialize_problem(const ProblemFile& problem) {
  return problem_to_json(problem).dump(2) + "\n";
}

int exit_code_for(SolveStatus status) {
  switch (status) {
    case SolveStatus::Exact: return 0;
    case SolveStatus::Approximate: return 2;
    case SolveStatus::Infeasible: return 3;
    case SolveStatus::NoValidStationaryPoint: return 4;
  }
  return 4;
}

RunOutcome run_solve(const ProblemFile& problem, const RunFlags& flags) {
  SolveOptions opts;
  if (problem.options.tol) opts.residual_tol = *problem.options.tol;
  if (flags.tol) opts.residual_tol = *flags.tol;
  if (problem.options.seed) opts.seed = *problem.options.seed;
  if (flags.seed) opts.seed = *flags.seed;
  opts.first_valid = flags.first_valid;

  RunOutcome out;
  out.report.problem = problem;
  out.report.seed = opts.seed;
  const Channel ch = problem.build_channel();
  out.report.channel = ch;
  out.report.solution = solve(ch, problem.constraints, opts);
  if (out.report.solution.solved())
    out.report.summary = leakage_report(ch, out.report.solution);

  const bool want_oracle = flags.oracle || problem.options.oracle;
  if (want_oracle && out.report.solution.solved()) {
    OracleComparison cmp;
    OracleResult oracle;
    // With no binding constraint the solved value is the free capacity, so
    // the certified iterative oracle applies; otherwise fall back to search.
    if (out.report.solution.active_set.empty()) {
      cmp.method = "blahut-arimoto";
      oracle = blahut_arimoto(ch, 1e-7);
    } else {
      cmp.method = "constrained-search";
      BruteForceOptions bopts;
      bopts.seed = opts.seed;
      if (problem.options.oracle_resolution)
        bopts.resolution = *problem.options.oracle_resolution;
      if (ch.num_inputs() > 4) bopts.mode = SearchMode::Ascent;
      oracle = constrained_brute_force(ch, problem.constraints, bopts);
    }
    cmp.capacity_bits = oracle.capacity_bits;
    cmp.delta_bits = out.report.solution.capacity_bits - oracle.capacity_bits;
    cmp.iterations = oracle.iterations;
    cmp.gap_bits = oracle.gap_bits;
    out.report.oracle = cmp;
  }

  out.exit_code = exit_code_for(out.report.solution.status);
  return out;
}

std::string ReportDocument::render_machine() const {
  ordered_json root;
  root["tool"] = tool;
  root["version"] = version;
  root["seed"] = seed;
  root["problem"] = problem_to_json(problem);
  root["status"] = to_string(solution.status);
  root["exit_code"] = exit_code_for(solution.status);
  if (solution.solved()) {
    root["capacity_bits"] = solution.capacity_bits;
    root["capacity_nats"] = solution.capacity_nats;
    root["prior_entropy_bits"] = summary.prior_entropy_bits;
    if (summary.leakage_ratio_percent)
      root["leakage_ratio_percent"] = *summary.leakage_ratio_percent;
    else
      root["leakage_ratio_percent"] = nullptr;
    root["secrets"] = channel ? channel->input_labels()
                              : problem.secret_labels();
    root["h_star"] = std::vector<double>(solution.h.data(),
                                         solution.h.data() + solution.h.size());
    root["lambda0"] = solution.lambda0;
    root["lambdas"] = std::vector<double>(
        solution.lambdas.data(), solution.lambdas.data() + solution.lambdas.size());
    root["active_set"] = solution.active_set;
  } else {
    root["capacity_bits"] = nullptr;
    root["h_star"] = nullptr;
  }
  if (oracle) {
    ordered_json o;
    o["method"] = oracle->method;
    o["capacity_bits"] = oracle->capacity_bits;
    o["delta_bits"] = oracle->delta_bits;
    o["iterations"] = oracle->iterations;
    o["gap_bits"] = oracle->gap_bits;
    root["oracle"] = o;
  } else {
    root["oracle"] = nullptr;
  }
  ordered_json diag;
  diag["max_stationarity_residual_nats"] = solution.diagnostics.max_stationarity_residual;
  diag["multiplier_identity_gap_bits"] = solution.diagnostics.multiplier_identity_gap_bits;
  diag["max_complementary_slackness"] = solution.diagnostics.max_complementary_slackness;
  diag["newton_iterations"] = solution.diagnostics.newton_iterations;
  diag["restarts"] = solution.diagnostics.restarts;
  diag["candidates_evaluated"] = solution.diagnostics.candidates_evaluated;
  diag["used_support_fallback"] = solution.diagnostics.used_support_fallback;
  diag["boundary_secrets"] = std::vector<long>(
      solution.diagnostics.boundary_inputs.begin(),
      solution.diagnostics.boundary_inputs.end());
  diag["rejection"] = solution.diagnostics.rejection;
  diag["notes"] = solution.diagnostics.notes;
  root["diagnostics"] = diag;
  return root.dump(2) + "\n";
}

std::string ReportDocument::render_text() const {
  std::ostringstream os;
  const auto labels = channel ? channel->input_labels() : problem.secret_labels();
  os << tool << " " << version << "\n";
  const char* kind = problem.is_channel() ? "channel"
                     : problem.is_program() ? "program"
                                            : "network";
  os << "model: " << kind;
  if (channel) {
    os << " (" << channel->num_inputs() << " secrets, " << channel->num_outputs()
       << " observations, " << (channel->is_deterministic() ? "deterministic" : "probabilistic")
       << ")";
  }
  os << "\n";
  if (!problem.constraints.empty()) {
    os << "constraints:\n";
    const auto& cs = problem.constraints.constraints();
    for (std::size_t k = 0; k < cs.size(); ++k) {
      os << "  [" << k << "] ";
      if (!cs[k].name.empty()) os << cs[k].name << ": ";
      bool first = true;
      for (Eigen::Index i = 0; i < cs[k].coeffs.size(); ++i) {
        const double c = cs[k].coeffs(i);
        if (c == 0.0) continue;
        if (!first) os << (c > 0 ? " + " : " - ");
        else if (c < 0) os << "-";
        const double mag = std::abs(c);
        if (mag != 1.0) os << format_double(mag, 6) << "*";
        os << labels[i];
        first = false;
      }
      os << " " << to_string(cs[k].relation) << " " << format_double(cs[k].bound, 6)
         << "\n";
    }
  }
  os << "status: " << to_string(solution.status) << "\n";
  if (!solution.solved()) {
    if (!solution.diagnostics.rejection.empty())
      os << "reason: " << solution.diagnostics.rejection << "\n";
    return os.str();
  }
  os << "capacity: " << format_double(solution.capacity_bits) << " bits ("
     << format_double(solution.capacity_nats) << " nats)\n";
  os << "prior entropy H(h*): " << format_double(summary.prior_entropy_bits)
     << " bits\n";
  if (summary.leakage_ratio_percent)
    os << "leakage ratio: " << format_double(*summary.leakage_ratio_percent, 4)
       << " %\n";
  else
    os << "leakage ratio: undefined (H(h*) = 0)\n";
  os << "capacity-achieving prior:\n";
  for (Eigen::Index i = 0; i < solution.h.size(); ++i)
    os << "  " << labels[i] << " = " << format_double(solution.h(i)) << "\n";
  os << "multipliers: lambda0 = " << format_double(solution.lambda0);
  for (Eigen::Index k = 0; k < solution.lambdas.size(); ++k)
    os << ", lambda[" << k << "] = " << format_double(solution.lambdas(k));
  os << "\n";
  if (!solution.active_set.empty()) {
    os << "active constraints:";
    for (auto k : solution.active_set) os << " [" << k << "]";
    os << "\n";
  }
  if (oracle) {
    os << "oracle (" << oracle->method
       << "): " << format_double(oracle->capacity_bits) << " bits, delta "
       << format_double(oracle->delta_bits, 4) << " bits\n";
  }
  os << "diagnostics: max residual "
     << format_double(solution.diagnostics.max_stationarity_residual, 4)
     << " nats, newton iterations " << solution.diagnostics.newton_iterations
     << ", restarts " << solution.diagnostics.restarts << ", candidates "
     << solution.diagnostics.candidates_evaluated << "\n";
  for (const auto& note : solution.diagnostics.notes)
    os << "note: " << note << "\n";
  if (problem.is_program())
    os << "note: nat and bit values differ by a factor of ln 2; check units "
          "when comparing against externally quoted figures.\n";
  return os.str();
}

std::string ReportDocument::render(ReportFormat f) const {
  return f == ReportFormat::Machine ? render_machine() : render_text();
}

const std::map<std::string, std::string>& bundled_examples() {
  static const std::map<std::string, std::string> files = {
      {"onion_ge.json", R"json({
  "network": {
    "nodes": ["1", "2", "3", "4", "R"],
    "edges": [["1","2"], ["2","3"], ["3","2"], ["2","4"], ["4","3"], ["2","R"], ["3","R"]],
    "directed": true,
    "senders": ["1", "2", "3", "4"],
    "adversary": "3",
    "receiver": "R"
  },
  "constraints": [
    {"expr": "h1 >= h2", "name": "node 1 at least as active as node 2"}
  ],
  "options": {}
}
)json"},
      {"onion_gt100.json", R"json({
  "network": {
    "nodes": ["1", "2", "3", "4", "R"],
    "edges": [["1","2"], ["2","3"], ["3","2"], ["2","4"], ["4","3"], ["2","R"], ["3","R"]],
    "directed": true,
    "senders": ["1", "2", "3", "4"],
    "adversary": "3",
    "receiver": "R"
  },
  "constraints": [
    {"expr": "h1 > 100*h2", "name": "node 1 dominates node 2"}
  ],
  "options": {}
}
)json"},
      {"threaded.json", R"json({
  "program": {"p": "1/3", "q": "1/3"},
  "constraints": [
    {"expr": "h_odd < h_even", "name": "odd secrets rarer"}
  ],
  "options": {}
}
)json"},
      {"onion_channel.json", R"json({
  "channel": {
    "inputs": ["h1", "h2", "h3", "h4"],
    "outputs": ["(N,N)", "(2,R)", "(4,R)", "(N,R)", "(4,2)"],
    "matrix": [
      ["1/3", "1/3", "1/3", 0, 0],
      [0, "1/2", "1/2", 0, 0],
      [0, 0, 0, 1, 0],
      [0, 0, "1/2", 0, "1/2"]
    ]
  },
  "constraints": [
    {"expr": "h1 >= h2", "name": "node 1 at least as active as node 2"}
  ],
  "options": {}
}
)json"}};
  return files;
}

}  // namespace leakcap
