#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "leakcap/problem_io.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

int cmd_solve(const std::string& path, const leakcap::RunFlags& flags) {
  const auto problem = leakcap::parse_problem(read_file(path));
  const auto outcome = leakcap::run_solve(problem, flags);
  std::cout << outcome.report.render(flags.format);
  return outcome.exit_code;
}

int cmd_check(const std::string& path, double resolution, std::uint64_t seed,
              leakcap::ReportFormat format) {
  const auto problem = leakcap::parse_problem(read_file(path));
  const auto ch = problem.build_channel();
  leakcap::OracleResult result;
  std::string method;
  if (problem.constraints.empty()) {
    method = "blahut-arimoto";
    result = leakcap::blahut_arimoto(ch, 1e-7);
  } else {
    method = "constrained-search";
    leakcap::BruteForceOptions opts;
    opts.seed = seed;
    opts.resolution = resolution;
    if (ch.num_inputs() > 4) opts.mode = leakcap::SearchMode::Ascent;
    result = leakcap::constrained_brute_force(ch, problem.constraints, opts);
  }
  if (format == leakcap::ReportFormat::Machine) {
    std::cout << "{\n  \"method\": \"" << method << "\",\n"
              << "  \"feasible\": " << (result.feasible ? "true" : "false") << ",\n"
              << "  \"capacity_bits\": " << (result.feasible ? fmt(result.capacity_bits) : "null")
              << ",\n  \"iterations\": " << result.iterations << "\n}\n";
  } else {
    std::cout << "oracle: " << method << "\n";
    if (!result.feasible) {
      std::cout << "no admissible prior found\n";
    } else {
      std::cout << "capacity: " << fmt(result.capacity_bits) << " bits ("
                << fmt(leakcap::bits_to_nats(result.capacity_bits)) << " nats)\n"
                << "iterations: " << result.iterations << "\n";
      if (std::isfinite(result.gap_bits))
        std::cout << "bound gap: " << fmt(result.gap_bits) << " bits\n";
    }
  }
  return result.feasible ? 0 : 3;
}

int cmd_info(const std::string& path, leakcap::ReportFormat format) {
  const auto problem = leakcap::parse_problem(read_file(path));
  const auto ch = problem.build_channel();
  const auto ba = leakcap::blahut_arimoto(ch, 1e-9);
  if (format == leakcap::ReportFormat::Machine) {
    std::cout << "{\n  \"secrets\": " << ch.num_inputs()
              << ",\n  \"observations\": " << ch.num_outputs()
              << ",\n  \"deterministic\": " << (ch.is_deterministic() ? "true" : "false")
              << ",\n  \"constraints\": " << problem.constraints.size()
              << ",\n  \"unconstrained_capacity_bits\": " << fmt(ba.capacity_bits)
              << "\n}\n";
  } else {
    std::cout << "secrets: " << ch.num_inputs() << "\n"
              << "observations: " << ch.num_outputs() << "\n"
              << "deterministic: " << (ch.is_deterministic() ? "yes" : "no") << "\n"
              << "constraints: " << problem.constraints.size() << "\n"
              << "unconstrained capacity: " << fmt(ba.capacity_bits) << " bits\n";
  }
  return 0;
}

int cmd_examples(const std::string& dir, bool list_only) {
  if (list_only) {
    for (const auto& [name, text] : leakcap::bundled_examples())
      std::cout << name << "\n";
    return 0;
  }
  std::filesystem::create_directories(dir);
  for (const auto& [name, text] : leakcap::bundled_examples()) {
    const auto path = std::filesystem::path(dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
    std::cout << path.string() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"channel capacity of constrained information leakage channels"};
  app.require_subcommand(1);

  std::string file;
  std::string format_name = "text";
  leakcap::RunFlags flags;
  double tol = 0.0;
  std::uint64_t seed = 0;
  bool have_tol = false, have_seed = false;

  auto* solve = app.add_subcommand("solve", "solve a problem file");
  solve->add_option("file", file, "problem file (JSON)")->required();
  solve->add_option("--tol", tol, "Newton residual tolerance");
  solve->add_flag("--oracle", flags.oracle, "cross-check against the numeric oracle");
  solve->add_flag("--first-valid", flags.first_valid,
                  "stop at the first valid active-set candidate");
  solve->add_option("--seed", seed, "seed for randomized restarts");
  solve->add_option("--format", format_name, "text or machine")
      ->check(CLI::IsMember({"text", "machine"}));

  std::string check_file;
  double check_resolution = 0.0;
  std::uint64_t check_seed = 1;
  std::string check_format = "text";
  auto* check = app.add_subcommand("check", "run the numeric oracle only");
  check->add_option("file", check_file, "problem file (JSON)")->required();
  check->add_option("--resolution", check_resolution, "grid spacing per coordinate");
  check->add_option("--seed", check_seed, "seed for randomized search");
  check->add_option("--format", check_format, "text or machine")
      ->check(CLI::IsMember({"text", "machine"}));

  std::string info_file;
  std::string info_format = "text";
  auto* info = app.add_subcommand("info", "model statistics");
  info->add_option("file", info_file, "problem file (JSON)")->required();
  info->add_option("--format", info_format, "text or machine")
      ->check(CLI::IsMember({"text", "machine"}));

  std::string dir = ".";
  bool list_only = false;
  auto* examples = app.add_subcommand("examples", "write the bundled example files");
  examples->add_option("--dir", dir, "output directory");
  examples->add_flag("--list", list_only, "list example names without writing");

  CLI11_PARSE(app, argc, argv);

  const auto to_format = [](const std::string& name) {
    return name == "machine" ? leakcap::ReportFormat::Machine
                             : leakcap::ReportFormat::Text;
  };

  try {
    if (solve->parsed()) {
      have_tol = solve->count("--tol") > 0;
      have_seed = solve->count("--seed") > 0;
      if (have_tol) flags.tol = tol;
      if (have_seed) flags.seed = seed;
      flags.format = to_format(format_name);
      return cmd_solve(file, flags);
    }
    if (check->parsed())
      return cmd_check(check_file, check_resolution, check_seed,
                       to_format(check_format));
    if (info->parsed()) return cmd_info(info_file, to_format(info_format));
    if (examples->parsed()) return cmd_examples(dir, list_only);
  } catch (const leakcap::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
