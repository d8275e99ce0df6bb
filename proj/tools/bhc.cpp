// bhc: build bounded-length and fringe-limited D-ary prefix codes.
//
//   bhc solve  [weights-file] --radix D --min-len a --max-len b --penalty linear
//   bhc fringe [weights-file] --radix D --max-fringe d [--extra-dummy-blocks k]
//   bhc verify codebook.json
//   bhc oracle [weights-file] ...   (exhaustive check, small inputs only)
//
// Exit codes: 0 success, 1 usage or input error, 2 infeasible, 3 verify failed.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "bhc/codebook.hpp"
#include "bhc/fringe.hpp"
#include "bhc/io.hpp"
#include "bhc/linspace.hpp"
#include "bhc/oracle.hpp"
#include "bhc/solver.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitVerifyFailed = 3;

struct CommonFlags {
  std::string weights_path = "-";
  int radix = 2;
  std::string penalty = "linear";
  std::string format = "json";
  bool timing = false;
};

struct SolveFlags {
  int min_len = 0;
  std::optional<int> max_len;
  std::string space = "linear";
};

struct FringeFlags {
  int max_fringe = 0;
  std::size_t extra_dummy_blocks = 0;
  std::string space = "linear";
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("weights", f.weights_path, "weights file, one per line ('-' for stdin)");
  cmd->add_option("--radix,-D", f.radix, "output alphabet size")->check(CLI::Range(2, 1 << 30));
  cmd->add_option("--penalty", f.penalty, "linear | quadratic | exp:<t>");
  cmd->add_option("--format", f.format, "json | text")->check(CLI::IsMember({"json", "text"}));
  cmd->add_flag("--timing", f.timing, "report wall time (also in json mode)");
}

std::vector<bhc::Rational> read_weights(const std::string& path) {
  if (path == "-") return bhc::io::parse_weights(std::cin);
  std::ifstream in(path);
  if (!in) throw bhc::InvalidArgument("cannot open weights file '" + path + "'");
  return bhc::io::parse_weights(in);
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

void print_text(const bhc::io::Json& j, std::ostream& out) {
  auto join = [](const bhc::io::Json& arr) {
    std::string s;
    for (const auto& v : arr) {
      if (!s.empty()) s += ' ';
      s += v.is_string() ? v.get<std::string>() : v.dump();
    }
    return s;
  };
  out << "radix:    " << j["radix"] << "\n";
  out << "bounds:   [" << j["min_len"] << ", " << j["max_len"] << "]\n";
  out << "lengths:  " << join(j["lengths"]) << "\n";
  out << "words:    " << join(j["codewords"]) << "\n";
  out << "penalty:  " << j["penalty"]["kind"].get<std::string>() << " = "
      << j["penalty_value"].get<std::string>() << " (" << j["penalty_decimal"].get<std::string>()
      << ")\n";
  out << "kraft:    " << j["kraft"].get<std::string>() << "\n";
  out << "dummies:  " << j["dummies"] << "\n";
  if (j.contains("sweep")) {
    out << "fringe:   " << j["max_fringe"] << ", chosen l' = " << j["chosen_max_len"]
        << ", objective " << j["objective"].get<std::string>() << "\n";
    for (const auto& s : j["sweep"]) {
      out << "  l' = " << s["max_len"] << " [" << s["min_len"] << ", " << s["max_len"] << "] "
          << (s["feasible"].get<bool>() ? s["objective"].get<std::string>() : "infeasible")
          << "\n";
    }
  }
  if (j.contains("timing_ms")) out << "time:     " << j["timing_ms"] << " ms\n";
}

void emit(bhc::io::Json j, const CommonFlags& f, double ms) {
  if (f.format == "text") {
    j["timing_ms"] = ms;
    print_text(j, std::cout);
    return;
  }
  if (f.timing) j["timing_ms"] = ms;
  std::cout << j.dump(2) << "\n";
}

int run_solve(const CommonFlags& f, const SolveFlags& s) {
  auto weights = read_weights(f.weights_path);
  const bhc::Radix radix(f.radix);
  const auto penalty = bhc::io::parse_penalty(f.penalty);
  const std::size_t n = bhc::pad_dummies(weights.size(), radix);
  const int trivial_max = static_cast<int>((n - 1) / static_cast<std::size_t>(f.radix - 1));
  const bhc::LengthBounds bounds(s.min_len, s.max_len.value_or(std::max(trivial_max, s.min_len)));
  auto problem = bhc::CodingProblem::make(std::move(weights), radix, bounds, penalty);

  const auto start = std::chrono::steady_clock::now();
  const auto result = s.space == "full" ? bhc::solve(problem) : bhc::solve_linear_space(problem);
  const double ms = elapsed_ms(start);
  const auto book = bhc::assign_canonical(result.lengths, radix);
  emit(bhc::io::solve_report(result, book, penalty, bounds), f, ms);
  return 0;
}

int run_fringe(const CommonFlags& f, const FringeFlags& fl) {
  auto weights = read_weights(f.weights_path);
  const bhc::Radix radix(f.radix);
  const auto penalty = bhc::io::parse_penalty(f.penalty);
  auto problem = bhc::FringeProblem::make(std::move(weights), radix, fl.max_fringe, penalty,
                                          fl.extra_dummy_blocks);
  const auto start = std::chrono::steady_clock::now();
  const auto result = bhc::fringe_solve(problem, bhc::FringeOptions{fl.space != "full"});
  const double ms = elapsed_ms(start);
  const auto book = bhc::assign_canonical(result.code.lengths, radix);
  emit(bhc::io::fringe_report(result, book, penalty, fl.max_fringe, fl.extra_dummy_blocks), f,
       ms);
  return 0;
}

int run_verify(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw bhc::InvalidArgument("cannot open codebook file '" + path + "'");
  bhc::io::Json j;
  try {
    j = bhc::io::Json::parse(in);
  } catch (const bhc::io::Json::parse_error& e) {
    throw bhc::InvalidArgument(std::string("codebook is not valid JSON: ") + e.what());
  }
  const auto loaded = bhc::io::codebook_from_json(j);
  auto violations = bhc::verify_codebook(loaded.book, loaded.bounds);
  if (loaded.declared_lengths && *loaded.declared_lengths != loaded.book.lengths())
    violations.push_back({"length", "declared lengths disagree with the codewords", {}});
  bhc::io::Json report{{"ok", violations.empty()},
                       {"symbols", loaded.book.codewords.size()},
                       {"kraft", bhc::to_fraction_string(
                                     bhc::kraft_sum(loaded.book.lengths(), loaded.book.radix))},
                       {"violations", bhc::io::violations_json(violations)}};
  std::cout << report.dump(2) << "\n";
  return violations.empty() ? 0 : kExitVerifyFailed;
}

int run_oracle(const CommonFlags& f, const SolveFlags& s) {
  auto weights = read_weights(f.weights_path);
  const bhc::Radix radix(f.radix);
  const std::size_t n = bhc::pad_dummies(weights.size(), radix);
  const int trivial_max = static_cast<int>((n - 1) / static_cast<std::size_t>(f.radix - 1));
  const bhc::LengthBounds bounds(s.min_len, s.max_len.value_or(std::max(trivial_max, s.min_len)));
  auto problem = bhc::CodingProblem::make(std::move(weights), radix, bounds,
                                          bhc::io::parse_penalty(f.penalty));
  const auto opt = bhc::oracle::brute_force_code(problem);
  if (!opt.best) throw bhc::Infeasible("no length vector meets Kraft equality within the bounds");
  bhc::io::Json argmin = bhc::io::Json::array();
  for (const auto& v : opt.argmin) argmin.push_back(v);
  bhc::io::Json j{{"radix", f.radix},
                  {"min_len", bounds.min},
                  {"max_len", bounds.max},
                  {"penalty_value", bhc::to_fraction_string(*opt.best)},
                  {"argmin_sorted_padded", argmin}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal D-ary prefix codes with bounded codeword lengths"};
  app.require_subcommand(1);

  CommonFlags solve_common, fringe_common, oracle_common;
  SolveFlags solve_flags, oracle_flags;
  FringeFlags fringe_flags;
  std::string verify_path;

  auto* solve_cmd = app.add_subcommand("solve", "optimal code with lengths in [min-len, max-len]");
  add_common(solve_cmd, solve_common);
  solve_cmd->add_option("--min-len", solve_flags.min_len, "shortest allowed codeword")
      ->check(CLI::NonNegativeNumber);
  solve_cmd->add_option("--max-len", solve_flags.max_len,
                        "longest allowed codeword (default ceil((n-1)/(D-1)))");
  solve_cmd->add_option("--space", solve_flags.space, "full | linear")
      ->check(CLI::IsMember({"full", "linear"}));

  auto* fringe_cmd = app.add_subcommand("fringe", "optimal code with bounded length spread");
  add_common(fringe_cmd, fringe_common);
  fringe_cmd->add_option("--max-fringe", fringe_flags.max_fringe, "max length minus min length")
      ->required()
      ->check(CLI::NonNegativeNumber);
  fringe_cmd->add_option("--extra-dummy-blocks", fringe_flags.extra_dummy_blocks,
                         "extra blocks of D-1 zero-weight symbols");
  fringe_cmd->add_option("--space", fringe_flags.space, "full | linear")
      ->check(CLI::IsMember({"full", "linear"}));

  auto* verify_cmd = app.add_subcommand("verify", "check a codebook JSON file");
  verify_cmd->add_option("codebook", verify_path, "codebook JSON")->required();

  auto* oracle_cmd = app.add_subcommand("oracle", "exhaustive optimum (development aid)");
  oracle_cmd->group("");
  add_common(oracle_cmd, oracle_common);
  oracle_cmd->add_option("--min-len", oracle_flags.min_len);
  oracle_cmd->add_option("--max-len", oracle_flags.max_len);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*solve_cmd) return run_solve(solve_common, solve_flags);
    if (*fringe_cmd) return run_fringe(fringe_common, fringe_flags);
    if (*verify_cmd) return run_verify(verify_path);
    if (*oracle_cmd) return run_oracle(oracle_common, oracle_flags);
  } catch (const bhc::Infeasible& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
