// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bhc/bhc.hpp"

using namespace bhc;

namespace {

// Tolerances and budgets.
constexpr double kBudgetSeconds[] = {0, 1, 1, 300, 60, 300, 300, 60, 120, 600, 60};
constexpr double kScalingFactorN = 4.0;      // t(2e5) / t(1e5)
constexpr double kScalingFactorFringe = 5.0;  // per doubling of d

struct Outcome {
  bool pass = true;
  std::string note;
};

Rational R(long long a, long long b = 1) { return Rational(a, b); }

std::vector<Rational> random_weights(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> part(1, 30);
  std::vector<Rational> w;
  for (std::size_t i = 0; i < n; ++i) w.push_back(R(part(rng), part(rng)));
  return w;
}

bool monotone_in_weight(const WeightVector& w, const LengthVector& padded) {
  for (std::size_t i = 1; i < padded.size(); ++i)
    if (w[i - 1] > w[i] ? padded[i - 1] > padded[i] : false) return false;
  return is_monotone(padded);
}

Outcome fig1_grid() {
  const std::vector<Rational> p{R(7, 28), R(6, 28), R(5, 28), R(4, 28), R(3, 28), R(2, 28),
                                R(1, 28)};
  auto prob = CodingProblem::make(p, Radix(3), LengthBounds(1, 4),
                                  Penalty::custom({R(0), R(1), R(4), R(9)}));
  const auto inst = build_instance(prob);
  if (inst.coins.size() != 21) return {false, std::to_string(inst.coins.size()) + " coins"};
  const std::map<int, std::pair<Rational, long long>> level{
      {2, {R(1, 9), 1}}, {3, {R(1, 27), 3}}, {4, {R(1, 81), 5}}};
  std::map<int, int> per_level;
  for (const auto& c : inst.coins) {
    const auto it = level.find(c.exponent);
    if (it == level.end()) return {false, "unexpected level " + std::to_string(c.exponent)};
    const auto i = static_cast<std::size_t>(c.id) % 7;
    if (c.width(inst.radix).to_rational() != it->second.first)
      return {false, "width mismatch at coin " + std::to_string(c.id)};
    if (c.weight != it->second.second * prob.weights[i])
      return {false, "weight mismatch at coin " + std::to_string(c.id)};
    ++per_level[c.exponent];
  }
  for (const auto& [l, count] : per_level)
    if (count != 7) return {false, "level " + std::to_string(l) + " has " + std::to_string(count)};
  return {true, "21 coins, widths 1/9 1/27 1/81, weights p 3p 5p"};
}

Outcome width_constants() {
  const auto a = total_width(21, Radix(3), 2).to_rational();
  const auto b = total_width(7, Radix(3), 1).to_rational();
  if (a != R(2, 3) || b != R(2, 3))
    return {false, to_fraction_string(a) + ", " + to_fraction_string(b)};
  return {true, "2/3 and 2/3"};
}

Outcome solver_vs_oracle() {
  std::mt19937_64 rng(301);
  std::size_t runs = 0;
  for (int d : {2, 3})
    for (std::size_t n = 2; n <= 7; ++n)
      for (int lmin : {0, 1, 2})
        for (int lmax = lmin + 1; lmax <= 5; ++lmax)
          for (const auto& pen : {Penalty::linear(), Penalty::quadratic()})
            for (int rep = 0; rep < 50; ++rep) {
              auto prob = CodingProblem::make(random_weights(rng, n), Radix(d),
                                              LengthBounds(lmin, lmax), pen);
              const auto opt = oracle::brute_force_code(prob);
              ++runs;
              SolveResult r;
              try {
                r = solve(prob);
              } catch (const Infeasible&) {
                if (opt.best) return {false, "solver infeasible on a feasible instance"};
                continue;
              }
              if (!opt.best) return {false, "solver answered an infeasible instance"};
              if (r.penalty_value != *opt.best) return {false, "penalty differs from optimum"};
              if (kraft_sum(r.padded_lengths, prob.radix) != 1) return {false, "Kraft sum != 1"};
              for (int l : r.padded_lengths)
                if (l < lmin || l > lmax) return {false, "length out of bounds"};
              if (!monotone_in_weight(prob.weights, r.padded_lengths))
                return {false, "lengths not monotone"};
            }
  return {true, std::to_string(runs) + " instances"};
}

Outcome packmerge_vs_subsets() {
  std::mt19937_64 rng(401);
  std::size_t infeasible = 0;
  for (int it = 0; it < 1000; ++it) {
    const Radix radix(2 + static_cast<int>(rng() % 2));
    CoinInstance inst{radix, {}, WidthValue::zero(radix)};
    const std::size_t m = 1 + rng() % 12;
    BigInt units_total = 0;
    for (std::size_t k = 0; k < m; ++k) {
      const int e = static_cast<int>(rng() % 4);
      inst.coins.push_back(Coin{static_cast<std::int64_t>(k), e,
                                R(static_cast<long long>(rng() % 40) + 1,
                                  static_cast<long long>(rng() % 8) + 1)});
      units_total += boost::multiprecision::pow(BigInt(radix.value()), static_cast<unsigned>(3 - e));
    }
    const auto total = units_total.convert_to<std::uint64_t>();
    inst.total_width = WidthValue(BigInt(rng() % (total + 1)), 3, radix);
    const auto expected = oracle::brute_force_cc(inst);
    try {
      const auto sol = cc_solve(inst);
      if (!expected) return {false, "solver found a subset the oracle says cannot exist"};
      if (sol.weight != *expected) return {false, "weight differs from subset optimum"};
      WidthValue w = WidthValue::zero(radix);
      for (auto id : sol.selected) w = w + inst.coins[static_cast<std::size_t>(id)].width(radix);
      if (!(w == inst.total_width)) return {false, "selected width differs from target"};
    } catch (const Infeasible&) {
      if (expected) return {false, "solver reported infeasible on a feasible instance"};
      ++infeasible;
    }
  }
  return {true, "1000 instances, " + std::to_string(infeasible) + " infeasible"};
}

std::vector<CodingProblem> linspace_cases() {
  std::mt19937_64 rng(501);
  std::vector<CodingProblem> out;
  while (out.size() < 1000) {
    const int d = 2 + static_cast<int>(rng() % 3);
    const std::size_t n = 1 + rng() % 200;
    const int lmin = static_cast<int>(rng() % 4);
    const int lmax = lmin + static_cast<int>(rng() % 13);
    const Penalty pen = rng() % 2 ? Penalty::linear() : Penalty::quadratic();
    auto prob = CodingProblem::make(random_weights(rng, n), Radix(d), LengthBounds(lmin, lmax), pen);
    try {
      check_feasible(prob);
    } catch (const Infeasible&) {
      continue;
    }
    out.push_back(std::move(prob));
  }
  return out;
}

Outcome linspace_equivalence(const std::vector<CodingProblem>& cases) {
  for (const auto& prob : cases)
    if (!(solve_linear_space(prob) == solve(prob))) return {false, "outputs differ"};
  return {true, std::to_string(cases.size()) + " instances bit-identical"};
}

Outcome linspace_memory(const std::vector<CodingProblem>& cases) {
  double worst = 0;
  for (const auto& prob : cases) {
    LinearSpaceStats stats;
    solve_linear_space(prob, &stats);
    const std::size_t peak = std::max(stats.peak_live_attribute_pass, stats.peak_live_base);
    if (peak > 2 * prob.n())
      return {false, "peak " + std::to_string(peak) + " for n=" + std::to_string(prob.n())};
    worst = std::max(worst, static_cast<double>(peak) / static_cast<double>(prob.n()));
  }
  std::ostringstream note;
  note.precision(3);
  note << "largest peak/n = " << worst;
  return {true, note.str()};
}

Outcome huffman_agreement() {
  std::mt19937_64 rng(701);
  for (int it = 0; it < 500; ++it) {
    const int d = 2 + static_cast<int>(rng() % 3);
    const std::size_t n = 1 + rng() % 50;
    auto wv = WeightVector::from_caller(random_weights(rng, n), Radix(d));
    const int cap = static_cast<int>((wv.n_padded() - 1) / static_cast<std::size_t>(d - 1));
    CodingProblem prob{wv, Radix(d), LengthBounds(0, cap), Penalty::linear()};
    const auto r = solve(prob);
    const auto h = oracle::reference_huffman(wv, Radix(d));
    Rational huff = 0, ours = 0;
    for (std::size_t i = 0; i < h.size(); ++i) {
      huff += wv[i] * h[i];
      ours += wv[i] * r.padded_lengths[i];
    }
    if (huff != ours) return {false, "expected length differs from Huffman"};
  }
  return {true, "500 instances"};
}

Outcome fringe_correctness() {
  std::mt19937_64 rng(801);
  std::size_t runs = 0;
  for (int d : {2, 3})
    for (std::size_t n = 1; n <= 7; ++n) {
      if (pad_dummies(n, Radix(d)) != n) continue;
      for (int fringe : {0, 1, 2})
        for (const auto& pen : {Penalty::linear(), Penalty::quadratic()})
          for (int rep = 0; rep < 20; ++rep) {
            auto fp = FringeProblem::make(random_weights(rng, n), Radix(d), fringe, pen);
            const auto opt = oracle::brute_force_fringe(fp.weights, fp.radix, fringe, pen);
            ++runs;
            try {
              const auto r = fringe_solve(fp);
              if (!opt.best) return {false, "answered an infeasible instance"};
              if (r.objective != *opt.best) return {false, "penalty differs from exhaustive"};
              if (r.sweep.size() > static_cast<std::size_t>(fringe) + 1)
                return {false, "more than d+1 solves"};
              const auto& v = r.code.padded_lengths;
              if (v.back() - v.front() > fringe) return {false, "fringe exceeded"};
            } catch (const Infeasible&) {
              if (opt.best) return {false, "infeasible verdict on a feasible instance"};
            }
          }
    }
  return {true, std::to_string(runs) + " instances"};
}

template <class F>
double median_seconds(F&& f, int reps) {
  std::vector<double> t;
  for (int k = 0; k < reps; ++k) {
    const auto start = std::chrono::steady_clock::now();
    f();
    t.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }
  std::sort(t.begin(), t.end());
  return t[t.size() / 2];
}

Outcome scaling() {
  std::mt19937_64 rng(901);
  auto timed_solve = [&](std::size_t n) {
    auto prob = CodingProblem::make(random_weights(rng, n), Radix(2), LengthBounds(2, 18));
    return median_seconds([&] { solve_linear_space(prob); }, 3);
  };
  const double t1 = timed_solve(100000);
  const double t2 = timed_solve(200000);
  const double rn = t2 / t1;

  auto w = random_weights(rng, 20000);
  auto timed_fringe = [&](int d) {
    auto fp = FringeProblem::make(w, Radix(2), d);
    return median_seconds([&] { fringe_solve(fp); }, 3);
  };
  const double f4 = timed_fringe(4), f8 = timed_fringe(8), f16 = timed_fringe(16);
  std::ostringstream note;
  note.precision(3);
  note << "n: " << t1 << "s -> " << t2 << "s (x" << rn << "); d 4/8/16: " << f4 << "s " << f8
       << "s " << f16 << "s (x" << f8 / f4 << ", x" << f16 / f8 << ")";
  const bool ok = rn < kScalingFactorN && f8 / f4 < kScalingFactorFringe &&
                  f16 / f8 < kScalingFactorFringe;
  return {ok, note.str()};
}

std::string run_cli(const std::string& args) {
  const std::string cmd = std::string(BHC_CLI_PATH) + " " + args + " 2>/dev/null";
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return "<popen failed>";
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  const int status = pclose(pipe);
  out += "\nexit=" + std::to_string(WIFEXITED(status) ? WEXITSTATUS(status) : -1);
  return out;
}

Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("bhc_acceptance_" + std::to_string(getpid()));
  fs::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& body) {
    std::ofstream(dir / name) << body;
    return (dir / name).string();
  };
  const auto u7 = write("u7.txt", "1\n1\n1\n1\n1\n1\n1\n");
  const auto u9 = write("u9.txt", "1\n1\n1\n1\n1\n1\n1\n1\n1\n");
  const auto u6 = write("u6.txt", "1\n1\n1\n1\n1\n1\n");
  const auto one = write("one.txt", "1\n");
  const auto two = write("two.txt", "1\n1\n");
  const auto mix = write("mix.txt", "3/7\n0.5\n2\n# c\n\n1/3\n5\n0.125\n");
  const auto ok = write("ok.json", R"({"radix":2,"codewords":["0","10","11"]})");
  const auto pre = write("pre.json", R"({"radix":2,"codewords":["0","01"]})");
  const auto dup = write("dup.json", R"({"radix":2,"codewords":["00","01","10","11","11"]})");

  const std::vector<std::string> runs{
      "solve " + u7 + " --radix 3 --min-len 1 --max-len 4",
      "solve " + one + " --min-len 0",
      "solve " + two + " --radix 2 --min-len 2 --max-len 2",
      "solve " + mix + " --radix 3 --penalty exp:1/2 --max-len 4",
      "solve " + mix + " --penalty quadratic --space full",
      "fringe " + u9 + " --radix 3 --max-fringe 0",
      "fringe " + u6 + " --radix 2 --max-fringe 0",
      "fringe " + u6 + " --radix 2 --max-fringe 0 --extra-dummy-blocks 2",
      "fringe " + mix + " --max-fringe 2 --penalty quadratic",
      "verify " + ok,
      "verify " + pre,
      "verify " + dup,
  };
  for (const auto& args : runs) {
    const auto a = run_cli(args);
    const auto b = run_cli(args);
    if (a != b) return {false, "differs: bhc " + args};
    if (a.rfind("<popen", 0) == 0) return {false, "could not run the CLI"};
  }
  fs::remove_all(dir);
  return {true, std::to_string(runs.size()) + " invocations, byte-identical"};
}

}  // namespace

int main() {
  const auto cases = linspace_cases();
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"grid nodes for n=7, D=3, [1,4], square penalty", fig1_grid},
      {"total width constants", width_constants},
      {"solver equals exhaustive optimum", solver_vs_oracle},
      {"Package-Merge equals subset optimum", packmerge_vs_subsets},
      {"linear-space output identical to full", [&] { return linspace_equivalence(cases); }},
      {"attribute pass keeps at most 2n elements", [&] { return linspace_memory(cases); }},
      {"Huffman agreement with trivial bounds", huffman_agreement},
      {"fringe equals exhaustive optimum", fringe_correctness},
      {"scaling in n and in d", scaling},
      {"CLI output is deterministic", determinism},
  };

  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > kBudgetSeconds[k + 1]) {
      o.pass = false;
      o.note += " (over time budget)";
    }
    if (!o.pass) ++failed;
    std::ostringstream line;
    line.precision(3);
    line << (o.pass ? "[PASS] " : "[FAIL] ") << k + 1 << ". " << criteria[k].first << ": "
         << o.note << " [" << std::fixed << secs << "s]";
    std::cout << line.str() << std::endl;
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : "all criteria passed")
            << std::endl;
  return failed ? 1 : 0;
}
