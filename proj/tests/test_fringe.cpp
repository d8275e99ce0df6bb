#include <gtest/gtest.h>

#include <random>

#include "bhc/fringe.hpp"
#include "bhc/oracle.hpp"
#include "test_support.hpp"

using namespace bhc;
using bhc::testing::R;

TEST(IntegerLog, Bounds) {
  EXPECT_EQ(integer_log_bounds(7, Radix(3)), std::make_pair(1, 2));
  EXPECT_EQ(integer_log_bounds(9, Radix(3)), std::make_pair(2, 2));
  EXPECT_EQ(integer_log_bounds(1, Radix(2)), std::make_pair(0, 0));
  EXPECT_EQ(integer_log_bounds(6, Radix(2)), std::make_pair(2, 3));
  EXPECT_EQ(integer_log_bounds(1000000, Radix(10)), std::make_pair(6, 6));
}

TEST(Fringe, Examples) {
  auto seven = fringe_solve(FringeProblem::make(bhc::testing::uniform(7), Radix(3), 1));
  EXPECT_EQ(seven.bounds.max, 2);
  EXPECT_EQ(seven.code.lengths, (LengthVector{1, 2, 2, 2, 2, 2, 2}));
  EXPECT_EQ(seven.objective, 13);

  auto nine = fringe_solve(FringeProblem::make(bhc::testing::uniform(9), Radix(3), 0));
  EXPECT_EQ(nine.code.lengths, LengthVector(9, 2));
  ASSERT_EQ(nine.sweep.size(), 1u);

  EXPECT_THROW(fringe_solve(FringeProblem::make(bhc::testing::uniform(6), Radix(2), 0)),
               Infeasible);

  auto padded = fringe_solve(FringeProblem::make(bhc::testing::uniform(6), Radix(2), 0,
                                                 Penalty::linear(), 2));
  EXPECT_EQ(padded.code.lengths, LengthVector(6, 3));
  EXPECT_EQ(padded.code.dummies, 2u);
}

TEST(Fringe, SingleSymbol) {
  auto r = fringe_solve(FringeProblem::make({R(5)}, Radix(4), 2));
  EXPECT_EQ(r.code.lengths, LengthVector{0});
  EXPECT_EQ(r.objective, 0);
}

TEST(Fringe, RejectsNegativeFringe) {
  EXPECT_THROW(FringeProblem::make(bhc::testing::uniform(3), Radix(2), -1), InvalidArgument);
}

TEST(Fringe, FullAndLinearSpaceAgree) {
  std::mt19937_64 rng(8);
  for (int it = 0; it < 60; ++it) {
    const int d = 2 + static_cast<int>(rng() % 3);
    auto fp = FringeProblem::make(bhc::testing::random_rationals(rng, 2 + rng() % 60), Radix(d),
                                  static_cast<int>(rng() % 6), bhc::testing::random_penalty(rng));
    FringeResult a, b;
    try {
      a = fringe_solve(fp, {true});
    } catch (const Infeasible&) {
      EXPECT_THROW(fringe_solve(fp, {false}), Infeasible);
      continue;
    }
    b = fringe_solve(fp, {false});
    ASSERT_EQ(a.code, b.code);
    ASSERT_EQ(a.objective, b.objective);
  }
}

TEST(FringeProperty, MatchesExhaustiveSearch) {
  std::mt19937_64 rng(1234);
  int checked = 0;
  for (int it = 0; it < 800; ++it) {
    const int d = 2 + static_cast<int>(rng() % 3);
    const std::size_t n = 1 + rng() % 9;
    const int fringe = static_cast<int>(rng() % 4);
    auto w = rng() % 2 ? bhc::testing::random_small_ints(rng, n)
                       : bhc::testing::random_rationals(rng, n);
    auto fp = FringeProblem::make(std::move(w), Radix(d), fringe, bhc::testing::random_penalty(rng));
    if (fp.weights.n_padded() > 10) continue;
    const auto opt = oracle::brute_force_fringe(fp.weights, fp.radix, fringe, fp.penalty);
    FringeResult r;
    try {
      r = fringe_solve(fp);
    } catch (const Infeasible&) {
      ASSERT_FALSE(opt.best) << "solver gave up on a feasible instance";
      continue;
    }
    ASSERT_TRUE(opt.best);
    ++checked;
    ASSERT_EQ(r.objective, *opt.best);
    const auto& v = r.code.padded_lengths;
    ASSERT_LE(v.back() - v.front(), fringe);
    ASSERT_LE(r.sweep.size(), static_cast<std::size_t>(fringe) + 1);
    ASSERT_EQ(kraft_sum(v, fp.radix), 1);
  }
  EXPECT_GT(checked, 300);
}

TEST(FringeProperty, ObjectiveNonincreasingInFringe) {
  std::mt19937_64 rng(31);
  for (int it = 0; it < 60; ++it) {
    const int d = 2 + static_cast<int>(rng() % 3);
    auto w = bhc::testing::random_rationals(rng, 2 + rng() % 50);
    auto pen = bhc::testing::random_penalty(rng);
    std::optional<Rational> prev;
    for (int fringe = 0; fringe <= 6; ++fringe) {
      try {
        auto r = fringe_solve(FringeProblem::make(w, Radix(d), fringe, pen));
        if (prev) {
          ASSERT_LE(r.objective, *prev);
        }
        prev = r.objective;
      } catch (const Infeasible&) {
        ASSERT_FALSE(prev);
      }
    }
  }
}
