#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "common/instances.hpp"

using namespace structdist;
using namespace structdist::testing;

namespace {

double oracle_log_z(const StructuredDistribution& d) {
  const auto ef = oracle::enumerate_structures(d.family(), d.config());
  return oracle::oracle_log_partition(ef, d.theta());
}

double permutation_score(const Tensor& scores, const Tensor& perm) {
  double s = 0.0;
  for (std::size_t k = 0; k < perm.size(); ++k)
    if (perm.data()[k] == 1.0) s += scores.data()[k];
  return s;
}

}  // namespace

TEST(NeedlemanWunsch, DelannoyCounts) {
  EXPECT_NEAR(nw_log_partition({Tensor({2, 2, 3}, 0.0)}), std::log(3.0), 1e-12);
  EXPECT_NEAR(nw_log_partition({Tensor({3, 3, 3}, 0.0)}), std::log(13.0), 1e-12);
  EXPECT_NEAR(nw_log_partition({Tensor({4, 4, 3}, 0.0)}), std::log(63.0), 1e-12);
}

TEST(NeedlemanWunsch, MatchesEnumeration) {
  Rng rng({31});
  const auto d = random_instance(Family::monotone_alignment, {.n = 3, .m = 3}, rng, 2.0);
  EXPECT_NEAR(log_partition(d), oracle_log_z(d), 1e-7);
}

TEST(NeedlemanWunsch, FiniteDifferenceGradient) {
  Rng rng({32});
  EXPECT_LE(finite_difference_error(random_instance(Family::monotone_alignment, {.n = 3, .m = 2}, rng)), 1e-4);
}

TEST(Ctc, ThreePathsForOneLabel) {
  EXPECT_NEAR(ctc_log_partition({Tensor({2, 2}, 0.0), {1}}), std::log(3.0), 1e-12);
  EXPECT_NEAR(ctc_log_partition({Tensor({2, 2}, std::log(0.5)), {1}}), std::log(0.75), 1e-12);
}

TEST(Ctc, TooLongTargetHasEmptySupport) {
  EXPECT_EQ(ctc_log_partition({Tensor({2, 3}, 0.0), {1, 2, 1}}), kNegInf);
  EXPECT_EQ(ctc_log_partition({Tensor({2, 2}, 0.0), {1, 1}}), kNegInf);  // repeat needs a blank between
  EXPECT_NEAR(ctc_log_partition({Tensor({3, 2}, 0.0), {1, 1}}), 0.0, 1e-12);
}

TEST(Ctc, MatchesCollapseEnumeration) {
  Rng rng({33});
  Config c{.n = 5, .v = 3};
  c.target = {2, 1};
  const auto d = random_instance(Family::ctc, c, rng, 2.0);
  EXPECT_NEAR(log_partition(d), oracle_log_z(d), 1e-7);
  c.target = {2, 2};
  const auto rep = random_instance(Family::ctc, c, rng, 2.0);
  EXPECT_NEAR(log_partition(rep), oracle_log_z(rep), 1e-7);
}

TEST(Ctc, AllTargetsSumToOneUnderNormalizedFrames) {
  Rng rng({34});
  for (std::size_t frames = 1; frames <= 4; ++frames) {
    const std::size_t v = 3;
    Tensor f = random_tensor({frames, v}, rng, 2.0);
    log_normalize_blocks(f, v);
    double total = 0.0;
    for (std::size_t len = 0; len <= frames; ++len) {
      std::size_t count = 1;
      for (std::size_t k = 0; k < len; ++k) count *= v - 1;
      for (std::size_t code = 0; code < count; ++code) {
        std::vector<std::size_t> target(len);
        std::size_t rest = code;
        for (auto& label : target) {
          label = 1 + rest % (v - 1);
          rest /= v - 1;
        }
        const double lz = ctc_log_partition({f, target});
        if (lz != kNegInf) total += std::exp(lz);
      }
    }
    EXPECT_NEAR(total, 1.0, 1e-6);
  }
}

TEST(Ctc, FiniteDifferenceGradient) {
  Rng rng({35});
  Config c{.n = 4, .v = 3};
  c.target = {1, 2};
  EXPECT_LE(finite_difference_error(random_instance(Family::ctc, c, rng)), 1e-4);
}

TEST(Ctc, CollapseRule) {
  EXPECT_EQ(ctc_collapse(std::vector<std::size_t>{1, 1, 0, 1, 2, 2, 0}), (std::vector<std::size_t>{1, 1, 2}));
  EXPECT_TRUE(ctc_collapse(std::vector<std::size_t>{0, 0}).empty());
}

TEST(Assignment, SmallExamples) {
  const Tensor eye({2, 2}, std::vector<double>{1, 0, 0, 1});
  EXPECT_EQ(assignment_argmax({eye}), eye);
  const Tensor swap({2, 2}, std::vector<double>{0, 1, 1, 0});
  EXPECT_EQ(assignment_argmax({swap}), swap);
  EXPECT_EQ(permutation_score(swap, assignment_argmax({swap})), 2.0);
}

TEST(Assignment, MatchesBruteForceAndTieBreak) {
  Rng rng({36});
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + trial % 6;
    Tensor s = random_tensor({n, n}, rng, 3.0);
    if (trial % 3 == 0)
      for (double& x : s.data()) x = std::round(x);  // plenty of ties
    if (trial % 5 == 0 && n > 1) s(0, n - 1) = kNegInf;
    std::vector<std::size_t> perm(n), best_perm;
    std::iota(perm.begin(), perm.end(), 0);
    double best = kNegInf;
    do {
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) total += s(i, perm[i]);
      if (total > best) {  // strict: keeps the lexicographically first optimum
        best = total;
        best_perm = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    const Tensor got = assignment_argmax({s});
    EXPECT_NEAR(permutation_score(s, got), best, 1e-9);
    for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(got(i, best_perm[i]), 1.0) << "trial " << trial << " row " << i;
  }
}

TEST(Assignment, RowAndColumnShiftInvariance) {
  Rng rng({37});
  const Tensor s = random_tensor({5, 5}, rng, 2.0);
  const Tensor base = assignment_argmax({s});
  Tensor row = s, col = s;
  for (std::size_t j = 0; j < 5; ++j) row(2, j) += 7.5;
  for (std::size_t i = 0; i < 5; ++i) col(i, 3) -= 4.25;
  EXPECT_EQ(assignment_argmax({row}), base);
  EXPECT_EQ(assignment_argmax({col}), base);
}

TEST(Assignment, AllForbiddenIsVacuous) {
  Tensor s({2, 2}, kNegInf);
  s(0, 0) = 1.0;
  s(0, 1) = 1.0;
  EXPECT_THROW(assignment_argmax({s}), VacuousDistribution);
}

TEST(Assignment, PartitionOperationsAreUnsupported) {
  LogPotentials pots;
  pots.add("scores", Tensor({3, 3}, 0.0));
  const StructuredDistribution d(Family::one_to_one, pots);
  EXPECT_THROW(log_partition(d), Unsupported);
  EXPECT_THROW(marginals(d), Unsupported);
  EXPECT_THROW(sample(d, RandomSeed{1}), Unsupported);
  EXPECT_THROW(entropy(d), Unsupported);
  EXPECT_THROW(cross_entropy(d, d), Unsupported);
  EXPECT_THROW(kl_divergence(d, d), Unsupported);
  try {
    log_partition(d);
  } catch (const Unsupported& e) {
    EXPECT_STREQ(e.what(), "partition intractable for one-to-one matching");
  }
  EXPECT_NO_THROW(argmax(d));
}
