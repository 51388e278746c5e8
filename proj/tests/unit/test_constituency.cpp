#include <gtest/gtest.h>

#include <cmath>

#include "common/instances.hpp"

using namespace structdist;
using namespace structdist::testing;

namespace {

constexpr double kLnHalf = -0.69314718055994530942;

PCFG single_derivation_grammar() {
  // S -> A A with probability 1, A emits both tokens with probability 1. Children: 0 = S, 1 = A.
  PCFG g;
  g.root = Tensor({1}, 0.0);
  g.rules = Tensor({1, 2, 2}, kNegInf);
  g.rules(0, 1, 1) = 0.0;
  g.emissions = Tensor({2, 1}, 0.0);
  return g;
}

PCFG two_preterminal_grammar() {
  // S -> A A | B B, each 1/2; both preterminals emit each token with probability 1/2.
  PCFG g;
  g.root = Tensor({1}, 0.0);
  g.rules = Tensor({1, 3, 3}, kNegInf);
  g.rules(0, 1, 1) = kLnHalf;
  g.rules(0, 2, 2) = kLnHalf;
  g.emissions = Tensor({2, 2}, kLnHalf);
  return g;
}

}  // namespace

TEST(TreeCrf, CatalanCounts) {
  EXPECT_NEAR(cky_log_partition({Tensor({4, 4, 1}, 0.0)}), std::log(5.0), 1e-12);
  EXPECT_NEAR(cky_log_partition({Tensor({2, 2, 2}, 0.0)}), std::log(8.0), 1e-12);
  EXPECT_NEAR(cky_log_partition({Tensor({1, 1, 3}, 0.0)}), std::log(3.0), 1e-12);
}

TEST(TreeCrf, MatchesEnumeration) {
  Rng rng({41});
  const auto d = random_instance(Family::tree_crf, {.n = 5, .m = 2}, rng, 2.0);
  const auto ef = oracle::enumerate_structures(d.family(), d.config());
  EXPECT_NEAR(log_partition(d), oracle::oracle_log_partition(ef, d.theta()), 1e-7);
  EXPECT_NEAR(structure_score(d, argmax(d)), oracle::oracle_max_score(ef, d.theta()), 1e-9);
}

TEST(TreeCrf, SpanMarginalsCountNodes) {
  Rng rng({42});
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto d = random_instance(Family::tree_crf, {.n = n, .m = 3}, rng, 2.0);
    double total = 0.0;
    const auto mu = marginals(d);
    for (double x : mu["spans"].data()) total += x;
    EXPECT_NEAR(total, 2.0 * static_cast<double>(n) - 1.0, 1e-6);
  }
}

TEST(TreeCrf, IgnoresEntriesBelowTheDiagonal) {
  Rng rng({43});
  const auto d = random_instance(Family::tree_crf, {.n = 4, .m = 2}, rng);
  Tensor spans = d.potential("spans");
  for (std::size_t l = 0; l < 2; ++l) spans(3, 1, l) = 99.0;
  EXPECT_NEAR(cky_log_partition({spans}), log_partition(d), 1e-12);
}

TEST(Pcfg, SingleDerivationHasProbabilityOne) {
  const auto g = single_derivation_grammar();
  EXPECT_NEAR(pcfg_inside(g), 0.0, 1e-15);
  const std::vector<Span> tree{{0, 1}, {0, 0}, {1, 1}};
  EXPECT_NEAR(pcfg_masked_inside(g, tree), pcfg_inside(g), 1e-15);
}

TEST(Pcfg, TwoEquiprobablePreterminals) {
  // Two derivations, each 1/2 * 1/2 * 1/2.
  EXPECT_NEAR(pcfg_inside(two_preterminal_grammar()), std::log(0.25), 1e-12);
  const auto ef = oracle::enumerate_structures(Family::pcfg, two_preterminal_grammar().to_distribution().config());
  EXPECT_NEAR(oracle::oracle_log_partition(ef, two_preterminal_grammar().to_distribution().theta()), std::log(0.25), 1e-12);
}

TEST(Pcfg, MatchesDerivationEnumeration) {
  Rng rng({44});
  const auto d = random_instance(Family::pcfg, {.n = 4, .nt = 2, .pt = 2}, rng, 2.0);
  const auto ef = oracle::enumerate_structures(d.family(), d.config());
  EXPECT_NEAR(log_partition(d), oracle::oracle_log_partition(ef, d.theta()), 1e-7);
}

TEST(Pcfg, BracketingsPartitionTheSentenceProbability) {
  Rng rng({45});
  for (std::size_t n = 2; n <= 5; ++n) {
    const auto d = random_instance(Family::pcfg, {.n = n, .nt = 2, .pt = 2}, rng, 2.0);
    double total = 0.0;
    for (const auto& spans : oracle::enumerate_bracketings(n)) total += std::exp(pcfg_masked_inside(d, spans));
    EXPECT_NEAR(total, std::exp(log_partition(d)), 1e-6);
  }
}

TEST(Pcfg, ZeroProbabilityBracketing) {
  PCFG g = single_derivation_grammar();
  g.rules = Tensor({1, 2, 2}, kNegInf);
  g.rules(0, 1, 1) = 0.0;
  g.emissions = Tensor({3, 1}, 0.0);
  // Three tokens need S over a two-token span, but S -> A A cannot take an S child.
  EXPECT_EQ(pcfg_masked_inside(g, std::vector<Span>{{0, 2}, {0, 0}, {1, 2}, {1, 1}, {2, 2}}), kNegInf);
}

TEST(Pcfg, InvalidBracketingIsRejected) {
  const auto g = single_derivation_grammar();
  EXPECT_THROW(pcfg_masked_inside(g, std::vector<Span>{{0, 1}, {0, 0}}), InvalidArgument);
  EXPECT_THROW(pcfg_masked_inside(g, std::vector<Span>{{0, 1}, {0, 0}, {0, 0}}), InvalidArgument);
}

TEST(Pcfg, SpanMarginalsMatchEnumeration) {
  Rng rng({46});
  const auto d = random_instance(Family::pcfg, {.n = 4, .nt = 2, .pt = 2}, rng, 2.0);
  const auto ef = oracle::enumerate_structures(d.family(), d.config());
  const auto expected = oracle::oracle_marginals(ef, d.theta());
  const auto got = marginals(d).flatten();
  EXPECT_LE(max_abs_diff(got, expected), 1e-6);
  const std::size_t off = d.potentials().offset("sticky");
  EXPECT_NEAR(got[off + 0 * 4 + 3], 1.0, 1e-9);  // the whole sentence is always a constituent
}

TEST(Pcfg, RejectsUnnormalizedGrammarAndBadSticky) {
  PCFG g = single_derivation_grammar();
  g.rules(0, 1, 0) = 0.0;
  EXPECT_THROW(g.to_distribution(), InvalidArgument);
  PCFG h = single_derivation_grammar();
  h.sticky = Tensor({2, 2}, 0.5);
  EXPECT_THROW(h.to_distribution(), InvalidArgument);
}

TEST(Bracketing, Validity) {
  EXPECT_TRUE(is_binary_bracketing(1, std::vector<Span>{{0, 0}}));
  EXPECT_TRUE(is_binary_bracketing(3, std::vector<Span>{{0, 2}, {0, 0}, {1, 2}, {1, 1}, {2, 2}}));
  EXPECT_FALSE(is_binary_bracketing(3, std::vector<Span>{{0, 2}, {0, 1}, {1, 2}, {1, 1}, {2, 2}}));
  EXPECT_EQ(oracle::enumerate_bracketings(4).size(), 5u);
}
