#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "common/instances.hpp"

using namespace structdist;
using structdist::testing::random_tensor;

TEST(Tensor, RejectsNaNAndWrongLength) {
  EXPECT_THROW(Tensor({2}, std::vector<double>{0.0, std::nan("")}), InvalidArgument);
  EXPECT_THROW(Tensor({2, 2}, std::vector<double>{0.0, 1.0, 2.0}), InvalidArgument);
  const Tensor ok({2}, std::vector<double>{kNegInf, 1.0});
  EXPECT_EQ(ok(0), kNegInf);
}

TEST(Tensor, RowMajorIndexing) {
  const Tensor t({2, 3}, std::vector<double>{0, 1, 2, 3, 4, 5});
  EXPECT_EQ(t(1, 0), 3.0);
  EXPECT_EQ(t(0, 2), 2.0);
  EXPECT_EQ(t.size(), 6u);
}

TEST(Logsumexp, Examples) {
  const Tensor zeros({2}, 0.0);
  EXPECT_NEAR(logsumexp(zeros, 0).data()[0], std::numbers::ln2, 1e-12);
  const Tensor one_live({2}, std::vector<double>{kNegInf, 0.0});
  EXPECT_EQ(logsumexp(one_live, 0).data()[0], 0.0);
  const Tensor dead({2}, std::vector<double>{kNegInf, kNegInf});
  EXPECT_EQ(logsumexp(dead, 0).data()[0], kNegInf);
}

TEST(Logsumexp, AlongMiddleAxis) {
  Rng rng({3});
  const Tensor t = random_tensor({2, 3, 4}, rng, 3.0);
  const Tensor r = logsumexp(t, 1);
  ASSERT_EQ(r.shape(), (Shape{2, 4}));
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t k = 0; k < 4; ++k) {
      double s = 0.0;
      for (std::size_t j = 0; j < 3; ++j) s += std::exp(t(i, j, k));
      EXPECT_NEAR(r(i, k), std::log(s), 1e-12);
    }
  }
  EXPECT_THROW(logsumexp(t, 3), InvalidArgument);
}

TEST(Logsumexp, ShiftInvarianceAndNoOverflow) {
  Rng rng({11});
  for (int trial = 0; trial < 50; ++trial) {
    const Tensor t = random_tensor({7}, rng, 20.0);
    const double base = logsumexp(t.data());
    for (double c : {-700.0, -3.0, 5.0, 800.0}) {
      std::vector<double> shifted(t.data().begin(), t.data().end());
      for (double& x : shifted) x += c;
      EXPECT_NEAR(logsumexp(shifted) - c, base, 1e-9);
    }
  }
  const std::vector<double> huge{1000.0, 1000.0};
  EXPECT_NEAR(logsumexp(huge), 1000.0 + std::numbers::ln2, 1e-9);
}

template <typename S>
void check_semiring_axioms(Rng& rng) {
  for (int trial = 0; trial < 200; ++trial) {
    const double a = 6.0 * rng.uniform() - 3.0, b = 6.0 * rng.uniform() - 3.0, c = 6.0 * rng.uniform() - 3.0;
    EXPECT_NEAR(S::plus(a, S::plus(b, c)), S::plus(S::plus(a, b), c), 1e-9);
    EXPECT_NEAR(S::plus(a, b), S::plus(b, a), 1e-12);
    EXPECT_NEAR(S::times(a, S::times(b, c)), S::times(S::times(a, b), c), 1e-9);
    EXPECT_NEAR(S::times(a, S::plus(b, c)), S::plus(S::times(a, b), S::times(a, c)), 1e-9);
    EXPECT_EQ(S::plus(a, S::zero()), a);
    EXPECT_EQ(S::times(a, S::one()), a);
  }
}

TEST(Semiring, LogAxioms) {
  Rng rng({5});
  check_semiring_axioms<LogSemiring>(rng);
  EXPECT_EQ(LogSemiring::zero(), kNegInf);
  EXPECT_EQ(LogSemiring::one(), 0.0);
}

TEST(Semiring, MaxPlusAxioms) {
  Rng rng({6});
  check_semiring_axioms<MaxPlusSemiring>(rng);
  EXPECT_EQ(MaxPlusSemiring::plus(2.0, 3.0), 3.0);
}

TEST(Contract, MaxPlusMatrixSquare) {
  const Tensor a({2, 2}, std::vector<double>{0, 1, 2, 3});
  const Tensor r = semiring_contract<MaxPlusSemiring>("ij,jk->ik", {a, a});
  EXPECT_EQ(r, Tensor({2, 2}, std::vector<double>{3, 4, 5, 6}));
}

TEST(Contract, LogZerosGiveLn2) {
  const Tensor z({2, 2}, 0.0);
  const Tensor r = semiring_contract<LogSemiring>("ij,jk->ik", {z, z});
  for (double x : r.data()) EXPECT_NEAR(x, std::numbers::ln2, 1e-12);
}

TEST(Contract, IdentitySpec) {
  Rng rng({8});
  const Tensor t = random_tensor({3, 4}, rng);
  EXPECT_EQ(semiring_contract<LogSemiring>("ab->ab", {t}), t);
  EXPECT_EQ(semiring_contract<MaxPlusSemiring>("ab->ab", {t}), t);
}

TEST(Contract, LogMatchesOrdinaryContraction) {
  Rng rng({9});
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t i = 1 + trial % 8, j = 1 + (trial * 3) % 8, k = 1 + (trial * 5) % 8;
    const Tensor a = random_tensor({i, j}, rng, 5.0), b = random_tensor({j, k}, rng, 5.0);
    const Tensor r = semiring_contract<LogSemiring>("ij,jk->ik", {a, b});
    for (std::size_t x = 0; x < i; ++x) {
      for (std::size_t z = 0; z < k; ++z) {
        double s = 0.0;
        for (std::size_t y = 0; y < j; ++y) s += std::exp(a(x, y)) * std::exp(b(y, z));
        EXPECT_NEAR(std::exp(r(x, z)) / s, 1.0, 1e-8);
      }
    }
  }
}

TEST(Contract, ThreeOperandsAndFullReduction) {
  Rng rng({10});
  const Tensor a = random_tensor({3}, rng), b = random_tensor({3, 2}, rng), c = random_tensor({2}, rng);
  const Tensor r = semiring_contract<LogSemiring>("i,ij,j->", {a, b, c});
  double s = 0.0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 2; ++j) s += std::exp(a(i) + b(i, j) + c(j));
  EXPECT_NEAR(r.data()[0], std::log(s), 1e-12);
}

TEST(Contract, ShapeErrors) {
  const Tensor a({2, 3}, 0.0), b({2, 3}, 0.0);
  EXPECT_THROW(semiring_contract<LogSemiring>("ij,jk->ik", {a, b}), InvalidArgument);
  EXPECT_THROW(semiring_contract<LogSemiring>("ijk->i", {a}), InvalidArgument);
  EXPECT_THROW(semiring_contract<LogSemiring>("ij->iz", {a}), InvalidArgument);
  EXPECT_THROW(semiring_contract<LogSemiring>("ij", {a}), InvalidArgument);
}

TEST(SignedLogDet, Examples) {
  Tensor eye({3, 3}, 0.0);
  for (std::size_t i = 0; i < 3; ++i) eye(i, i) = 1.0;
  auto r = signed_log_det(eye);
  EXPECT_EQ(r.sign, 1);
  EXPECT_NEAR(r.log_abs_det, 0.0, 1e-15);

  r = signed_log_det(Tensor({2, 2}, std::vector<double>{2, 0, 0, 3}));
  EXPECT_EQ(r.sign, 1);
  EXPECT_NEAR(r.log_abs_det, std::log(6.0), 1e-14);

  r = signed_log_det(Tensor({2, 2}, std::vector<double>{0, 1, 1, 0}));
  EXPECT_EQ(r.sign, -1);
  EXPECT_NEAR(r.log_abs_det, 0.0, 1e-15);
}

TEST(SignedLogDet, SingularAndErrors) {
  const auto r = signed_log_det(Tensor({2, 2}, std::vector<double>{1, 2, 2, 4}));
  EXPECT_EQ(r.sign, 0);
  EXPECT_EQ(r.log_abs_det, kNegInf);
  EXPECT_THROW(signed_log_det(Tensor({2, 3}, 0.0)), InvalidArgument);
  EXPECT_THROW(signed_log_det(Tensor({2, 2}, std::vector<double>{1, kNegInf, 0, 1})), InvalidArgument);
}

TEST(SignedLogDet, ProductRule) {
  Rng rng({12});
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + trial % 6;
    const Tensor a = random_tensor({n, n}, rng, 2.0), b = random_tensor({n, n}, rng, 2.0);
    Tensor ab({n, n}, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) ab(i, j) += a(i, k) * b(k, j);
    const auto da = signed_log_det(a), db = signed_log_det(b), dab = signed_log_det(ab);
    EXPECT_EQ(dab.sign, da.sign * db.sign);
    EXPECT_NEAR(dab.log_abs_det, da.log_abs_det + db.log_abs_det, 1e-7);
  }
}

TEST(Rng, Deterministic) {
  Rng a({42}), b({42});
  for (int k = 0; k < 100; ++k) EXPECT_EQ(a.uniform(), b.uniform());
  Rng c({42});
  const std::vector<double> w{kNegInf, 0.0, kNegInf};
  for (int k = 0; k < 20; ++k) EXPECT_EQ(c.categorical_log(w), 1u);
}
