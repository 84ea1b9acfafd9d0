#include <gtest/gtest.h>

#include <cmath>

#include "hwil/error.hpp"
#include "hwil/seq_space.hpp"

using namespace hwil;

TEST(DiagUnpair, FirstTenByHand) {
  const std::pair<int, int> table[] = {{1, 1}, {1, 2}, {2, 1}, {1, 3}, {2, 2},
                                       {3, 1}, {1, 4}, {2, 3}, {3, 2}, {4, 1}};
  for (int n = 1; n <= 10; ++n) EXPECT_EQ(diag_unpair(n), table[n - 1]) << "n = " << n;
}

TEST(DiagUnpair, RejectsZero) { EXPECT_THROW(diag_unpair(0), Error); }

TEST(DiagUnpair, IndexDominatesSecondCoordinate) {
  for (int n = 1; n <= 5000; ++n) EXPECT_GE(n, diag_unpair(n).second);
}

TEST(KoetheMatrix, RuleFromPairing) {
  // n = 1 -> (1,1): always 1.
  for (int k = 1; k <= 6; ++k) EXPECT_EQ(KoetheMatrix::rule(1, k), 1.0);
  // n = 2 -> (1,2): m = 1 <= k for every k.
  EXPECT_EQ(KoetheMatrix::rule(2, 1), 0.5);
  // n = 5 -> (2,2): 1 at k = 1, 1/2 from k = 2 on.
  EXPECT_EQ(KoetheMatrix::rule(5, 1), 1.0);
  EXPECT_EQ(KoetheMatrix::rule(5, 2), 0.5);
  EXPECT_EQ(KoetheMatrix::rule(5, 7), 0.5);
  // n = 8 -> (2,3).
  EXPECT_EQ(KoetheMatrix::rule(8, 1), 1.0);
  EXPECT_DOUBLE_EQ(KoetheMatrix::rule(8, 2), 1.0 / 3.0);
  // n = 10 -> (4,1): m = 4.
  EXPECT_EQ(KoetheMatrix::rule(10, 3), 1.0);
  EXPECT_EQ(KoetheMatrix::rule(10, 4), 1.0);
}

TEST(KoetheMatrix, InvariantsOnTruncation) {
  const auto m = default_matrix(60, 20);
  for (int n = 1; n <= 60; ++n)
    for (int k = 1; k <= 20; ++k) {
      const double v = m(n, k);
      EXPECT_LE(v, 1.0);
      if (n >= 2) EXPECT_GT(v, 1.0 / (n * n));
      if (k < 20) EXPECT_LE(m(n, k + 1), v);
    }
}

TEST(KoetheMatrix, OutOfRangeThrows) {
  const auto m = default_matrix(4, 3);
  EXPECT_THROW(m(5, 1), Error);
  EXPECT_THROW(m(1, 4), Error);
  EXPECT_THROW(m(0, 1), Error);
  EXPECT_THROW(default_matrix(0, 1), Error);
}

TEST(KoetheMatrix, LevelMatchesEntries) {
  const auto m = default_matrix(12, 5);
  const auto lv = m.level(3);
  ASSERT_EQ(lv.size(), 12u);
  for (int n = 1; n <= 12; ++n) EXPECT_EQ(lv[n - 1], m(n, 3));
}

TEST(SeqWeight, NormalizedFlag) {
  EXPECT_TRUE(SeqWeight({1.0, 0.25, 0.5}).normalized());
  EXPECT_FALSE(SeqWeight({1.0, 0.2}).normalized());
  EXPECT_FALSE(SeqWeight({1.0, 0.5}).scaled(4.0).normalized());
  EXPECT_THROW(SeqWeight({1.0, 0.0}), Error);
  EXPECT_THROW(SeqWeight(std::vector<double>{}), Error);
}

TEST(SeqWeight, WitnessScan) {
  const auto m = default_matrix(30, 6);
  const auto lam1 = matrix_level_weight(m, 1);
  ASSERT_TRUE(lam1.has_witnesses());
  EXPECT_TRUE(witnesses_hold(lam1, m));
  // Tightness: each witness is attained on the truncation.
  for (int k = 1; k <= 6; ++k) {
    double best = 0.0;
    for (int n = 1; n <= 30; ++n) best = std::max(best, lam1(n) / m(n, k));
    EXPECT_DOUBLE_EQ(lam1.witnesses()[k - 1], best);
  }
}

TEST(NormalizeSeqWeight, BruteForceOracle) {
  const int N = 50, K = 8;
  const auto m = default_matrix(N, K);
  const auto mu = matrix_level_weight(m, 1);
  const auto out = normalize_seq_weight(mu, m);
  for (int n = 1; n <= N; ++n) {
    double inf = 1e300;
    for (int k = 1; k <= K; ++k) inf = std::min(inf, std::max(mu.witnesses()[k - 1], 1.0) * m(n, k));
    const double want = std::min(inf, m(n, 1));
    EXPECT_EQ(out.weight(n), want);
    EXPECT_LE(out.weight(n), m(n, 1));
    for (int k = 1; k <= K; ++k)
      EXPECT_GE(out.weight(n), m(n, k) / std::max(mu.witnesses()[k - 1], 1.0) - 1e-15);
    EXPECT_LE(mu(n), out.scale * out.weight(n) * (1.0 + 1e-15));
    if (n >= 2) EXPECT_GT(out.weight(n), 1.0 / (n * n));
    EXPECT_LE(out.weight(n), 1.0);
  }
  EXPECT_TRUE(witnesses_hold(out.weight, m));
}

TEST(NormalizeSeqWeight, SmallWitnessesGiveLastLevel) {
  const auto m = default_matrix(20, 6);
  const auto last = m.level(6);
  const SeqWeight mu(last, std::vector<double>(6, 1.0));
  const auto out = normalize_seq_weight(mu, m);
  for (int n = 1; n <= 20; ++n) EXPECT_EQ(out.weight(n), last[n - 1]);
}

TEST(NormalizeSeqWeight, RejectsMissingWitnesses) {
  const auto m = default_matrix(10, 4);
  EXPECT_THROW(normalize_seq_weight(SeqWeight(m.level(1)), m), Error);
  EXPECT_THROW(normalize_seq_weight(SeqWeight(m.level(1), {1.0, 1.0}), m), Error);
}

TEST(Seminorm, Examples) {
  const SeqWeight lam({1.0, 0.5, 0.25, 0.125});
  EXPECT_EQ(seminorm(FiniteSeq::unit(4, 3), lam), 0.25);
  EXPECT_EQ(seminorm(FiniteSeq(4), lam), 0.0);
  EXPECT_EQ(seminorm(FiniteSeq(), lam), 0.0);
  FiniteSeq a(4);
  for (int n = 1; n <= 4; ++n) a[n] = 1.0 / lam(n);
  EXPECT_DOUBLE_EQ(seminorm(a, lam), 1.0);
}

TEST(FiniteSeq, ArithmeticAndSupport) {
  FiniteSeq a(3), b(5);
  a[2] = {1.0, 1.0};
  b[5] = 2.0;
  const FiniteSeq c = a + b;
  EXPECT_EQ(c.size(), 5);
  EXPECT_EQ(c[2], Complex(1.0, 1.0));
  EXPECT_EQ(c.support(), (std::vector<int>{2, 5}));
  const FiniteSeq d = c - b;
  EXPECT_EQ(d[5], Complex(0.0));
  EXPECT_EQ((Complex(0.0, 2.0) * a)[2], Complex(-2.0, 2.0));
  EXPECT_THROW(a[0], Error);
  EXPECT_THROW(a[4], Error);
}
