#include <cmath>

#include <gtest/gtest.h>

#include "sdct/error.hpp"
#include "sdct/model.hpp"

using namespace sdct;

namespace {

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no sdct::Error thrown";
  return ErrorCode::internal_error;
}

}  // namespace

TEST(OrthogonalDictionary, RejectsDimensionOne) {
  EXPECT_EQ(code_of([] { make_orthogonal_dictionary(1, 0); }), ErrorCode::invalid_dimension);
}

TEST(OrthogonalDictionary, Deterministic) {
  const auto a = make_orthogonal_dictionary(3, 0);
  const auto b = make_orthogonal_dictionary(3, 0);
  EXPECT_EQ(a.entries, b.entries);
  EXPECT_NE(a.entries, make_orthogonal_dictionary(3, 1).entries);
}

TEST(OrthogonalDictionary, OrthogonalToMachinePrecision) {
  const auto a = make_orthogonal_dictionary(8, 7);
  EXPECT_EQ(a.kind, DictionaryKind::orthogonal);
  EXPECT_LE(a.orthogonality_residual(), 1e-12);
  for (std::uint64_t seed = 0; seed < 20; ++seed)
    EXPECT_LE(make_orthogonal_dictionary(12, seed).orthogonality_residual(), 1e-12);
}

TEST(CompleteDictionary, KappaOneIsOrthogonal) {
  const auto a = make_complete_dictionary(4, 1.0, 1);
  EXPECT_LE(a.orthogonality_residual(), 1e-12);
  EXPECT_NEAR(a.measured_condition(), 1.0, 1e-12);
}

TEST(CompleteDictionary, MatchesRequestedCondition) {
  const auto a = make_complete_dictionary(4, 10.0, 1);
  EXPECT_EQ(a.kind, DictionaryKind::complete);
  EXPECT_GE(a.measured_condition(), 9.9);
  EXPECT_LE(a.measured_condition(), 10.1);
  for (double kappa : {1.2, 2.0, 5.0, 100.0}) {
    const auto b = make_complete_dictionary(9, kappa, 3);
    EXPECT_NEAR(b.measured_condition(), kappa, 0.01 * kappa);
  }
}

TEST(CompleteDictionary, RejectsKappaBelowOne) {
  EXPECT_EQ(code_of([] { make_complete_dictionary(4, 0.5, 1); }), ErrorCode::invalid_parameter);
}

TEST(SampleBg, NearOneRateIsDense) {
  const auto x = sample_bg(2, 4, 0.999999, 11);
  EXPECT_GE(x.support.count() / 8.0, 0.99);
}

TEST(SampleBg, SupportFractionConcentrates) {
  const auto x = sample_bg(50, 10000, 0.2, 3);
  const double frac = static_cast<double>(x.support.count()) / (50.0 * 10000.0);
  EXPECT_GE(frac, 0.19);
  EXPECT_LE(frac, 0.21);
}

TEST(SampleBg, Deterministic) {
  const auto a = sample_bg(6, 50, 0.3, 8);
  const auto b = sample_bg(6, 50, 0.3, 8);
  EXPECT_EQ(a.entries, b.entries);
  EXPECT_EQ(a.support, b.support);
}

TEST(SampleBg, ZerosExactlyOffSupport) {
  const auto x = sample_bg(10, 500, 0.25, 2);
  for (Eigen::Index j = 0; j < x.entries.cols(); ++j)
    for (Eigen::Index i = 0; i < x.entries.rows(); ++i)
      if (!x.support(i, j)) ASSERT_EQ(x.entries(i, j), 0.0);
      else ASSERT_NE(x.entries(i, j), 0.0);
}

TEST(SampleBg, NonzerosAreStandardNormal) {
  const auto x = sample_bg(20, 5000, 0.3, 4);
  double sum_abs = 0.0, count = 0.0;
  for (Eigen::Index j = 0; j < x.entries.cols(); ++j)
    for (Eigen::Index i = 0; i < x.entries.rows(); ++i)
      if (x.support(i, j)) {
        sum_abs += std::abs(x.entries(i, j));
        count += 1.0;
      }
  const double mean_abs = sum_abs / count;
  const double sd = std::sqrt((1.0 - 2.0 / M_PI) / count);
  EXPECT_LE(std::abs(mean_abs - std::sqrt(2.0 / M_PI)), 4.0 * sd);
}

TEST(SampleBg, RejectsRateOutsideOpenInterval) {
  EXPECT_EQ(code_of([] { sample_bg(3, 3, 0.0, 1); }), ErrorCode::invalid_parameter);
  EXPECT_EQ(code_of([] { sample_bg(3, 3, 1.0, 1); }), ErrorCode::invalid_parameter);
  EXPECT_EQ(code_of([] { sample_bg(3, 3, -0.2, 1); }), ErrorCode::invalid_parameter);
}

TEST(SampleFixedK, FullyDenseWhenKEqualsN) {
  const auto x = sample_fixed_k(5, 3, 5, 1);
  EXPECT_EQ(x.support.count(), 15);
}

TEST(SampleFixedK, KOneGivesScaledBasisColumns) {
  const auto x = sample_fixed_k(5, 3, 1, 1);
  for (Eigen::Index j = 0; j < 3; ++j) {
    EXPECT_EQ(x.support.col(j).count(), 1);
    Eigen::Index i;
    x.entries.col(j).cwiseAbs().maxCoeff(&i);
    EXPECT_EQ(x.entries.col(j).norm(), std::abs(x.entries(i, j)));
  }
}

TEST(SampleFixedK, EveryColumnHasExactlyK) {
  const auto x = sample_fixed_k(10, 100, 3, 6);
  EXPECT_EQ(x.mode, CoefficientMode::fixed_k);
  for (Eigen::Index j = 0; j < 100; ++j) {
    ASSERT_EQ(x.support.col(j).count(), 3);
    for (Eigen::Index i = 0; i < 10; ++i) ASSERT_EQ(x.support(i, j), x.entries(i, j) != 0.0);
  }
}

TEST(SampleFixedK, SupportsAreUniform) {
  const auto x = sample_fixed_k(6, 30000, 2, 12);
  // Each row is hit with probability k / n.
  for (Eigen::Index i = 0; i < 6; ++i) {
    const double frac = x.support.row(i).count() / 30000.0;
    EXPECT_NEAR(frac, 2.0 / 6.0, 0.015);
  }
}

TEST(SampleFixedK, RejectsKAboveN) {
  EXPECT_EQ(code_of([] { sample_fixed_k(4, 3, 5, 1); }), ErrorCode::invalid_parameter);
  EXPECT_EQ(code_of([] { sample_fixed_k(4, 3, 0, 1); }), ErrorCode::invalid_parameter);
}

TEST(Synthesize, IdentityIsBitwise) {
  const DictionaryMatrix id{Matrix::Identity(6, 6), DictionaryKind::orthogonal, 1.0};
  const auto x = sample_bg(6, 40, 0.4, 2);
  const auto y = synthesize(id, x);
  EXPECT_EQ(y.entries, x.entries);
  EXPECT_TRUE(y.synthetic());
}

TEST(Synthesize, OrthogonalPreservesFrobenius) {
  const auto a = make_orthogonal_dictionary(7, 2);
  const auto x = sample_bg(7, 300, 0.3, 2);
  EXPECT_NEAR(synthesize(a, x).entries.norm(), x.entries.norm(), 1e-12 * x.entries.norm());
}

TEST(Synthesize, RejectsShapeMismatch) {
  const auto a = make_orthogonal_dictionary(3, 0);
  EXPECT_NO_THROW(synthesize(a, sample_bg(3, 5, 0.5, 0)));
  EXPECT_EQ(code_of([&] { synthesize(a, sample_bg(4, 5, 0.5, 0)); }), ErrorCode::invalid_shape);
}
