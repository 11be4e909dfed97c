#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "sdct/geometry_lab.hpp"
#include "test_common.hpp"

using namespace sdct;
using testutil::code_of;

TEST(RegionSpec, Radii) {
  const double mu = 0.01;
  const auto r1 = RegionSpec::make(Region::R1, 5, mu);
  const auto r2 = RegionSpec::make(Region::R2, 5, mu);
  const auto r3 = RegionSpec::make(Region::R3, 5, mu);
  EXPECT_EQ(r1.inner, 0.0);
  EXPECT_DOUBLE_EQ(r1.outer, mu / (4.0 * std::sqrt(2.0)));
  EXPECT_EQ(r2.inner, r1.outer);
  EXPECT_DOUBLE_EQ(r2.outer, 1.0 / (20.0 * std::sqrt(5.0)));
  EXPECT_EQ(r3.inner, r2.outer);
  EXPECT_DOUBLE_EQ(r3.outer, std::sqrt(19.0 / 20.0));
  EXPECT_EQ(to_string(Region::R2), "r2");
}

TEST(RegionSpec, RejectsLargeMu) {
  EXPECT_NO_THROW(RegionSpec::make(Region::R2, 4, 0.12));
  EXPECT_EQ(code_of([] { RegionSpec::make(Region::R2, 4, std::sqrt(2.0 / 125.0)); }), ErrorCode::invalid_region);
  EXPECT_EQ(code_of([] { RegionSpec::make(Region::R1, 4, 0.5); }), ErrorCode::invalid_region);
}

TEST(SampleRegion, InsideAnnulus) {
  for (Region r : {Region::R1, Region::R2, Region::R3}) {
    const auto spec = RegionSpec::make(r, 6, 0.01);
    for (const auto& w : sample_region(6, spec, 2000, 3)) {
      ASSERT_EQ(w.w.size(), 5);
      EXPECT_GE(w.w.norm(), spec.inner * (1 - 1e-12));
      EXPECT_LE(w.w.norm(), spec.outer * (1 + 1e-12));
    }
  }
}

TEST(SampleRegion, RadiusFollowsVolumeLaw) {
  for (int n : {3, 5, 8}) {
    const auto spec = RegionSpec::make(Region::R3, n, 0.01);
    const auto samples = sample_region(n, spec, 10000, 17);
    std::vector<double> radii;
    for (const auto& w : samples) radii.push_back(w.w.norm());
    const int d = n - 1;
    const double lo = std::pow(spec.inner, d), hi = std::pow(spec.outer, d);
    const double ks = oracles::ks_statistic(radii, [&](double r) { return (std::pow(r, d) - lo) / (hi - lo); });
    EXPECT_LE(ks, 0.05) << "n = " << n;
  }
}

TEST(SampleRegion, DirectionsAreIsotropic) {
  const auto samples = sample_region(4, RegionSpec::make(Region::R1, 4, 0.01), 20000, 2);
  Vector mean = Vector::Zero(3);
  for (const auto& w : samples) mean += w.w.normalized();
  mean /= 20000.0;
  EXPECT_LE(mean.norm(), 0.03);
}

TEST(SampleRegion, Deterministic) {
  const auto spec = RegionSpec::make(Region::R2, 5, 0.01);
  const auto a = sample_region(5, spec, 50, 9);
  const auto b = sample_region(5, spec, 50, 9);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].w, b[i].w);
}

TEST(SampleRegion, RejectsEmptyAnnulus) {
  RegionSpec spec{Region::R2, 0.3, 0.2};
  EXPECT_EQ(code_of([&] { sample_region(4, spec, 10, 1); }), ErrorCode::invalid_region);
}

namespace {

DataMatrix identity_data(int n, double theta, int p, std::uint64_t seed) {
  return synthesize(DictionaryMatrix{Matrix::Identity(n, n), DictionaryKind::orthogonal, 1.0},
                    sample_bg(n, p, theta, seed));
}

}  // namespace

TEST(RegionCertificates, GradientRegionPasses) {
  const int n = 5;
  const double mu = 0.01, theta = 0.2;
  const auto x = identity_data(n, theta, 100000, 7);
  const auto spec = RegionSpec::make(Region::R2, n, mu);
  const auto report = region_certificates(x, SmoothingParams(mu), theta, spec, sample_region(n, spec, 1000, 8));
  EXPECT_EQ(report.samples, 1000);
  EXPECT_GE(report.pass_fraction, 0.99);
  EXPECT_LE(report.margin_min, report.margin_median);
}

TEST(RegionCertificates, PositiveCurvatureAtOrigin) {
  const int n = 5;
  const double mu = 0.01, theta = 0.2;
  const auto x = identity_data(n, theta, 100000, 11);
  const auto g = g_value_grad_hess(ProjectedPoint{Vector::Zero(n - 1), {}}, x, SmoothingParams(mu));
  Eigen::SelfAdjointEigenSolver<Matrix> eig(g.hess);
  EXPECT_GT(eig.eigenvalues()(0), 0.0);
  // Same order as theta (1 - theta) / mu * E[tanh^2(v / mu)] with tanh^2 ~ 1.
  EXPECT_GT(eig.eigenvalues()(0), 0.25 * theta * (1 - theta) / mu);
}

TEST(RegionCertificates, TinySampleReportWellFormed) {
  const int n = 4;
  const double mu = 0.01, theta = 0.01;
  const auto x = identity_data(n, theta, 100, 2);
  for (Region r : {Region::R1, Region::R2, Region::R3}) {
    const auto spec = RegionSpec::make(r, n, mu);
    const auto report = region_certificates(x, SmoothingParams(mu), theta, spec, sample_region(n, spec, 100, 3));
    EXPECT_GE(report.pass_fraction, 0.0);
    EXPECT_LE(report.pass_fraction, 1.0);
    EXPECT_EQ(report.details.size(), 100u);
  }
}

TEST(RegionCertificates, ChainRuleAgreement) {
  const int n = 5;
  const double mu = 0.02, theta = 0.2;
  const auto x = identity_data(n, theta, 5000, 4);
  const SphereObjective f(x.entries, SmoothingParams(mu));
  for (Region r : {Region::R1, Region::R2, Region::R3}) {
    const auto spec = RegionSpec::make(r, n, mu);
    for (const auto& w : sample_region(n, spec, 100, 5)) {
      const auto g = g_value_grad_hess(w, x, SmoothingParams(mu));
      const auto d = f.value_grad_hess(lift(w).vector());
      const auto chain = oracles::chart_chain_rule(w.w, d.grad, d.hess);
      const ValueGradHess via_f{d.value, chain.grad, chain.hess};
      const auto a = region_certificate(r, w, g, mu, theta);
      const auto b = region_certificate(r, w, via_f, mu, theta);
      EXPECT_NEAR(a.certificate, b.certificate, 1e-10 * std::max(1.0, std::abs(b.certificate)));
      EXPECT_EQ(a.pass, b.pass);
    }
  }
}

TEST(RegionCertificates, ColumnPermutationInvariant) {
  const int n = 4;
  const double mu = 0.02, theta = 0.3;
  const auto x = identity_data(n, theta, 3000, 6);
  std::vector<int> perm(3000);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(1);
  std::shuffle(perm.begin(), perm.end(), rng);
  Matrix shuffled(n, 3000);
  for (int k = 0; k < 3000; ++k) shuffled.col(k) = x.entries.col(perm[k]);
  const auto spec = RegionSpec::make(Region::R3, n, mu);
  const auto samples = sample_region(n, spec, 50, 2);
  const auto a = region_certificates(x, SmoothingParams(mu), theta, spec, samples);
  const auto b = region_certificates(DataMatrix(shuffled), SmoothingParams(mu), theta, spec, samples);
  for (std::size_t i = 0; i < samples.size(); ++i)
    EXPECT_NEAR(a.details[i].certificate, b.details[i].certificate, 1e-10 * std::abs(a.details[i].certificate));
  EXPECT_EQ(a.pass_fraction, b.pass_fraction);
}

TEST(RegionCertificates, WorkerCountIrrelevant) {
  const int n = 4;
  const auto x = identity_data(n, 0.3, 2000, 6);
  const auto spec = RegionSpec::make(Region::R2, n, 0.02);
  const auto samples = sample_region(n, spec, 64, 2);
  const auto a = region_certificates(x, SmoothingParams(0.02), 0.3, spec, samples, 1);
  const auto b = region_certificates(x, SmoothingParams(0.02), 0.3, spec, samples, 4);
  for (std::size_t i = 0; i < samples.size(); ++i) EXPECT_EQ(a.details[i].certificate, b.details[i].certificate);
}

TEST(RegionCertificates, RejectsSamplesOutsideChart) {
  const auto x = identity_data(3, 0.3, 100, 1);
  const auto spec = RegionSpec::make(Region::R3, 3, 0.01);
  std::vector<ProjectedPoint> bad{ProjectedPoint{Vector{{0.96, 0.0}}, {}}};
  EXPECT_EQ(code_of([&] { region_certificates(x, SmoothingParams(0.01), 0.3, spec, bad); }),
            ErrorCode::chart_violation);
}

TEST(LandscapeGrid, RowCountAndDisk) {
  const auto x = expectation_data(0.3, 2000, 1);
  const int res = 20;
  const auto rows = landscape_grid(x, SmoothingParams(0.05), res);
  ASSERT_EQ(rows.size(), static_cast<std::size_t>(res * res));
  const double radius = std::sqrt(11.0 / 12.0);
  EXPECT_DOUBLE_EQ(rows.front().w1, -radius);
  EXPECT_DOUBLE_EQ(rows.back().w1, radius);
  EXPECT_EQ(rows[0].w1, rows[1].w1);  // w1 varies slowest
  for (const auto& r : rows) {
    const bool inside = r.w1 * r.w1 + r.w2 * r.w2 <= radius * radius * (1 + 1e-12);
    EXPECT_EQ(std::isnan(r.g), !inside);
  }
}

TEST(LandscapeGrid, MinimumNearOrigin) {
  const double mu = 0.01;
  const auto x = expectation_data(0.2, 100000, 3);
  const int res = 41;
  const auto rows = landscape_grid(x, SmoothingParams(mu), res);
  const GridRow* best = nullptr;
  for (const auto& r : rows)
    if (!std::isnan(r.g) && (!best || r.g < best->g)) best = &r;
  ASSERT_NE(best, nullptr);
  const double cell = 2.0 * std::sqrt(11.0 / 12.0) / (res - 1);
  EXPECT_LE(std::hypot(best->w1, best->w2), 2.0 * cell);
}

TEST(LandscapeGrid, CentralSymmetry) {
  const double mu = 0.02;
  const int p = 100000;
  const auto x = expectation_data(0.3, p, 5);
  const int res = 17;
  const auto rows = landscape_grid(x, SmoothingParams(mu), res);
  for (int i : {2, 5, 7}) {
    for (int j : {4, 11}) {
      const auto& a = rows[static_cast<std::size_t>(i * res + j)];
      const auto& b = rows[static_cast<std::size_t>((res - 1 - i) * res + (res - 1 - j))];
      if (std::isnan(a.g)) continue;
      ASSERT_FALSE(std::isnan(b.g));
      // Standard error of the paired difference of sample means.
      const double qn = std::sqrt(std::max(0.0, 1.0 - a.w1 * a.w1 - a.w2 * a.w2));
      const Vector qa{{a.w1, a.w2, qn}}, qb{{-a.w1, -a.w2, qn}};
      double m = 0.0, s = 0.0;
      for (Eigen::Index k = 0; k < p; ++k) {
        const double diff = surrogate(qa.dot(x.entries.col(k)), SmoothingParams(mu)).h -
                            surrogate(qb.dot(x.entries.col(k)), SmoothingParams(mu)).h;
        m += diff;
        s += diff * diff;
      }
      m /= p;
      const double se = std::sqrt(std::max(0.0, s / p - m * m) / p);
      EXPECT_LE(std::abs(a.g - b.g), 3.0 * se + 1e-14) << i << "," << j;
    }
  }
}

TEST(LandscapeGrid, RejectsBadArguments) {
  const auto x3 = expectation_data(0.3, 100, 1);
  EXPECT_EQ(code_of([&] { landscape_grid(x3, SmoothingParams(0.05), 15); }), ErrorCode::invalid_parameter);
  const DataMatrix x4(Matrix::Identity(4, 10));
  EXPECT_EQ(code_of([&] { landscape_grid(x4, SmoothingParams(0.05), 20); }), ErrorCode::unsupported_dimension);
}
