#include "sdct/geometry_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sdct/error.hpp"
#include "sdct/parallel.hpp"
#include "sdct/rng.hpp"

namespace sdct {

std::string_view to_string(Region r) {
  switch (r) {
    case Region::R1: return "r1";
    case Region::R2: return "r2";
    case Region::R3: return "r3";
  }
  return "unknown";
}

RegionSpec RegionSpec::make(Region region, int n, double mu) {
  if (n < 2) fail(ErrorCode::invalid_dimension, "region sampling needs n >= 2");
  const double r1 = mu / (4.0 * std::sqrt(2.0));
  const double r2 = 1.0 / (20.0 * std::sqrt(5.0));
  const double r3 = ProjectedPoint::gamma_radius(n);
  if (!(mu > 0.0 && mu < std::sqrt(2.0 / 125.0)) || !(r1 < r2 && r2 < r3))
    fail(ErrorCode::invalid_region, "region radii are not ordered; need mu < sqrt(2/125)");
  switch (region) {
    case Region::R1: return {region, 0.0, r1};
    case Region::R2: return {region, r1, r2};
    case Region::R3: return {region, r2, r3};
  }
  fail(ErrorCode::invalid_region, "unknown region");
}

std::vector<ProjectedPoint> sample_region(int n, const RegionSpec& spec, int count, std::uint64_t seed) {
  if (n < 2) fail(ErrorCode::invalid_dimension, "region sampling needs n >= 2");
  if (!(spec.inner >= 0.0 && spec.inner < spec.outer))
    fail(ErrorCode::invalid_region, "empty annulus");
  const int d = n - 1;
  const double lo = std::pow(spec.inner, d);
  const double hi = std::pow(spec.outer, d);
  Rng rng(seed);
  std::vector<ProjectedPoint> out;
  out.reserve(static_cast<std::size_t>(std::max(0, count)));
  for (int s = 0; s < count; ++s) {
    Vector dir(d);
    double norm = 0.0;
    while (norm == 0.0) {
      for (int i = 0; i < d; ++i) dir(i) = rng.normal();
      norm = dir.norm();
    }
    // The outer boundary of R3 is the open edge of the chart region.
    const double radius = std::clamp(std::pow(lo + rng.uniform() * (hi - lo), 1.0 / d), spec.inner,
                                     std::nextafter(spec.outer, 0.0));
    out.push_back(ProjectedPoint{dir * (radius / norm), {}});
  }
  return out;
}

CertificateSample region_certificate(Region region, const ProjectedPoint& w, const ValueGradHess& g,
                                     double mu, double theta) {
  CertificateSample out;
  out.norm_w = w.w.norm();
  switch (region) {
    case Region::R1: {
      Eigen::SelfAdjointEigenSolver<Matrix> eig(g.hess, Eigen::EigenvaluesOnly);
      const double lmin = eig.eigenvalues()(0);
      out.certificate = lmin * mu / theta;
      out.pass = lmin > 0.0;
      break;
    }
    case Region::R2: {
      if (out.norm_w == 0.0) fail(ErrorCode::chart_violation, "R2 certificate needs w != 0");
      const double slope = w.w.dot(g.grad) / out.norm_w;
      out.certificate = slope / theta;
      out.pass = slope > 0.0;
      break;
    }
    case Region::R3: {
      if (out.norm_w == 0.0) fail(ErrorCode::chart_violation, "R3 certificate needs w != 0");
      const double curv = w.w.dot(g.hess * w.w) / (out.norm_w * out.norm_w);
      out.certificate = -curv / theta;
      out.pass = curv < 0.0;
      break;
    }
  }
  return out;
}

RegionReport region_certificates(const DataMatrix& x, SmoothingParams mu, double theta,
                                 const RegionSpec& spec, const std::vector<ProjectedPoint>& samples,
                                 int workers) {
  if (!(theta > 0.0)) fail(ErrorCode::invalid_parameter, "theta must be positive");
  const double limit = ProjectedPoint::gamma_radius(static_cast<int>(x.dim()));
  for (const auto& w : samples)
    if (w.w.size() != x.dim() - 1 || !(w.w.norm() < limit))
      fail(ErrorCode::chart_violation, "sample lies outside the chart region");

  RegionReport report;
  report.region = spec.region;
  report.samples = static_cast<int>(samples.size());
  report.details.resize(samples.size());
  parallel_for(samples.size(), workers, [&](std::size_t i) {
    const auto g = g_value_grad_hess(samples[i], x, mu);
    report.details[i] = region_certificate(spec.region, samples[i], g, mu.mu(), theta);
  });

  if (samples.empty()) return report;
  std::vector<double> margins;
  int passed = 0;
  for (const auto& d : report.details) {
    margins.push_back(d.certificate);
    if (d.pass) ++passed;
  }
  std::sort(margins.begin(), margins.end());
  report.pass_fraction = static_cast<double>(passed) / static_cast<double>(samples.size());
  report.margin_min = margins.front();
  const std::size_t mid = margins.size() / 2;
  report.margin_median = margins.size() % 2 ? margins[mid] : 0.5 * (margins[mid - 1] + margins[mid]);
  return report;
}

std::vector<GridRow> landscape_grid(const DataMatrix& x, SmoothingParams mu, int resolution) {
  if (x.dim() != 3) fail(ErrorCode::unsupported_dimension, "landscape grids need n = 3");
  if (resolution < 16) fail(ErrorCode::invalid_parameter, "grid resolution must be at least 16");
  const double radius = std::sqrt(11.0 / 12.0);
  const double step = 2.0 * radius / (resolution - 1);
  const SphereObjective objective(x.entries, mu);
  std::vector<GridRow> rows;
  rows.reserve(static_cast<std::size_t>(resolution) * static_cast<std::size_t>(resolution));
  for (int i = 0; i < resolution; ++i) {
    for (int j = 0; j < resolution; ++j) {
      GridRow row{-radius + i * step, -radius + j * step, std::numeric_limits<double>::quiet_NaN()};
      const double r2 = row.w1 * row.w1 + row.w2 * row.w2;
      if (r2 <= radius * radius * (1.0 + 1e-12)) {
        Vector q(3);
        q << row.w1, row.w2, std::sqrt(std::max(0.0, 1.0 - r2));
        row.g = objective.value(q);
      }
      rows.push_back(row);
    }
  }
  return rows;
}

DataMatrix expectation_data(double theta, int p, std::uint64_t seed) {
  auto coefficients = std::make_shared<const CoefficientMatrix>(sample_bg(3, p, theta, seed));
  auto identity = std::make_shared<const DictionaryMatrix>(
      DictionaryMatrix{Matrix::Identity(3, 3), DictionaryKind::orthogonal, 1.0});
  return synthesize(identity, coefficients);
}

}  // namespace sdct
