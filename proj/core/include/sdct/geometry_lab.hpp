#pragma once

#include <string_view>
#include <vector>

#include "sdct/objective.hpp"

namespace sdct {

enum class Region { R1, R2, R3 };
std::string_view to_string(Region r);

/// Annulus in the w-chart:
///   R1: ||w|| <= mu / (4 sqrt 2)
///   R2: mu / (4 sqrt 2) <= ||w|| <= 1 / (20 sqrt 5)
///   R3: 1 / (20 sqrt 5) <= ||w|| <= sqrt((4n - 1) / (4n))
struct RegionSpec {
  Region region = Region::R1;
  double inner = 0.0;
  double outer = 0.0;

  /// Throws invalid-region unless the three radii are strictly ordered
  /// (mu < sqrt(2 / 125)).
  static RegionSpec make(Region region, int n, double mu);
};

/// Uniform samples in the annulus: direction uniform on S^{n-2}, radius
/// with CDF proportional to r^{n-1}.
std::vector<ProjectedPoint> sample_region(int n, const RegionSpec& spec, int count, std::uint64_t seed);

struct CertificateSample {
  double norm_w = 0.0;
  double certificate = 0.0;  // normalized margin; positive means the sign condition holds
  bool pass = false;
};

/// Sign-condition pass rate per region with normalized margins:
///   R1: lambda_min(hess g) * mu / theta
///   R2: (w^T grad g / ||w||) / theta
///   R3: -(w^T hess g w / ||w||^2) / theta
struct RegionReport {
  Region region = Region::R1;
  int samples = 0;
  double pass_fraction = 0.0;
  double margin_min = 0.0;
  double margin_median = 0.0;
  std::vector<CertificateSample> details;
};

CertificateSample region_certificate(Region region, const ProjectedPoint& w, const ValueGradHess& g,
                                     double mu, double theta);

RegionReport region_certificates(const DataMatrix& x, SmoothingParams mu, double theta,
                                 const RegionSpec& spec, const std::vector<ProjectedPoint>& samples,
                                 int workers = 1);

struct GridRow {
  double w1 = 0.0;
  double w2 = 0.0;
  double g = 0.0;  // NaN outside the disk
};

/// g on a resolution x resolution grid over [-R, R]^2 with R = sqrt(11/12);
/// rows are emitted with w1 varying slowest.
std::vector<GridRow> landscape_grid(const DataMatrix& x, SmoothingParams mu, int resolution);

/// Large-sample stand-in for the expected landscape: A0 = I, n = 3 BG data.
DataMatrix expectation_data(double theta, int p, std::uint64_t seed);

}  // namespace sdct
