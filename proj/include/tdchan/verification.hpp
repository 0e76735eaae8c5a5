#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tdchan/majorization.hpp"
#include "tdchan/rng.hpp"

namespace tdchan {

/// Margins below this are counted as violations; anything in
/// [-kViolationTol, 0) is floating-point noise on an exact inequality.
inline constexpr double kViolationTol = 1e-9;

/// 2(1 + t(d-1)) / (td); nonpositive for t in [-1/(d-1), 0).
double master_coefficient(int d, double t);

/// sum_l (1 - nu_l) s_{n-k-1}(nu without l) - master_coefficient(d, t) s_{n-k}(nu)
/// with n = d - 2. Throws BadLength, BadK (k outside [0, n-1]) and BadT
/// (t outside [-1/(d-1), 0)).
double main_inequality_lhs(std::span<const double> nu, int k, int d, double t);

/// First sum of main_inequality_lhs alone; k in [0, n].
double first_term_value(std::span<const double> nu, int k);

enum class Stratum { Any, NonNegative, OneNegative };

/// Uniform-with-rejection sample of {nu : lo <= nu_l <= 1, sum nu >= n + ratio}
/// with lo = 1 + ratio. Stratum::Any picks NonNegative or OneNegative with
/// probability 1/2 each (always NonNegative when lo >= 0). In the
/// OneNegative stratum one uniformly chosen coordinate is drawn from [lo, 0)
/// and the rest from [0, 1]; entries within 1e-12 of zero are rejected.
/// After 10^4 rejections the sample falls back to a jittered vertex.
/// Requesting OneNegative when lo >= 0 throws BadSignPattern.
NuVector sample_polytope_ratio(int n, double ratio, Stream& rng, Stratum stratum = Stratum::Any);

/// sample_polytope_ratio with ratio = 2td/(1-t). Requires n >= 1, t < 0.
NuVector sample_polytope(int n, int d, double t, Stream& rng, Stratum stratum = Stratum::Any);

/// Vertices of the polytope {lo <= nu_l <= 1, sum nu >= n + ratio}: all
/// box corners meeting the sum constraint, plus the points with n-1
/// coordinates at a bound and the last fixed by sum = n + ratio.
std::vector<std::vector<double>> polytope_vertices(int n, double ratio);

/// s_{n-k}(nu); requires 1 <= k <= n.
double second_term_value(std::span<const double> nu, int k);

/// 2(1 + t(d-1))/(td) - sum_l (1 - nu_l)/nu_l. Requires exactly one negative
/// entry (BadSignPattern), no |nu_l| <= 1e-12 (NearZeroNu) and
/// t in [-1/(d-1), 0) (BadT).
double k0_defect(std::span<const double> nu, int d, double t);

/// RHS - LHS of 1/nu1 + 1/nu2 - 2 <= 2(1 + t(d-1))/(td) at the extreme point
/// nu1 = 2(1 + t(d-1))/(1-t) - 1, nu2 = 1. Empty when nu1 >= 0.
std::optional<double> extreme_point_defect(int d, double t);

/// Same inequality anywhere on the edge nu1 + nu2 = 2 + c2/c1 with
/// nu1 in [nu1_extreme, 0); used to check that the extreme point is worst.
double edge_defect(int d, double t, double nu1);

/// 3(td)^2 + 3(1-t)(td) + (1-t)^2.
double final_polynomial(int d, double t);

/// With nu1 < 0 fixed, the largest sum_{l>=2} (1 - nu_l)/nu_l over the
/// extreme points of the slice {sum_{l>=2} nu_l >= n + ratio - nu1,
/// 0 <= nu_l <= 1}.
double slice_extreme_max(int n, double ratio, double nu1);

enum class ScanKind { Main, K0, SecondTerm, FirstTerm, Extreme, FinalPoly, Sympol, Schur, S2Schur };

std::string_view to_string(ScanKind kind) noexcept;
std::optional<ScanKind> parse_scan_kind(std::string_view name) noexcept;
/// Kinds run by "verify --kind all".
std::vector<ScanKind> all_verify_kinds();

struct ScanCell {
  ScanKind kind = ScanKind::Main;
  int d = 0;
  std::optional<double> t;
  std::optional<int> k;
  long samples = 0;   // random samples evaluated
  long vertices = 0;  // exactly enumerated points evaluated
  long violations = 0;
  std::optional<double> worst_margin;  // empty when nothing was evaluated
  std::vector<double> worst_input;     // echo of the point with the worst margin
  std::uint64_t seed = 0;
};

struct ScanReport {
  ScanKind kind = ScanKind::Main;
  int d = 0;
  std::vector<double> t_values;
  std::vector<int> k_values;
  long samples = 0;
  long violations = 0;
  std::optional<double> worst_margin;
  std::uint64_t seed = 0;
  std::vector<ScanCell> cells;
};

struct ScanConfig {
  ScanKind kind = ScanKind::Main;
  int d_min = 3;
  int d_max = 3;
  /// Explicit t values; points outside a kind's admissible range for a given
  /// d are dropped. Empty: the default grid (9 points, 101 for extreme and
  /// final-poly) from -1/(d-1) to -1e-6.
  std::vector<double> t_grid;
  long samples = 100000;
  std::uint64_t seed = 0;
  int threads = 0;
};

/// Default t grid for a kind and dimension.
std::vector<double> default_t_grid(ScanKind kind, int d);

/// One report per d. Deterministic for a fixed seed regardless of the
/// thread count. Throws ConfigError for invalid ranges (e.g. d < 3 for the
/// kinds that need n = d - 2 >= 1).
std::vector<ScanReport> run_scan(const ScanConfig& cfg);

}  // namespace tdchan
