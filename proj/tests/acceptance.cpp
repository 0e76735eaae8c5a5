// Acceptance suite: one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "tdchan/channel.hpp"
#include "tdchan/cli.hpp"
#include "tdchan/entropy.hpp"
#include "tdchan/majorization.hpp"
#include "tdchan/spectrum.hpp"
#include "tdchan/verification.hpp"

using namespace tdchan;

namespace {

// Tolerances and limits, one block per criterion.
constexpr double kSpectrumTol = 1e-9;
constexpr double kSumRuleTol = 1e-10;
constexpr int kSpectrumSamplesPerD = 200;
constexpr double kSpectrumSeconds = 30.0;

constexpr double kGapTol = 1e-6;
constexpr double kVertexDistanceTol = 1e-4;
constexpr double kSpotTol = 1e-6;
constexpr int kAdditivityGridPoints = 9;
constexpr double kAdditivitySeconds = 300.0;

constexpr double kSympolTol = 1e-9;
constexpr int kSympolSamples = 500;
constexpr double kSympolSeconds = 10.0;

constexpr double kSchurTol = 1e-9;
constexpr int kSchurSamples = 10000;
constexpr double kS2Tol = 1e-9;
constexpr int kS2Pairs = 500;
constexpr double kSchurSeconds = 60.0;

constexpr long kMasterSamples = 100000;
constexpr std::uint64_t kMasterSeed = 42;
constexpr double kMasterSeconds = 120.0;

constexpr long kK0Samples = 20000;
constexpr int kChainGridPoints = 101;
constexpr double kChainSeconds = 10.0;

constexpr double kDerivativeTol = 1e-6;
constexpr int kDerivativeSamples = 200;
constexpr double kDerivativeSeconds = 5.0;

constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return INFINITY;
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double random_negative_t(int d, Stream& rng) { return Channel::lower_bound(d) * (1.0 - rng.uniform()); }

std::pair<int, int> distinct_pair(int d, Stream& rng) {
  int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(d)));
  int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(d - 1)));
  if (j >= i) ++j;
  return {i, j};
}

// Samples shared by criteria 1 and 2: t spans the full admissible range
// including both endpoints; a quarter of the lambdas lie on a face.
struct SpectrumSample {
  int d;
  double t;
  std::vector<double> lambda;
};

std::vector<SpectrumSample> spectrum_samples() {
  std::vector<SpectrumSample> out;
  for (int d = 2; d <= 6; ++d) {
    Stream rng(derive_key(kSeed, {1, static_cast<std::uint64_t>(d)}));
    for (int i = 0; i < kSpectrumSamplesPerD; ++i) {
      double t = i == 0   ? Channel::lower_bound(d)
                 : i == 1 ? Channel::upper_bound(d)
                          : rng.uniform(Channel::lower_bound(d), Channel::upper_bound(d));
      std::vector<double> lam = SchmidtVector::random(d, rng).values();
      if (i % 4 == 3) {
        lam[rng.below(static_cast<std::uint64_t>(d))] = 0.0;
        double s = 0.0;
        for (double x : lam) s += x;
        for (double& x : lam) x /= s;
      }
      out.push_back({d, t, lam});
    }
  }
  return out;
}

Outcome criterion1() {
  auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (const auto& s : spectrum_samples()) {
    Channel ch(s.d, s.t);
    auto lam = SchmidtVector::make(s.lambda);
    worst = std::max(worst, max_abs_diff(full_spectrum(ch, lam).all_sorted(), sigma12(ch, lam).eigenvalues()));
  }
  double secs = seconds_since(start);
  return {worst <= kSpectrumTol && secs < kSpectrumSeconds,
          fmt("max |closed - dense| = %.3e (tol %.0e), %.2fs (limit %.0fs)", worst, kSpectrumTol, secs, kSpectrumSeconds)};
}

Outcome criterion2() {
  double worst_off = 0.0, worst_sec = 0.0;
  for (const auto& s : spectrum_samples()) {
    Channel ch(s.d, s.t);
    Spectrum spec = full_spectrum(ch, SchmidtVector::make(s.lambda));
    double off = 0.0, sec = 0.0;
    for (double x : spec.offdiag_values()) off += x;
    for (double x : spec.secular) sec += x;
    const double mass = (s.d - 1) * (1.0 - s.t * s.t) / s.d;
    worst_off = std::max(worst_off, std::abs(off - mass));
    worst_sec = std::max(worst_sec, std::abs(sec - (1.0 - mass)));
  }
  return {worst_off <= kSumRuleTol && worst_sec <= kSumRuleTol,
          fmt("off-diagonal sum err %.3e, secular sum err %.3e (tol %.0e)", worst_off, worst_sec, kSumRuleTol)};
}

Outcome criterion3() {
  auto start = std::chrono::steady_clock::now();
  OptimizerConfig cfg;
  cfg.seed = kSeed;
  double worst_gap = INFINITY, worst_dist = 0.0;
  for (int d = 2; d <= 4; ++d) {
    const double lo = Channel::lower_bound(d), hi = Channel::upper_bound(d);
    for (int i = 0; i < kAdditivityGridPoints; ++i) {
      const double t = lo + (hi - lo) * i / (kAdditivityGridPoints - 1);
      AdditivityResult r = additivity_gap(Channel(d, t), cfg);
      worst_gap = std::min(worst_gap, r.gap);
      worst_dist = std::max(worst_dist, distance_to_nearest_vertex(r.simplex_argmin));
    }
  }
  AdditivityResult spot = additivity_gap(Channel(3, -0.5), cfg);
  const double h_err = std::abs(spot.h - std::log(2.0));
  const double s_err = std::abs(spot.min_simplex - 2.0 * std::log(2.0));
  double secs = seconds_since(start);
  bool pass = worst_gap >= -kGapTol && worst_dist < kVertexDistanceTol && h_err <= kSpotTol && s_err <= kSpotTol &&
              secs < kAdditivitySeconds;
  return {pass, fmt("min gap %.3e (tol -%.0e), max vertex distance %.3e (tol %.0e), spot |h-ln2| %.1e, "
                    "|min-2ln2| %.1e, %.1fs (limit %.0fs)",
                    worst_gap, kGapTol, worst_dist, kVertexDistanceTol, h_err, s_err, secs, kAdditivitySeconds)};
}

Outcome criterion4() {
  auto start = std::chrono::steady_clock::now();
  Stream rng(derive_key(kSeed, {4}));
  double worst = 0.0;
  for (int i = 0; i < kSympolSamples; ++i) {
    const int d = 3 + static_cast<int>(rng.below(3));
    Channel ch(d, random_negative_t(d, rng));
    auto lam = SchmidtVector::random(d, rng);
    for (int k = 0; k < d; ++k) worst = std::max(worst, sympol_defect(ch, lam, k));
  }
  double secs = seconds_since(start);
  return {worst <= kSympolTol && secs < kSympolSeconds,
          fmt("max relative defect %.3e (tol %.0e), %.2fs (limit %.0fs)", worst, kSympolTol, secs, kSympolSeconds)};
}

Outcome criterion5() {
  auto start = std::chrono::steady_clock::now();
  Stream rng(derive_key(kSeed, {5}));
  double worst_schur = -INFINITY;
  for (int i = 0; i < kSchurSamples; ++i) {
    const int d = 3 + static_cast<int>(rng.below(3));
    Channel ch(d, random_negative_t(d, rng));
    NuVector nu = lambda_to_nu(ch, SchmidtVector::random(d, rng));
    auto [a, b] = distinct_pair(d, rng);
    const int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(d)));
    worst_schur = std::max(worst_schur, schur_defect(nu, k, a, b, ch));
  }
  double worst_s2 = -INFINITY;
  for (int i = 0; i < kS2Pairs; ++i) {
    const int d = 3 + static_cast<int>(rng.below(3));
    Channel ch(d, random_negative_t(d, rng));
    auto lam = SchmidtVector::random(d, rng);
    auto [a, b] = distinct_pair(d, rng);
    if (lam[a] < lam[b]) std::swap(a, b);
    auto smoothed = t_transform(lam, a, b, rng.uniform(0.0, 0.5));
    // s2(lam) <= s2(smoothed) since lam majorizes smoothed
    worst_s2 = std::max(worst_s2, entropy_split(ch, lam).s2 - entropy_split(ch, smoothed).s2);
  }
  double secs = seconds_since(start);
  return {worst_schur <= kSchurTol && worst_s2 <= kS2Tol && secs < kSchurSeconds,
          fmt("max schur_defect %.3e (tol %.0e), max s2 increase under majorization %.3e (tol %.0e), %.2fs (limit %.0fs)",
              worst_schur, kSchurTol, worst_s2, kS2Tol, secs, kSchurSeconds)};
}

Outcome criterion6() {
  auto start = std::chrono::steady_clock::now();
  ScanConfig cfg;
  cfg.kind = ScanKind::Main;
  cfg.d_min = 3;
  cfg.d_max = 6;
  cfg.samples = kMasterSamples;
  cfg.seed = kMasterSeed;
  long violations = 0, cells = 0, vertices = 0;
  double worst = INFINITY;
  bool grids_ok = true;
  for (const auto& r : run_scan(cfg)) {
    violations += r.violations;
    if (r.worst_margin) worst = std::min(worst, *r.worst_margin);
    grids_ok = grids_ok && r.t_values.size() == 9 && r.t_values.front() == Channel::lower_bound(r.d) &&
               r.t_values.back() == -1e-6;
    for (const auto& c : r.cells) {
      ++cells;
      vertices += c.vertices;
      grids_ok = grids_ok && c.samples == kMasterSamples && (r.d - 2 > 4 || c.vertices > 0);
    }
  }
  double secs = seconds_since(start);
  return {violations == 0 && grids_ok && secs < kMasterSeconds,
          fmt("%ld violations over %ld cells x %ld samples + %ld vertices, worst margin %.3e, %.1fs (limit %.0fs)",
              violations, cells, kMasterSamples, vertices, worst, secs, kMasterSeconds)};
}

Outcome criterion7() {
  auto start = std::chrono::steady_clock::now();
  ScanConfig k0;
  k0.kind = ScanKind::K0;
  k0.d_min = 3;
  k0.d_max = 6;
  k0.samples = kK0Samples;
  k0.seed = kSeed;
  long k0_viol = 0;
  double k0_worst = INFINITY;
  for (const auto& r : run_scan(k0)) {
    k0_viol += r.violations;
    if (r.worst_margin) k0_worst = std::min(k0_worst, *r.worst_margin);
  }

  long ext_viol = 0;
  double ext_worst = INFINITY, poly_worst = INFINITY;
  for (int d = 3; d <= 10; ++d) {
    const double lo = Channel::lower_bound(d), hi = -1e-6;
    for (int i = 0; i < kChainGridPoints; ++i) {
      const double t = lo + (hi - lo) * i / (kChainGridPoints - 1);
      if (auto e = extreme_point_defect(d, t)) {
        ext_worst = std::min(ext_worst, *e);
        if (*e < -kViolationTol) ++ext_viol;
      }
      poly_worst = std::min(poly_worst, final_polynomial(d, t));
    }
  }
  double secs = seconds_since(start);
  return {k0_viol == 0 && ext_viol == 0 && poly_worst > 0.0 && secs < kChainSeconds,
          fmt("k0 worst %.3e (%ld violations), extreme worst %.3e (%ld violations), final polynomial min %.6f, "
              "%.2fs (limit %.0fs)",
              k0_worst, k0_viol, ext_worst, ext_viol, poly_worst, secs, kChainSeconds)};
}

Outcome criterion8() {
  auto start = std::chrono::steady_clock::now();
  Stream rng(derive_key(kSeed, {8}));
  const double h = 1e-6;
  double worst = 0.0;
  for (int s = 0; s < kDerivativeSamples; ++s) {
    const int d = 3 + static_cast<int>(rng.below(3));
    Channel ch(d, random_negative_t(d, rng));
    NuVector nu = lambda_to_nu(ch, SchmidtVector::random(d, rng));
    const int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(d)));
    const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(d)));
    NuVector up = nu, down = nu;
    up.nu[static_cast<std::size_t>(i)] += h;
    down.nu[static_cast<std::size_t>(i)] -= h;
    const double fd = (phi_k(up, k, ch) - phi_k(down, k, ch)) / (2.0 * h);
    worst = std::max(worst, std::abs(partial_phi_k(nu, k, i, ch) - fd));
  }
  double secs = seconds_since(start);
  return {worst <= kDerivativeTol && secs < kDerivativeSeconds,
          fmt("max |analytic - central difference| = %.3e (tol %.0e), %.2fs (limit %.0fs)", worst, kDerivativeTol, secs,
              kDerivativeSeconds)};
}

Outcome criterion9() {
  auto run = [](const char* threads, int& code) {
    const char* argv[] = {"tdchan", "--threads", threads, "--seed", "42", "verify", "--kind", "all", "--d", "3:5",
                          "--samples", "10000"};
    std::ostringstream out, err;
    code = run_cli(static_cast<int>(std::size(argv)), argv, out, err);
    return out.str();
  };
  int code1 = 0, code8 = 0;
  std::string one = run("1", code1);
  std::string eight = run("8", code8);
  return {!one.empty() && one == eight && code1 == code8,
          fmt("%zu bytes with --threads 1, %zu bytes with --threads 8, %s, exit codes %d/%d", one.size(), eight.size(),
              one == eight ? "identical" : "DIFFERENT", code1, code8)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"spectrum oracle equivalence", criterion1},
      {"sum rules", criterion2},
      {"additivity certificate", criterion3},
      {"symmetric-polynomial identity", criterion4},
      {"Schur criterion and S2 Schur-concavity", criterion5},
      {"master inequality", criterion6},
      {"k=0 chain", criterion7},
      {"derivative consistency", criterion8},
      {"determinism across thread counts", criterion9},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
