#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tdchan/channel.hpp"
#include "tdchan/spectrum.hpp"

namespace tdchan {

enum class LogBase { E, Two };

/// Converts an entropy in nats to the requested base.
double in_base(double nats, LogBase base) noexcept;

/// Probabilities at or below this value contribute 0 (0 log 0 := 0).
inline constexpr double kEntropyClamp = 1e-15;

/// -sum p ln p over the entries. Throws NotPSD when an entry is below
/// -negative_tol.
double shannon_entropy(std::span<const double> p, double negative_tol = 1e-10);

double von_neumann_entropy(const DensityMatrix& rho, double negative_tol = 1e-10);

/// Entropy of sigma12 split along the two eigenvalue families.
/// s1 = -sum gamma ln gamma over the off-diagonal family, s2 = -sum g ln g
/// over the secular roots, c = sum gamma.
struct EntropyReport {
  double s_total = 0.0;
  double s1 = 0.0;
  double s2 = 0.0;
  double c = 0.0;
};

EntropyReport entropy_split(const Channel& ch, const SchmidtVector& lam);

double simplex_output_entropy(const Channel& ch, const SchmidtVector& lam);

struct OptimizerConfig {
  int restarts = 50;
  double tol = 1e-10;
  int n_random = 200;
  std::uint64_t seed = 0;
  int threads = 0;  // 0: resolve from TDCHAN_THREADS / hardware
};

/// Output entropy on pure inputs: spectrum {t + (1-t)/d, (1-t)/d x (d-1)}.
double closed_form_min_entropy(const Channel& ch);

struct MinEntropyResult {
  double h = 0.0;            // best value found by the optimizer
  double closed_form = 0.0;  // certificate
  CVector argmin;            // unit vector
};

/// Multi-start Nelder-Mead over unit vectors, alternating real and complex
/// Gaussian starting points.
MinEntropyResult min_output_entropy(const Channel& ch, const OptimizerConfig& cfg);

struct SimplexMinimum {
  double value = 0.0;
  std::vector<double> argmin;
};

/// Multi-start minimization of simplex_output_entropy over the simplex.
/// Seeds: the d vertices, the barycenter, then cfg.restarts Dirichlet draws.
/// A later seed replaces the incumbent only if it improves by more than
/// cfg.tol, so ties resolve to the earliest seed.
SimplexMinimum minimize_simplex_entropy(const Channel& ch, const OptimizerConfig& cfg);

struct AdditivityResult {
  double h = 0.0;
  double min_simplex = 0.0;
  double min_random = 0.0;
  double gap = 0.0;  // min(min_simplex, min_random) - 2h
  std::vector<double> simplex_argmin;
};

AdditivityResult additivity_gap(const Channel& ch, const OptimizerConfig& cfg);

/// l1 distance from a probability vector to the nearest simplex vertex.
double distance_to_nearest_vertex(std::span<const double> lam);

}  // namespace tdchan
