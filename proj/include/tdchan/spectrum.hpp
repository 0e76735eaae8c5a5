#pragma once

#include <span>
#include <vector>

#include "tdchan/channel.hpp"

namespace tdchan {

/// Schmidt coefficients: a probability vector on the simplex.
class SchmidtVector {
 public:
  /// Throws NotProbability if an entry is negative or the sum differs from
  /// one by more than sum_tol.
  static SchmidtVector make(std::vector<double> lambda, double sum_tol = 1e-12);
  static SchmidtVector vertex(int d, int alpha);
  static SchmidtVector uniform(int d);
  /// Uniform draw on the simplex (Dirichlet(1, ..., 1)).
  static SchmidtVector random(int d, Stream& rng);

  int d() const noexcept { return static_cast<int>(lambda_.size()); }
  const std::vector<double>& values() const noexcept { return lambda_; }
  double operator[](int i) const { return lambda_[static_cast<std::size_t>(i)]; }

 private:
  explicit SchmidtVector(std::vector<double> v) : lambda_(std::move(v)) {}
  std::vector<double> lambda_;
};

struct OffdiagEigenvalue {
  int alpha;
  int beta;
  double value;
};

struct Spectrum {
  std::vector<OffdiagEigenvalue> offdiag;  // d(d-1) entries, alpha != beta
  std::vector<double> secular;             // d roots, descending
  double c1 = 0.0;
  double c2 = 0.0;
  double offdiag_sum = 0.0;

  std::vector<double> offdiag_values() const;
  /// Both families merged and sorted descending.
  std::vector<double> all_sorted() const;
};

/// Sum of the off-diagonal family, (d-1)(1-t^2)/d.
double offdiag_mass(const Channel& ch);

/// Two-copy output (Phi x Phi)(|psi><psi|) for the Schmidt state
/// sum_a sqrt(lambda_a) |aa>, assembled from its closed form:
/// diagonal weights mu_ab on |ab> plus t^2 sqrt(lambda_a lambda_b) |aa><bb|.
DensityMatrix sigma12(const Channel& ch, const SchmidtVector& lam);

/// Schmidt state sum_a sqrt(lambda_a) |a>|a> as a d^2 vector.
CVector schmidt_state(const SchmidtVector& lam);

std::vector<OffdiagEigenvalue> offdiag_eigenvalues(const Channel& ch, const SchmidtVector& lam);

/// Eigenvalues of diag(poles) + z z^T where weights[i] = z_i^2 > 0.
/// Roots are the solutions of 1 + sum_i w_i / (p_i - g) = 0 plus the
/// repeated-pole roots; returned descending.
///
/// Poles closer than 1e-12 are merged (weights added) and each merge leaves
/// one root at the pole. Every other root is bracketed between consecutive
/// distinct poles, the largest one above the top pole by geometric bracket
/// expansion, and found by bisection.
std::vector<double> rank_one_update_eigenvalues(std::span<const double> poles, std::span<const double> weights);

/// The d eigenvalues g_a of the |aa> block, descending. Coefficients with
/// lambda_a <= 1e-14 are deflated to the exact root c1.
std::vector<double> secular_roots(const Channel& ch, const SchmidtVector& lam);

Spectrum full_spectrum(const Channel& ch, const SchmidtVector& lam);

}  // namespace tdchan
