#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "tdchan/rng.hpp"

namespace tdchan {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Slack used when validating density matrices given in floating point.
struct Tolerances {
  double hermitian = 1e-12;  // max entrywise |rho - rho^dagger|
  double trace = 1e-12;      // |tr rho - 1|
  double psd = 1e-10;        // smallest admissible eigenvalue is -psd
};

inline constexpr Tolerances kDefaultTolerances{};

/// Eigenvalues of a Hermitian matrix, sorted descending.
std::vector<double> hermitian_eigenvalues(const CMatrix& m);

/// Hermitian, unit-trace, positive semidefinite matrix. Instances built
/// through make() have been checked against the tolerances; assume_valid()
/// is for values produced by trace-preserving positive maps.
class DensityMatrix {
 public:
  static DensityMatrix make(CMatrix m, const Tolerances& tol = kDefaultTolerances);
  static DensityMatrix assume_valid(CMatrix m) { return DensityMatrix(std::move(m)); }
  static DensityMatrix pure(const CVector& psi);

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const noexcept { return m_; }
  std::vector<double> eigenvalues() const { return hermitian_eigenvalues(m_); }

 private:
  explicit DensityMatrix(CMatrix m) : m_(std::move(m)) {}
  CMatrix m_;
};

/// Throws NotHermitian / BadTrace / NotPSD / BadDimension on failure.
void validate_density(const CMatrix& m, const Tolerances& tol = kDefaultTolerances);

/// Transpose depolarizing channel rho -> t rho^T + (1 - t) tr(rho) I/d.
class Channel {
 public:
  /// Throws BadDimension for d < 2 and OutOfRange when t is outside
  /// [-1/(d-1), 1/(d+1)].
  Channel(int d, double t);

  int d() const noexcept { return d_; }
  double t() const noexcept { return t_; }
  double c1() const noexcept { return c1_; }  // (1-t)^2 / d^2
  double c2() const noexcept { return c2_; }  // 2t(1-t) / d
  double c() const noexcept { return c_; }    // (d^2-1) / 2d

  static double lower_bound(int d) { return -1.0 / (d - 1); }
  static double upper_bound(int d) { return 1.0 / (d + 1); }

 private:
  int d_;
  double t_;
  double c1_;
  double c2_;
  double c_;
};

inline Channel new_channel(int d, double t) { return Channel(d, t); }

/// Image of an arbitrary d x d matrix under the channel's linear extension.
CMatrix apply_linear(const Channel& ch, const CMatrix& mu);

DensityMatrix apply(const Channel& ch, const DensityMatrix& rho);

/// (Phi x Phi)(X) for X acting on C^d (x) C^d, evaluated through the
/// partial-transpose / partial-trace expansion of the product map.
CMatrix apply_product(const Channel& ch, const CMatrix& x);

enum class KrausSign { Plus, Minus };

struct KrausSet {
  int dim = 0;
  KrausSign sign = KrausSign::Plus;
  std::vector<CMatrix> operators;

  CMatrix apply(const CMatrix& rho) const;
  /// sum_k K_k^dagger K_k
  CMatrix completeness() const;
};

/// Kraus operators of Phi_+ (symmetric) or Phi_- (antisymmetric):
/// (|i><j| +- |j><i|) / sqrt(2(d +- 1)), one operator per unordered pair.
KrausSet kraus_set(int d, KrausSign sign);

/// Phi_+-(mu) = (I tr mu +- mu^T) / (d +- 1).
CMatrix apply_extremal(int d, KrausSign sign, const CMatrix& mu);

struct Decomposition {
  double w_plus;
  double w_minus;
};

/// Weights with Phi = w_plus Phi_+ + w_minus Phi_-.
Decomposition decompose(const Channel& ch);

/// G G^dagger / tr(G G^dagger) with G a complex Gaussian matrix.
CMatrix random_density_matrix(int dim, Stream& rng);

/// Haar unitary: QR of a complex Gaussian matrix with the phases of R's
/// diagonal moved into Q.
CMatrix random_unitary(int dim, Stream& rng);

/// Normalized complex Gaussian vector.
CVector random_pure_state(int dim, Stream& rng);

}  // namespace tdchan
