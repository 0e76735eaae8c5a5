#pragma once

#include <initializer_list>
#include <span>
#include <vector>

#include "tdchan/channel.hpp"
#include "tdchan/spectrum.hpp"

namespace tdchan {

/// nu_a = 1 + (c2/c1) lambda_a, ratio = c2/c1 = 2td/(1-t).
struct NuVector {
  std::vector<double> nu;
  double ratio = 0.0;

  int n() const noexcept { return static_cast<int>(nu.size()); }
};

/// Requires t <= 0 (OutOfRange otherwise), so that ratio lies in [-2, 0].
NuVector lambda_to_nu(const Channel& ch, const SchmidtVector& lam);

/// Secular roots scaled by 1/c1.
std::vector<double> gamma_roots(const Channel& ch, const SchmidtVector& lam);

/// True iff x majorizes y: descending partial sums of x dominate those of y.
/// Throws LengthMismatch, or SumMismatch when the totals differ by > 1e-10.
bool majorizes(std::span<const double> x, std::span<const double> y);

/// Moves the fraction eps of (lambda_i - lambda_j) from coordinate i to j.
/// Indices are zero-based. Requires 0 <= eps <= 1/2 and, for eps > 0,
/// lambda_i >= lambda_j.
SchmidtVector t_transform(const SchmidtVector& lam, int i, int j, double eps);

/// All elementary symmetric polynomials s_0, ..., s_n of the values, from
/// the coefficients of prod (x + v_l).
std::vector<double> elem_sym_all(std::span<const double> values);

/// s_q(values); 1 for q = 0 and 0 for q < 0 or q > size.
double elem_sym(std::span<const double> values, int q);

/// s_q of the values with the listed positions left out.
double elem_sym_omit(std::span<const double> values, int q, std::initializer_list<int> omit);

/// Phi_k(nu) = s_{d-k}(nu) + sum_l s_{d-1-k}(nu without l) (nu_l - 1) t^2 / c2.
/// Throws BadK unless 0 <= k <= d-1 and ZeroT for t = 0.
double phi_k(const NuVector& nu, int k, const Channel& ch);

/// |s_{d-k}(gamma) - Phi_k(nu)| / max(1, |s_{d-k}(gamma)|), with gamma the
/// scaled secular roots and nu = lambda_to_nu(lam).
double sympol_defect(const Channel& ch, const SchmidtVector& lam, int k);

/// d Phi_k / d nu_i
///   = s_{d-1-k}(nu without i) (1 + t^2/c2)
///   + sum_{l != i} s_{d-2-k}(nu without i, l) (nu_l - 1) t^2/c2.
double partial_phi_k(const NuVector& nu, int k, int i, const Channel& ch);

/// (nu_i - nu_j)(dPhi_k/dnu_i - dPhi_k/dnu_j); <= 0 characterizes
/// Schur-concavity.
double schur_defect(const NuVector& nu, int k, int i, int j, const Channel& ch);

}  // namespace tdchan
