#pragma once

// Test-only reference computations. Nothing here calls into the closed-form
// paths it is used to check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "tdchan/channel.hpp"
#include "tdchan/rng.hpp"

namespace tdchan::oracle {

/// s_q by enumerating all q-subsets.
inline double elem_sym_brute(const std::vector<double>& v, int q) {
  const int n = static_cast<int>(v.size());
  if (q < 0 || q > n) return 0.0;
  double total = 0.0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) != q) continue;
    double prod = 1.0;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) prod *= v[static_cast<std::size_t>(i)];
    total += prod;
  }
  return total;
}

/// (Phi x Phi)(X) through the Kraus operators of Phi_+ and Phi_-:
/// Phi = w+ Phi_+ + w- Phi_-, so the product map is a weighted sum of
/// K_a (x) K_b conjugations.
inline CMatrix product_channel_kraus(const Channel& ch, const CMatrix& x) {
  const Decomposition w = decompose(ch);
  const KrausSet plus = kraus_set(ch.d(), KrausSign::Plus);
  const KrausSet minus = kraus_set(ch.d(), KrausSign::Minus);
  const int n = ch.d() * ch.d();
  CMatrix out = CMatrix::Zero(n, n);
  const KrausSet* sets[2] = {&plus, &minus};
  const double weights[2] = {w.w_plus, w.w_minus};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const double wab = weights[a] * weights[b];
      if (wab == 0.0) continue;
      for (const auto& ka : sets[a]->operators)
        for (const auto& kb : sets[b]->operators) {
          CMatrix k = Eigen::kroneckerProduct(ka, kb);
          out += wab * k * x * k.adjoint();
        }
    }
  return out;
}

/// Direct single-copy definition, written out entrywise.
inline CMatrix channel_entrywise(const Channel& ch, const CMatrix& mu) {
  const int d = ch.d();
  Complex tr = mu.trace();
  CMatrix out(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out(i, j) = ch.t() * mu(j, i) + (i == j ? (1.0 - ch.t()) * tr / double(d) : Complex(0.0));
  return out;
}

/// Central difference of f along coordinate i.
inline double central_difference(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x,
                                 std::size_t i, double h = 1e-6) {
  const double x0 = x[i];
  x[i] = x0 + h;
  const double fp = f(x);
  x[i] = x0 - h;
  const double fm = f(x);
  return (fp - fm) / (2.0 * h);
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return a.size() == b.size() ? m : INFINITY;
}

inline double random_t(int d, Stream& rng) { return rng.uniform(Channel::lower_bound(d), Channel::upper_bound(d)); }

inline double random_negative_t(int d, Stream& rng) { return Channel::lower_bound(d) * (1.0 - rng.uniform()); }

}  // namespace tdchan::oracle
