#include "tdchan/majorization.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "tdchan/error.hpp"

namespace tdchan {

namespace {

void check_k(int k, int d) {
  if (k < 0 || k > d - 1) throw Error(Errc::BadK, "k = " + std::to_string(k) + " outside [0, " + std::to_string(d - 1) + "]");
}

void check_nonzero_t(const Channel& ch) {
  if (ch.t() == 0.0) throw Error(Errc::ZeroT, "Phi_k is undefined at t = 0 (c2 vanishes)");
}

void check_index(int i, int n) {
  if (i < 0 || i >= n) throw Error(Errc::IndexError, "index " + std::to_string(i) + " outside [0, " + std::to_string(n) + ")");
}

}  // namespace

NuVector lambda_to_nu(const Channel& ch, const SchmidtVector& lam) {
  if (lam.d() != ch.d()) throw Error(Errc::DimensionMismatch, "Schmidt vector length differs from channel dimension");
  if (ch.t() > 0.0) throw Error(Errc::OutOfRange, "nu variables require t <= 0");
  NuVector out;
  out.ratio = 2.0 * ch.t() * ch.d() / (1.0 - ch.t());
  out.nu.reserve(static_cast<std::size_t>(lam.d()));
  for (double x : lam.values()) out.nu.push_back(1.0 + out.ratio * x);
  return out;
}

std::vector<double> gamma_roots(const Channel& ch, const SchmidtVector& lam) {
  auto g = secular_roots(ch, lam);
  for (auto& x : g) x /= ch.c1();
  return g;
}

bool majorizes(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(Errc::LengthMismatch, "majorization needs equal lengths");
  std::vector<double> xs(x.begin(), x.end());
  std::vector<double> ys(y.begin(), y.end());
  std::sort(xs.begin(), xs.end(), std::greater<>());
  std::sort(ys.begin(), ys.end(), std::greater<>());
  double sx = 0.0;
  double sy = 0.0;
  bool dominates = true;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    if (sx < sy - 1e-12) dominates = false;
  }
  if (std::abs(sx - sy) > 1e-10) {
    std::ostringstream os;
    os.precision(17);
    os << "sums differ: " << sx << " vs " << sy;
    throw Error(Errc::SumMismatch, os.str());
  }
  return dominates;
}

SchmidtVector t_transform(const SchmidtVector& lam, int i, int j, double eps) {
  check_index(i, lam.d());
  check_index(j, lam.d());
  if (!(eps >= 0.0 && eps <= 0.5)) throw Error(Errc::OutOfRange, "T-transform needs 0 <= eps <= 1/2");
  if (eps == 0.0) return lam;
  if (lam[i] < lam[j]) throw Error(Errc::OutOfRange, "T-transform needs lambda_i >= lambda_j");
  std::vector<double> v = lam.values();
  const double delta = eps * (lam[i] - lam[j]);
  v[static_cast<std::size_t>(i)] -= delta;
  v[static_cast<std::size_t>(j)] += delta;
  return SchmidtVector::make(std::move(v), 1e-10);
}

std::vector<double> elem_sym_all(std::span<const double> values) {
  std::vector<double> e(values.size() + 1, 0.0);
  e[0] = 1.0;
  std::size_t filled = 0;
  for (double v : values) {
    ++filled;
    for (std::size_t q = filled; q >= 1; --q) e[q] += v * e[q - 1];
  }
  return e;
}

double elem_sym(std::span<const double> values, int q) {
  if (q < 0 || q > static_cast<int>(values.size())) return 0.0;
  if (q == 0) return 1.0;
  return elem_sym_all(values)[static_cast<std::size_t>(q)];
}

double elem_sym_omit(std::span<const double> values, int q, std::initializer_list<int> omit) {
  std::vector<double> kept;
  kept.reserve(values.size());
  for (std::size_t l = 0; l < values.size(); ++l)
    if (std::find(omit.begin(), omit.end(), static_cast<int>(l)) == omit.end()) kept.push_back(values[l]);
  return elem_sym(kept, q);
}

double phi_k(const NuVector& nu, int k, const Channel& ch) {
  const int d = nu.n();
  check_k(k, d);
  check_nonzero_t(ch);
  const double r = ch.t() * ch.t() / ch.c2();
  double value = elem_sym(nu.nu, d - k);
  for (int l = 0; l < d; ++l) value += elem_sym_omit(nu.nu, d - 1 - k, {l}) * (nu.nu[static_cast<std::size_t>(l)] - 1.0) * r;
  return value;
}

double sympol_defect(const Channel& ch, const SchmidtVector& lam, int k) {
  check_k(k, ch.d());
  check_nonzero_t(ch);
  const double lhs = elem_sym(gamma_roots(ch, lam), ch.d() - k);
  const double rhs = phi_k(lambda_to_nu(ch, lam), k, ch);
  return std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
}

double partial_phi_k(const NuVector& nu, int k, int i, const Channel& ch) {
  const int d = nu.n();
  check_k(k, d);
  check_index(i, d);
  check_nonzero_t(ch);
  const double r = ch.t() * ch.t() / ch.c2();
  double value = elem_sym_omit(nu.nu, d - 1 - k, {i}) * (1.0 + r);
  for (int l = 0; l < d; ++l) {
    if (l == i) continue;
    value += elem_sym_omit(nu.nu, d - 2 - k, {i, l}) * (nu.nu[static_cast<std::size_t>(l)] - 1.0) * r;
  }
  return value;
}

double schur_defect(const NuVector& nu, int k, int i, int j, const Channel& ch) {
  check_index(i, nu.n());
  check_index(j, nu.n());
  if (i == j) throw Error(Errc::IndexError, "Schur criterion needs distinct indices");
  const double diff = nu.nu[static_cast<std::size_t>(i)] - nu.nu[static_cast<std::size_t>(j)];
  if (diff == 0.0) return 0.0;
  return diff * (partial_phi_k(nu, k, i, ch) - partial_phi_k(nu, k, j, ch));
}

}  // namespace tdchan
