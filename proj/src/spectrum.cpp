#include "tdchan/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "tdchan/error.hpp"

namespace tdchan {

namespace {

constexpr double kPoleMergeGap = 1e-12;
constexpr double kDeflateLambda = 1e-14;
constexpr double kBisectRelTol = 1e-14;
constexpr int kMaxBisect = 200;
constexpr int kMaxExpand = 200;

struct Pole {
  double value;
  double weight;
};

double secular_function(const std::vector<Pole>& poles, double g) {
  double f = 1.0;
  for (const auto& p : poles) f += p.weight / (p.value - g);
  return f;
}

// f is increasing on (lo, hi) with f(lo+) = -inf and f(hi-) = +inf, or the
// caller guarantees f(lo) < 0 < f(hi).
double bisect(const std::vector<Pole>& poles, double lo, double hi, double abs_floor) {
  for (int it = 0; it < kMaxBisect; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) return mid;
    double width = hi - lo;
    if (width <= kBisectRelTol * std::max({std::abs(lo), std::abs(hi), abs_floor})) return mid;
    double f = secular_function(poles, mid);
    if (f == 0.0) return mid;
    if (f < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  std::ostringstream os;
  os << "bisection did not converge on [" << lo << ", " << hi << "]";
  throw Error(Errc::ConvergenceFailure, os.str());
}

}  // namespace

SchmidtVector SchmidtVector::make(std::vector<double> lambda, double sum_tol) {
  if (lambda.empty()) throw Error(Errc::BadDimension, "empty Schmidt vector");
  double sum = 0.0;
  for (double x : lambda) {
    if (!std::isfinite(x) || x < 0.0) {
      std::ostringstream os;
      os << "Schmidt coefficient " << x << " is negative or not finite";
      throw Error(Errc::NotProbability, os.str());
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > sum_tol) {
    std::ostringstream os;
    os.precision(17);
    os << "Schmidt coefficients sum to " << sum;
    throw Error(Errc::NotProbability, os.str());
  }
  return SchmidtVector(std::move(lambda));
}

SchmidtVector SchmidtVector::vertex(int d, int alpha) {
  if (alpha < 0 || alpha >= d) throw Error(Errc::IndexError, "vertex index out of range");
  std::vector<double> v(static_cast<std::size_t>(d), 0.0);
  v[static_cast<std::size_t>(alpha)] = 1.0;
  return SchmidtVector(std::move(v));
}

SchmidtVector SchmidtVector::uniform(int d) {
  return SchmidtVector(std::vector<double>(static_cast<std::size_t>(d), 1.0 / d));
}

SchmidtVector SchmidtVector::random(int d, Stream& rng) {
  std::vector<double> v(static_cast<std::size_t>(d));
  double sum = 0.0;
  for (auto& x : v) {
    x = rng.exponential();
    sum += x;
  }
  for (auto& x : v) x /= sum;
  return SchmidtVector(std::move(v));
}

std::vector<double> Spectrum::offdiag_values() const {
  std::vector<double> out;
  out.reserve(offdiag.size());
  for (const auto& e : offdiag) out.push_back(e.value);
  return out;
}

std::vector<double> Spectrum::all_sorted() const {
  std::vector<double> out = offdiag_values();
  out.insert(out.end(), secular.begin(), secular.end());
  std::stable_sort(out.begin(), out.end(), std::greater<>());
  return out;
}

double offdiag_mass(const Channel& ch) {
  const double d = ch.d();
  const double t = ch.t();
  return (d - 1.0) * (1.0 - t * t) / d;
}

CVector schmidt_state(const SchmidtVector& lam) {
  const int d = lam.d();
  CVector psi = CVector::Zero(d * d);
  for (int a = 0; a < d; ++a) psi(a * d + a) = std::sqrt(lam[a]);
  return psi;
}

DensityMatrix sigma12(const Channel& ch, const SchmidtVector& lam) {
  if (lam.d() != ch.d())
    throw Error(Errc::DimensionMismatch, "Schmidt vector has length " + std::to_string(lam.d()) + ", channel d = " + std::to_string(ch.d()));
  const int d = ch.d();
  const double t = ch.t();
  CMatrix s = CMatrix::Zero(d * d, d * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) s(a * d + b, a * d + b) = ch.c1() + 0.5 * ch.c2() * (lam[a] + lam[b]);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) s(a * d + a, b * d + b) += t * t * std::sqrt(lam[a] * lam[b]);
  return DensityMatrix::assume_valid(std::move(s));
}

std::vector<OffdiagEigenvalue> offdiag_eigenvalues(const Channel& ch, const SchmidtVector& lam) {
  if (lam.d() != ch.d()) throw Error(Errc::DimensionMismatch, "Schmidt vector length differs from channel dimension");
  const int d = ch.d();
  std::vector<OffdiagEigenvalue> out;
  out.reserve(static_cast<std::size_t>(d * (d - 1)));
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      if (a != b) out.push_back({a, b, ch.c1() + 0.5 * ch.c2() * (lam[a] + lam[b])});
  return out;
}

std::vector<double> rank_one_update_eigenvalues(std::span<const double> poles, std::span<const double> weights) {
  if (poles.size() != weights.size()) throw Error(Errc::LengthMismatch, "poles and weights differ in length");
  std::vector<Pole> sorted;
  sorted.reserve(poles.size());
  for (std::size_t i = 0; i < poles.size(); ++i) sorted.push_back({poles[i], weights[i]});
  std::stable_sort(sorted.begin(), sorted.end(), [](const Pole& a, const Pole& b) { return a.value < b.value; });

  std::vector<double> roots;
  roots.reserve(poles.size());
  std::vector<Pole> merged;
  for (const auto& p : sorted) {
    if (!merged.empty() && p.value - merged.back().value < kPoleMergeGap) {
      merged.back().weight += p.weight;
      roots.push_back(merged.back().value);
    } else {
      merged.push_back(p);
    }
  }
  if (merged.empty()) return roots;

  double scale = 0.0;
  double total_weight = 0.0;
  for (const auto& p : merged) {
    scale = std::max(scale, std::abs(p.value));
    total_weight += p.weight;
  }
  const double abs_floor = scale + total_weight;

  for (std::size_t i = 0; i + 1 < merged.size(); ++i)
    roots.push_back(bisect(merged, merged[i].value, merged[i + 1].value, abs_floor));

  // largest root: above the top pole; expand until the function turns positive
  const double top = merged.back().value;
  double step = total_weight > 0.0 ? total_weight : 1.0;
  double hi = top + step;
  int expansions = 0;
  while (secular_function(merged, hi) <= 0.0) {
    if (++expansions > kMaxExpand) throw Error(Errc::ConvergenceFailure, "could not bracket the largest secular root");
    step *= 2.0;
    hi = top + step;
  }
  roots.push_back(bisect(merged, top, hi, abs_floor));

  std::stable_sort(roots.begin(), roots.end(), std::greater<>());
  return roots;
}

std::vector<double> secular_roots(const Channel& ch, const SchmidtVector& lam) {
  if (lam.d() != ch.d()) throw Error(Errc::DimensionMismatch, "Schmidt vector length differs from channel dimension");
  const int d = ch.d();
  const double t = ch.t();
  if (t == 0.0) return std::vector<double>(static_cast<std::size_t>(d), ch.c1());

  std::vector<double> roots;
  std::vector<double> poles;
  std::vector<double> weights;
  for (int a = 0; a < d; ++a) {
    if (lam[a] <= kDeflateLambda) {
      roots.push_back(ch.c1());
    } else {
      poles.push_back(ch.c1() + ch.c2() * lam[a]);
      weights.push_back(t * t * lam[a]);
    }
  }
  auto rest = rank_one_update_eigenvalues(poles, weights);
  roots.insert(roots.end(), rest.begin(), rest.end());
  std::stable_sort(roots.begin(), roots.end(), std::greater<>());
  return roots;
}

Spectrum full_spectrum(const Channel& ch, const SchmidtVector& lam) {
  Spectrum s;
  s.offdiag = offdiag_eigenvalues(ch, lam);
  s.secular = secular_roots(ch, lam);
  s.c1 = ch.c1();
  s.c2 = ch.c2();
  s.offdiag_sum = 0.0;
  for (const auto& e : s.offdiag) s.offdiag_sum += e.value;
  return s;
}

}  // namespace tdchan
