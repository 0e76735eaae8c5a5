#include "tdchan/channel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "tdchan/error.hpp"

namespace tdchan {

namespace {

// Relative slack on the parameter range so that grid endpoints computed in
// floating point (e.g. -1/(d-1)) are accepted.
constexpr double kRangeSlack = 1e-12;

}  // namespace

std::vector<double> hermitian_eigenvalues(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error(Errc::ConvergenceFailure, "dense Hermitian eigensolver failed");
  const auto& ev = solver.eigenvalues();
  std::vector<double> out(ev.data(), ev.data() + ev.size());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

void validate_density(const CMatrix& m, const Tolerances& tol) {
  if (m.rows() == 0 || m.rows() != m.cols()) throw Error(Errc::BadDimension, "density matrix must be square and non-empty");
  double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (asym > tol.hermitian) {
    std::ostringstream os;
    os << "max |rho - rho^dagger| = " << asym;
    throw Error(Errc::NotHermitian, os.str());
  }
  Complex tr = m.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > tol.trace) {
    std::ostringstream os;
    os << "trace = " << tr.real() << (tr.imag() < 0 ? "-" : "+") << std::abs(tr.imag()) << "i";
    throw Error(Errc::BadTrace, os.str());
  }
  // symmetrize before diagonalizing so sub-tolerance asymmetry is ignored
  CMatrix h = 0.5 * (m + m.adjoint());
  double smallest = hermitian_eigenvalues(h).back();
  if (smallest < -tol.psd) {
    std::ostringstream os;
    os << "smallest eigenvalue " << smallest;
    throw Error(Errc::NotPSD, os.str());
  }
}

DensityMatrix DensityMatrix::make(CMatrix m, const Tolerances& tol) {
  validate_density(m, tol);
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::pure(const CVector& psi) {
  double norm = psi.norm();
  if (norm == 0.0) throw Error(Errc::BadDimension, "zero state vector");
  CVector v = psi / norm;
  return DensityMatrix(v * v.adjoint());
}

Channel::Channel(int d, double t) : d_(d), t_(t) {
  if (d < 2) throw Error(Errc::BadDimension, "channel dimension must be >= 2, got " + std::to_string(d));
  double lo = lower_bound(d);
  double hi = upper_bound(d);
  if (!std::isfinite(t) || t < lo - kRangeSlack * std::abs(lo) || t > hi + kRangeSlack * std::abs(hi)) {
    std::ostringstream os;
    os << "t = " << t << " outside [" << lo << ", " << hi << "] for d = " << d;
    throw Error(Errc::OutOfRange, os.str());
  }
  double dd = d;
  c1_ = (1.0 - t) * (1.0 - t) / (dd * dd);
  c2_ = 2.0 * t * (1.0 - t) / dd;
  c_ = (dd * dd - 1.0) / (2.0 * dd);
}

CMatrix apply_linear(const Channel& ch, const CMatrix& mu) {
  if (mu.rows() != ch.d() || mu.cols() != ch.d())
    throw Error(Errc::DimensionMismatch, "input is " + std::to_string(mu.rows()) + "x" + std::to_string(mu.cols()) +
                                             ", channel dimension is " + std::to_string(ch.d()));
  const double t = ch.t();
  CMatrix out = t * mu.transpose();
  out.diagonal().array() += (1.0 - t) * mu.trace() / static_cast<double>(ch.d());
  return out;
}

DensityMatrix apply(const Channel& ch, const DensityMatrix& rho) {
  return DensityMatrix::assume_valid(apply_linear(ch, rho.matrix()));
}

CMatrix apply_product(const Channel& ch, const CMatrix& x) {
  const int d = ch.d();
  const int n = d * d;
  if (x.rows() != n || x.cols() != n)
    throw Error(Errc::DimensionMismatch, "product channel expects a " + std::to_string(n) + "x" + std::to_string(n) + " input");
  const double t = ch.t();
  const double s = 1.0 - t;
  const double dd = d;

  // index (a, b) <-> a*d + b, first factor is a
  CMatrix tr1 = CMatrix::Zero(d, d);  // partial trace over the first factor
  CMatrix tr2 = CMatrix::Zero(d, d);  // partial trace over the second factor
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int k = 0; k < d; ++k) {
        tr1(a, b) += x(k * d + a, k * d + b);
        tr2(a, b) += x(a * d + k, b * d + k);
      }

  CMatrix out = (t * t) * x.transpose();
  CMatrix eye = CMatrix::Identity(d, d);
  // (T (x) D)(X) = (tr_2 X)^T (x) I/d,  (D (x) T)(X) = I/d (x) (tr_1 X)^T
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int a2 = 0; a2 < d; ++a2)
        for (int b2 = 0; b2 < d; ++b2) {
          Complex v = tr2(b, a) * eye(a2, b2) + eye(a, b) * tr1(b2, a2);
          out(a * d + a2, b * d + b2) += (t * s / dd) * v;
        }
  out.diagonal().array() += s * s * x.trace() / (dd * dd);
  return out;
}

CMatrix KrausSet::apply(const CMatrix& rho) const {
  CMatrix out = CMatrix::Zero(dim, dim);
  for (const auto& k : operators) out += k * rho * k.adjoint();
  return out;
}

CMatrix KrausSet::completeness() const {
  CMatrix out = CMatrix::Zero(dim, dim);
  for (const auto& k : operators) out += k.adjoint() * k;
  return out;
}

KrausSet kraus_set(int d, KrausSign sign) {
  if (d < 2) throw Error(Errc::BadDimension, "Kraus set needs d >= 2");
  const double pm = sign == KrausSign::Plus ? 1.0 : -1.0;
  // The ordered-pair sum over (i, j) counts each unordered pair twice with
  // the same operator up to sign, hence the 1/(d +- 1) rather than 1/(2(d +- 1)).
  const double pair_scale = 1.0 / std::sqrt(d + pm);
  const double diag_scale = std::sqrt(2.0 / (d + pm));
  KrausSet set{d, sign, {}};
  for (int i = 0; i < d; ++i) {
    if (sign == KrausSign::Plus) {
      CMatrix k = CMatrix::Zero(d, d);
      k(i, i) = diag_scale;
      set.operators.push_back(std::move(k));
    }
    for (int j = i + 1; j < d; ++j) {
      CMatrix k = CMatrix::Zero(d, d);
      k(i, j) = pair_scale;
      k(j, i) = pm * pair_scale;
      set.operators.push_back(std::move(k));
    }
  }
  return set;
}

CMatrix apply_extremal(int d, KrausSign sign, const CMatrix& mu) {
  const double pm = sign == KrausSign::Plus ? 1.0 : -1.0;
  CMatrix out = pm * mu.transpose();
  out.diagonal().array() += mu.trace();
  return out / (d + pm);
}

Decomposition decompose(const Channel& ch) {
  const double d = ch.d();
  return {ch.c() * (ch.t() + 1.0 / (d - 1.0)), -ch.c() * (ch.t() - 1.0 / (d + 1.0))};
}

CMatrix random_density_matrix(int dim, Stream& rng) {
  CMatrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = rng.complex_normal();
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

CMatrix random_unitary(int dim, Stream& rng) {
  CMatrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = rng.complex_normal();
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < dim; ++i) {
    Complex rii = r(i, i);
    double mag = std::abs(rii);
    if (mag > 0.0) q.col(i) *= rii / mag;
  }
  return q;
}

CVector random_pure_state(int dim, Stream& rng) {
  CVector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = rng.complex_normal();
  return v / v.norm();
}

}  // namespace tdchan
