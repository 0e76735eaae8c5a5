#include <doctest.h>

#include "oracles.hpp"
#include "tdchan/channel.hpp"
#include "tdchan/error.hpp"

using namespace tdchan;

namespace {

Errc error_code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected tdchan::Error");
  return Errc::ConfigError;
}

CMatrix basis_projector(int d, int i) {
  CMatrix m = CMatrix::Zero(d, d);
  m(i, i) = 1.0;
  return m;
}

}  // namespace

TEST_CASE("new_channel validates the parameter range") {
  Channel lower(3, -0.5);
  CHECK(lower.t() == -0.5);

  CHECK(error_code_of([] { Channel(3, 0.26); }) == Errc::OutOfRange);
  CHECK(error_code_of([] { Channel(3, -0.51); }) == Errc::OutOfRange);
  CHECK(error_code_of([] { Channel(1, 0.0); }) == Errc::BadDimension);

  Channel qubit(2, -1.0);
  CHECK(qubit.c1() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(qubit.c2() == doctest::Approx(-2.0).epsilon(1e-15));

  Channel upper(3, 0.25);
  CHECK(upper.c1() == doctest::Approx(0.75 * 0.75 / 9.0));
  CHECK(upper.c2() == doctest::Approx(2.0 * 0.25 * 0.75 / 3.0));
}

TEST_CASE("apply on the documented inputs") {
  SUBCASE("t = 0 is the completely depolarizing channel") {
    Stream rng(11);
    for (int d = 2; d <= 5; ++d) {
      Channel ch(d, 0.0);
      DensityMatrix rho = DensityMatrix::make(random_density_matrix(d, rng));
      CMatrix out = apply(ch, rho).matrix();
      CHECK((out - CMatrix::Identity(d, d) / double(d)).cwiseAbs().maxCoeff() < 1e-15);
    }
  }
  SUBCASE("qubit endpoint flips |0> to |1>") {
    Channel ch(2, -1.0);
    CMatrix out = apply(ch, DensityMatrix::make(basis_projector(2, 0))).matrix();
    CHECK((out - basis_projector(2, 1)).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("Werner-Holevo endpoint on a basis state") {
    Channel ch(3, -0.5);
    auto ev = apply(ch, DensityMatrix::make(basis_projector(3, 0))).eigenvalues();
    CHECK(ev[0] == doctest::Approx(0.5));
    CHECK(ev[1] == doctest::Approx(0.5));
    CHECK(std::abs(ev[2]) < 1e-15);
  }
  SUBCASE("pure real inputs give the two-level output spectrum") {
    Stream rng(12);
    for (int d = 2; d <= 5; ++d) {
      double t = oracle::random_t(d, rng);
      Channel ch(d, t);
      CVector psi(d);
      for (int i = 0; i < d; ++i) psi(i) = rng.normal();
      auto ev = apply(ch, DensityMatrix::pure(psi)).eigenvalues();
      std::vector<double> expected(static_cast<std::size_t>(d), (1.0 - t) / d);
      expected[0] = t + (1.0 - t) / d;
      std::sort(expected.begin(), expected.end(), std::greater<>());
      CHECK(oracle::max_abs_diff(ev, expected) < 1e-12);
    }
  }
  CHECK(error_code_of([] { apply(Channel(3, 0.1), DensityMatrix::make(CMatrix::Identity(2, 2) / 2.0)); }) ==
        Errc::DimensionMismatch);
}

TEST_CASE("density matrix validation") {
  CMatrix m = CMatrix::Identity(2, 2) / 2.0;
  CHECK_NOTHROW(DensityMatrix::make(m));

  CMatrix skew = m;
  skew(0, 1) = Complex(0.0, 1e-6);
  CHECK(error_code_of([&] { DensityMatrix::make(skew); }) == Errc::NotHermitian);

  CHECK(error_code_of([&] { DensityMatrix::make(CMatrix::Identity(2, 2)); }) == Errc::BadTrace);

  CMatrix neg = CMatrix::Zero(2, 2);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  CHECK(error_code_of([&] { DensityMatrix::make(neg); }) == Errc::NotPSD);

  // the tolerance is configurable
  CHECK_NOTHROW(DensityMatrix::make(skew, Tolerances{1e-5, 1e-12, 1e-10}));
}

TEST_CASE("Kraus sets of the extremal channels") {
  for (int d = 2; d <= 5; ++d) {
    for (KrausSign sign : {KrausSign::Plus, KrausSign::Minus}) {
      KrausSet set = kraus_set(d, sign);
      CHECK((set.completeness() - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-12);

      Stream rng(derive_key(5, {static_cast<std::uint64_t>(d), sign == KrausSign::Plus ? 1u : 2u}));
      for (int rep = 0; rep < 10; ++rep) {
        CMatrix rho = random_density_matrix(d, rng);
        CHECK((set.apply(rho) - apply_extremal(d, sign, rho)).cwiseAbs().maxCoeff() < 1e-12);
      }
    }
  }

  SUBCASE("Phi_+ fixes the maximally mixed state for d = 3") {
    KrausSet plus = kraus_set(3, KrausSign::Plus);
    CMatrix mixed = CMatrix::Identity(3, 3) / 3.0;
    CHECK((plus.apply(mixed) - mixed).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("Phi_- sends a real pure state to the complementary projector") {
    KrausSet minus = kraus_set(3, KrausSign::Minus);
    CVector psi(3);
    psi << 0.6, 0.0, 0.8;
    CMatrix proj = psi * psi.adjoint();
    CMatrix expected = (CMatrix::Identity(3, 3) - proj) / 2.0;
    CHECK((minus.apply(proj) - expected).cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK(error_code_of([] { kraus_set(1, KrausSign::Minus); }) == Errc::BadDimension);
}

TEST_CASE("decomposition into the extremal channels") {
  auto w = decompose(Channel(3, -0.5));
  CHECK(std::abs(w.w_plus) < 1e-15);
  CHECK(w.w_minus == doctest::Approx(1.0));

  w = decompose(Channel(3, 0.25));
  CHECK(std::abs(w.w_minus) < 1e-15);

  w = decompose(Channel(3, 0.0));
  CHECK(w.w_plus == doctest::Approx(2.0 / 3.0));
  CHECK(w.w_minus == doctest::Approx(1.0 / 3.0));

  Stream rng(21);
  for (int d = 2; d <= 4; ++d) {
    for (int rep = 0; rep < 100; ++rep) {
      Channel ch(d, oracle::random_t(d, rng));
      auto dw = decompose(ch);
      CHECK(dw.w_plus + dw.w_minus == doctest::Approx(1.0).epsilon(1e-14));
      CMatrix rho = random_density_matrix(d, rng);
      CMatrix via_kraus = dw.w_plus * kraus_set(d, KrausSign::Plus).apply(rho) + dw.w_minus * kraus_set(d, KrausSign::Minus).apply(rho);
      CHECK((via_kraus - apply_linear(ch, rho)).cwiseAbs().maxCoeff() < 1e-10);
      CHECK((apply_linear(ch, rho) - oracle::channel_entrywise(ch, rho)).cwiseAbs().maxCoeff() < 1e-15);
    }
  }
}

TEST_CASE("covariance, positivity and trace preservation") {
  Stream rng(31);
  for (int d = 2; d <= 5; ++d) {
    for (int rep = 0; rep < 40; ++rep) {
      // sweep the whole admissible range including both endpoints
      double t = rep == 0 ? Channel::lower_bound(d) : rep == 1 ? Channel::upper_bound(d) : oracle::random_t(d, rng);
      Channel ch(d, t);
      CMatrix rho = random_density_matrix(d, rng);
      CMatrix u = random_unitary(d, rng);
      CHECK((u.adjoint() * u - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-12);

      CMatrix lhs = apply_linear(ch, u * rho * u.adjoint());
      CMatrix ubar = u.conjugate();
      CMatrix rhs = ubar * apply_linear(ch, rho) * ubar.adjoint();
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);

      DensityMatrix out = apply(ch, DensityMatrix::make(rho));
      CHECK(out.eigenvalues().back() >= -1e-10);
      CHECK(std::abs(out.matrix().trace() - Complex(1.0)) <= 1e-12);
    }
  }
}

TEST_CASE("product channel expansion agrees with the Kraus route") {
  Stream rng(41);
  for (int d = 2; d <= 4; ++d) {
    for (int rep = 0; rep < 5; ++rep) {
      Channel ch(d, oracle::random_t(d, rng));
      CMatrix x = random_density_matrix(d * d, rng);
      CHECK((apply_product(ch, x) - oracle::product_channel_kraus(ch, x)).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}
