#include <doctest.h>

#include <random>

#include "fockgen/fock.hpp"
#include "test_util.hpp"

using fock::Error;
using fock::ErrorCode;
using fock::State;
using testutil::Complex;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a fock::Error");
  return ErrorCode::ConfigInvalid;
}

}  // namespace

TEST_CASE("normalize scales amplitudes and keeps phases") {
  State s;
  s.amplitudes.resize(3);
  s.amplitudes << Complex(2, 0), Complex(0, 0), Complex(0, 0);
  const State n = fock::normalize(s);
  CHECK(n.amplitudes[0] == Complex(1, 0));
  CHECK(n.amplitudes[1] == Complex(0, 0));

  State t;
  t.amplitudes.resize(2);
  t.amplitudes << Complex(1, 0), Complex(0, 1);
  const State u = fock::normalize(t);
  CHECK(u.amplitudes[0].real() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(u.amplitudes[1].imag() == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("normalize reaches unit norm on random 50-dim vectors") {
  std::mt19937 rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    std::normal_distribution<double> gauss(0.0, 3.0);
    State s;
    s.amplitudes.resize(50);
    for (auto& a : s.amplitudes) a = Complex(gauss(rng), gauss(rng));
    CHECK(std::abs(fock::squared_norm(fock::normalize(s)) - 1.0) <= 1e-14);
  }
}

TEST_CASE("normalize is idempotent bit-for-bit") {
  std::mt19937 rng(11);
  for (int rep = 0; rep < 10; ++rep) {
    const State once = fock::normalize(testutil::random_state(rng, 64, 64));
    const State twice = fock::normalize(once);
    for (Eigen::Index n = 0; n < once.dim(); ++n)
      CHECK(once.amplitudes[n] == twice.amplitudes[n]);
  }
}

TEST_CASE("normalize rejects the null state") {
  State z;
  z.amplitudes.setZero(4);
  CHECK(code_of([&] { fock::normalize(z); }) == ErrorCode::ZeroNorm);
}

TEST_CASE("inner products") {
  const State v0 = State::basis(0, 4);
  const State v1 = State::basis(1, 4);
  CHECK(fock::inner(v0, v0) == Complex(1, 0));
  CHECK(fock::inner(v0, v1) == Complex(0, 0));

  std::mt19937 rng(3);
  for (int rep = 0; rep < 20; ++rep) {
    const State a = testutil::random_state(rng, 16, 16);
    const State b = testutil::random_state(rng, 16, 16);
    const Complex ab = fock::inner(a, b);
    const Complex ba = fock::inner(b, a);
    CHECK(std::abs(ab - std::conj(ba)) <= 1e-15);
  }

  const State wide = State::basis(0, 5);
  CHECK(code_of([&] { fock::inner(v0, wide); }) == ErrorCode::DimMismatch);
}

TEST_CASE("creation operator ladder action") {
  const State v0 = State::basis(0, 6);
  const State v1 = fock::apply_creation(v0);
  CHECK(v1.amplitudes[1] == Complex(1, 0));
  CHECK(v1.leakage == 0.0);

  const State v3 = State::basis(3, 6);
  const State v4 = fock::apply_creation(v3);
  CHECK(v4.amplitudes[4] == Complex(2, 0));  // sqrt(3+1)

  // Projection onto |n+1> equals sqrt(n+1) a_n exactly, every n below top.
  std::mt19937 rng(5);
  const State psi = testutil::random_state(rng, 12, 12);
  const State raised = fock::apply_creation(psi);
  for (Eigen::Index n = 0; n + 1 < psi.dim(); ++n)
    CHECK(raised.amplitudes[n + 1] ==
          std::sqrt(double(n + 1)) * psi.amplitudes[n]);
}

TEST_CASE("creation at the truncation edge records the exact loss") {
  const State top = State::basis(3, 4);
  const State out = fock::apply_creation(top);
  CHECK(out.amplitudes.norm() == 0.0);
  CHECK(out.leakage == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("attenuation operator") {
  std::mt19937 rng(9);
  const State psi = testutil::random_state(rng, 10, 10);
  const State same = fock::apply_attenuation(psi, 1.0);
  for (Eigen::Index n = 0; n < psi.dim(); ++n)
    CHECK(same.amplitudes[n] == psi.amplitudes[n]);

  const State v2 = State::basis(2, 5);
  CHECK(fock::apply_attenuation(v2, 0.5).amplitudes[2] == Complex(0.25, 0));

  const State att = fock::apply_attenuation(psi, 0.7);
  double expected = 0.0;
  for (Eigen::Index n = 0; n < psi.dim(); ++n)
    expected += std::pow(0.7, 2.0 * double(n)) * std::norm(psi.amplitudes[n]);
  CHECK(fock::squared_norm(att) == doctest::Approx(expected).epsilon(1e-14));

  CHECK(code_of([&] { fock::apply_attenuation(psi, 0.0); }) ==
        ErrorCode::BadTransmittance);
  CHECK(code_of([&] { fock::apply_attenuation(psi, 1.2); }) ==
        ErrorCode::BadTransmittance);
  CHECK(code_of([&] { fock::apply_attenuation(psi, -0.3); }) ==
        ErrorCode::BadTransmittance);
}

TEST_CASE("displacement matrix matches the exponentiated generator") {
  const Eigen::Index work = 48, compare = 24;
  for (Complex beta : {Complex(0.7, 0.0), Complex(-0.3, 1.1), Complex(0.0, 2.0),
                       Complex(1.5, -0.8)}) {
    const Eigen::MatrixXcd closed = fock::displacement_matrix(beta, work);
    const Eigen::MatrixXcd oracle =
        testutil::expm(testutil::displacement_generator(beta, work));
    const double err = (closed.topLeftCorner(compare, compare) -
                        oracle.topLeftCorner(compare, compare))
                           .cwiseAbs()
                           .maxCoeff();
    CHECK(err <= 1e-10);
  }
}

TEST_CASE("displacement of zero is the identity") {
  const Eigen::MatrixXcd d = fock::displacement_matrix(Complex(0, 0), 8);
  CHECK((d - Eigen::MatrixXcd::Identity(8, 8)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("displaced vacuum is the coherent expansion") {
  const Complex beta(1.2, -0.4);
  const State disp = fock::displace(State::vacuum(64), beta);
  const auto coherent = fock::coherent_amplitudes(beta, 64);
  CHECK((disp.amplitudes - coherent).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("displacement preserves the norm inside the workspace") {
  // |beta| <= 3 on states supported below n = 21 needs dim ~ 80 before the
  // truncated tail of the displaced top level drops under 1e-9 (at dim 64
  // the |20>, beta = 3 corner still leaks ~5e-5 in norm^2).
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> mag(0.0, 3.0);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
  for (int rep = 0; rep < 10; ++rep) {
    const State psi = testutil::random_state(rng, 80, 21);
    const Complex beta = std::polar(mag(rng), ang(rng));
    const State out = fock::displace(psi, beta);
    CHECK(std::abs(out.amplitudes.norm() - 1.0) <= 1e-9);
  }
  const State corner =
      fock::displace(State::basis(20, 80), Complex(3.0, 0.0));
  CHECK(std::abs(corner.amplitudes.norm() - 1.0) <= 1e-9);
}

TEST_CASE("displacement leakage accounts for every bit of lost norm") {
  std::mt19937 rng(17);
  for (int rep = 0; rep < 8; ++rep) {
    const State psi = testutil::random_state(rng, 48, 12);
    const State out = fock::displace(psi, Complex(0.9, 0.5));
    CHECK(std::abs(fock::squared_norm(psi) -
                   (fock::squared_norm(out) + out.leakage)) <= 1e-12);
  }
}

TEST_CASE("displace then undisplace returns the state, phase-exact") {
  std::mt19937 rng(19);
  const State psi = testutil::random_state(rng, 80, 16);
  const Complex beta(1.1, -0.6);
  const State back = fock::displace(fock::displace(psi, beta), -beta);
  CHECK((back.amplitudes - psi.amplitudes).cwiseAbs().maxCoeff() <= 1e-7);
  CHECK(fock::overlap_fidelity(back, psi) >= 1.0 - 1e-9);
}

TEST_CASE("displacement beyond the workspace fails loudly") {
  const State psi = State::basis(2, 6);
  CHECK(code_of([&] { fock::displace(psi, Complex(3.0, 0.0)); }) ==
        ErrorCode::TruncationOverflow);
}

TEST_CASE("coherent overlap") {
  const State vac = State::vacuum(40);
  for (Complex beta : {Complex(0.5, 0.0), Complex(0.2, -1.0)}) {
    const Complex got = fock::coherent_overlap(vac, beta);
    CHECK(std::abs(got - std::exp(-0.5 * std::norm(beta))) <= 1e-14);
  }

  std::mt19937 rng(23);
  const State psi = testutil::random_state(rng, 64, 12);
  CHECK(std::abs(fock::coherent_overlap(psi, Complex(0, 0)) -
                 psi.amplitudes[0]) == 0.0);

  // Consistency with inner(displace(vacuum, beta), state).
  for (int rep = 0; rep < 6; ++rep) {
    std::uniform_real_distribution<double> mag(0.0, 2.5);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
    const Complex beta = std::polar(mag(rng), ang(rng));
    const Complex direct = fock::coherent_overlap(psi, beta);
    const Complex via_disp = fock::inner(fock::displace(fock::State::vacuum(64), beta), psi);
    CHECK(std::abs(direct - via_disp) <= 1e-10);
  }

  const State small = testutil::random_state(rng, 10, 10);
  CHECK(code_of([&] { fock::coherent_overlap(small, Complex(5.0, 0.0)); }) ==
        ErrorCode::TruncationOverflow);
}

TEST_CASE("embed pads without touching stored amplitudes") {
  std::mt19937 rng(29);
  const State psi = testutil::random_state(rng, 8, 8);
  const State wide = fock::embed(psi, 20);
  for (Eigen::Index n = 0; n < 8; ++n)
    CHECK(wide.amplitudes[n] == psi.amplitudes[n]);
  for (Eigen::Index n = 8; n < 20; ++n)
    CHECK(wide.amplitudes[n] == Complex(0, 0));
  CHECK(code_of([&] { fock::embed(psi, 4); }) == ErrorCode::ConfigInvalid);
}
