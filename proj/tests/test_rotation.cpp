#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "ocoo/model.hpp"
#include "ocoo/rotation.hpp"
#include "oracles.hpp"

using namespace ocoo;

namespace {

Eigen::Matrix3d exp_series(const Eigen::Matrix3d& m) {
  Eigen::Matrix3d sum = Eigen::Matrix3d::Identity();
  Eigen::Matrix3d term = Eigen::Matrix3d::Identity();
  for (int k = 1; k <= 40; ++k) {
    term = (term * m / k).eval();
    sum += term;
  }
  return sum;
}

Kappa random_kappa(std::mt19937_64& rng, double scale = 1.5) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  return Kappa(dist(rng), dist(rng), dist(rng));
}

}  // namespace

TEST_CASE("kappa generator is antisymmetric") {
  const Kappa k(0.3, -0.7, 1.1);
  const Eigen::Matrix3d g = k.generator();
  CHECK((g + g.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(g(0, 1) == 0.3);
  CHECK(g(0, 2) == -0.7);
  CHECK(g(1, 2) == 1.1);
}

TEST_CASE("exponentiate at kappa = 0 gives the identity") {
  const OrbitalBasis b = exponentiate(Kappa());
  CHECK((b.coeffs - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("a pi/2 rotation in the 1-2 plane swaps the orbitals") {
  const OrbitalBasis b = exponentiate(Kappa(M_PI / 2.0, 0.0, 0.0));
  CHECK(std::abs(std::abs(b.coeffs(1, 0)) - 1.0) < 1e-12);
  CHECK(std::abs(std::abs(b.coeffs(0, 1)) - 1.0) < 1e-12);
  CHECK(std::abs(b.coeffs(2, 2) - 1.0) < 1e-12);
}

TEST_CASE("closed-form exponential matches the series and is orthogonal") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const Kappa k = random_kappa(rng);
    const OrbitalBasis b = exponentiate(k);
    CHECK((b.coeffs - exp_series(-k.generator())).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((b.coeffs.transpose() * b.coeffs - Eigen::Matrix3d::Identity())
              .cwiseAbs()
              .maxCoeff() < 1e-12);
    CHECK(b.coeffs.determinant() == Catch::Approx(1.0).margin(1e-12));
    // exp(-K) exp(+K) = I
    Kappa neg(-k.params);
    CHECK((b.coeffs * exponentiate(neg).coeffs - Eigen::Matrix3d::Identity())
              .cwiseAbs()
              .maxCoeff() < 1e-12);
  }
}

TEST_CASE("exponentiate rejects non-finite parameters") {
  CHECK_THROWS_AS(exponentiate(Kappa(std::nan(""), 0.0, 0.0)), std::invalid_argument);
}

TEST_CASE("embedding the identity-basis determinant gives a pure Fock state") {
  const Sector sec = enumerate_sector(3, 4, 0);
  OrbitalBasis identity;
  const SectorVector v =
      embed_determinant(identity, {{0, 0}, {0, 1}, {1, 0}, {1, 1}}, sec);
  const int idx = sec.index_of(0b001111);  // |1 1b 2 2b>
  REQUIRE(idx >= 0);
  CHECK(v[idx] == 1.0);
  CHECK(v.norm() == 1.0);
}

TEST_CASE("embedded determinants are normalized and mutually orthogonal") {
  const Sector sec = enumerate_sector(3, 4, 0);
  std::mt19937_64 rng(11);
  for (int i = 0; i < 20; ++i) {
    const OrbitalBasis b = exponentiate(random_kappa(rng));
    const Eigen::MatrixXd d = cas_determinant_matrix(b, sec);
    CHECK((d.transpose() * d - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() <
          1e-12);
  }
}

TEST_CASE("embedding rejects invalid occupations") {
  const Sector sec = enumerate_sector(3, 4, 0);
  OrbitalBasis b;
  CHECK_THROWS_AS(embed_determinant(b, {{0, 0}, {0, 0}, {1, 0}, {1, 1}}, sec),
                  std::invalid_argument);  // repeated spin-orbital
  CHECK_THROWS_AS(embed_determinant(b, {{0, 0}, {0, 1}, {1, 0}, {2, 0}}, sec),
                  std::invalid_argument);  // Sz mismatch
  CHECK_THROWS_AS(embed_determinant(b, {{0, 0}, {0, 1}}, sec),
                  std::invalid_argument);  // N mismatch
  CHECK_THROWS_AS(embed_determinant(b, {{3, 0}, {0, 1}, {1, 0}, {1, 1}}, sec),
                  std::invalid_argument);  // orbital out of range
}

TEST_CASE("embedding composes under basis products") {
  const Sector sec = enumerate_sector(3, 4, 0);
  std::mt19937_64 rng(13);
  for (int i = 0; i < 10; ++i) {
    const OrbitalBasis b1 = exponentiate(random_kappa(rng));
    const OrbitalBasis b2 = exponentiate(random_kappa(rng));
    OrbitalBasis prod;
    prod.coeffs = b1.coeffs * b2.coeffs;
    for (const auto& det : cas_occupations()) {
      // a determinant of the product basis b1*b2, overlapped against the b1
      // determinants, must reproduce the determinant-overlap formula in which
      // the relative rotation is exactly b2
      const SectorVector direct = embed_determinant(prod, det, sec);
      const Eigen::MatrixXd cols1 = cas_determinant_matrix(b1, sec);
      for (int a = 0; a < 4; ++a) {
        const double lhs = std::abs(cross_overlap(cols1.col(a), direct));
        const double rhs = oracle::determinant_overlap(
            b1.coeffs, cas_occupations()[a], prod.coeffs, det);
        CHECK(lhs == Catch::Approx(rhs).margin(1e-10));
      }
    }
  }
}

TEST_CASE("cross overlaps agree with the determinant formula oracle") {
  const Sector sec = enumerate_sector(3, 4, 0);
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> pick(0, 3);
  for (int i = 0; i < 100; ++i) {
    const OrbitalBasis b0 = exponentiate(random_kappa(rng));
    const OrbitalBasis b1 = exponentiate(random_kappa(rng));
    const auto& occ0 = cas_occupations()[pick(rng)];
    const auto& occ1 = cas_occupations()[pick(rng)];
    const double lhs = std::abs(cross_overlap(embed_determinant(b0, occ0, sec),
                                              embed_determinant(b1, occ1, sec)));
    const double rhs =
        oracle::determinant_overlap(b0.coeffs, occ0, b1.coeffs, occ1);
    CHECK(lhs == Catch::Approx(rhs).margin(1e-10));
  }
}

TEST_CASE("cross overlap rejects dimension mismatches") {
  CHECK_THROWS_AS(cross_overlap(Eigen::VectorXd::Zero(9), Eigen::VectorXd::Zero(3)),
                  std::invalid_argument);
}

TEST_CASE("projection of a basis determinant onto its own CAS space") {
  const Sector sec = enumerate_sector(3, 4, 0);
  const OrbitalBasis b = exponentiate(Kappa(0.4, -0.2, 0.9));
  const SectorVector v = embed_determinant(b, cas_occupations()[0], sec);
  const CasProjection p = cas_projection(v, b, sec);
  CHECK(p.coeffs[0] == Catch::Approx(1.0).margin(1e-12));
  CHECK(std::abs(p.coeffs[1]) < 1e-12);
  CHECK(p.weight == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("projection weight never exceeds one") {
  const Sector sec = enumerate_sector(3, 4, 0);
  std::mt19937_64 rng(23);
  std::normal_distribution<double> gauss;
  for (int i = 0; i < 20; ++i) {
    SectorVector v(9);
    for (int j = 0; j < 9; ++j) v[j] = gauss(rng);
    v.normalize();
    const CasProjection p = cas_projection(v, exponentiate(random_kappa(rng)), sec);
    CHECK(p.weight <= 1.0 + 1e-12);
  }
}

TEST_CASE("projection weight is invariant under active-active rotations") {
  // rotating the two active columns among themselves leaves the CAS span, and
  // therefore the projection weight, unchanged
  const Sector sec = enumerate_sector(3, 4, 0);
  std::mt19937_64 rng(29);
  std::normal_distribution<double> gauss;
  SectorVector v(9);
  for (int j = 0; j < 9; ++j) v[j] = gauss(rng);
  v.normalize();
  const OrbitalBasis base = exponentiate(Kappa(0.3, 0.5, -0.4));
  const double w0 = cas_projection(v, base, sec).weight;
  for (int i = 1; i <= 10; ++i) {
    const double th = 0.31 * i;
    Eigen::Matrix3d g = Eigen::Matrix3d::Identity();
    g(1, 1) = std::cos(th);
    g(2, 2) = std::cos(th);
    g(1, 2) = -std::sin(th);
    g(2, 1) = std::sin(th);
    OrbitalBasis rot;
    rot.coeffs = base.coeffs * g;
    CHECK(cas_projection(v, rot, sec).weight == Catch::Approx(w0).margin(1e-10));
  }
}
