// Copyright 2026 The cvmaxcut Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "cvmaxcut/gates.hpp"
#include "cvmaxcut/gaussian.hpp"
#include "oracles.hpp"

using namespace cvmaxcut;

namespace {

double max_abs(const MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

/// <psi| op |psi> for a single-mode state held in a Fock vector.
cplx expect(const VectorXcd& psi, const MatrixXcd& op) { return psi.dot(op * psi); }

}  // namespace

TEST(Annihilation, Definition) {
  MatrixXcd two(2, 2);
  two << 0, 1, 0, 0;
  EXPECT_EQ(annihilation_matrix(2), two);
  const MatrixXcd a4 = annihilation_matrix(4);
  EXPECT_EQ(a4(0, 1), cplx(1.0));
  EXPECT_EQ(a4(1, 2), cplx(std::sqrt(2.0)));
  EXPECT_EQ(a4(2, 3), cplx(std::sqrt(3.0)));
  EXPECT_EQ(a4.cwiseAbs().sum(), 1.0 + std::sqrt(2.0) + std::sqrt(3.0));
  const MatrixXcd a5 = annihilation_matrix(5);
  const MatrixXcd n = a5.adjoint() * a5;
  for (int k = 0; k < 5; ++k) EXPECT_NEAR(n(k, k).real(), double(k), 1e-15);
  EXPECT_NEAR((n - MatrixXcd(n.diagonal().asDiagonal())).norm(), 0.0, 1e-15);
}

TEST(Squeeze, ZeroIsIdentity) { EXPECT_EQ(squeeze_fock(0.0, 0.3, 6), MatrixXcd::Identity(6, 6)); }

TEST(Squeeze, VacuumColumnMatchesClosedForm) {
  for (double r : {0.1, 0.3, 0.5})
    for (double phi : {0.0, 0.9, -2.4}) {
      const VectorXcd col = squeeze_fock(r, phi, 30).col(0);
      EXPECT_LT(max_abs(col - oracle::squeezed_vacuum(r, phi, 30)), 1e-8) << "r=" << r << " phi=" << phi;
    }
}

TEST(Squeeze, PositionVarianceShrinks) {
  const double r = 0.5;
  const VectorXcd psi = squeeze_fock(r, 0.0, 25).col(0);
  const MatrixXcd a = annihilation_matrix(25);
  const MatrixXcd x = a + a.adjoint();
  const double var = expect(psi, x * x).real() - std::pow(expect(psi, x).real(), 2);
  EXPECT_NEAR(var, std::exp(-2.0 * r), 1e-4);
}

TEST(Squeeze, GuardRange) {
  EXPECT_THROW(squeeze_fock(5.1, 0.0, 5), DomainError);
  EXPECT_NO_THROW(squeeze_fock(-0.5, 0.0, 5));
}

TEST(Displacement, ZeroIsIdentity) { EXPECT_EQ(displacement_fock(cplx(0.0), 6), MatrixXcd::Identity(6, 6)); }

TEST(Displacement, VacuumColumnIsCoherentState) {
  for (cplx alpha : {cplx(0.5, 0.2), cplx(-0.3, 0.4), cplx(0.0, -0.5), cplx(0.45, 0.0)}) {
    const VectorXcd col = displacement_fock(alpha, 30).col(0);
    EXPECT_LT(max_abs(col - oracle::coherent(alpha, 30)), 1e-8) << alpha;
  }
}

TEST(Displacement, MeanPositionFollowsRealPart) {
  const MatrixXcd a = annihilation_matrix(30);
  const MatrixXcd x = a + a.adjoint(), p = cplx(0.0, -1.0) * (a - a.adjoint());
  for (cplx alpha : {cplx(0.3, 0.1), cplx(-0.4, 0.25)}) {
    const VectorXcd psi = displacement_fock(alpha, 30).col(0);
    EXPECT_NEAR(expect(psi, x).real(), 2.0 * alpha.real(), 1e-10);
    EXPECT_NEAR(expect(psi, p).real(), 2.0 * alpha.imag(), 1e-10);
  }
  EXPECT_THROW(displacement_fock(cplx(5.5, 0.0), 4), DomainError);
}

TEST(Rotation, DiagonalPhases) {
  EXPECT_EQ(rotation_fock(0.0, 4), MatrixXcd::Identity(4, 4));
  const MatrixXcd m = rotation_fock(kPi, 3);
  EXPECT_NEAR(std::abs(m(0, 0) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(m(1, 1) + 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(m(2, 2) - 1.0), 0.0, 1e-15);
}

TEST(Rotation, RotatesQuadratures) {
  // R^dag x R = x cos(phi) - p sin(phi) with R = e^{i phi n}
  const int c = 12;
  const double phi = 0.7;
  const MatrixXcd a = annihilation_matrix(c);
  const MatrixXcd x = a + a.adjoint(), p = cplx(0.0, -1.0) * (a - a.adjoint());
  const MatrixXcd r = rotation_fock(phi, c);
  const MatrixXcd lhs = r.adjoint() * x * r, rhs = x * std::cos(phi) - p * std::sin(phi);
  EXPECT_LT(max_abs((lhs - rhs).topLeftCorner(c - 2, c - 2)), 1e-8);
}

TEST(Kerr, DiagonalPhases) {
  EXPECT_EQ(kerr_fock(0.0, 4), MatrixXcd::Identity(4, 4));
  const MatrixXcd m = kerr_fock(kPi / 2, 4);
  const cplx expected[] = {1.0, cplx(0, 1), 1.0, cplx(0, 1)};
  for (int k = 0; k < 4; ++k) EXPECT_LT(std::abs(m(k, k) - expected[k]), 1e-15);
}

TEST(Kerr, DiagonalGatesHaveUnitOrZeroEntries) {
  for (const MatrixXcd& m : {kerr_fock(0.37, 7), rotation_fock(-1.3, 7)}) {
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j) {
        if (i == j)
          EXPECT_NEAR(std::abs(m(i, j)), 1.0, 1e-15);
        else
          EXPECT_EQ(m(i, j), cplx(0.0));
      }
  }
}

TEST(CubicPhase, ZeroIsIdentity) { EXPECT_EQ(cubic_phase_fock(0.0, 5), MatrixXcd::Identity(5, 5)); }

TEST(CubicPhase, AgreesWithLargerCutoffConstruction) {
  const MatrixXcd small = cubic_phase_fock(0.1, 25);
  const MatrixXcd big = cubic_phase_fock(0.1, 40).topLeftCorner(25, 25);
  EXPECT_LT(max_abs((small - big).topLeftCorner(22, 22)), 1e-6);
}

TEST(CubicPhase, PreservesPositionMean) {
  const int c = 25;
  const MatrixXcd big = cubic_phase_fock(0.1, 40);
  const MatrixXcd a = annihilation_matrix(40);
  const MatrixXcd x = a + a.adjoint(), p = cplx(0.0, -1.0) * (a - a.adjoint());
  const VectorXcd psi = displacement_fock(cplx(0.2, 0.1), 40).col(0);  // near vacuum
  const VectorXcd out = cubic_phase_fock(0.1, c) * psi.head(c);
  EXPECT_NEAR(expect(out, MatrixXcd(x.topLeftCorner(c, c))).real(), expect(psi, x).real(), 1e-3);
  // and p picks up hbar gamma x^2 (on the larger space)
  const VectorXcd big_out = big * psi;
  const double shift = expect(big_out, p).real() - expect(psi, p).real();
  EXPECT_NEAR(shift, 2.0 * 0.1 * expect(psi, x * x).real(), 1e-3);
}

TEST(CubicPhase, GuardRange) { EXPECT_THROW(cubic_phase_fock(2.5, 5), DomainError); }

TEST(Beamsplitter, ZeroIsIdentity) { EXPECT_EQ(beamsplitter_fock(0.0, 0.0, 4), MatrixXcd::Identity(16, 16)); }

TEST(Beamsplitter, SinglePhotonBlockMatchesTwoByTwoExponential) {
  for (double theta : {0.3, 1.1, -0.8})
    for (double phi : {0.0, 0.6, 2.9}) {
      const int c = 5;
      const MatrixXcd m = beamsplitter_fock(theta, phi, c);
      // basis (|1,0>, |0,1>); generator theta (e^{i phi} a^dag b - e^{-i phi} a b^dag)
      MatrixXcd gen(2, 2);
      gen << 0.0, theta * std::polar(1.0, phi), -theta * std::polar(1.0, -phi), 0.0;
      const MatrixXcd u = oracle::expm(gen);
      const int idx[] = {1 * c + 0, 0 * c + 1};
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) EXPECT_LT(std::abs(m(idx[i], idx[j]) - u(i, j)), 1e-10);
    }
}

TEST(Beamsplitter, ConservesTotalPhotonNumberExactly) {
  const int c = 6;
  const MatrixXcd m = beamsplitter_fock(0.9, 1.3, c);
  for (int i = 0; i < c * c; ++i)
    for (int j = 0; j < c * c; ++j)
      if (i / c + i % c != j / c + j % c) EXPECT_EQ(m(i, j), cplx(0.0));
}

TEST(Beamsplitter, MatchesTruncatedGeneratorExponential) {
  // On sectors that fit entirely in the box, the exact sector exponential
  // equals the exponential of the full two-mode generator.
  const int c = 4;
  const MatrixXcd a = annihilation_matrix(c), id = MatrixXcd::Identity(c, c);
  const MatrixXcd aa = oracle::kron(a, id), bb = oracle::kron(id, a);
  const double theta = 0.7, phi = 0.4;
  const MatrixXcd gen = theta * (std::polar(1.0, phi) * aa.adjoint() * bb - std::polar(1.0, -phi) * aa * bb.adjoint());
  const MatrixXcd ref = oracle::expm(gen);
  const MatrixXcd m = beamsplitter_fock(theta, phi, c);
  for (int i = 0; i < c * c; ++i)
    for (int j = 0; j < c * c; ++j)
      if (i / c + i % c < c && j / c + j % c < c) EXPECT_LT(std::abs(m(i, j) - ref(i, j)), 1e-12);
}

TEST(Truncation, CutoffDoublingInvariance) {
  const std::size_t c = 12;
  const auto interior = Eigen::Index(c / 2);
  for (const GateSpec& g : {GateSpec::squeeze(0, 0.5, 0.4), GateSpec::displacement(0, 0.5, -1.2),
                            GateSpec::rotation(0, 0.5), GateSpec::kerr(0, 0.5)}) {
    const MatrixXcd small = fock_matrix(g, c), big = fock_matrix(g, 2 * c);
    EXPECT_LT(max_abs((small - big.topLeftCorner(c, c)).topLeftCorner(interior, interior)), 1e-8) << to_string(g.kind);
  }
  const MatrixXcd bs_small = beamsplitter_fock(0.5, 0.3, c), bs_big = beamsplitter_fock(0.5, 0.3, 2 * c);
  double err = 0.0;
  for (std::size_t ia = 0; ia < c / 2; ++ia)
    for (std::size_t ib = 0; ib < c / 2; ++ib)
      for (std::size_t ja = 0; ja < c / 2; ++ja)
        for (std::size_t jb = 0; jb < c / 2; ++jb)
          err = std::max(err, std::abs(bs_small(ia * c + ib, ja * c + jb) - bs_big(ia * 2 * c + ib, ja * 2 * c + jb)));
  EXPECT_LT(err, 1e-8);
}

TEST(GateSpecTest, CountsAndValidation) {
  EXPECT_EQ(GateSpec::param_count(GateKind::Squeeze), 2u);
  EXPECT_EQ(GateSpec::param_count(GateKind::Rotation), 1u);
  EXPECT_EQ(GateSpec::param_count(GateKind::CubicPhase), 1u);
  EXPECT_EQ(GateSpec::arity(GateKind::Beamsplitter), 2u);
  EXPECT_THROW((GateSpec{GateKind::Kerr, {1.0, 2.0}, {0}}.validate()), DimensionError);
  EXPECT_THROW((GateSpec{GateKind::Beamsplitter, {1.0, 2.0}, {1, 1}}.validate()), DimensionError);
  EXPECT_THROW((GateSpec{GateKind::Rotation, {1.0}, {0, 1}}.validate()), DimensionError);
}

TEST(Symplectic, SqueezeIsDiagonalScaling) {
  const auto act = symplectic_of(GateSpec::squeeze(0, 0.4, 0.0), 1);
  MatrixXd expected(2, 2);
  expected << std::exp(-0.4), 0.0, 0.0, std::exp(0.4);
  EXPECT_LT((act.matrix - expected).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Symplectic, RotationMatchesHeisenbergQuadratures) {
  // x -> x cos(phi) - p sin(phi), p -> x sin(phi) + p cos(phi)
  const double phi = 0.8;
  const auto act = symplectic_of(GateSpec::rotation(0, phi), 1);
  MatrixXd expected(2, 2);
  expected << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
  EXPECT_LT((act.matrix - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Symplectic, DisplacementShiftsByTwiceAlpha) {
  const auto act = symplectic_of(GateSpec::displacement(1, 0.5, 0.3), 2);
  EXPECT_EQ(act.matrix, MatrixXd::Identity(4, 4));
  EXPECT_NEAR(act.displacement[1], 2.0 * 0.5 * std::cos(0.3), 1e-15);
  EXPECT_NEAR(act.displacement[3], 2.0 * 0.5 * std::sin(0.3), 1e-15);
  EXPECT_EQ(act.displacement[0], 0.0);
}

TEST(Symplectic, AllGaussianKindsPreserveForm) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> mag(-0.5, 0.5), ph(0.0, 2 * kPi);
  const MatrixXd j = symplectic_form(3);
  for (int trial = 0; trial < 50; ++trial) {
    for (const GateSpec& g :
         {GateSpec::squeeze(trial % 3, mag(rng), ph(rng)), GateSpec::displacement(trial % 3, mag(rng), ph(rng)),
          GateSpec::rotation(trial % 3, ph(rng)), GateSpec::beamsplitter(trial % 3, (trial + 1) % 3, mag(rng), ph(rng))}) {
      const MatrixXd m = symplectic_of(g, 3).matrix;
      EXPECT_LT((m * j * m.transpose() - j).cwiseAbs().maxCoeff(), 1e-10) << to_string(g.kind);
    }
  }
}

TEST(Symplectic, NonGaussianKindsAreRejected) {
  EXPECT_THROW(symplectic_of(GateSpec::kerr(0, 0.1), 1), UnsupportedKindError);
  EXPECT_THROW(symplectic_of(GateSpec::cubic_phase(0, 0.1), 1), UnsupportedKindError);
  EXPECT_THROW(symplectic_of(GateSpec::rotation(2, 0.1), 2), DimensionError);
}

TEST(Symplectic, EachGateMatchesFockMoments) {
  // one gate at a time on a displaced squeezed two-mode input
  const std::size_t c = 24;
  std::vector<GateSpec> prep = {GateSpec::squeeze(0, 0.3, 0.5), GateSpec::displacement(0, 0.4, 1.0),
                                GateSpec::squeeze(1, -0.2, 2.0), GateSpec::displacement(1, 0.3, -0.6)};
  const auto base_state = run_circuit(new_vacuum(2, c), prep);
  const auto base_moments = propagate(vacuum_moments(2), std::span<const GateSpec>(prep));
  for (const GateSpec& g : {GateSpec::squeeze(1, 0.4, 0.7), GateSpec::displacement(0, 0.5, 2.2),
                            GateSpec::rotation(0, 1.1), GateSpec::beamsplitter(0, 1, 0.6, 0.9),
                            GateSpec::beamsplitter(1, 0, 0.6, 0.9)}) {
    const auto f = moments_from_fock(apply_gate(base_state, g));
    const std::vector<GateSpec> one = {g};
    const auto m = propagate(base_moments, std::span<const GateSpec>(one));
    EXPECT_LT((f.mean - m.mean).cwiseAbs().maxCoeff(), 1e-6) << to_string(g.kind);
    EXPECT_LT((f.covariance - m.covariance).cwiseAbs().maxCoeff(), 1e-6) << to_string(g.kind);
  }
}

TEST(Cache, ReturnsSameMatrixAsDirectBuild) {
  GateCache cache(2);
  const GateSpec g = GateSpec::squeeze(0, 0.2, 0.1);
  EXPECT_EQ(cache.get(g, 6), squeeze_fock(0.2, 0.1, 6));
  cache.get(GateSpec::rotation(0, 0.1), 6);
  EXPECT_EQ(cache.size(), 2u);
  cache.get(GateSpec::kerr(0, 0.1), 6);  // full: cleared first
  EXPECT_EQ(cache.size(), 1u);
  const auto s = new_vacuum(2, 6);
  EXPECT_EQ(apply_gate(s, g, &cache).amplitudes(), apply_gate(s, g).amplitudes());
}
