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

#pragma once

// Gaussian phase-space representation: first and second quadrature moments,
// the adjacency-matrix covariance construction with its validity report, and
// symplectic propagation (used as an independent oracle for the Fock
// simulator).

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "cvmaxcut/common.hpp"
#include "cvmaxcut/fock_state.hpp"
#include "cvmaxcut/gates.hpp"

namespace cvmaxcut {

/// Quadrature moments in (x_1..x_N, p_1..p_N) ordering, hbar = 2 units.
struct GaussianMoments {
  VectorXd mean;
  MatrixXd covariance;

  std::size_t n_modes() const { return static_cast<std::size_t>(mean.size() / 2); }
};

inline GaussianMoments vacuum_moments(std::size_t n_modes) {
  const auto d = static_cast<Eigen::Index>(2 * n_modes);
  return {VectorXd::Zero(d), (kHbar / 2.0) * MatrixXd::Identity(d, d)};
}

struct CovarianceValidity {
  bool positive_definite = false;
  bool uncertainty_ok = false;
  bool pure = false;
  double min_eigenvalue = 0.0;
  double min_uncertainty_eigenvalue = 0.0;
  double purity_residual = 0.0;

  bool valid() const { return positive_definite && uncertainty_ok; }
};

/// Checks are made on sigma / hbar (vacuum = I/2):
///   positive definite:  lambda_min(sigma) > 1e-10
///   uncertainty:        sigma + (i/2) J >= -1e-9
///   purity:             ||(2 sigma J)^2 + I||_F <= 1e-6
inline CovarianceValidity is_valid_covariance(const GaussianMoments& m) {
  const Eigen::Index d = m.covariance.rows();
  if (m.covariance.cols() != d || d % 2 != 0) throw DimensionError("is_valid_covariance: covariance must be 2N x 2N");
  const MatrixXd sigma = m.covariance / kHbar;
  const MatrixXd sym = 0.5 * (sigma + sigma.transpose());
  const MatrixXd j = symplectic_form(static_cast<std::size_t>(d / 2));

  CovarianceValidity v;
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(sym, Eigen::EigenvaluesOnly);
  v.min_eigenvalue = eig.eigenvalues().minCoeff();
  v.positive_definite = v.min_eigenvalue > 1e-10;

  const MatrixXcd h = sym.cast<cplx>() + cplx(0.0, 0.5) * j.cast<cplx>();
  Eigen::SelfAdjointEigenSolver<MatrixXcd> heig(h, Eigen::EigenvaluesOnly);
  v.min_uncertainty_eigenvalue = heig.eigenvalues().minCoeff();
  v.uncertainty_ok = v.min_uncertainty_eigenvalue >= -1e-9;

  const MatrixXd sj = 2.0 * sym * j;
  v.purity_residual = (sj * sj + MatrixXd::Identity(d, d)).norm();
  v.pure = v.purity_residual <= 1e-6;
  return v;
}

/// Result of the adjacency construction. `raw` is the formula output in the
/// complex-amplitude (a, a^dag) basis with vacuum I/2; `moments` holds the
/// same state as quadrature moments in hbar = 2 units.
struct AdjacencyCovariance {
  MatrixXd raw;
  GaussianMoments moments;
  CovarianceValidity validity;
};

struct ScalingParams {
  double c = 0.0;
  double d = 1.0;
};

namespace detail {

inline void require_symmetric(const MatrixXd& a, const char* what, double tol = 1e-12) {
  if (a.rows() != a.cols()) throw DimensionError(std::string(what) + ": matrix is not square");
  if (a.rows() == 0) throw DimensionError(std::string(what) + ": empty matrix");
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > tol) {
    throw DimensionError(std::string(what) + ": matrix is not symmetric");
  }
}

inline MatrixXd block_diag2(const MatrixXd& a) {
  const Eigen::Index n = a.rows();
  MatrixXd out = MatrixXd::Zero(2 * n, 2 * n);
  out.topLeftCorner(n, n) = a;
  out.bottomRightCorner(n, n) = a;
  return out;
}

inline MatrixXd swap_matrix(Eigen::Index n) {
  MatrixXd x = MatrixXd::Zero(2 * n, 2 * n);
  x.topRightCorner(n, n) = MatrixXd::Identity(n, n);
  x.bottomLeftCorner(n, n) = MatrixXd::Identity(n, n);
  return x;
}

/// sigma = (I - X M)^{-1} - I/2 for a 2n x 2n matrix M already in (a, a^dag)
/// block form, converted to quadratures.
inline AdjacencyCovariance resolvent_covariance(const MatrixXd& full, const char* what) {
  const Eigen::Index d = full.rows();
  const Eigen::Index n = d / 2;
  const MatrixXd id = MatrixXd::Identity(d, d);
  Eigen::FullPivLU<MatrixXd> lu(id - swap_matrix(n) * full);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) throw SingularError(std::string(what) + ": (I - X A) is singular");
  AdjacencyCovariance out;
  out.raw = lu.inverse() - 0.5 * id;

  // x = a + a^dag, p = -i (a - a^dag): V = R sigma R^dag with R = [[I, I], [-iI, iI]].
  MatrixXcd r = MatrixXcd::Zero(d, d);
  r.topLeftCorner(n, n) = MatrixXcd::Identity(n, n);
  r.topRightCorner(n, n) = MatrixXcd::Identity(n, n);
  r.bottomLeftCorner(n, n) = cplx(0.0, -1.0) * MatrixXcd::Identity(n, n);
  r.bottomRightCorner(n, n) = cplx(0.0, 1.0) * MatrixXcd::Identity(n, n);
  const MatrixXcd v = r * out.raw.cast<cplx>() * r.adjoint();
  out.moments.mean = VectorXd::Zero(d);
  out.moments.covariance = (kHbar / 2.0) * v.real();
  out.validity = is_valid_covariance(out.moments);
  return out;
}

}  // namespace detail

/// sigma_A = (I_2n - X A)^{-1} - I_2n / 2, where A acts on both the a and
/// a^dag blocks.
inline AdjacencyCovariance covariance_from_adjacency(const MatrixXd& a) {
  detail::require_symmetric(a, "covariance_from_adjacency");
  return detail::resolvent_covariance(detail::block_diag2(a), "covariance_from_adjacency");
}

/// sigma'_{c,d,A} = (I_4n - X d (c I_4n + A'))^{-1} - I_4n / 2 with the
/// block-doubled A' = diag(A, A); the result describes 2n modes.
inline AdjacencyCovariance doubled_covariance(const MatrixXd& a, const ScalingParams& s) {
  detail::require_symmetric(a, "doubled_covariance");
  if (!(s.d > 0.0)) throw DomainError("doubled_covariance: d must be positive");
  const MatrixXd doubled = detail::block_diag2(a);
  const MatrixXd full = detail::block_diag2(doubled);
  const MatrixXd scaled = s.d * (s.c * MatrixXd::Identity(full.rows(), full.cols()) + full);
  return detail::resolvent_covariance(scaled, "doubled_covariance");
}

struct ScalingGrid {
  std::vector<double> c_values;
  std::vector<double> d_values;

  /// c in {0, 0.1, ..., 2}, d in {0.01, 0.02, ..., 1}.
  static ScalingGrid defaults() {
    ScalingGrid g;
    for (int i = 0; i <= 20; ++i) g.c_values.push_back(0.1 * i);
    for (int i = 1; i <= 100; ++i) g.d_values.push_back(0.01 * i);
    return g;
  }
};

struct ScalingSearch {
  std::optional<ScalingParams> found;
  std::size_t points_scanned = 0;
  std::size_t grid_size = 0;
  std::string message;
};

/// First grid point (ascending d, then c) where the doubled covariance is
/// positive definite and satisfies the uncertainty relation.
inline ScalingSearch search_scaling(const MatrixXd& a, const ScalingGrid& grid = ScalingGrid::defaults()) {
  detail::require_symmetric(a, "search_scaling");
  ScalingSearch out;
  out.grid_size = grid.c_values.size() * grid.d_values.size();
  for (double d : grid.d_values) {
    for (double c : grid.c_values) {
      ++out.points_scanned;
      if (!(d > 0.0)) continue;
      try {
        if (doubled_covariance(a, {c, d}).validity.valid()) {
          out.found = ScalingParams{c, d};
          return out;
        }
      } catch (const SingularError&) {
        // singular points are simply invalid
      }
    }
  }
  out.message = "no valid (c, d) among " + std::to_string(grid.c_values.size()) + " c values x " +
                std::to_string(grid.d_values.size()) + " d values";
  return out;
}

inline GaussianMoments propagate(GaussianMoments moments, std::span<const SymplecticAction> actions) {
  for (const auto& act : actions) {
    if (act.matrix.rows() != moments.mean.size() || act.matrix.cols() != moments.mean.size() ||
        act.displacement.size() != moments.mean.size()) {
      throw DimensionError("propagate: symplectic action does not match the number of modes");
    }
    moments.mean = act.matrix * moments.mean + act.displacement;
    moments.covariance = act.matrix * moments.covariance * act.matrix.transpose();
  }
  return moments;
}

inline GaussianMoments propagate(GaussianMoments moments, std::span<const GateSpec> gates) {
  std::vector<SymplecticAction> actions;
  actions.reserve(gates.size());
  for (const auto& g : gates) actions.push_back(symplectic_of(g, moments.n_modes()));
  return propagate(std::move(moments), std::span<const SymplecticAction>(actions));
}

/// Quadrature moments of a Fock state, normalised by its squared norm. Only
/// lowering operators are applied, so truncation does not bias the
/// expectation values themselves.
inline GaussianMoments moments_from_fock(const FockState& state) {
  const std::size_t nm = state.n_modes();
  const auto n = static_cast<Eigen::Index>(nm);
  const double norm2 = state.norm_squared();
  if (!(norm2 > 0.0)) throw DomainError("moments_from_fock: zero state");

  // lowered[k] = a_k |psi>
  const MatrixXcd a1 = annihilation_matrix(state.cutoff());
  std::vector<VectorXcd> lowered;
  lowered.reserve(nm);
  for (std::size_t k = 0; k < nm; ++k) lowered.push_back(apply_single_mode(state, k, a1).amplitudes());

  const VectorXcd& psi = state.amplitudes();
  VectorXcd mean_a(n);
  MatrixXcd aa(n, n), ada(n, n);  // <a_k a_l>, <a_k^dag a_l>
  for (std::size_t k = 0; k < nm; ++k) {
    mean_a[k] = psi.dot(lowered[k]) / norm2;
    for (std::size_t l = 0; l < nm; ++l) {
      ada(k, l) = lowered[k].dot(lowered[l]) / norm2;
      const VectorXcd al = apply_single_mode(FockState(nm, state.cutoff(), lowered[l]), k, a1).amplitudes();
      aa(k, l) = psi.dot(al) / norm2;
    }
  }

  const double s = kHbar / 2.0;  // x = sqrt(hbar/2)(a + a^dag)
  GaussianMoments m;
  m.mean.resize(2 * n);
  m.covariance.resize(2 * n, 2 * n);
  for (Eigen::Index k = 0; k < n; ++k) {
    m.mean[k] = std::sqrt(s) * 2.0 * mean_a[k].real();
    m.mean[n + k] = std::sqrt(s) * 2.0 * mean_a[k].imag();
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index l = 0; l < n; ++l) {
      const double delta = k == l ? 1.0 : 0.0;
      const double xx = 2.0 * aa(k, l).real() + 2.0 * ada(k, l).real() + delta;
      const double pp = -2.0 * aa(k, l).real() + 2.0 * ada(k, l).real() + delta;
      const double xp = 2.0 * aa(k, l).imag() + 2.0 * ada(k, l).imag();
      m.covariance(k, l) = s * xx - m.mean[k] * m.mean[l];
      m.covariance(n + k, n + l) = s * pp - m.mean[n + k] * m.mean[n + l];
      m.covariance(k, n + l) = s * xp - m.mean[k] * m.mean[n + l];
      m.covariance(n + l, k) = m.covariance(k, n + l);
    }
  }
  return m;
}

/// Probability of detecting no photons in any mode.
inline double vacuum_probability(const GaussianMoments& m) {
  const Eigen::Index d = m.covariance.rows();
  const auto n = static_cast<double>(d / 2);
  const MatrixXd shifted = m.covariance / (kHbar / 2.0) + MatrixXd::Identity(d, d);
  const VectorXd mu = m.mean / std::sqrt(kHbar / 2.0);
  Eigen::PartialPivLU<MatrixXd> lu(shifted);
  const double quad = mu.dot(lu.solve(mu));
  return std::pow(2.0, n) / std::sqrt(lu.determinant()) * std::exp(-0.5 * quad);
}

}  // namespace cvmaxcut
