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

// Graph embedding: rescale the adjacency matrix, Takagi-decompose it as
// B = U diag(d) U^T, squeeze each mode by r_i = artanh(d_i) and realise U
// with a nearest-neighbour beamsplitter mesh.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "cvmaxcut/common.hpp"
#include "cvmaxcut/gates.hpp"
#include "cvmaxcut/gaussian.hpp"
#include "cvmaxcut/graph.hpp"

namespace cvmaxcut {

inline constexpr double kDefaultEmbeddingMargin = 0.05;

struct RescaledAdjacency {
  MatrixXd matrix;
  double scale = 1.0;  // original = scale * matrix
};

/// Scales A (up or down) so that its spectral radius becomes 1 - margin.
inline RescaledAdjacency rescale_adjacency(const MatrixXd& a, double margin = kDefaultEmbeddingMargin) {
  detail::require_symmetric(a, "rescale_adjacency");
  if (!(margin > 0.0 && margin < 1.0)) throw DomainError("rescale_adjacency: margin must lie in (0, 1)");
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(a, Eigen::EigenvaluesOnly);
  const double radius = eig.eigenvalues().cwiseAbs().maxCoeff();
  if (!(radius > 0.0)) throw DegenerateInputError("rescale_adjacency: zero adjacency matrix (graph has no edges)");
  const double scale = radius / (1.0 - margin);
  return {a / scale, scale};
}

struct TakagiResult {
  MatrixXcd u;
  VectorXd d;  // descending
};

/// Takagi factorisation of a real symmetric matrix through its real
/// eigendecomposition B = Q L Q^T: U = Q diag(1 or i), d = |L|.
inline TakagiResult takagi(const MatrixXd& b) {
  detail::require_symmetric(b, "takagi", 1e-10);
  const MatrixXd sym = 0.5 * (b + b.transpose());
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(sym);
  const VectorXd& lam = eig.eigenvalues();
  const Eigen::Index n = lam.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return std::abs(lam[x]) > std::abs(lam[y]); });
  TakagiResult out{MatrixXcd(n, n), VectorXd(n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    const cplx phase = lam[src] >= 0.0 ? cplx(1.0) : cplx(0.0, 1.0);
    out.u.col(k) = eig.eigenvectors().col(src).cast<cplx>() * phase;
    out.d[k] = std::abs(lam[src]);
  }
  return out;
}

inline std::vector<double> squeezings_from_takagi(const VectorXd& d) {
  std::vector<double> r;
  r.reserve(static_cast<std::size_t>(d.size()));
  for (Eigen::Index k = 0; k < d.size(); ++k) {
    if (!(d[k] >= 0.0 && d[k] < 1.0)) {
      throw DomainError("squeezings_from_takagi: d[" + std::to_string(k) + "] = " + std::to_string(d[k]) +
                        " is outside [0, 1)");
    }
    r.push_back(std::atanh(d[k]));
  }
  return r;
}

/// Single-photon transfer matrix of a passive gate sequence: entry (j, k) is
/// the amplitude <1_j| G |1_k>.
inline MatrixXcd transfer_matrix(std::span<const GateSpec> mesh, std::size_t n_modes) {
  const auto n = static_cast<Eigen::Index>(n_modes);
  MatrixXcd total = MatrixXcd::Identity(n, n);
  for (const auto& g : mesh) {
    g.validate();
    for (auto m : g.modes)
      if (m >= n_modes) throw DimensionError("transfer_matrix: mode index out of range");
    MatrixXcd t = MatrixXcd::Identity(n, n);
    const auto a = static_cast<Eigen::Index>(g.modes[0]);
    if (g.kind == GateKind::Rotation) {
      t(a, a) = std::polar(1.0, g.params[0]);
    } else if (g.kind == GateKind::Beamsplitter) {
      const auto b = static_cast<Eigen::Index>(g.modes[1]);
      const double c = std::cos(g.params[0]), s = std::sin(g.params[0]);
      t(a, a) = c;
      t(a, b) = std::polar(s, g.params[1]);
      t(b, a) = -std::polar(s, -g.params[1]);
      t(b, b) = c;
    } else {
      throw UnsupportedKindError("transfer_matrix: " + to_string(g.kind) + " is not a passive gate");
    }
    total = t * total;
  }
  return total;
}

namespace detail {

inline bool is_unitary(const MatrixXcd& u, double tol) {
  if (u.rows() != u.cols()) return false;
  return (u.adjoint() * u - MatrixXcd::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

struct MeshStep {
  Eigen::Index mode = 0;  // acts on (mode, mode + 1)
  double theta = 0.0;
  double phi = 0.0;
};

/// 2 x 2 block of BS(theta, phi) on modes (a, a + 1).
inline void apply_rows(MatrixXcd& w, const MeshStep& s) {
  const double c = std::cos(s.theta), sn = std::sin(s.theta);
  const cplx tab = std::polar(sn, s.phi), tba = -std::polar(sn, -s.phi);
  const Eigen::RowVectorXcd ra = w.row(s.mode), rb = w.row(s.mode + 1);
  w.row(s.mode) = c * ra + tab * rb;
  w.row(s.mode + 1) = tba * ra + c * rb;
}

/// w <- w * BS^dag on columns (a, a + 1).
inline void apply_cols_inverse(MatrixXcd& w, const MeshStep& s) {
  const double c = std::cos(s.theta), sn = std::sin(s.theta);
  // BS^dag = [[c, -e^{i phi} s], [e^{-i phi} s, c]]
  const cplx dab = -std::polar(sn, s.phi), dba = std::polar(sn, -s.phi);
  const VectorXcd ca = w.col(s.mode), cb = w.col(s.mode + 1);
  w.col(s.mode) = c * ca + dba * cb;
  w.col(s.mode + 1) = dab * ca + c * cb;
}

}  // namespace detail

/// Rectangular nearest-neighbour decomposition of a unitary into
/// n(n-1)/2 beamsplitters followed by one rotation per mode. Elements are
/// nulled alternately from the right (column operations) and from the left
/// (row operations); the residual diagonal is then commuted to the end.
inline std::vector<GateSpec> interferometer_mesh(const MatrixXcd& u) {
  if (!detail::is_unitary(u, 1e-8)) throw DomainError("interferometer_mesh: matrix is not unitary");
  const Eigen::Index n = u.rows();
  MatrixXcd w = u;
  std::vector<detail::MeshStep> right, left;

  auto null_from_right = [&](Eigen::Index row, Eigen::Index col) {
    const cplx x = w(row, col), y = w(row, col + 1);
    detail::MeshStep s{col, 0.0, 0.0};
    if (std::abs(x) > 0.0) {
      s.theta = std::atan2(std::abs(x), std::abs(y));
      s.phi = std::abs(y) > 0.0 ? std::arg(y) - std::arg(x) - kPi : 0.0;
    }
    detail::apply_cols_inverse(w, s);
    w(row, col) = 0.0;
    right.push_back(s);
  };
  auto null_from_left = [&](Eigen::Index row, Eigen::Index col) {
    const cplx x = w(row - 1, col), y = w(row, col);
    detail::MeshStep s{row - 1, 0.0, 0.0};
    if (std::abs(y) > 0.0) {
      s.theta = std::atan2(std::abs(y), std::abs(x));
      s.phi = std::abs(x) > 0.0 ? std::arg(x) - std::arg(y) : 0.0;
    }
    detail::apply_rows(w, s);
    w(row, col) = 0.0;
    left.push_back(s);
  };

  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    if (i % 2 == 0) {
      for (Eigen::Index j = 0; j <= i; ++j) null_from_right(n - 1 - j, i - j);
    } else {
      for (Eigen::Index j = 1; j <= i + 1; ++j) null_from_left(n + j - i - 2, j - 1);
    }
  }

  // u = L_1^dag ... L_k^dag D R_m ... R_1, and L^dag D = D Y with
  // Y = BS(-theta, phi + arg D_b - arg D_a).
  std::vector<GateSpec> mesh;
  for (const auto& s : right)
    mesh.push_back(GateSpec::beamsplitter(static_cast<std::size_t>(s.mode), static_cast<std::size_t>(s.mode + 1),
                                          s.theta, s.phi));
  for (auto it = left.rbegin(); it != left.rend(); ++it) {
    const double shift = std::arg(w(it->mode + 1, it->mode + 1)) - std::arg(w(it->mode, it->mode));
    mesh.push_back(GateSpec::beamsplitter(static_cast<std::size_t>(it->mode), static_cast<std::size_t>(it->mode + 1),
                                          -it->theta, it->phi + shift));
  }
  for (Eigen::Index k = 0; k < n; ++k) mesh.push_back(GateSpec::rotation(static_cast<std::size_t>(k), std::arg(w(k, k))));
  return mesh;
}

/// State preparation: squeezers followed by an interferometer.
struct EmbeddingProgram {
  std::vector<double> squeezings;
  std::vector<GateSpec> mesh;
  double scale = 1.0;
  TakagiResult takagi;

  std::vector<GateSpec> circuit() const {
    std::vector<GateSpec> gates;
    for (std::size_t k = 0; k < squeezings.size(); ++k) gates.push_back(GateSpec::squeeze(k, squeezings[k], 0.0));
    gates.insert(gates.end(), mesh.begin(), mesh.end());
    return gates;
  }
};

inline EmbeddingProgram embed(const WeightedGraph& graph, double margin = kDefaultEmbeddingMargin) {
  if (graph.n() == 0) throw DimensionError("embed: empty graph");
  const auto rescaled = rescale_adjacency(graph.adjacency(), margin);
  EmbeddingProgram prog;
  prog.scale = rescaled.scale;
  prog.takagi = takagi(rescaled.matrix);
  prog.squeezings = squeezings_from_takagi(prog.takagi.d);
  prog.mesh = interferometer_mesh(prog.takagi.u);
  return prog;
}

}  // namespace cvmaxcut
