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

// Multi-qumode states in a truncated Fock basis.
//
// Amplitudes are stored densely, mode-major: mode 0 is the most significant
// digit of the flat index, so index(n_0, ..., n_{N-1}) = sum_k n_k c^{N-1-k}.
// Every operation is a pure function returning a new state.

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/SparseCore>

#include "cvmaxcut/common.hpp"

namespace cvmaxcut {

/// Upper bound on the bytes a single state vector may occupy.
struct MemoryBudget {
  std::size_t max_bytes = std::size_t{2} << 30;  // 2 GiB
};

namespace detail {

inline std::size_t checked_pow(std::size_t base, std::size_t exp, bool& overflow) {
  std::size_t out = 1;
  overflow = false;
  for (std::size_t i = 0; i < exp; ++i) {
    if (out > std::numeric_limits<std::size_t>::max() / base) {
      overflow = true;
      return 0;
    }
    out *= base;
  }
  return out;
}

}  // namespace detail

class FockState {
 public:
  FockState(std::size_t n_modes, std::size_t cutoff, VectorXcd amplitudes)
      : n_modes_(n_modes), cutoff_(cutoff), amps_(std::move(amplitudes)) {
    bool overflow = false;
    const auto dim = detail::checked_pow(cutoff, n_modes, overflow);
    if (n_modes == 0 || cutoff < 2 || overflow ||
        static_cast<std::size_t>(amps_.size()) != dim) {
      throw DimensionError("FockState: amplitude vector does not match cutoff^n_modes");
    }
  }

  std::size_t n_modes() const { return n_modes_; }
  std::size_t cutoff() const { return cutoff_; }
  std::size_t dimension() const { return static_cast<std::size_t>(amps_.size()); }
  const VectorXcd& amplitudes() const { return amps_; }

  double norm_squared() const { return amps_.squaredNorm(); }

  /// Stride of mode `mode` in the flat index.
  std::size_t stride(std::size_t mode) const {
    std::size_t s = 1;
    for (std::size_t k = mode + 1; k < n_modes_; ++k) s *= cutoff_;
    return s;
  }

  std::size_t index_of(std::span<const std::size_t> counts) const {
    if (counts.size() != n_modes_) throw DimensionError("index_of: wrong tuple length");
    std::size_t idx = 0;
    for (auto n : counts) {
      if (n >= cutoff_) throw DimensionError("index_of: photon count beyond cutoff");
      idx = idx * cutoff_ + n;
    }
    return idx;
  }

  std::vector<std::size_t> counts_of(std::size_t index) const {
    std::vector<std::size_t> counts(n_modes_);
    for (std::size_t k = n_modes_; k-- > 0;) {
      counts[k] = index % cutoff_;
      index /= cutoff_;
    }
    return counts;
  }

  cplx amplitude(std::span<const std::size_t> counts) const { return amps_[index_of(counts)]; }

 private:
  std::size_t n_modes_;
  std::size_t cutoff_;
  VectorXcd amps_;
};

/// Photon-number statistics of a state. `probabilities` uses the same flat
/// mode-major index as FockState; `leakage` is the mass lost to truncation.
struct OutcomeDistribution {
  std::size_t n_modes = 0;
  std::size_t cutoff = 0;
  VectorXd probabilities;
  double leakage = 0.0;

  double probability(std::span<const std::size_t> counts) const {
    std::size_t idx = 0;
    for (auto n : counts) idx = idx * cutoff + n;
    return probabilities[static_cast<Eigen::Index>(idx)];
  }

  std::vector<std::size_t> counts_of(std::size_t index) const {
    std::vector<std::size_t> counts(n_modes);
    for (std::size_t k = n_modes; k-- > 0;) {
      counts[k] = index % cutoff;
      index /= cutoff;
    }
    return counts;
  }

  /// Flat index of the most probable outcome; ties resolve to the lowest index.
  std::size_t most_probable_index() const {
    Eigen::Index best = 0;
    probabilities.maxCoeff(&best);
    return static_cast<std::size_t>(best);
  }
};

/// Reduced density operator of one mode.
struct SingleModeDensity {
  MatrixXcd matrix;

  double trace() const { return matrix.trace().real(); }
  std::size_t cutoff() const { return static_cast<std::size_t>(matrix.rows()); }
};

inline FockState new_vacuum(std::size_t n_modes, std::size_t cutoff,
                            const MemoryBudget& budget = {}) {
  if (n_modes < 1) throw DimensionError("new_vacuum: need at least one mode");
  if (cutoff < 2) throw DimensionError("new_vacuum: cutoff must be at least 2");
  bool overflow = false;
  const auto dim = detail::checked_pow(cutoff, n_modes, overflow);
  if (overflow || dim > budget.max_bytes / sizeof(cplx)) {
    throw SizingError("state of " + std::to_string(n_modes) + " modes at cutoff " +
                      std::to_string(cutoff) + " (cutoff^n_modes amplitudes) exceeds the memory budget of " +
                      std::to_string(budget.max_bytes) + " bytes");
  }
  VectorXcd amps = VectorXcd::Zero(static_cast<Eigen::Index>(dim));
  amps[0] = 1.0;
  return FockState(n_modes, cutoff, std::move(amps));
}

inline FockState apply_single_mode(const FockState& state, std::size_t mode, const MatrixXcd& gate) {
  const auto c = static_cast<Eigen::Index>(state.cutoff());
  if (mode >= state.n_modes()) throw DimensionError("apply_single_mode: mode index out of range");
  if (gate.rows() != c || gate.cols() != c) {
    throw DimensionError("apply_single_mode: gate dimension does not match cutoff");
  }
  using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const auto inner = static_cast<Eigen::Index>(state.stride(mode));
  const auto dim = static_cast<Eigen::Index>(state.dimension());
  const auto outer = dim / (c * inner);
  VectorXcd out(dim);
  const cplx* src = state.amplitudes().data();
  cplx* dst = out.data();
  if (inner == 1) {
    Eigen::Map<const MatrixXcd> in(src, c, outer);
    Eigen::Map<MatrixXcd>(dst, c, outer).noalias() = gate * in;
  } else {
    for (Eigen::Index o = 0; o < outer; ++o) {
      Eigen::Map<const RowMat> in(src + o * c * inner, c, inner);
      Eigen::Map<RowMat>(dst + o * c * inner, c, inner).noalias() = gate * in;
    }
  }
  return FockState(state.n_modes(), state.cutoff(), std::move(out));
}

/// `gate` acts on the joint index n_a * cutoff + n_b.
inline FockState apply_two_mode(const FockState& state, std::size_t mode_a, std::size_t mode_b,
                                const MatrixXcd& gate) {
  const std::size_t c = state.cutoff();
  const auto c2 = static_cast<Eigen::Index>(c * c);
  if (mode_a >= state.n_modes() || mode_b >= state.n_modes()) {
    throw DimensionError("apply_two_mode: mode index out of range");
  }
  if (mode_a == mode_b) throw DimensionError("apply_two_mode: identical mode indices");
  if (gate.rows() != c2 || gate.cols() != c2) {
    throw DimensionError("apply_two_mode: gate dimension does not match cutoff^2");
  }
  const std::size_t sa = state.stride(mode_a);
  const std::size_t sb = state.stride(mode_b);
  const std::size_t dim = state.dimension();

  std::vector<std::size_t> pair(static_cast<std::size_t>(c2));
  for (std::size_t i = 0; i < c; ++i)
    for (std::size_t j = 0; j < c; ++j) pair[i * c + j] = i * sa + j * sb;

  std::vector<std::size_t> bases;
  bases.reserve(dim / static_cast<std::size_t>(c2));
  for (std::size_t idx = 0; idx < dim; ++idx) {
    if ((idx / sa) % c == 0 && (idx / sb) % c == 0) bases.push_back(idx);
  }
  const auto rest = static_cast<Eigen::Index>(bases.size());

  const VectorXcd& amps = state.amplitudes();
  MatrixXcd gathered(c2, rest);
  for (Eigen::Index r = 0; r < rest; ++r)
    for (Eigen::Index k = 0; k < c2; ++k) gathered(k, r) = amps[static_cast<Eigen::Index>(bases[r] + pair[k])];

  // Passive two-mode gates are block diagonal in total photon number, so most
  // entries are exact zeros.
  const Eigen::Index nnz = (gate.array() != cplx(0.0)).count();
  MatrixXcd result;
  if (nnz * 4 < c2 * c2) {
    Eigen::SparseMatrix<cplx> sparse = gate.sparseView(0.0, 0.0);
    result = sparse * gathered;
  } else {
    result.noalias() = gate * gathered;
  }

  VectorXcd out(static_cast<Eigen::Index>(dim));
  for (Eigen::Index r = 0; r < rest; ++r)
    for (Eigen::Index k = 0; k < c2; ++k) out[static_cast<Eigen::Index>(bases[r] + pair[k])] = result(k, r);
  return FockState(state.n_modes(), state.cutoff(), std::move(out));
}

inline OutcomeDistribution photon_count_distribution(const FockState& state) {
  OutcomeDistribution dist;
  dist.n_modes = state.n_modes();
  dist.cutoff = state.cutoff();
  dist.probabilities = state.amplitudes().cwiseAbs2();
  dist.leakage = 1.0 - dist.probabilities.sum();
  return dist;
}

inline SingleModeDensity reduce_single_mode(const FockState& state, std::size_t mode) {
  if (mode >= state.n_modes()) throw DimensionError("reduce_single_mode: mode index out of range");
  using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const auto c = static_cast<Eigen::Index>(state.cutoff());
  const auto inner = static_cast<Eigen::Index>(state.stride(mode));
  const auto outer = static_cast<Eigen::Index>(state.dimension()) / (c * inner);
  MatrixXcd rho = MatrixXcd::Zero(c, c);
  for (Eigen::Index o = 0; o < outer; ++o) {
    Eigen::Map<const RowMat> block(state.amplitudes().data() + o * c * inner, c, inner);
    rho.noalias() += block * block.adjoint();
  }
  return SingleModeDensity{std::move(rho)};
}

namespace detail {

inline bool strictly_monotone(std::span<const double> grid) {
  if (grid.size() < 2) return true;
  bool up = true, down = true;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    up = up && grid[i] > grid[i - 1];
    down = down && grid[i] < grid[i - 1];
  }
  return up || down;
}

}  // namespace detail

/// Wigner quasi-probability of a single-mode density on an (x, p) grid, in
/// the hbar = 2 convention. Entry (i, j) is W(x_grid[i], p_grid[j]).
///
/// Uses the Laguerre recurrence over Fock-basis Wigner functions W_{|m><n|}:
/// W_{0n} = (2A)^n / sqrt(n!) W_00 and
/// W_{mn} = (2A W_{m,n-1} - sqrt(m) W_{m-1,n-1}) / sqrt(n) for the diagonal
/// band, where A = (x + i p) / (2 sqrt(hbar / 2)).
inline MatrixXd wigner(const SingleModeDensity& density, std::span<const double> x_grid,
                       std::span<const double> p_grid) {
  if (x_grid.empty() || p_grid.empty()) throw DimensionError("wigner: empty grid");
  if (!detail::strictly_monotone(x_grid) || !detail::strictly_monotone(p_grid)) {
    throw DimensionError("wigner: grids must be monotone");
  }
  const auto nx = static_cast<Eigen::Index>(x_grid.size());
  const auto np = static_cast<Eigen::Index>(p_grid.size());
  const auto c = static_cast<std::size_t>(density.matrix.rows());
  const MatrixXcd& rho = density.matrix;

  MatrixXcd a(nx, np);
  for (Eigen::Index i = 0; i < nx; ++i)
    for (Eigen::Index j = 0; j < np; ++j)
      a(i, j) = cplx(x_grid[i], p_grid[j]) / (2.0 * std::sqrt(kHbar / 2.0));

  std::vector<MatrixXcd> w(c);
  w[0] = (-2.0 * a.cwiseAbs2()).array().exp().cast<cplx>() / kPi;
  MatrixXd total = rho(0, 0).real() * w[0].real();
  for (std::size_t n = 1; n < c; ++n) {
    w[n] = (2.0 * a.array() * w[n - 1].array()).matrix() / std::sqrt(double(n));
    total += 2.0 * (rho(0, n) * w[n]).real();
  }
  for (std::size_t m = 1; m < c; ++m) {
    MatrixXcd prev = w[m];
    w[m] = ((2.0 * a.conjugate().array() * prev.array()).matrix() - std::sqrt(double(m)) * w[m - 1]) /
           std::sqrt(double(m));
    total += (rho(m, m) * w[m]).real();
    for (std::size_t n = m + 1; n < c; ++n) {
      MatrixXcd next =
          ((2.0 * a.array() * w[n - 1].array()).matrix() - std::sqrt(double(m)) * prev) / std::sqrt(double(n));
      prev = std::move(w[n]);
      w[n] = std::move(next);
      total += 2.0 * (rho(m, n) * w[n]).real();
    }
  }
  return total / kHbar;
}

}  // namespace cvmaxcut
