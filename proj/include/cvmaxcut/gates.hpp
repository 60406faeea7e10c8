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

// Gate synthesis: truncated Fock-basis matrices and phase-space (symplectic)
// forms for the Gaussian and non-Gaussian gates of the circuits.
//
// Conventions (hbar = 2):
//   S(r, phi)      = exp{(r/2)(e^{-i phi} a^2 - e^{i phi} a^dag^2)}
//   D(alpha)       = exp{alpha a^dag - alpha^* a}
//   R(phi)         = exp{i phi n}
//   BS(theta, phi) = exp{theta (e^{i phi} a^dag b - e^{-i phi} a b^dag)}
//   K(kappa)       = exp{i kappa n^2}
//   V(gamma)       = exp{i gamma x^3 / 3},  x = a + a^dag
//
// A gate matrix at cutoff c holds the matrix elements <m|G|n>, m, n < c, of
// the untruncated operator. Non-diagonal single-mode gates are obtained by
// exponentiating the generator in a padded working space that is grown until
// the c x c block stops changing; the beamsplitter is exponentiated exactly
// inside each total-photon-number sector.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "cvmaxcut/common.hpp"
#include "cvmaxcut/fock_state.hpp"

namespace cvmaxcut {

enum class GateKind { Squeeze, Displacement, Rotation, Beamsplitter, Kerr, CubicPhase };

inline std::string to_string(GateKind kind) {
  switch (kind) {
    case GateKind::Squeeze: return "Squeeze";
    case GateKind::Displacement: return "Displacement";
    case GateKind::Rotation: return "Rotation";
    case GateKind::Beamsplitter: return "Beamsplitter";
    case GateKind::Kerr: return "Kerr";
    case GateKind::CubicPhase: return "CubicPhase";
  }
  return "?";
}

inline constexpr double kMaxSqueeze = 5.0;
inline constexpr double kMaxDisplacement = 5.0;
inline constexpr double kMaxCubicPhase = 2.0;

/// One gate of a circuit. Parameters by kind:
///   Squeeze (r, phi), Displacement (|alpha|, arg alpha), Rotation (phi),
///   Beamsplitter (theta, phi), Kerr (kappa), CubicPhase (gamma).
/// A negative displacement magnitude is allowed and flips the direction.
struct GateSpec {
  GateKind kind = GateKind::Rotation;
  std::vector<double> params;
  std::vector<std::size_t> modes;

  static GateSpec squeeze(std::size_t mode, double r, double phi) { return {GateKind::Squeeze, {r, phi}, {mode}}; }
  static GateSpec displacement(std::size_t mode, double mag, double phase) {
    return {GateKind::Displacement, {mag, phase}, {mode}};
  }
  static GateSpec rotation(std::size_t mode, double phi) { return {GateKind::Rotation, {phi}, {mode}}; }
  static GateSpec beamsplitter(std::size_t mode_a, std::size_t mode_b, double theta, double phi) {
    return {GateKind::Beamsplitter, {theta, phi}, {mode_a, mode_b}};
  }
  static GateSpec kerr(std::size_t mode, double kappa) { return {GateKind::Kerr, {kappa}, {mode}}; }
  static GateSpec cubic_phase(std::size_t mode, double gamma) { return {GateKind::CubicPhase, {gamma}, {mode}}; }

  static std::size_t param_count(GateKind kind) {
    switch (kind) {
      case GateKind::Squeeze:
      case GateKind::Displacement:
      case GateKind::Beamsplitter: return 2;
      default: return 1;
    }
  }
  static std::size_t arity(GateKind kind) { return kind == GateKind::Beamsplitter ? 2 : 1; }

  bool is_gaussian() const { return kind != GateKind::Kerr && kind != GateKind::CubicPhase; }

  void validate() const {
    if (params.size() != param_count(kind)) {
      throw DimensionError(to_string(kind) + ": expected " + std::to_string(param_count(kind)) + " parameters");
    }
    if (modes.size() != arity(kind)) {
      throw DimensionError(to_string(kind) + ": expected " + std::to_string(arity(kind)) + " modes");
    }
    if (kind == GateKind::Beamsplitter && modes[0] == modes[1]) {
      throw DimensionError("Beamsplitter: identical mode indices");
    }
  }

  friend bool operator==(const GateSpec&, const GateSpec&) = default;
};

inline MatrixXcd annihilation_matrix(std::size_t cutoff) {
  if (cutoff < 2) throw DimensionError("annihilation_matrix: cutoff must be at least 2");
  const auto c = static_cast<Eigen::Index>(cutoff);
  MatrixXcd a = MatrixXcd::Zero(c, c);
  for (Eigen::Index n = 1; n < c; ++n) a(n - 1, n) = std::sqrt(double(n));
  return a;
}

namespace detail {

inline MatrixXd real_annihilation(Eigen::Index dim) {
  MatrixXd a = MatrixXd::Zero(dim, dim);
  for (Eigen::Index n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(double(n));
  return a;
}

/// Grows the working dimension until the leading cutoff x cutoff block of
/// `build(dim)` is stable to `tol`.
template <class Build>
auto converged_block(Build&& build, std::size_t cutoff, double tol = 1e-13, std::size_t max_dim = 1536) {
  const auto c = static_cast<Eigen::Index>(cutoff);
  auto dim = static_cast<Eigen::Index>(cutoff + 16);
  auto prev = build(dim).topLeftCorner(c, c).eval();
  while (true) {
    const Eigen::Index next_dim = dim + std::max<Eigen::Index>(8, dim / 2);
    auto next = build(next_dim).topLeftCorner(c, c).eval();
    const double diff = (next - prev).cwiseAbs().maxCoeff();
    if (diff <= tol || next_dim >= static_cast<Eigen::Index>(max_dim)) return next;
    prev = std::move(next);
    dim = next_dim;
  }
}

/// Multiplies entry (m, n) by e^{i phase (m - n)}, i.e. conjugation by R(phase).
inline MatrixXcd rotate_frame(const MatrixXd& m, double phase) {
  MatrixXcd out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      out(i, j) = m(i, j) == 0.0 ? cplx(0.0) : m(i, j) * std::polar(1.0, phase * double(i - j));
  return out;
}

}  // namespace detail

inline MatrixXcd squeeze_fock(double r, double phi, std::size_t cutoff) {
  if (!(std::abs(r) <= kMaxSqueeze)) throw DomainError("squeeze_fock: |r| exceeds stability guard 5");
  if (cutoff < 2) throw DimensionError("squeeze_fock: cutoff must be at least 2");
  if (r == 0.0) return MatrixXcd::Identity(cutoff, cutoff);
  // S(r, phi) = R(phi/2) S(r, 0) R(phi/2)^dag; S(r, 0) is real.
  const MatrixXd base = detail::converged_block(
      [r](Eigen::Index dim) {
        const MatrixXd a = detail::real_annihilation(dim);
        const MatrixXd gen = 0.5 * r * (a * a - a.transpose() * a.transpose());
        return MatrixXd(gen.exp());
      },
      cutoff);
  return detail::rotate_frame(base, phi / 2.0);
}

/// D(alpha) with alpha = mag * e^{i phase}.
inline MatrixXcd displacement_fock(double mag, double phase, std::size_t cutoff) {
  if (!(std::abs(mag) <= kMaxDisplacement)) throw DomainError("displacement_fock: |alpha| exceeds stability guard 5");
  if (cutoff < 2) throw DimensionError("displacement_fock: cutoff must be at least 2");
  if (mag == 0.0) return MatrixXcd::Identity(cutoff, cutoff);
  const MatrixXd base = detail::converged_block(
      [mag](Eigen::Index dim) {
        const MatrixXd a = detail::real_annihilation(dim);
        const MatrixXd gen = mag * (a.transpose() - a);
        return MatrixXd(gen.exp());
      },
      cutoff);
  return detail::rotate_frame(base, phase);
}

inline MatrixXcd displacement_fock(cplx alpha, std::size_t cutoff) {
  return displacement_fock(std::abs(alpha), std::arg(alpha), cutoff);
}

inline MatrixXcd rotation_fock(double phi, std::size_t cutoff) {
  const auto c = static_cast<Eigen::Index>(cutoff);
  MatrixXcd m = MatrixXcd::Zero(c, c);
  for (Eigen::Index n = 0; n < c; ++n) m(n, n) = std::polar(1.0, phi * double(n));
  return m;
}

inline MatrixXcd kerr_fock(double kappa, std::size_t cutoff) {
  const auto c = static_cast<Eigen::Index>(cutoff);
  MatrixXcd m = MatrixXcd::Zero(c, c);
  for (Eigen::Index n = 0; n < c; ++n) m(n, n) = std::polar(1.0, kappa * double(n * n));
  return m;
}

/// exp{i gamma x^3 / 3}. The generator is diagonalised through the truncated
/// position operator, x = Q diag(lambda) Q^T, so each working-space
/// exponential is exact for the truncated x.
inline MatrixXcd cubic_phase_fock(double gamma, std::size_t cutoff) {
  if (!(std::abs(gamma) <= kMaxCubicPhase)) throw DomainError("cubic_phase_fock: |gamma| exceeds stability guard 2");
  if (cutoff < 2) throw DimensionError("cubic_phase_fock: cutoff must be at least 2");
  if (gamma == 0.0) return MatrixXcd::Identity(cutoff, cutoff);
  return detail::converged_block(
      [gamma](Eigen::Index dim) {
        const MatrixXd a = detail::real_annihilation(dim);
        const MatrixXd x = std::sqrt(kHbar / 2.0) * (a + a.transpose());
        Eigen::SelfAdjointEigenSolver<MatrixXd> eig(x);
        const VectorXd& lam = eig.eigenvalues();
        VectorXcd phases(dim);
        for (Eigen::Index k = 0; k < dim; ++k) phases[k] = std::polar(1.0, gamma * lam[k] * lam[k] * lam[k] / 3.0);
        const MatrixXcd q = eig.eigenvectors().cast<cplx>();
        return MatrixXcd(q * phases.asDiagonal() * q.transpose());
      },
      cutoff, 1e-12);
}

/// Two-mode matrix indexed by n_a * cutoff + n_b. Total photon number is
/// conserved, so every sector N = n_a + n_b is exponentiated on its own and
/// elements between sectors are exactly zero.
inline MatrixXcd beamsplitter_fock(double theta, double phi, std::size_t cutoff) {
  if (cutoff < 2) throw DimensionError("beamsplitter_fock: cutoff must be at least 2");
  const std::size_t c = cutoff;
  const auto c2 = static_cast<Eigen::Index>(c * c);
  MatrixXcd out = MatrixXcd::Zero(c2, c2);
  for (std::size_t total = 0; total + 1 < 2 * c; ++total) {
    // Sector basis |k, total - k>, k = 0..total, untruncated.
    const auto size = static_cast<Eigen::Index>(total + 1);
    MatrixXd gen = MatrixXd::Zero(size, size);
    for (Eigen::Index k = 0; k < size; ++k) {
      const double na = double(k), nb = double(total) - na;
      // theta a^dag b |k, N-k> = theta sqrt(k+1) sqrt(N-k) |k+1, N-k-1>
      if (k + 1 < size) gen(k + 1, k) += theta * std::sqrt((na + 1.0) * nb);
      // -theta a b^dag |k, N-k> = -theta sqrt(k) sqrt(N-k+1) |k-1, N-k+1>
      if (k > 0) gen(k - 1, k) -= theta * std::sqrt(na * (nb + 1.0));
    }
    const MatrixXd block = gen.exp();
    for (Eigen::Index i = 0; i < size; ++i) {
      const auto ia = static_cast<std::size_t>(i), ib = total - ia;
      if (ia >= c || ib >= c) continue;
      for (Eigen::Index j = 0; j < size; ++j) {
        const auto ja = static_cast<std::size_t>(j), jb = total - ja;
        if (ja >= c || jb >= c) continue;
        // The phase enters as conjugation by R_a(phi).
        out(static_cast<Eigen::Index>(ia * c + ib), static_cast<Eigen::Index>(ja * c + jb)) =
            block(i, j) * std::polar(1.0, phi * (double(ia) - double(ja)));
      }
    }
  }
  return out;
}

/// Truncated Fock matrix for any gate kind.
inline MatrixXcd fock_matrix(const GateSpec& gate, std::size_t cutoff) {
  gate.validate();
  const auto& p = gate.params;
  switch (gate.kind) {
    case GateKind::Squeeze: return squeeze_fock(p[0], p[1], cutoff);
    case GateKind::Displacement: return displacement_fock(p[0], p[1], cutoff);
    case GateKind::Rotation: return rotation_fock(p[0], cutoff);
    case GateKind::Beamsplitter: return beamsplitter_fock(p[0], p[1], cutoff);
    case GateKind::Kerr: return kerr_fock(p[0], cutoff);
    case GateKind::CubicPhase: return cubic_phase_fock(p[0], cutoff);
  }
  throw UnsupportedKindError("fock_matrix: unknown gate kind");
}

// ---------------------------------------------------------------------------
// Phase-space forms.

/// Affine action on the quadrature vector (x_1..x_N, p_1..p_N):
/// mean -> matrix * mean + displacement, covariance -> matrix * cov * matrix^T.
struct SymplecticAction {
  MatrixXd matrix;
  VectorXd displacement;
};

/// Canonical form J = [[0, I], [-I, 0]] in (x..., p...) ordering.
inline MatrixXd symplectic_form(std::size_t n_modes) {
  const auto n = static_cast<Eigen::Index>(n_modes);
  MatrixXd j = MatrixXd::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n) = MatrixXd::Identity(n, n);
  j.bottomLeftCorner(n, n) = -MatrixXd::Identity(n, n);
  return j;
}

/// Symplectic matrix of the Bogoliubov map a -> T a + V a^dag (Heisenberg
/// picture), which is also how the quadrature means of a state transform.
inline MatrixXd symplectic_from_bogoliubov(const MatrixXcd& t, const MatrixXcd& v) {
  const Eigen::Index n = t.rows();
  MatrixXd m(2 * n, 2 * n);
  m.topLeftCorner(n, n) = (t + v).real();
  m.topRightCorner(n, n) = -(t - v).imag();
  m.bottomLeftCorner(n, n) = (t + v).imag();
  m.bottomRightCorner(n, n) = (t - v).real();
  return m;
}

inline SymplecticAction symplectic_of(const GateSpec& gate, std::size_t n_modes) {
  gate.validate();
  if (!gate.is_gaussian()) {
    throw UnsupportedKindError("symplectic_of: " + to_string(gate.kind) + " is not a Gaussian gate");
  }
  for (auto m : gate.modes)
    if (m >= n_modes) throw DimensionError("symplectic_of: mode index out of range");
  const auto n = static_cast<Eigen::Index>(n_modes);
  MatrixXcd t = MatrixXcd::Identity(n, n);
  MatrixXcd v = MatrixXcd::Zero(n, n);
  VectorXd disp = VectorXd::Zero(2 * n);
  const auto& p = gate.params;
  const auto k = static_cast<Eigen::Index>(gate.modes[0]);
  switch (gate.kind) {
    case GateKind::Squeeze:
      // S^dag a S = a cosh r - e^{i phi} a^dag sinh r
      t(k, k) = std::cosh(p[0]);
      v(k, k) = -std::polar(1.0, p[1]) * std::sinh(p[0]);
      break;
    case GateKind::Displacement: {
      // D^dag a D = a + alpha; x = sqrt(hbar/2)(a + a^dag) shifts by sqrt(2 hbar) Re(alpha).
      const cplx alpha = std::polar(1.0, p[1]) * p[0];
      disp[k] = std::sqrt(2.0 * kHbar) * alpha.real();
      disp[n + k] = std::sqrt(2.0 * kHbar) * alpha.imag();
      break;
    }
    case GateKind::Rotation:
      t(k, k) = std::polar(1.0, p[0]);
      break;
    case GateKind::Beamsplitter: {
      const auto l = static_cast<Eigen::Index>(gate.modes[1]);
      const double c = std::cos(p[0]), s = std::sin(p[0]);
      t(k, k) = c;
      t(k, l) = std::polar(s, p[1]);
      t(l, k) = -std::polar(s, -p[1]);
      t(l, l) = c;
      break;
    }
    default: break;
  }
  return {symplectic_from_bogoliubov(t, v), disp};
}

// ---------------------------------------------------------------------------
// Running circuits.

/// Memoises gate matrices by (kind, params, cutoff). Not thread-safe; use one
/// cache per evaluating thread.
class GateCache {
 public:
  explicit GateCache(std::size_t capacity = 512) : capacity_(capacity) {}

  const MatrixXcd& get(const GateSpec& gate, std::size_t cutoff) {
    Key key{gate.kind, gate.params, cutoff};
    if (auto it = entries_.find(key); it != entries_.end()) return it->second;
    if (entries_.size() >= capacity_) entries_.clear();
    return entries_.emplace(std::move(key), fock_matrix(gate, cutoff)).first->second;
  }

  std::size_t size() const { return entries_.size(); }

 private:
  using Key = std::tuple<GateKind, std::vector<double>, std::size_t>;
  std::size_t capacity_;
  std::map<Key, MatrixXcd> entries_;
};

inline FockState apply_gate(const FockState& state, const GateSpec& gate, GateCache* cache = nullptr) {
  gate.validate();
  MatrixXcd local;
  const MatrixXcd* m = nullptr;
  if (cache) {
    m = &cache->get(gate, state.cutoff());
  } else {
    local = fock_matrix(gate, state.cutoff());
    m = &local;
  }
  if (GateSpec::arity(gate.kind) == 2) return apply_two_mode(state, gate.modes[0], gate.modes[1], *m);
  return apply_single_mode(state, gate.modes[0], *m);
}

inline FockState run_circuit(FockState state, std::span<const GateSpec> gates, GateCache* cache = nullptr) {
  for (const auto& g : gates) state = apply_gate(state, g, cache);
  return state;
}

}  // namespace cvmaxcut
