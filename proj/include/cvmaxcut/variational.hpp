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

// Layered variational circuit for Max-Cut, its distribution-based loss and a
// finite-difference SGD trainer.

#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/QR>

#include "cvmaxcut/common.hpp"
#include "cvmaxcut/embed.hpp"
#include "cvmaxcut/fock_state.hpp"
#include "cvmaxcut/gates.hpp"
#include "cvmaxcut/graph.hpp"
#include "cvmaxcut/maxcut.hpp"

namespace cvmaxcut {

enum class NonGaussianKind { None, Kerr, CubicPhase };

inline std::string to_string(NonGaussianKind k) {
  switch (k) {
    case NonGaussianKind::None: return "none";
    case NonGaussianKind::Kerr: return "kerr";
    case NonGaussianKind::CubicPhase: return "cubic_phase";
  }
  return "?";
}

/// Accepts "none", "kerr", "cubic_phase" (case-insensitive; "cubic" too).
inline NonGaussianKind parse_ng_kind(std::string s) {
  for (auto& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (s == "none") return NonGaussianKind::None;
  if (s == "kerr") return NonGaussianKind::Kerr;
  if (s == "cubic_phase" || s == "cubicphase" || s == "cubic") return NonGaussianKind::CubicPhase;
  throw ConfigError("unknown ng_kind \"" + s + "\" (expected none, kerr or cubic_phase)");
}

/// Trainable parameters. Each field holds n_layers * n_modes values, entry
/// layer * n_modes + mode. `ng` is empty when kind is None.
struct VariationalParams {
  std::size_t n_modes = 0;
  std::size_t n_layers = 1;
  NonGaussianKind ng_kind = NonGaussianKind::None;
  std::vector<double> squeeze_mag, squeeze_phase, disp_mag, disp_phase, ng;

  static constexpr const char* kFieldNames[] = {"squeeze_mag", "squeeze_phase", "disp_mag", "disp_phase", "ng"};

  std::size_t field_count() const { return ng_kind == NonGaussianKind::None ? 4 : 5; }
  std::size_t size() const { return field_count() * n_layers * n_modes; }

  std::vector<double> flatten() const {
    std::vector<double> out;
    out.reserve(size());
    for (std::size_t f = 0; f < field_count(); ++f) {
      const auto& v = field(f);
      out.insert(out.end(), v.begin(), v.end());
    }
    return out;
  }

  /// Same shape as `self`, values from `flat`.
  VariationalParams with_values(std::span<const double> flat) const {
    if (flat.size() != size()) throw DimensionError("VariationalParams: flat vector has the wrong length");
    VariationalParams p = *this;
    const std::size_t per = n_layers * n_modes;
    for (std::size_t f = 0; f < field_count(); ++f) p.field(f).assign(flat.begin() + f * per, flat.begin() + (f + 1) * per);
    return p;
  }

  /// "squeeze_mag[3]" etc., in flatten() order.
  std::vector<std::string> names() const {
    std::vector<std::string> out;
    const std::size_t per = n_layers * n_modes;
    for (std::size_t f = 0; f < field_count(); ++f)
      for (std::size_t k = 0; k < per; ++k) out.push_back(std::string(kFieldNames[f]) + "[" + std::to_string(k) + "]");
    return out;
  }

  std::vector<double>& field(std::size_t f) {
    switch (f) {
      case 0: return squeeze_mag;
      case 1: return squeeze_phase;
      case 2: return disp_mag;
      case 3: return disp_phase;
      default: return ng;
    }
  }
  const std::vector<double>& field(std::size_t f) const { return const_cast<VariationalParams*>(this)->field(f); }
};

/// Magnitudes and ng from U[-0.5, 0.5], phases from U[0, 2 pi]; drawn field
/// by field in declaration order from one mt19937_64 stream.
inline VariationalParams init_params(std::size_t n_modes, std::uint64_t seed, NonGaussianKind ng_kind,
                                     std::size_t n_layers = 1) {
  VariationalParams p{n_modes, n_layers, ng_kind, {}, {}, {}, {}, {}};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> mag(-0.5, 0.5), phase(0.0, 2.0 * kPi);
  const std::size_t per = n_modes * n_layers;
  for (std::size_t f = 0; f < p.field_count(); ++f) {
    auto& v = p.field(f);
    v.resize(per);
    const bool is_phase = f == 1 || f == 3;
    for (auto& x : v) x = is_phase ? phase(rng) : mag(rng);
  }
  return p;
}

/// Haar-random unitary: QR of a complex Ginibre matrix with R's diagonal
/// phases folded into Q.
inline MatrixXcd haar_unitary(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  const auto m = static_cast<Eigen::Index>(n);
  MatrixXcd z(m, m);
  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index i = 0; i < m; ++i) z(i, j) = cplx(g(rng), g(rng)) / std::sqrt(2.0);
  Eigen::HouseholderQR<MatrixXcd> qr(z);
  MatrixXcd q = qr.householderQ();
  const MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < m; ++k) {
    const double a = std::abs(r(k, k));
    q.col(k) *= a > 0.0 ? r(k, k) / a : cplx(1.0);
  }
  return q;
}

/// Two fixed meshes per layer, deterministic in `seed`.
inline std::vector<std::vector<GateSpec>> fixed_interferometers(std::size_t n_modes, std::size_t n_layers,
                                                                std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x1f0e5u};
  std::mt19937_64 rng(seq);
  std::vector<std::vector<GateSpec>> out;
  for (std::size_t k = 0; k < 2 * n_layers; ++k) out.push_back(interferometer_mesh(haar_unitary(n_modes, rng)));
  return out;
}

/// Largest Takagi value is 1/sqrt(2), so each embedding squeezer carries at
/// most one photon on average.
inline constexpr double kTrainingEmbeddingMargin = 0.29289321881345248;

struct CircuitConfig {
  NonGaussianKind ng_kind = NonGaussianKind::None;
  bool use_embedding = true;
  std::size_t n_layers = 1;
  std::size_t cutoff = 9;
  double embedding_margin = kTrainingEmbeddingMargin;
  /// 2 * n_layers meshes; filled from the training seed when empty.
  std::vector<std::vector<GateSpec>> fixed_interferometers;

  void validate() const {
    if (n_layers < 1 || n_layers > 2) throw ConfigError("n_layers must be 1 or 2");
    if (cutoff < 1) throw ConfigError("cutoff must be positive");
    if (!(embedding_margin > 0.0 && embedding_margin < 1.0)) throw ConfigError("embedding margin must lie in (0, 1)");
  }
};

struct TrainingConfig {
  double learning_rate = 0.25;
  double reg_strength = 1e-3;
  std::size_t steps = 150;
  std::uint64_t seed = 0;
  double fd_step = 1e-4;

  static constexpr double kLearningRateWarning = 0.5;

  void validate() const {
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) throw ConfigError("learning_rate must be positive");
    if (!(reg_strength >= 0.0) || !std::isfinite(reg_strength)) throw ConfigError("reg_strength must be nonnegative");
    if (!(fd_step > 0.0) || !std::isfinite(fd_step)) throw ConfigError("fd_step must be positive");
  }
};

/// Where a flat parameter lands: gate index in the variational block and
/// the slot within that gate's params.
struct ParamBinding {
  std::size_t gate = 0;
  std::size_t slot = 0;
};

struct VariationalBlock {
  std::vector<GateSpec> gates;
  std::vector<ParamBinding> bindings;  // indexed like VariationalParams::flatten()
  std::vector<bool> trainable;         // per gate
};

/// Per layer: mesh, squeezers, mesh, displacements, optional NG gates.
inline VariationalBlock build_variational_block(const VariationalParams& p,
                                                const std::vector<std::vector<GateSpec>>& meshes) {
  const std::size_t n = p.n_modes, per = p.n_layers * n;
  if (meshes.size() != 2 * p.n_layers) throw DimensionError("build_circuit: need two fixed meshes per layer");
  for (std::size_t f = 0; f < p.field_count(); ++f)
    if (p.field(f).size() != per) throw DimensionError("build_circuit: parameter field has the wrong length");
  VariationalBlock b;
  b.bindings.resize(p.size());
  auto bind = [&](std::size_t field, std::size_t idx, std::size_t slot) {
    b.bindings[field * per + idx] = {b.gates.size() - 1, slot};
  };
  auto push_mesh = [&](const std::vector<GateSpec>& mesh) {
    for (const auto& g : mesh) {
      b.gates.push_back(g);
      b.trainable.push_back(false);
    }
  };
  for (std::size_t l = 0; l < p.n_layers; ++l) {
    push_mesh(meshes[2 * l]);
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t i = l * n + k;
      b.gates.push_back(GateSpec::squeeze(k, p.squeeze_mag[i], p.squeeze_phase[i]));
      b.trainable.push_back(true);
      bind(0, i, 0);
      bind(1, i, 1);
    }
    push_mesh(meshes[2 * l + 1]);
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t i = l * n + k;
      b.gates.push_back(GateSpec::displacement(k, p.disp_mag[i], p.disp_phase[i]));
      b.trainable.push_back(true);
      bind(2, i, 0);
      bind(3, i, 1);
    }
    if (p.ng_kind == NonGaussianKind::None) continue;
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t i = l * n + k;
      b.gates.push_back(p.ng_kind == NonGaussianKind::Kerr ? GateSpec::kerr(k, p.ng[i])
                                                           : GateSpec::cubic_phase(k, p.ng[i]));
      b.trainable.push_back(true);
      bind(4, i, 0);
    }
  }
  return b;
}

/// Optional embedding prefix followed by the variational block.
inline std::vector<GateSpec> build_circuit(const WeightedGraph& graph, const VariationalParams& params,
                                           const CircuitConfig& cfg) {
  if (params.n_modes != graph.n()) throw DimensionError("build_circuit: parameters are not sized to the graph");
  std::vector<GateSpec> gates;
  if (cfg.use_embedding) gates = embed(graph, cfg.embedding_margin).circuit();
  const auto block = build_variational_block(params, cfg.fixed_interferometers);
  gates.insert(gates.end(), block.gates.begin(), block.gates.end());
  return gates;
}

/// Cut weight of binarize(outcome) for every Fock outcome.
inline std::vector<double> cut_table(const WeightedGraph& graph, std::size_t cutoff) {
  const std::size_t n = graph.n();
  std::size_t dim = 1;
  for (std::size_t k = 0; k < n; ++k) dim *= cutoff;
  // the cut only depends on which modes are occupied
  std::vector<double> by_mask(std::size_t{1} << n);
  for (std::size_t mask = 0; mask < by_mask.size(); ++mask) {
    CutAssignment c{std::vector<int>(n)};
    for (std::size_t k = 0; k < n; ++k) c.bits[k] = int((mask >> k) & 1u);
    by_mask[mask] = cut_weight(graph, c);
  }
  std::vector<double> out(dim);
  for (std::size_t idx = 0; idx < dim; ++idx) {
    std::size_t rest = idx, mask = 0;
    for (std::size_t k = n; k-- > 0;) {
      if (rest % cutoff != 0) mask |= std::size_t{1} << k;
      rest /= cutoff;
    }
    out[idx] = by_mask[mask];
  }
  return out;
}

/// -(sum_outcomes P * cut_weight(binarize(outcome))) / mc; leaked mass
/// counts as a zero cut.
inline double loss(const OutcomeDistribution& dist, const WeightedGraph& graph, double mc) {
  if (!(mc > 0.0)) throw DegenerateInputError("loss: max-cut value must be positive");
  if (dist.n_modes != graph.n()) throw DimensionError("loss: distribution and graph disagree on the mode count");
  const auto table = cut_table(graph, dist.cutoff);
  double total = 0.0;
  for (std::size_t i = 0; i < table.size(); ++i) total += dist.probabilities[static_cast<Eigen::Index>(i)] * table[i];
  return -total / mc;
}

inline double regularized_loss(double raw, std::span<const double> params, double reg_strength) {
  double sq = 0.0;
  for (double t : params) sq += t * t;
  return raw + reg_strength * sq;
}

namespace detail {

/// Rethrows the in-flight exception as the same category with `prefix`
/// prepended to the message.
[[noreturn]] inline void rethrow_with_context(const std::string& prefix) {
  try {
    throw;
  } catch (const SizingError& e) {
    throw SizingError(prefix + e.what());
  } catch (const DomainError& e) {
    throw DomainError(prefix + e.what());
  } catch (const DimensionError& e) {
    throw DimensionError(prefix + e.what());
  } catch (const SingularError& e) {
    throw SingularError(prefix + e.what());
  } catch (const DegenerateInputError& e) {
    throw DegenerateInputError(prefix + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(prefix + e.what());
  } catch (const UnsupportedKindError& e) {
    throw UnsupportedKindError(prefix + e.what());
  } catch (const std::exception& e) {
    throw DivergenceError(prefix + e.what());
  }
}

}  // namespace detail

using Objective = std::function<double(std::span<const double>)>;

/// Central differences, coordinate by coordinate.
inline std::vector<double> finite_diff_gradient(const Objective& f, std::span<const double> params, double h) {
  if (!(h > 0.0)) throw DomainError("finite_diff_gradient: step must be positive");
  std::vector<double> theta(params.begin(), params.end()), grad(params.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double orig = theta[i];
    try {
      theta[i] = orig + h;
      const double up = f(theta);
      theta[i] = orig - h;
      const double down = f(theta);
      grad[i] = (up - down) / (2.0 * h);
    } catch (...) {
      detail::rethrow_with_context("gradient coordinate " + std::to_string(i) + ": ");
    }
    theta[i] = orig;
  }
  return grad;
}

/// theta <- theta - lr (grad + 2 reg theta).
inline std::vector<double> sgd_step(std::span<const double> params, std::span<const double> grad, double lr,
                                    double reg_strength, std::size_t step_index = 0) {
  if (params.size() != grad.size()) throw DimensionError("sgd_step: parameter and gradient sizes differ");
  std::vector<double> out(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!std::isfinite(grad[i])) {
      throw DivergenceError("step " + std::to_string(step_index) + ": non-finite gradient in coordinate " +
                            std::to_string(i));
    }
    out[i] = params[i] - lr * (grad[i] + 2.0 * reg_strength * params[i]);
  }
  return out;
}

/// Evaluates the summed loss of one parameterised block over a fixed set of
/// graphs. Embedded input states, cut tables and fixed-gate matrices are
/// prepared once.
class CircuitEvaluator {
 public:
  CircuitEvaluator(const std::vector<WeightedGraph>& graphs, const CircuitConfig& cfg, const VariationalParams& shape,
                   MemoryBudget budget = {})
      : cfg_(cfg), shape_(shape) {
    cfg_.validate();
    if (graphs.empty()) throw ConfigError("no graphs to train on");
    const std::size_t n = graphs.front().n();
    for (const auto& g : graphs)
      if (g.n() != n) throw DimensionError("all graphs must have the same node count");
    if (shape.n_modes != n) throw DimensionError("parameters are not sized to the graphs");
    const FockState vacuum = new_vacuum(n, cfg_.cutoff, budget);
    if (n > 1) {
      // dense two-mode gate matrices are cutoff^4 entries
      bool overflow = false;
      const auto entries = detail::checked_pow(cfg_.cutoff, 4, overflow);
      if (overflow || entries > budget.max_bytes / sizeof(cplx))
        throw SizingError("two-mode gate matrix at cutoff " + std::to_string(cfg_.cutoff) +
                          " exceeds the memory budget of " + std::to_string(budget.max_bytes) + " bytes");
    }
    template_ =build_variational_block(shape, cfg_.fixed_interferometers);
    fixed_.resize(template_.gates.size());
    for (std::size_t k = 0; k < template_.gates.size(); ++k)
      if (!template_.trainable[k]) fixed_[k] = fock_matrix(template_.gates[k], cfg_.cutoff);
    for (const auto& g : graphs) {
      const double mc = brute_force_maxcut(g).mc;
      if (!(mc > 0.0)) throw DegenerateInputError("graph has no positive cut");
      FockState s = vacuum;
      if (cfg_.use_embedding) {
        const auto prefix = embed(g, cfg_.embedding_margin).circuit();
        GateCache cache;
        s = run_circuit(std::move(s), prefix, &cache);
      }
      targets_.push_back({std::move(s), cut_table(g, cfg_.cutoff), mc});
    }
  }

  std::size_t graph_count() const { return targets_.size(); }
  std::size_t param_count() const { return shape_.size(); }
  const VariationalBlock& block_template() const { return template_; }
  double max_cut(std::size_t g) const { return targets_.at(g).mc; }

  /// Per-graph raw losses.
  std::vector<double> losses(std::span<const double> flat) const {
    const auto gates = gates_for(flat);
    std::vector<double> out;
    for (const auto& t : targets_) out.push_back(loss_of(run_from(t.input, gates, 0), t));
    return out;
  }

  double total_loss(std::span<const double> flat) const {
    double s = 0.0;
    for (double l : losses(flat)) s += l;
    return s;
  }

  std::vector<OutcomeDistribution> distributions(std::span<const double> flat) const {
    const auto gates = gates_for(flat);
    std::vector<OutcomeDistribution> out;
    for (const auto& t : targets_) out.push_back(photon_count_distribution(run_from(t.input, gates, 0)));
    return out;
  }

  struct LossAndGradient {
    double loss = 0.0;
    std::vector<double> grad;
  };

  /// Summed loss and its central-difference gradient. Perturbed circuits
  /// restart from the stored state just before the affected gate, which
  /// gives the same numbers as re-running the whole circuit.
  LossAndGradient loss_and_gradient(std::span<const double> flat, double h) const {
    if (!(h > 0.0)) throw DomainError("finite_diff_gradient: step must be positive");
    const auto gates = gates_for(flat);
    LossAndGradient out{0.0, std::vector<double>(flat.size(), 0.0)};
    for (const auto& t : targets_) {
      std::vector<FockState> before;
      before.reserve(gates.size());
      FockState s = t.input;
      for (std::size_t k = 0; k < gates.size(); ++k) {
        before.push_back(s);
        s = apply(s, gates, k);
      }
      out.loss += loss_of(s, t);
      for (std::size_t i = 0; i < flat.size(); ++i) {
        const auto [gate, slot] = template_.bindings[i];
        try {
          auto shifted = gates;
          shifted[gate].params[slot] = flat[i] + h;
          const double up = loss_of(run_from(before[gate], shifted, gate), t);
          shifted[gate].params[slot] = flat[i] - h;
          const double down = loss_of(run_from(before[gate], shifted, gate), t);
          out.grad[i] += (up - down) / (2.0 * h);
        } catch (...) {
          detail::rethrow_with_context("gradient coordinate " + std::to_string(i) + ": ");
        }
      }
    }
    return out;
  }

 private:
  struct Target {
    FockState input;
    std::vector<double> table;
    double mc = 0.0;
  };

  std::vector<GateSpec> gates_for(std::span<const double> flat) const {
    if (flat.size() != shape_.size()) throw DimensionError("parameter vector has the wrong length");
    auto gates = template_.gates;
    for (std::size_t i = 0; i < flat.size(); ++i) gates[template_.bindings[i].gate].params[template_.bindings[i].slot] = flat[i];
    return gates;
  }

  FockState apply(const FockState& s, const std::vector<GateSpec>& gates, std::size_t k) const {
    const GateSpec& g = gates[k];
    if (!template_.trainable[k]) {
      if (GateSpec::arity(g.kind) == 2) return apply_two_mode(s, g.modes[0], g.modes[1], fixed_[k]);
      return apply_single_mode(s, g.modes[0], fixed_[k]);
    }
    return apply_gate(s, g);
  }

  FockState run_from(FockState s, const std::vector<GateSpec>& gates, std::size_t first) const {
    for (std::size_t k = first; k < gates.size(); ++k) s = apply(s, gates, k);
    return s;
  }

  static double loss_of(const FockState& s, const Target& t) {
    const VectorXcd& a = s.amplitudes();
    double total = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) total += std::norm(a[i]) * t.table[static_cast<std::size_t>(i)];
    return -total / t.mc;
  }

  CircuitConfig cfg_;
  VariationalParams shape_;
  VariationalBlock template_;
  std::vector<MatrixXcd> fixed_;
  std::vector<Target> targets_;
};

struct GraphOutcome {
  OutcomeDistribution distribution;
  std::vector<std::size_t> best_counts;
  double best_probability = 0.0;
  CutAssignment best_assignment;
  double loss = 0.0;
  double mc = 0.0;
};

struct TrainingTrace {
  std::vector<double> loss;              // summed raw loss, steps + 1 entries
  std::vector<double> regularized_loss;  // same length
  std::vector<std::vector<double>> params;
  std::vector<std::string> param_names;
  VariationalParams final_params;
  std::vector<GraphOutcome> final_outcomes;  // one per graph
  std::vector<std::string> warnings;
  double elapsed_seconds = 0.0;
};

/// Sum of per-graph losses, one shared parameter update per step. Fixed
/// meshes come from the training seed unless the config already has them.
inline TrainingTrace train_multi(const std::vector<WeightedGraph>& graphs, CircuitConfig circuit,
                                 const TrainingConfig& training) {
  const auto started = std::chrono::steady_clock::now();
  training.validate();
  circuit.validate();
  if (graphs.empty()) throw ConfigError("no graphs to train on");
  const std::size_t n = graphs.front().n();
  if (circuit.fixed_interferometers.empty())
    circuit.fixed_interferometers = fixed_interferometers(n, circuit.n_layers, training.seed);

  TrainingTrace trace;
  if (training.learning_rate > TrainingConfig::kLearningRateWarning)
    trace.warnings.push_back("learning_rate above 0.5 is known to be unstable");

  const VariationalParams init = init_params(n, training.seed, circuit.ng_kind, circuit.n_layers);
  const CircuitEvaluator eval(graphs, circuit, init);
  trace.param_names = init.names();
  std::vector<double> theta = init.flatten();

  for (std::size_t step = 0;; ++step) {
    const bool last = step == training.steps;
    double raw = 0.0;
    std::vector<double> grad;
    try {
      if (last) {
        raw = eval.total_loss(theta);
      } else {
        auto lg = eval.loss_and_gradient(theta, training.fd_step);
        raw = lg.loss;
        grad = std::move(lg.grad);
      }
    } catch (const SizingError&) {
      throw;
    } catch (const Error& e) {
      throw DivergenceError("step " + std::to_string(step) + ": " + e.what());
    }
    if (!std::isfinite(raw)) throw DivergenceError("step " + std::to_string(step) + ": loss is not finite");
    trace.loss.push_back(raw);
    trace.regularized_loss.push_back(regularized_loss(raw, theta, training.reg_strength));
    trace.params.push_back(theta);
    if (last) break;
    theta = sgd_step(theta, grad, training.learning_rate, training.reg_strength, step);
  }

  trace.final_params = init.with_values(theta);
  const auto dists = eval.distributions(theta);
  const auto losses = eval.losses(theta);
  for (std::size_t g = 0; g < graphs.size(); ++g) {
    GraphOutcome o{dists[g], {}, 0.0, {}, losses[g], eval.max_cut(g)};
    const std::size_t idx = o.distribution.most_probable_index();
    o.best_counts = o.distribution.counts_of(idx);
    o.best_probability = o.distribution.probabilities[static_cast<Eigen::Index>(idx)];
    o.best_assignment = binarize(o.best_counts);
    trace.final_outcomes.push_back(std::move(o));
  }
  trace.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return trace;
}

inline TrainingTrace train(const WeightedGraph& graph, const CircuitConfig& circuit, const TrainingConfig& training) {
  return train_multi({graph}, circuit, training);
}

/// n unit-weight stars on n nodes, centre k for the k-th graph.
inline std::vector<WeightedGraph> make_star_set(std::size_t n_nodes) {
  if (n_nodes < 3) throw DomainError("make_star_set: need at least 3 nodes");
  std::vector<WeightedGraph> out;
  for (std::size_t c = 0; c < n_nodes; ++c) {
    std::vector<Edge> edges;
    for (std::size_t k = 0; k < n_nodes; ++k)
      if (k != c) edges.push_back({c, k, 1.0});
    out.push_back(WeightedGraph::from_edges(n_nodes, edges));
  }
  return out;
}

}  // namespace cvmaxcut
