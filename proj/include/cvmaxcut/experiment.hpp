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

// Experiment driver behind the command-line tool: config files, the four
// commands and their output files.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cvmaxcut/common.hpp"
#include "cvmaxcut/embed.hpp"
#include "cvmaxcut/gaussian.hpp"
#include "cvmaxcut/graph.hpp"
#include "cvmaxcut/maxcut.hpp"
#include "cvmaxcut/variational.hpp"

namespace cvmaxcut {

namespace fs = std::filesystem;
using nlohmann::json;

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitNumerical = 3, kExitSizeGuard = 4 };

/// Maps a library exception onto the process exit status.
inline int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const SizingError*>(&e)) return kExitSizeGuard;
  if (dynamic_cast<const DivergenceError*>(&e) || dynamic_cast<const DomainError*>(&e) ||
      dynamic_cast<const SingularError*>(&e))
    return kExitNumerical;
  return kExitConfig;
}

struct ExperimentConfig {
  std::string graph;
  NonGaussianKind ng_kind = NonGaussianKind::None;
  bool use_embedding = true;
  std::size_t n_layers = 1;
  std::size_t cutoff = 9;
  double learning_rate = 0.25;
  double reg_strength = 1e-3;
  std::size_t steps = 150;
  std::uint64_t seed = 0;
  double fd_step = 1e-4;
  std::string out_dir = "out";
  /// Not a config-file key; set with --margin.
  double embedding_margin = kTrainingEmbeddingMargin;

  static constexpr const char* kKeys[] = {"graph",        "ng_kind", "use_embedding", "n_layers",
                                          "cutoff",       "learning_rate", "reg_strength", "steps",
                                          "seed",         "fd_step", "out_dir"};

  CircuitConfig circuit() const {
    CircuitConfig c;
    c.ng_kind = ng_kind;
    c.use_embedding = use_embedding;
    c.n_layers = n_layers;
    c.cutoff = cutoff;
    c.embedding_margin = embedding_margin;
    return c;
  }

  TrainingConfig training() const { return {learning_rate, reg_strength, steps, seed, fd_step}; }

  void validate() const {
    circuit().validate();
    training().validate();
  }

  json to_json() const {
    return {{"graph", graph},
            {"ng_kind", to_string(ng_kind)},
            {"use_embedding", use_embedding},
            {"n_layers", n_layers},
            {"cutoff", cutoff},
            {"learning_rate", learning_rate},
            {"reg_strength", reg_strength},
            {"steps", steps},
            {"seed", seed},
            {"fd_step", fd_step},
            {"out_dir", out_dir}};
  }
};

namespace detail {

template <class T>
T field_as(const json& doc, const char* key, const std::string& where) {
  const json& v = doc.at(key);
  const std::string label = where + ": field \"" + key + "\"";
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) throw ConfigError(label + " must be a boolean");
    return v.get<bool>();
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) throw ConfigError(label + " must be a string");
    return v.get<std::string>();
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer() || v.get<long long>() < 0) throw ConfigError(label + " must be a nonnegative integer");
    return static_cast<T>(v.get<unsigned long long>());
  } else {
    if (!v.is_number()) throw ConfigError(label + " must be a number");
    return v.get<double>();
  }
}

}  // namespace detail

/// Applies the keys present in `doc` on top of `cfg`. Relative graph paths
/// are taken relative to `base_dir`.
inline void apply_config_json(ExperimentConfig& cfg, const json& doc, const std::string& where,
                              const fs::path& base_dir = {}) {
  if (!doc.is_object()) throw ConfigError(where + ": expected a JSON object");
  for (const auto& [key, _] : doc.items()) {
    bool known = false;
    for (const char* k : ExperimentConfig::kKeys) known = known || key == k;
    if (!known) throw ConfigError(where + ": unknown field \"" + key + "\"");
  }
  if (doc.contains("graph")) {
    fs::path p = detail::field_as<std::string>(doc, "graph", where);
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    cfg.graph = p.lexically_normal().string();
  }
  if (doc.contains("ng_kind")) {
    try {
      cfg.ng_kind = parse_ng_kind(detail::field_as<std::string>(doc, "ng_kind", where));
    } catch (const ConfigError& e) {
      throw ConfigError(where + ": field \"ng_kind\": " + e.what());
    }
  }
  if (doc.contains("use_embedding")) cfg.use_embedding = detail::field_as<bool>(doc, "use_embedding", where);
  if (doc.contains("n_layers")) cfg.n_layers = detail::field_as<std::size_t>(doc, "n_layers", where);
  if (doc.contains("cutoff")) cfg.cutoff = detail::field_as<std::size_t>(doc, "cutoff", where);
  if (doc.contains("learning_rate")) cfg.learning_rate = detail::field_as<double>(doc, "learning_rate", where);
  if (doc.contains("reg_strength")) cfg.reg_strength = detail::field_as<double>(doc, "reg_strength", where);
  if (doc.contains("steps")) cfg.steps = detail::field_as<std::size_t>(doc, "steps", where);
  if (doc.contains("seed")) cfg.seed = detail::field_as<std::uint64_t>(doc, "seed", where);
  if (doc.contains("fd_step")) cfg.fd_step = detail::field_as<double>(doc, "fd_step", where);
  if (doc.contains("out_dir")) cfg.out_dir = detail::field_as<std::string>(doc, "out_dir", where);
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  ExperimentConfig cfg;
  apply_config_json(cfg, doc, path, fs::path(path).parent_path());
  return cfg;
}

// Output helpers.

inline void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw ConfigError("cannot create output directory " + dir);
}

inline void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
  if (!out) throw ConfigError("write failed for " + path.string());
}

inline void write_json(const fs::path& path, const json& doc) { write_text(path, doc.dump(2) + "\n"); }

inline std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

inline std::string outcome_key(const std::vector<std::size_t>& counts) {
  std::string s;
  for (std::size_t k = 0; k < counts.size(); ++k) s += (k ? "," : "") + std::to_string(counts[k]);
  return s;
}

inline json distribution_json(const OutcomeDistribution& d) {
  json probs = json::object();
  for (Eigen::Index i = 0; i < d.probabilities.size(); ++i)
    probs[outcome_key(d.counts_of(static_cast<std::size_t>(i)))] = d.probabilities[i];
  return {{"n_modes", d.n_modes}, {"cutoff", d.cutoff}, {"probabilities", probs}, {"leakage", d.leakage}};
}

inline json cuts_json(const std::vector<CutAssignment>& cuts) {
  json out = json::array();
  for (const auto& c : cuts) out.push_back(c.bits);
  return out;
}

inline json oracle_json(const MaxCutResult& r) { return {{"mc", r.mc}, {"maximizers", cuts_json(r.maximizers)}}; }

inline std::string loss_csv(const TrainingTrace& t) {
  std::string s = "step,loss,regularized_loss\n";
  for (std::size_t k = 0; k < t.loss.size(); ++k)
    s += std::to_string(k) + "," + format_double(t.loss[k]) + "," + format_double(t.regularized_loss[k]) + "\n";
  return s;
}

inline std::string params_csv(const TrainingTrace& t) {
  std::string s = "step,name,value\n";
  for (std::size_t k = 0; k < t.params.size(); ++k)
    for (std::size_t i = 0; i < t.params[k].size(); ++i)
      s += std::to_string(k) + "," + t.param_names[i] + "," + format_double(t.params[k][i]) + "\n";
  return s;
}

inline json outcome_json(const GraphOutcome& o, const WeightedGraph& g, const MaxCutResult& oracle) {
  const double best_cut = cut_weight(g, o.best_assignment);
  return {{"best_counts", o.best_counts},
          {"best_assignment", o.best_assignment.bits},
          {"best_probability", o.best_probability},
          {"best_cut_weight", best_cut},
          {"best_ratio", best_cut / oracle.mc},
          {"best_is_optimal", is_optimal(oracle, o.best_assignment)},
          {"mc", oracle.mc},
          {"maximizers", cuts_json(oracle.maximizers)},
          {"final_loss", o.loss},
          {"expected_cut", -o.loss * oracle.mc},
          {"achieved_ratio", -o.loss},
          {"leakage", o.distribution.leakage}};
}

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

inline json run_metadata(const TrainingTrace& t) {
  return {{"timestamp", utc_timestamp()}, {"elapsed_seconds", t.elapsed_seconds}};
}

inline json manifest_json(const std::string& command, const ExperimentConfig& cfg, const json& extra = json::object()) {
  json m = {{"command", command}, {"config", cfg.to_json()},
            {"embedding_margin", cfg.circuit().embedding_margin}};
  for (const auto& [k, v] : extra.items()) m[k] = v;
  return m;
}

// Commands. Each returns the JSON it also writes.

inline json cmd_solve(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.graph.empty()) throw ConfigError("no graph given (set \"graph\" or pass --graph)");
  const WeightedGraph g = load_graph(cfg.graph);
  const MaxCutResult oracle = brute_force_maxcut(g);
  const TrainingTrace t = train(g, cfg.circuit(), cfg.training());
  ensure_dir(cfg.out_dir);
  const fs::path dir = cfg.out_dir;
  write_text(dir / "loss.csv", loss_csv(t));
  write_text(dir / "params.csv", params_csv(t));
  write_json(dir / "distribution.json", distribution_json(t.final_outcomes.front().distribution));
  json summary = outcome_json(t.final_outcomes.front(), g, oracle);
  summary["initial_loss"] = t.loss.front();
  summary["warnings"] = t.warnings;
  summary["metadata"] = run_metadata(t);
  write_json(dir / "summary.json", summary);
  write_json(dir / "manifest.json", manifest_json("solve", cfg));
  return summary;
}

inline json cmd_oracle(const ExperimentConfig& cfg) {
  if (cfg.graph.empty()) throw ConfigError("no graph given (set \"graph\" or pass --graph)");
  const WeightedGraph g = load_graph(cfg.graph);
  json out = oracle_json(brute_force_maxcut(g));
  out["n"] = g.n();
  ensure_dir(cfg.out_dir);
  write_json(fs::path(cfg.out_dir) / "oracle.json", out);
  return out;
}

inline constexpr double kMomentTolerance = 1e-4;

struct EmbedCheckOptions {
  std::size_t cutoff = 17;
  double margin = kDefaultEmbeddingMargin;
};

inline json embed_check_report(const WeightedGraph& g, const EmbedCheckOptions& opt, MemoryBudget budget = {}) {
  const EmbeddingProgram prog = embed(g, opt.margin);
  const MatrixXd b = g.adjacency() / prog.scale;
  const auto& tk = prog.takagi;
  const auto n = static_cast<Eigen::Index>(g.n());
  const double recon = (tk.u * tk.d.cast<cplx>().asDiagonal() * tk.u.transpose() - b.cast<cplx>()).norm();
  const double u_unit = (tk.u.adjoint() * tk.u - MatrixXcd::Identity(n, n)).norm();
  const MatrixXcd t = transfer_matrix(prog.mesh, g.n());
  const double mesh_err = (t - tk.u).norm();
  const double mesh_unit = (t.adjoint() * t - MatrixXcd::Identity(n, n)).norm();

  const auto gates = prog.circuit();
  GateCache cache;
  const FockState s = run_circuit(new_vacuum(g.n(), opt.cutoff, budget), gates, &cache);
  const GaussianMoments fock = moments_from_fock(s);
  const GaussianMoments gauss = propagate(vacuum_moments(g.n()), std::span<const GateSpec>(gates));
  const double dmean = (fock.mean - gauss.mean).cwiseAbs().maxCoeff();
  const double dcov = (fock.covariance - gauss.covariance).cwiseAbs().maxCoeff();

  auto validity_json = [](const CovarianceValidity& v) {
    return json{{"valid", v.valid()},
                {"positive_definite", v.positive_definite},
                {"uncertainty_ok", v.uncertainty_ok},
                {"pure", v.pure},
                {"min_eigenvalue", v.min_eigenvalue},
                {"min_uncertainty_eigenvalue", v.min_uncertainty_eigenvalue},
                {"purity_residual", v.purity_residual}};
  };
  json route;
  try {
    const AdjacencyCovariance cov = covariance_from_adjacency(b);
    route["validity"] = validity_json(cov.validity);
    if (!cov.validity.valid()) {
      const ScalingSearch search = search_scaling(b);
      json sj = {{"points_scanned", search.points_scanned}, {"grid_size", search.grid_size},
                 {"message", search.message}};
      if (search.found) {
        sj["c"] = search.found->c;
        sj["d"] = search.found->d;
      }
      route["scaling_search"] = sj;
    }
  } catch (const SingularError& e) {
    route["error"] = e.what();
  }

  return {{"n", g.n()},
          {"margin", opt.margin},
          {"scale", prog.scale},
          {"takagi_values", std::vector<double>(tk.d.data(), tk.d.data() + tk.d.size())},
          {"squeezings", prog.squeezings},
          {"reconstruction_error", recon},
          {"takagi_unitarity_error", u_unit},
          {"mesh_gate_count", prog.mesh.size()},
          {"mesh_reconstruction_error", mesh_err},
          {"mesh_unitarity_error", mesh_unit},
          {"cutoff", opt.cutoff},
          {"fock_leakage", 1.0 - s.norm_squared()},
          {"mean_discrepancy", dmean},
          {"covariance_discrepancy", dcov},
          {"moment_discrepancy", std::max(dmean, dcov)},
          {"moment_tolerance", kMomentTolerance},
          {"moments_agree", std::max(dmean, dcov) <= kMomentTolerance},
          {"covariance_route", route}};
}

inline json cmd_embed_check(const ExperimentConfig& cfg, const EmbedCheckOptions& opt) {
  if (cfg.graph.empty()) throw ConfigError("no graph given (set \"graph\" or pass --graph)");
  const WeightedGraph g = load_graph(cfg.graph);
  json out = embed_check_report(g, opt);
  ensure_dir(cfg.out_dir);
  write_json(fs::path(cfg.out_dir) / "embed_check.json", out);
  return out;
}

/// Trains one circuit on a graph set and reports, per graph, the final most
/// probable assignment against that graph's optimum.
inline json cmd_ml(const ExperimentConfig& cfg, const std::vector<WeightedGraph>& graphs,
                   const std::vector<std::string>& labels) {
  cfg.validate();
  const TrainingTrace t = train_multi(graphs, cfg.circuit(), cfg.training());
  ensure_dir(cfg.out_dir);
  const fs::path dir = cfg.out_dir;
  write_text(dir / "loss.csv", loss_csv(t));
  write_text(dir / "params.csv", params_csv(t));
  json per_graph = json::array();
  bool same = true;
  for (std::size_t k = 0; k < graphs.size(); ++k) {
    json o = outcome_json(t.final_outcomes[k], graphs[k], brute_force_maxcut(graphs[k]));
    o["label"] = labels.at(k);
    o["graph"] = graph_to_json(graphs[k]);
    per_graph.push_back(o);
    same = same && t.final_outcomes[k].best_assignment == t.final_outcomes.front().best_assignment;
  }
  json report = {{"graphs", per_graph},
                 {"initial_total_loss", t.loss.front()},
                 {"final_total_loss", t.loss.back()},
                 {"converged", t.loss.back() < t.loss.front()},
                 {"identical_output", same},
                 {"warnings", t.warnings},
                 {"metadata", run_metadata(t)}};
  write_json(dir / "report.json", report);
  write_json(dir / "manifest.json", manifest_json("ml", cfg, {{"graphs", labels}}));
  return report;
}

}  // namespace cvmaxcut
