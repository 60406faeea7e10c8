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

// cvmaxcut: solve | oracle | embed-check | ml

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cvmaxcut/experiment.hpp"

namespace {

using namespace cvmaxcut;

/// Flag values; each is applied only when the flag was given.
struct Overrides {
  std::string config, graph, ng_kind, out_dir;
  bool use_embedding = true;
  std::size_t n_layers = 1, cutoff = 9, steps = 150;
  std::uint64_t seed = 0;
  double learning_rate = 0.25, reg_strength = 1e-3, fd_step = 1e-4, margin = 0.0;

  CLI::Option *o_use_embedding = nullptr, *o_n_layers = nullptr, *o_cutoff = nullptr, *o_steps = nullptr,
              *o_seed = nullptr, *o_lr = nullptr, *o_reg = nullptr, *o_fd = nullptr, *o_margin = nullptr;

  void add_common(CLI::App* cmd) {
    cmd->add_option("--config", config, "JSON config file")->check(CLI::ExistingFile);
    cmd->add_option("--graph,graph", graph, "graph JSON file");
    cmd->add_option("--out", out_dir, "output directory");
    o_seed = cmd->add_option("--seed", seed, "run seed");
  }

  void add_training(CLI::App* cmd) {
    cmd->add_option("--ng-kind", ng_kind, "none, kerr or cubic_phase");
    o_use_embedding = cmd->add_option("--use-embedding", use_embedding, "prepend the graph embedding (true/false)");
    o_n_layers = cmd->add_option("--n-layers", n_layers, "variational layers (1 or 2)");
    o_cutoff = cmd->add_option("--cutoff", cutoff, "Fock cutoff per mode");
    o_lr = cmd->add_option("--learning-rate", learning_rate, "SGD learning rate");
    o_reg = cmd->add_option("--reg-strength", reg_strength, "L2 regularization strength");
    o_steps = cmd->add_option("--steps", steps, "SGD steps");
    o_fd = cmd->add_option("--fd-step", fd_step, "finite-difference step");
    o_margin = cmd->add_option("--margin", margin, "embedding spectral margin in (0, 1)");
  }

  ExperimentConfig resolve() const {
    ExperimentConfig cfg = config.empty() ? ExperimentConfig{} : load_config(config);
    if (!graph.empty()) cfg.graph = graph;
    if (!ng_kind.empty()) cfg.ng_kind = parse_ng_kind(ng_kind);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    auto given = [](const CLI::Option* o) { return o != nullptr && o->count() > 0; };
    if (given(o_seed)) cfg.seed = seed;
    if (given(o_use_embedding)) cfg.use_embedding = use_embedding;
    if (given(o_n_layers)) cfg.n_layers = n_layers;
    if (given(o_cutoff)) cfg.cutoff = cutoff;
    if (given(o_lr)) cfg.learning_rate = learning_rate;
    if (given(o_reg)) cfg.reg_strength = reg_strength;
    if (given(o_steps)) cfg.steps = steps;
    if (given(o_fd)) cfg.fd_step = fd_step;
    if (given(o_margin)) cfg.embedding_margin = margin;
    return cfg;
  }
};

void print(const json& doc) { std::cout << doc.dump(2) << "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variational continuous-variable Max-Cut solver"};
  app.require_subcommand(1);

  Overrides solve_o, oracle_o, check_o, ml_o;
  auto* solve = app.add_subcommand("solve", "train the circuit on one graph");
  solve_o.add_common(solve);
  solve_o.add_training(solve);

  auto* oracle = app.add_subcommand("oracle", "exact Max-Cut by enumeration");
  oracle_o.add_common(oracle);

  auto* check = app.add_subcommand("embed-check", "verify the graph embedding");
  check_o.add_common(check);
  check_o.add_training(check);

  auto* ml = app.add_subcommand("ml", "train one circuit on a set of graphs");
  ml_o.add_common(ml);
  ml_o.add_training(ml);
  std::size_t star_nodes = 4;
  std::vector<std::string> graph_files;
  ml->add_option("--star-nodes", star_nodes, "train on the star set with this many nodes (default 4)");
  ml->add_option("--graphs", graph_files, "train on these graph files instead of the star set");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (solve->parsed()) {
      const auto cfg = solve_o.resolve();
      const json summary = cmd_solve(cfg);
      for (const auto& w : summary["warnings"]) std::cerr << "warning: " << w.get<std::string>() << "\n";
      print(summary);
    } else if (oracle->parsed()) {
      print(cmd_oracle(oracle_o.resolve()));
    } else if (check->parsed()) {
      const auto cfg = check_o.resolve();
      EmbedCheckOptions opt;
      if (check_o.o_cutoff->count() > 0) opt.cutoff = cfg.cutoff;
      if (check_o.o_margin->count() > 0) opt.margin = cfg.embedding_margin;
      print(cmd_embed_check(cfg, opt));
    } else if (ml->parsed()) {
      auto cfg = ml_o.resolve();
      std::vector<WeightedGraph> graphs;
      std::vector<std::string> labels;
      if (!graph_files.empty()) {
        for (const auto& f : graph_files) {
          graphs.push_back(load_graph(f));
          labels.push_back(f);
        }
      } else if (!cfg.graph.empty() && ml->get_option("--star-nodes")->count() == 0) {
        graphs.push_back(load_graph(cfg.graph));
        labels.push_back(cfg.graph);
      } else {
        graphs = make_star_set(star_nodes);
        for (std::size_t c = 0; c < star_nodes; ++c) labels.push_back("star" + std::to_string(star_nodes) + "_center" + std::to_string(c));
      }
      const json report = cmd_ml(cfg, graphs, labels);
      for (const auto& w : report["warnings"]) std::cerr << "warning: " << w.get<std::string>() << "\n";
      print(report);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return kExitOk;
}
