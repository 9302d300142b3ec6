// Copyright 2026 The wavecluster Authors
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

#include "wavecluster/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "wavecluster/analog.hpp"
#include "wavecluster/cluster.hpp"
#include "wavecluster/datasets.hpp"
#include "wavecluster/error.hpp"
#include "wavecluster/operators.hpp"
#include "wavecluster/random.hpp"
#include "wavecluster/wave.hpp"

#ifndef WAVECLUSTER_VERSION
#define WAVECLUSTER_VERSION "unknown"
#endif

namespace wavecluster {

std::string toolkit_version() { return WAVECLUSTER_VERSION; }

nlohmann::json RunManifest::to_json() const {
  return {{"command", command}, {"config", config},         {"dataset", dataset},
          {"seed", seed},       {"version", version},       {"rng", rng},
          {"duration_s", duration_s}, {"initial_state", initial_state}};
}

namespace {

struct Options {
  std::string input;
  bool karate = false;
  std::string backend = "discrete";
  std::string mvm = "direct";
  double c = kDefaultWaveSpeed;
  int k = 1;
  long tmax = 0;  // 0: 4n
  std::uint64_t seed = 0;
  double svd_tol = 1e-8;
  double epsilon = 1e-8;
  std::string output;
  std::string format;
  std::string manifest;
  std::string eigvec_csv;
  // gen
  bool planted = false;
  std::size_t n = 80;
  std::size_t clusters = 4;
  double p_in = 0.5;
  double p_out = 0.02;
  std::string labels;
  // bench
  int trials = 100;
};

void add_graph_options(CLI::App* sub, Options& o) {
  sub->add_option("--input", o.input, "Edge list: one 'i j [w]' per line");
  sub->add_flag("--karate", o.karate, "Use the built-in karate club graph");
}

void add_dynamics_options(CLI::App* sub, Options& o) {
  sub->add_option("--backend", o.backend, "Dynamics backend")
      ->check(CLI::IsMember({"discrete", "schrodinger", "closed-form", "closed_form"}));
  sub->add_option("--mvm", o.mvm, "Matrix-vector product of the discrete backend")
      ->check(CLI::IsMember({"direct", "analog"}));
  sub->add_option("--c", o.c, "Wave speed, 0 < c < sqrt 2");
  sub->add_option("--tmax", o.tmax, "Samples per node (default 4n)")->check(CLI::PositiveNumber);
  sub->add_option("--seed", o.seed, "Seed of the random initial state");
  sub->add_option("--epsilon", o.epsilon, "Analog settling tolerance")->check(CLI::PositiveNumber);
}

void add_output_options(CLI::App* sub, Options& o) {
  sub->add_option("--output", o.output, "Output file (default stdout)");
  sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
}

Graph load_input(const Options& o, std::string& dataset) {
  if (o.karate && !o.input.empty()) throw InputError("--karate and --input are mutually exclusive");
  if (o.karate) {
    dataset = "builtin:karate";
    return load_karate();
  }
  if (o.input.empty()) throw InputError("no input graph: pass --input PATH or --karate");
  dataset = o.input;
  return load_graph_file(o.input);
}

ClusterConfig make_config(const Options& o) {
  ClusterConfig cfg;
  cfg.c = o.c;
  cfg.k = o.k;
  if (o.tmax > 0) cfg.t_max = o.tmax;
  cfg.backend = parse_backend(o.backend);
  cfg.mvm.kind = parse_mvm(o.mvm);
  cfg.mvm.analog.epsilon = o.epsilon;
  cfg.seed = o.seed;
  cfg.svd_tol = o.svd_tol;
  return cfg;
}

nlohmann::json config_json(const ClusterConfig& cfg, std::size_t n) {
  return {{"c", cfg.c},
          {"k", cfg.k},
          {"t_max", cfg.resolved_t_max(n)},
          {"backend", to_string(cfg.backend)},
          {"mvm", to_string(cfg.mvm.kind)},
          {"epsilon", cfg.mvm.analog.epsilon},
          {"seed", cfg.seed},
          {"svd_tol", cfg.svd_tol}};
}

void emit(const Options& o, const std::string& text, std::ostream& out) {
  if (o.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(o.output);
  if (!file) throw InputError(fmt::format("cannot write '{}'", o.output));
  file << text;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream file(path);
  if (!file) throw InputError(fmt::format("cannot write '{}'", path));
  file << text;
}

std::string joined_command(int argc, const char* const* argv) {
  std::string out;
  for (int i = 0; i < argc; ++i) {
    if (i > 0) out += ' ';
    out += argv[i];
  }
  return out;
}

nlohmann::json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

void write_manifest(const Options& o, RunManifest manifest, std::chrono::steady_clock::time_point start) {
  if (o.manifest.empty()) return;
  manifest.rng = Rng::kName;
  manifest.seed = o.seed;
  manifest.duration_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_file(o.manifest, manifest.to_json().dump(2) + "\n");
}

void run_cluster(const Options& o, const std::string& command, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  std::string dataset;
  const Graph g = load_input(o, dataset);
  const ClusterConfig cfg = make_config(o);
  const WaveDmdRun run = run_wave_dmd(g, cfg);
  const ClusterAssignment oracle = classical_cluster(g, cfg.k);
  const double agree = agreement(run.assignment, oracle);

  if (o.format == "csv") {
    std::string text = "node,cluster\n";
    for (std::size_t i = 0; i < g.n_nodes(); ++i) text += fmt::format("{},{}\n", i, run.assignment.cluster_number[i]);
    emit(o, text, out);
  } else {
    nlohmann::json doc = cluster_result_json(cfg, run.assignment, agree);
    emit(o, doc.dump(2) + "\n", out);
  }

  if (!o.eigvec_csv.empty()) {
    // Estimated coefficients rescaled to the oracle's norm per mode.
    std::string text = "node,mode,estimated,oracle\n";
    for (int j = 0; j < cfg.k; ++j) {
      const Eigen::VectorXd est = run.assignment.coefficients.col(j);
      const Eigen::VectorXd ref = oracle.coefficients.col(j);
      const double scale = est.norm() > 0.0 ? ref.norm() / est.norm() : 0.0;
      for (Eigen::Index i = 0; i < est.size(); ++i) {
        text += fmt::format("{},{},{},{}\n", i, j + 2, est(i) * scale, ref(i));
      }
    }
    write_file(o.eigvec_csv, text);
  }

  RunManifest manifest;
  manifest.command = command;
  manifest.config = config_json(cfg, g.n_nodes());
  manifest.dataset = dataset;
  manifest.initial_state = vector_json(run.initial);
  write_manifest(o, std::move(manifest), start);
}

void run_spectrum(const Options& o, const std::string& command, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  std::string dataset;
  const Graph g = load_input(o, dataset);
  const ClusterConfig cfg = make_config(o);
  const WaveDmdRun run = run_wave_dmd(g, cfg);
  const GraphOperators ops = build_operators(g, cfg.c);
  const Spectrum full = classical_spectrum(ops, static_cast<Eigen::Index>(g.n_nodes()));
  const std::vector<double> oracle(full.eigenvalues.data(), full.eigenvalues.data() + full.eigenvalues.size());
  const std::vector<double>& recovered = run.assignment.lambda;

  if (o.format == "csv") {
    std::string text = "index,recovered,oracle\n";
    for (std::size_t j = 0; j < recovered.size(); ++j) text += fmt::format("{},{},{}\n", j + 1, recovered[j], oracle[j]);
    emit(o, text, out);
  } else {
    nlohmann::json per_node = nlohmann::json::array();
    for (const DmdResult& r : run.per_node) per_node.push_back(r.lambda_recovered);
    const int k_max = std::min<int>(8, static_cast<int>(g.n_nodes()) - 1);
    nlohmann::json doc = {{"n", g.n_nodes()},
                          {"k", cfg.k},
                          {"seed", cfg.seed},
                          {"backend", to_string(cfg.backend)},
                          {"recovered", recovered},
                          {"oracle", std::vector<double>(oracle.begin(), oracle.begin() + recovered.size())},
                          {"suggested_k", oracle.size() >= 3 ? spectral_gap_k(oracle, k_max) : 1},
                          {"per_node", std::move(per_node)}};
    emit(o, doc.dump(2) + "\n", out);
  }

  RunManifest manifest;
  manifest.command = command;
  manifest.config = config_json(cfg, g.n_nodes());
  manifest.dataset = dataset;
  manifest.initial_state = vector_json(run.initial);
  write_manifest(o, std::move(manifest), start);
}

void run_simulate(const Options& o, const std::string& command, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  std::string dataset;
  const Graph g = load_input(o, dataset);
  const ClusterConfig cfg = make_config(o);
  const auto n = static_cast<Eigen::Index>(g.n_nodes());
  const Eigen::Index t_max = o.tmax > 0 ? o.tmax : 4 * n;
  const GraphOperators ops = build_operators(g, cfg.c);
  const Eigen::VectorXd u0 = random_initial_state(n, cfg.seed);
  WaveTrajectory traj;
  switch (cfg.backend) {
    case Backend::discrete:
      traj = simulate_discrete(ops, u0, t_max, cfg.mvm);
      break;
    case Backend::closed_form:
      traj = closed_form_wave(ops, u0, t_max);
      break;
    case Backend::schrodinger:
      traj = simulate_schrodinger(ops, u0, t_max, cfg.schrodinger);
      break;
  }
  traj.seed = cfg.seed;
  emit(o, o.format == "json" ? to_json(traj).dump(2) + "\n" : trajectory_csv(traj), out);

  RunManifest manifest;
  manifest.command = command;
  manifest.config = config_json(cfg, g.n_nodes());
  manifest.config["t_max"] = t_max;
  manifest.dataset = dataset;
  manifest.initial_state = vector_json(u0);
  write_manifest(o, std::move(manifest), start);
}

void run_bench(const Options& o, std::ostream& out) {
  if (o.n < 1) throw InputError("--n must be positive");
  if (o.trials < 1) throw InputError("--trials must be positive");
  AnalogConfig cfg;
  cfg.epsilon = o.epsilon;
  Rng rng(o.seed);
  const auto n = static_cast<Eigen::Index>(o.n);
  std::string text = "trial,n,epsilon,settle_time,max_abs_error\n";
  for (int trial = 0; trial < o.trials; ++trial) {
    Eigen::MatrixXd a(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = 0; i < n; ++i) a(i, j) = rng.uniform();
    }
    const Eigen::VectorXd y = rng.uniform_vector(n);
    const SettleResult settled = settle_mvm(a, y, cfg);
    const double err = (settled.x - a * y).cwiseAbs().maxCoeff();
    text += fmt::format("{},{},{},{},{}\n", trial, n, cfg.epsilon, settled.settle_time, err);
  }
  emit(o, text, out);
}

void run_gen(const Options& o, std::ostream& out) {
  if (o.planted == o.karate) throw InputError("gen needs exactly one of --planted or --karate");
  Graph g;
  std::vector<int> labels;
  if (o.karate) {
    g = load_karate();
    labels = karate_factions();
  } else {
    PlantedPartition p = gen_planted_partition(o.n, o.clusters, o.p_in, o.p_out, o.seed);
    g = std::move(p.graph);
    labels = std::move(p.labels);
  }
  if (o.format == "json") {
    nlohmann::json doc = to_json(g);
    doc["labels"] = labels;
    emit(o, doc.dump(2) + "\n", out);
  } else {
    emit(o, to_edge_list(g), out);
  }
  if (!o.labels.empty()) {
    std::string text = "node,label\n";
    for (std::size_t i = 0; i < labels.size(); ++i) text += fmt::format("{},{}\n", i, labels[i]);
    write_file(o.labels, text);
  }
}

std::optional<spdlog::level::level_enum> log_level_from_env() {
  const char* raw = std::getenv("WAVECLUSTER_LOG");
  if (raw == nullptr || *raw == '\0') return spdlog::level::warn;
  const std::string name(raw);
  if (name == "error") return spdlog::level::err;
  if (name == "warn") return spdlog::level::warn;
  if (name == "info") return spdlog::level::info;
  if (name == "debug") return spdlog::level::debug;
  return std::nullopt;
}

/// Routes the default logger to `err` for the duration of one command.
class LoggerScope {
 public:
  LoggerScope(std::ostream& err, spdlog::level::level_enum level) : previous_(spdlog::default_logger()) {
    auto logger =
        std::make_shared<spdlog::logger>("wavecluster", std::make_shared<spdlog::sinks::ostream_sink_mt>(err, true));
    logger->set_pattern("[%l] %v");
    logger->set_level(level);
    spdlog::set_default_logger(std::move(logger));
  }
  ~LoggerScope() { spdlog::set_default_logger(previous_); }
  LoggerScope(const LoggerScope&) = delete;
  LoggerScope& operator=(const LoggerScope&) = delete;

 private:
  std::shared_ptr<spdlog::logger> previous_;
};

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  const std::optional<spdlog::level::level_enum> level = log_level_from_env();
  if (!level) {
    err << "error: WAVECLUSTER_LOG must be one of error, warn, info, debug\n";
    return 1;
  }
  LoggerScope logging(err, *level);

  Options o;
  CLI::App app{"Graph clustering from wave dynamics and dynamic mode decomposition", "wavecluster"};
  app.set_version_flag("--version", toolkit_version());
  app.require_subcommand(1);

  CLI::App* cluster = app.add_subcommand("cluster", "Cluster a graph from per-node DMD of a wave");
  add_graph_options(cluster, o);
  add_dynamics_options(cluster, o);
  add_output_options(cluster, o);
  cluster->add_option("--k", o.k, "Sign bits (at most 2^k clusters)")->check(CLI::PositiveNumber);
  cluster->add_option("--svd-tol", o.svd_tol, "Relative singular-value cutoff")->check(CLI::PositiveNumber);
  cluster->add_option("--eigvec-csv", o.eigvec_csv, "Write estimated vs oracle eigenvector components");
  cluster->add_option("--manifest", o.manifest, "Write the run manifest (JSON)");

  CLI::App* spectrum = app.add_subcommand("spectrum", "Recovered vs oracle Laplacian eigenvalues");
  add_graph_options(spectrum, o);
  add_dynamics_options(spectrum, o);
  add_output_options(spectrum, o);
  spectrum->add_option("--k", o.k, "Eigenvalues 2 .. k+1 are recovered")->check(CLI::PositiveNumber);
  spectrum->add_option("--svd-tol", o.svd_tol, "Relative singular-value cutoff")->check(CLI::PositiveNumber);
  spectrum->add_option("--manifest", o.manifest, "Write the run manifest (JSON)");

  CLI::App* simulate = app.add_subcommand("simulate", "Node time series of the wave dynamics");
  add_graph_options(simulate, o);
  add_dynamics_options(simulate, o);
  simulate->add_option("--manifest", o.manifest, "Write the run manifest (JSON)");

  CLI::App* bench = app.add_subcommand("bench", "Analog settling times on random nonnegative systems");
  bench->add_option("--n", o.n, "Matrix size");
  bench->add_option("--trials", o.trials, "Number of random instances");
  bench->add_option("--seed", o.seed, "Seed");
  bench->add_option("--epsilon", o.epsilon, "Settling tolerance")->check(CLI::PositiveNumber);
  bench->add_option("--output", o.output, "Output file (default stdout)");

  CLI::App* gen = app.add_subcommand("gen", "Write a dataset as an edge list");
  gen->add_flag("--planted", o.planted, "Planted-partition random graph");
  gen->add_flag("--karate", o.karate, "Karate club graph");
  gen->add_option("--n", o.n, "Node count");
  gen->add_option("--clusters", o.clusters, "Planted blocks");
  gen->add_option("--p-in", o.p_in, "Edge probability inside a block");
  gen->add_option("--p-out", o.p_out, "Edge probability across blocks");
  gen->add_option("--seed", o.seed, "Seed");
  gen->add_option("--labels", o.labels, "Write node labels (CSV)");

  // Default formats: json for cluster and spectrum, csv for simulate and gen.
  add_output_options(simulate, o);
  gen->add_option("--output", o.output, "Output file (default stdout)");
  gen->add_option("--format", o.format, "edge list (csv) or json")->check(CLI::IsMember({"json", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  const std::string command = joined_command(argc, argv);
  try {
    if (*cluster) {
      if (o.format.empty()) o.format = "json";
      run_cluster(o, command, out);
    } else if (*spectrum) {
      if (o.format.empty()) o.format = "json";
      run_spectrum(o, command, out);
    } else if (*simulate) {
      if (o.format.empty()) o.format = "csv";
      run_simulate(o, command, out);
    } else if (*bench) {
      run_bench(o, out);
    } else if (*gen) {
      if (o.format.empty()) o.format = "csv";
      run_gen(o, out);
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

int cli_main(int argc, const char* const* argv) { return cli_main(argc, argv, std::cout, std::cerr); }

}  // namespace wavecluster
