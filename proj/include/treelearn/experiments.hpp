#pragma once

#include <atomic>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "treelearn/channels.hpp"
#include "treelearn/chow_liu.hpp"
#include "treelearn/model.hpp"
#include "treelearn/model_io.hpp"
#include "treelearn/rng.hpp"
#include "treelearn/thresholds.hpp"

namespace treelearn {

enum class EstimatorMode { plugin_mi, corrected_correlation };

// Declarative Monte Carlo sweep estimating P(estimated tree != truth).
// For every model, grid point n and trial k the pipeline is
//   seed   = trial_seed(model_master, n, k)
//   data   = sample(model, n, seed)
//   noisy  = channel ? apply(channel, data, substream_seed(seed, 1)) : data
//   tree   = estimator(noisy)
//   failure iff tree's edge set differs from the truth's
// with model_master = master_seed for the first model and a splitmix64
// derivation for the rest. Seeds never depend on scheduling, so results are
// identical for any thread count.
struct ExperimentConfig {
  std::vector<DiscreteTreeModel> models;
  std::optional<ChannelSpec> channel;
  EstimatorMode estimator = EstimatorMode::plugin_mi;
  std::vector<std::int64_t> n_grid;
  int trials = 0;
  std::uint64_t master_seed = 0;
  std::string output_path;
  char separator = ',';
};

struct ErrorCurvePoint {
  std::int64_t n = 0;
  int trials = 0;
  int failures = 0;
  double error_rate = 0.0;
  double std_error = 0.0;  // sqrt(r (1-r) / trials)
};

// One curve per model, annotated with the model's exact thresholds (empty
// for p < 3, where the threshold is undefined; the noisy one only when a
// channel is present).
struct ErrorCurve {
  std::optional<double> i_threshold;
  std::optional<double> i_threshold_noisy;
  std::vector<ErrorCurvePoint> points;
};

inline void check_config(const ExperimentConfig& cfg) {
  if (cfg.models.empty()) throw std::invalid_argument("experiment: no models");
  if (cfg.trials < 1) throw std::invalid_argument("experiment: trials must be >= 1");
  if (cfg.n_grid.empty()) throw std::invalid_argument("experiment: empty n grid");
  std::int64_t prev = 0;
  for (std::int64_t n : cfg.n_grid) {
    if (n <= prev)
      throw std::invalid_argument("experiment: n grid must be ascending and positive");
    prev = n;
  }
  if (cfg.channel) check_channel(*cfg.channel, cfg.models.front().tree.node_count());
  if (cfg.estimator == EstimatorMode::corrected_correlation) {
    for (const auto& m : cfg.models)
      if (m.symbol_values != std::vector<int>{-1, +1})
        throw std::invalid_argument(
            "corrected_correlation estimator requires models over {-1,+1}");
    if (cfg.channel && cfg.channel->kind != ChannelKind::identity &&
        cfg.channel->kind != ChannelKind::binary_symmetric)
      throw std::invalid_argument(
          "corrected_correlation estimator requires identity or sign-flip noise");
  }
}

inline std::uint64_t model_master_seed(std::uint64_t master, std::size_t model_index) {
  return model_index == 0
             ? master
             : splitmix64(master ^ (0xa0761d6478bd642fULL * model_index));
}

// One trial; returns true on recovery failure (edge sets compared exactly).
inline bool run_single_trial(const DiscreteTreeModel& model,
                             const std::optional<ChannelSpec>& channel,
                             EstimatorMode estimator, std::int64_t n,
                             std::uint64_t seed) {
  Dataset ds = sample(model, n, seed);
  if (channel) ds = apply(*channel, ds, substream_seed(seed, 1));
  Tree estimate = [&] {
    if (estimator == EstimatorMode::plugin_mi) return chow_liu(ds);
    const int p = model.tree.node_count();
    std::vector<double> q(p, 0.0);
    if (channel && channel->kind == ChannelKind::binary_symmetric)
      for (int i = 1; i <= p; ++i) q[i - 1] = channel->node_q(i, p);
    const auto rho = preprocess_binary_correlations(ds, q);
    WeightedPairs w(p);
    for (int i = 1; i <= p; ++i)
      for (int j = i + 1; j <= p; ++j) w.at(i, j) = binary_mi_bits(rho[i - 1][j - 1]);
    return mst(w);
  }();
  return !(estimate == model.tree);
}

inline std::vector<ErrorCurve> run_experiment(const ExperimentConfig& cfg,
                                              int threads = 0) {
  check_config(cfg);
  if (threads <= 0)
    threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  const std::size_t n_models = cfg.models.size();
  const std::size_t n_grid = cfg.n_grid.size();
  const std::size_t n_trials = static_cast<std::size_t>(cfg.trials);
  const std::size_t total = n_models * n_grid * n_trials;

  std::vector<std::uint8_t> failed(total, 0);
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::string first_error;

  auto worker = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= total) return;
      const std::size_t m = t / (n_grid * n_trials);
      const std::size_t g = (t / n_trials) % n_grid;
      const std::size_t k = t % n_trials;
      const std::int64_t n = cfg.n_grid[g];
      const std::uint64_t seed =
          trial_seed(model_master_seed(cfg.master_seed, m), static_cast<std::uint64_t>(n), k);
      try {
        failed[t] = run_single_trial(cfg.models[m], cfg.channel, cfg.estimator, n, seed);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (first_error.empty())
          first_error = "trial failed at model " + std::to_string(m + 1) + ", n=" +
                        std::to_string(n) + ", trial=" + std::to_string(k) + ": " + e.what();
        next.store(total);
        return;
      }
    }
  };
  {
    std::vector<std::thread> pool;
    const int nw = std::min<std::size_t>(threads, total);
    for (int i = 0; i < nw; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (!first_error.empty()) throw std::runtime_error(first_error);

  std::vector<ErrorCurve> curves(n_models);
  for (std::size_t m = 0; m < n_models; ++m) {
    ErrorCurve& curve = curves[m];
    const DiscreteTreeModel& model = cfg.models[m];
    if (model.tree.node_count() >= 3) {
      curve.i_threshold =
          information_threshold(model, ThresholdMethod::local).value_bits;
      if (cfg.channel)
        curve.i_threshold_noisy =
            noisy_information_threshold(model, *cfg.channel).value_bits;
    }
    for (std::size_t g = 0; g < n_grid; ++g) {
      ErrorCurvePoint pt;
      pt.n = cfg.n_grid[g];
      pt.trials = cfg.trials;
      for (std::size_t k = 0; k < n_trials; ++k)
        pt.failures += failed[(m * n_grid + g) * n_trials + k];
      pt.error_rate = static_cast<double>(pt.failures) / cfg.trials;
      pt.std_error = std::sqrt(pt.error_rate * (1.0 - pt.error_rate) / cfg.trials);
      curve.points.push_back(pt);
    }
  }
  return curves;
}

// Shortest round-trip decimal form; keeps CSV output byte-stable.
inline std::string format_double(double v) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

inline void write_csv(std::ostream& os, const std::vector<ErrorCurve>& curves,
                      char sep = ',') {
  os << "n" << sep << "trials" << sep << "failures" << sep << "error_rate" << sep
     << "stderr" << sep << "i_threshold" << sep << "i_threshold_noisy" << "\n";
  for (const ErrorCurve& c : curves)
    for (const ErrorCurvePoint& pt : c.points) {
      os << pt.n << sep << pt.trials << sep << pt.failures << sep
         << format_double(pt.error_rate) << sep << format_double(pt.std_error) << sep;
      if (c.i_threshold) os << format_double(*c.i_threshold);
      os << sep;
      if (c.i_threshold_noisy) os << format_double(*c.i_threshold_noisy);
      os << "\n";
    }
}

inline std::string csv_text(const std::vector<ErrorCurve>& curves, char sep = ',') {
  std::ostringstream ss;
  write_csv(ss, curves, sep);
  return ss.str();
}

// Config document: mirrors ExperimentConfig field for field. "model" (one)
// or "models" (list); each entry is an inline model object or
// {"file": "path"} resolved relative to the config's directory.
inline ExperimentConfig experiment_config_from_json(const json& j,
                                                    const std::string& base_dir = "") {
  ExperimentConfig cfg;
  auto load_entry = [&base_dir](const json& e) {
    if (e.contains("file")) {
      std::filesystem::path p = e.at("file").get<std::string>();
      if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
      return load_model_file(p.string());
    }
    return model_from_json(e);
  };
  if (j.contains("models"))
    for (const auto& e : j.at("models")) cfg.models.push_back(load_entry(e));
  else
    cfg.models.push_back(load_entry(j.at("model")));
  if (j.contains("channel")) cfg.channel = channel_from_json(j.at("channel"));
  const std::string est = j.value("estimator", "plugin_mi");
  if (est == "plugin_mi")
    cfg.estimator = EstimatorMode::plugin_mi;
  else if (est == "corrected_correlation")
    cfg.estimator = EstimatorMode::corrected_correlation;
  else
    throw std::invalid_argument("experiment config: unknown estimator '" + est + "'");
  cfg.n_grid = j.at("n_grid").get<std::vector<std::int64_t>>();
  cfg.trials = j.at("trials").get<int>();
  cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
  cfg.output_path = j.value("output", "");
  const std::string fmt = j.value("format", "csv");
  if (fmt == "csv")
    cfg.separator = ',';
  else if (fmt == "tsv")
    cfg.separator = '\t';
  else
    throw std::invalid_argument("experiment config: format must be csv or tsv");
  return cfg;
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path);
  json j = json::parse(is);
  return experiment_config_from_json(
      j, std::filesystem::path(path).parent_path().string());
}

}  // namespace treelearn
