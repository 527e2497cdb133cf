// ace: build, query and benchmark count-estimator sketches for
// streaming anomaly detection.

#include <chrono>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ace/detect.hpp"
#include "ace/errors.hpp"
#include "ace/estimators.hpp"
#include "ace/io.hpp"
#include "ace/sketch.hpp"
#include "ace/synthetic.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

ace::CounterWidth parse_width(unsigned bits) {
  if (bits == 16) return ace::CounterWidth::k16;
  if (bits == 32) return ace::CounterWidth::k32;
  throw ace::ContractViolation("--counter-width must be 16 or 32");
}

struct CommonBuildOpts {
  std::string input;
  unsigned k = 15;
  unsigned l = 50;
  std::uint64_t seed = 0;
  double noise = 0.0;
  unsigned counter_width = 16;
  std::optional<int> labels;
};

ace::AceSketch build_from_csv(const CommonBuildOpts& opts,
                              ace::Dataset* data_out, double* build_seconds) {
  ace::Dataset data = ace::io::load_dataset(opts.input, opts.labels);
  const auto start = Clock::now();
  ace::AceSketch sketch =
      ace::build_sketch(data, opts.k, opts.l, opts.seed, opts.noise,
                        parse_width(opts.counter_width));
  if (build_seconds) *build_seconds = seconds_since(start);
  if (data_out) *data_out = std::move(data);
  return sketch;
}

int run(int argc, char** argv) {
  CLI::App app{"ACE count-estimator sketches for anomaly detection"};
  app.require_subcommand(1);

  // build
  CommonBuildOpts build_opts;
  std::string build_out;
  auto* build = app.add_subcommand("build", "build a sketch from a CSV file");
  build->add_option("--input", build_opts.input, "input CSV")->required();
  build->add_option("--k", build_opts.k, "bits per meta-hash (default 15)");
  build->add_option("--l", build_opts.l, "number of arrays (default 50)");
  build->add_option("--seed", build_opts.seed, "hash seed");
  build->add_option("--noise", build_opts.noise,
                    "Gaussian noise scale for the private variant");
  build->add_option("--counter-width", build_opts.counter_width,
                    "counter bits, 16 or 32");
  build->add_option("--labels", build_opts.labels,
                    "label column (0-based, negative from end), excluded "
                    "from features");
  build->add_option("--out", build_out, "output sketch file")->required();

  // score
  std::string score_sketch, score_queries, score_out;
  auto* score = app.add_subcommand("score", "score query rows with a sketch");
  score->add_option("--sketch", score_sketch, "sketch file")->required();
  score->add_option("--queries", score_queries, "query CSV")->required();
  score->add_option("--out", score_out, "output CSV")->required();

  // detect
  CommonBuildOpts detect_opts;
  std::string detect_out;
  unsigned detect_threads = 0;
  auto* detect = app.add_subcommand(
      "detect", "batch mean-minus-stddev detection over a CSV file");
  detect->add_option("--input", detect_opts.input, "input CSV")->required();
  detect->add_option("--k", detect_opts.k, "bits per meta-hash");
  detect->add_option("--l", detect_opts.l, "number of arrays");
  detect->add_option("--seed", detect_opts.seed, "hash seed");
  detect->add_option("--labels", detect_opts.labels, "label column");
  detect->add_option("--threads", detect_threads,
                     "scoring threads (0 = hardware)");
  detect->add_option("--out", detect_out, "report JSON")->required();

  // stream
  std::string stream_sketch, stream_queries;
  double stream_alpha = 0.0;
  bool stream_adapt = false;
  auto* stream = app.add_subcommand(
      "stream", "per-query streaming detection against a sketch");
  stream->add_option("--sketch", stream_sketch, "sketch file")->required();
  stream->add_option("--queries", stream_queries, "query CSV")->required();
  stream->add_option("--alpha", stream_alpha, "mean offset threshold")
      ->required();
  stream->add_flag("--adapt", stream_adapt,
                   "insert each query after scoring and persist the sketch");

  // compare
  std::string compare_input, compare_out, compare_l_list = "8,16,32,64";
  unsigned compare_k = 15, compare_queries = 50, compare_trials = 10;
  std::uint64_t compare_seed = 0;
  auto* compare = app.add_subcommand(
      "compare", "ACE vs random-sampling estimator MSE sweep over L");
  compare->add_option("--input", compare_input, "input CSV")->required();
  compare->add_option("--k", compare_k, "bits per meta-hash");
  compare->add_option("--l-list", compare_l_list, "comma-separated L values");
  compare->add_option("--queries", compare_queries, "number of queries");
  compare->add_option("--trials", compare_trials, "trials per L");
  compare->add_option("--seed", compare_seed, "seed");
  compare->add_option("--out", compare_out, "output CSV")->required();

  // simulate
  std::string sim_layout = "inner-border-outlier", sim_out;
  std::size_t sim_points = 300, sim_outliers = 10, sim_dim = 2;
  std::uint64_t sim_seed = 0;
  auto* simulate = app.add_subcommand(
      "simulate", "emit normalized scores of synthetic layouts vs K");
  simulate->add_option("--layout", sim_layout, "layout name");
  simulate->add_option("--points", sim_points, "cluster points");
  simulate->add_option("--outliers", sim_outliers, "outlier points");
  simulate->add_option("--dim", sim_dim, "dimension");
  simulate->add_option("--seed", sim_seed, "seed");
  simulate->add_option("--out", sim_out, "output CSV")->required();

  // info
  std::string info_sketch;
  auto* info = app.add_subcommand("info", "print sketch header and memory");
  info->add_option("--sketch", info_sketch, "sketch file")->required();

  CLI11_PARSE(app, argc, argv);

  if (build->parsed()) {
    ace::AceSketch sketch = build_from_csv(build_opts, nullptr, nullptr);
    ace::io::save_sketch(sketch, build_out);
    return 0;
  }

  if (score->parsed()) {
    const ace::AceSketch sketch = ace::io::load_sketch(score_sketch);
    const ace::Dataset queries = ace::io::load_dataset(score_queries);
    std::vector<double> values(queries.rows);
    for (std::size_t i = 0; i < queries.rows; ++i)
      values[i] = sketch.score(queries.row(i)).value;
    ace::io::write_scores_csv(values, score_out);
    return 0;
  }

  if (detect->parsed()) {
    ace::Dataset data;
    double build_seconds = 0.0;
    const ace::AceSketch sketch =
        build_from_csv(detect_opts, &data, &build_seconds);
    const ace::DetectionReport report =
        ace::detect_batch(sketch, data, detect_threads);
    ace::io::write_report_json(report, detect_out, build_seconds);
    return 0;
  }

  if (stream->parsed()) {
    ace::AceSketch sketch = ace::io::load_sketch(stream_sketch);
    const ace::Dataset queries = ace::io::load_dataset(stream_queries);
    std::cout << "query,score,anomaly\n";
    for (std::size_t i = 0; i < queries.rows; ++i) {
      const auto [estimate, anomaly] =
          ace::detect_stream(sketch, queries.row(i), stream_alpha);
      std::cout << i << "," << estimate.value << "," << (anomaly ? 1 : 0)
                << "\n";
      if (stream_adapt) sketch.insert(queries.row(i));
    }
    if (stream_adapt) ace::io::save_sketch(sketch, stream_sketch);
    return 0;
  }

  if (compare->parsed()) {
    const ace::Dataset data = ace::io::load_dataset(compare_input);
    std::vector<std::size_t> l_values;
    std::size_t pos = 0;
    while (pos <= compare_l_list.size()) {
      const std::size_t comma = compare_l_list.find(',', pos);
      const std::string token = compare_l_list.substr(
          pos, comma == std::string::npos ? std::string::npos : comma - pos);
      if (!token.empty()) l_values.push_back(std::stoul(token));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    const auto comparison = ace::compare_estimators(
        data, compare_k, l_values, compare_queries, compare_trials,
        compare_seed);
    ace::io::write_comparison_csv(comparison, compare_out);
    return 0;
  }

  if (simulate->parsed()) {
    if (sim_layout != "inner-border-outlier")
      throw ace::ContractViolation("unknown layout: " + sim_layout);
    ace::synth::LayoutSpec spec;
    spec.cluster_points = sim_points;
    spec.num_outliers = sim_outliers;
    spec.dim = sim_dim;
    const auto layout = ace::synth::make_inner_border_outlier(spec, sim_seed);
    std::vector<std::uint32_t> k_values;
    for (std::uint32_t k = 1; k <= 20; ++k) k_values.push_back(k);
    ace::io::write_profile_csv(ace::synth::score_profile(layout, k_values),
                               sim_out);
    return 0;
  }

  if (info->parsed()) {
    const ace::AceSketch sketch = ace::io::load_sketch(info_sketch);
    const auto& cfg = sketch.family().config();
    std::cout << "dim: " << cfg.dim << "\n"
              << "k_bits: " << cfg.k_bits << "\n"
              << "num_tables: " << cfg.num_tables << "\n"
              << "counter_width: "
              << static_cast<std::uint32_t>(sketch.counter_width()) << "\n"
              << "seed: " << cfg.seed << "\n"
              << "noise_scale: " << cfg.noise_scale << "\n"
              << "n: " << sketch.size() << "\n"
              << "mean: " << sketch.mean() << "\n"
              << "saturated: " << (sketch.saturated() ? 1 : 0) << "\n"
              << "counter_bytes: " << sketch.counter_bytes() << "\n"
              << "memory_bytes: " << sketch.memory_bytes() << "\n";
    return 0;
  }

  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ace::ContractViolation& e) {
    std::cerr << "error: usage: " << e.what() << "\n";
    return 1;
  } catch (const ace::DataError& e) {
    std::cerr << "error: data: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 3;
  }
}
