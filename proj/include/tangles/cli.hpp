#pragma once

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "core.hpp"
#include "ingest.hpp"
#include "search.hpp"
#include "synth.hpp"
#include "witness.hpp"

namespace tangles::cli {

enum ExitCode : int {
  ok = 0,
  data_error = 1,
  usage_error = 2,
  oracle_mismatch = 3,
};

struct RunConfig {
  std::string input;
  std::string output;
  std::size_t agreement = 0;
  std::string order = "balanced";
  bool witness = false;
  double threshold = 0.8;
  bool oracle = false;
  std::size_t oracle_cap = 20;
  unsigned threads = 1;
  std::size_t min_n = 1;
  std::string signs;

  // generators
  std::size_t k = 0;
  std::size_t per = 25;
  std::size_t dim = 2;
  double sep = 6.0;
  double spread = 1.0;
  std::size_t respondents = 300;
  std::size_t questions = 20;
  double epsilon = 0.15;
  std::uint64_t seed = 0;
  std::string truth;
  std::size_t candidates = 19;
  std::size_t keep = 6;
  double radius = 1.5;
  std::string cuts_output;
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ValidationError("cannot open input file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Writes via `emit` to `path`, or to `fallback` when path is empty.
inline void write_output(const std::string& path, std::ostream& fallback,
                         const std::function<void(std::ostream&)>& emit) {
  if (path.empty()) {
    emit(fallback);
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw ValidationError("cannot open output file '" + path + "'");
  emit(out);
  if (!out)
    throw ValidationError("failed writing output file '" + path + "'");
}

inline Dataset load_dataset(const std::string& path) {
  try {
    return parse_csv(read_file(path));
  } catch (const ParseError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

inline int run_find(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Dataset data = load_dataset(cfg.input);
  const FeatureSystem fs = data.feature_system();
  SearchOptions opts;
  opts.policy = cfg.order == "input" ? FeatureOrder::input : FeatureOrder::balanced;
  opts.threads = cfg.threads;
  const auto tangles = enumerate_tangles(fs, cfg.agreement, opts);

  if (cfg.oracle) {
    if (fs.feature_count() > cfg.oracle_cap) {
      err << "oracle: skipped, " << fs.feature_count() << " features exceed the cap of " << cfg.oracle_cap << '\n';
    } else {
      const auto expected = brute_force_tangles(fs, cfg.agreement, cfg.oracle_cap);
      if (expected != tangles) {
        err << "oracle mismatch: search found " << tangles.size() << " tangles, brute force found "
            << expected.size() << '\n';
        return oracle_mismatch;
      }
      err << "oracle: " << expected.size() << " tangles confirmed by exhaustive check\n";
    }
  }

  std::optional<std::vector<std::optional<WitnessSet>>> witnesses;
  if (cfg.witness) {
    witnesses.emplace();
    for (const Tangle& t : tangles)
      witnesses->push_back(find_witness_set(fs, t.specification, cfg.threshold));
  }
  write_output(cfg.output, out, [&](std::ostream& os) {
    write_report(os, tangles, fs, cfg.agreement, data.labels(), witnesses ? &*witnesses : nullptr);
  });
  return ok;
}

inline int run_sweep(const RunConfig& cfg, std::ostream& out) {
  const Dataset data = load_dataset(cfg.input);
  const FeatureSystem fs = data.feature_system();
  SweepOptions opts;
  opts.min_n = cfg.min_n;
  opts.search.threads = cfg.threads;
  const SweepReport report = sweep_agreement(fs, opts);
  write_output(cfg.output, out, [&](std::ostream& os) { write_sweep_report(os, report, fs); });
  return ok;
}

inline int run_witness(const RunConfig& cfg, std::ostream& out) {
  const Dataset data = load_dataset(cfg.input);
  const FeatureSystem fs = data.feature_system();
  const Specification spec = Specification::parse(cfg.signs);
  fs.check_specification(spec);
  const auto found = find_witness_set(fs, spec, cfg.threshold);
  ordered_json doc{{"feature_names", fs.feature_names()},
                   {"signs", spec.to_string()},
                   {"agreement", agreement_value(fs, spec)},
                   {"consistent", is_consistent(fs, spec)},
                   {"witness", found ? witness_json(fs, spec, *found, data.labels()) : ordered_json(nullptr)}};
  write_output(cfg.output, out, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
  return ok;
}

inline int run_gen_blobs(const RunConfig& cfg, std::ostream& out) {
  const PointCloud cloud = gen_blobs(cfg.k, cfg.per, cfg.dim, cfg.sep, cfg.spread, cfg.seed);
  write_output(cfg.output, out, [&](std::ostream& os) { write_point_cloud_csv(os, cloud); });
  return ok;
}

inline int run_gen_survey(const RunConfig& cfg, std::ostream& out) {
  const PlantedSurvey survey = gen_planted_survey(cfg.k, cfg.respondents, cfg.questions, cfg.epsilon, cfg.seed);
  write_output(cfg.output, out, [&](std::ostream& os) { write_csv(os, survey.dataset); });
  if (!cfg.truth.empty()) {
    ordered_json mindsets = ordered_json::array();
    for (const auto& m : survey.mindsets)
      mindsets.push_back(m.to_string());
    ordered_json doc{{"feature_names", survey.dataset.feature_names},
                     {"flip_probability", survey.flip_probability},
                     {"mindsets", std::move(mindsets)},
                     {"assignment", survey.assignment}};
    write_output(cfg.truth, out, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
  }
  return ok;
}

inline int run_gen_cuts(const RunConfig& cfg, std::ostream& out) {
  PointCloud cloud;
  try {
    cloud = parse_point_cloud_csv(read_file(cfg.input));
  } catch (const ParseError& e) {
    throw ValidationError(cfg.input + ": " + e.what());
  }
  const CutSystem cuts = cuts_from_points(cloud, cfg.candidates, cfg.keep, cfg.radius);
  write_output(cfg.output, out, [&](std::ostream& os) { write_csv(os, cut_dataset(cuts)); });
  if (!cfg.cuts_output.empty()) {
    ordered_json list = ordered_json::array();
    for (std::size_t f = 0; f < cuts.cuts.size(); ++f)
      list.push_back(ordered_json{{"feature", cuts.features.feature_names()[f]},
                                  {"axis", cuts.cuts[f].axis},
                                  {"threshold", cuts.cuts[f].threshold},
                                  {"cost", cuts.cuts[f].cost}});
    write_output(cfg.cuts_output, out, [&](std::ostream& os) { os << ordered_json{{"cuts", list}}.dump(2) << '\n'; });
  }
  return ok;
}

} // namespace detail

/**
 * Entry point shared by the executable and the tests. `args` excludes the
 * program name. Results go to `out` unless an output path is given;
 * diagnostics go to `err`.
 */
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  RunConfig cfg;
  CLI::App app{"Find tangles in binary objects x features data", "tangles"};
  app.require_subcommand(1);

  auto* find = app.add_subcommand("find", "Enumerate all tangles at a fixed agreement parameter");
  find->add_option("--input", cfg.input, "Objects x features CSV")->required();
  find->add_option("--agreement", cfg.agreement, "Agreement parameter n >= 1")
      ->required()
      ->check(CLI::Range(std::size_t{1}, std::numeric_limits<std::size_t>::max()));
  find->add_option("--order", cfg.order, "Feature order for the search")
      ->check(CLI::IsMember({"balanced", "input"}))
      ->capture_default_str();
  auto* witness_flag = find->add_flag("--witness", cfg.witness, "Attach a witnessing set to each tangle");
  find->add_option("--threshold", cfg.threshold, "Starting witness threshold in (0, 1]")
      ->check(CLI::Range(0.0, 1.0))
      ->needs(witness_flag);
  find->add_flag("--oracle", cfg.oracle, "Cross-check against exhaustive search");
  find->add_option("--oracle-cap", cfg.oracle_cap, "Feature cap for --oracle")->capture_default_str();
  find->add_option("--output", cfg.output, "Report path (default: standard output)");
  find->add_option("--threads", cfg.threads, "Search threads")
      ->check(CLI::Range(1u, 1024u))
      ->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "Tangles for every agreement parameter up to the largest");
  sweep->add_option("--input", cfg.input, "Objects x features CSV")->required();
  sweep->add_option("--output", cfg.output, "Report path (default: standard output)");
  sweep->add_option("--min-n", cfg.min_n, "First agreement parameter to report")
      ->check(CLI::Range(std::size_t{1}, std::numeric_limits<std::size_t>::max()))
      ->capture_default_str();
  sweep->add_option("--threads", cfg.threads, "Search threads")
      ->check(CLI::Range(1u, 1024u))
      ->capture_default_str();

  auto* witness = app.add_subcommand("witness", "Find and verify a witnessing set for a specification");
  witness->add_option("--input", cfg.input, "Objects x features CSV")->required();
  witness->add_option("--signs", cfg.signs, "Specification over {+,-} in header order")->required();
  witness->add_option("--threshold", cfg.threshold, "Starting witness threshold in (0, 1]")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  witness->add_option("--output", cfg.output, "Report path (default: standard output)");

  auto* gen = app.add_subcommand("gen", "Synthetic data generators");
  gen->require_subcommand(1);

  auto* blobs = gen->add_subcommand("blobs", "Gaussian blobs as a point cloud CSV");
  cfg.k = 4;
  blobs->add_option("--k", cfg.k, "Blob count")->capture_default_str();
  blobs->add_option("--per", cfg.per, "Points per blob")->capture_default_str();
  blobs->add_option("--dim", cfg.dim, "Dimension")->capture_default_str();
  blobs->add_option("--sep", cfg.sep, "Minimum center spacing")->capture_default_str();
  blobs->add_option("--spread", cfg.spread, "Within-blob standard deviation")->capture_default_str();
  blobs->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  blobs->add_option("--output", cfg.output, "CSV path (default: standard output)");

  auto* survey = gen->add_subcommand("survey", "Planted-mindset survey as a feature CSV");
  std::size_t mindsets = 3;
  survey->add_option("--k", mindsets, "Mindset count")->capture_default_str();
  survey->add_option("--respondents", cfg.respondents, "Respondents")->capture_default_str();
  survey->add_option("--questions", cfg.questions, "Questions")->capture_default_str();
  survey->add_option("--epsilon", cfg.epsilon, "Answer flip probability in [0, 0.5)")->capture_default_str();
  survey->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  survey->add_option("--output", cfg.output, "CSV path (default: standard output)");
  survey->add_option("--truth", cfg.truth, "Write planted mindsets and assignment as JSON");

  auto* cuts = gen->add_subcommand("cuts", "Bottleneck cuts of a point cloud as a feature CSV");
  cuts->add_option("--input", cfg.input, "Point cloud CSV (x0..,label)")->required();
  cuts->add_option("--candidates", cfg.candidates, "Quantile candidates per axis")->capture_default_str();
  cuts->add_option("--keep", cfg.keep, "Number of cheapest cuts kept")->capture_default_str();
  cuts->add_option("--radius", cfg.radius, "Closeness radius for cut cost")->capture_default_str();
  cuts->add_option("--output", cfg.output, "CSV path (default: standard output)");
  cuts->add_option("--cuts-output", cfg.cuts_output, "Write retained cuts as JSON");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return ok;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return ok;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return usage_error;
  }

  try {
    if (find->parsed())
      return detail::run_find(cfg, out, err);
    if (sweep->parsed())
      return detail::run_sweep(cfg, out);
    if (witness->parsed())
      return detail::run_witness(cfg, out);
    if (blobs->parsed())
      return detail::run_gen_blobs(cfg, out);
    if (survey->parsed()) {
      cfg.k = mindsets;
      return detail::run_gen_survey(cfg, out);
    }
    if (cuts->parsed())
      return detail::run_gen_cuts(cfg, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return data_error;
  }
  return usage_error;
}

} // namespace tangles::cli
