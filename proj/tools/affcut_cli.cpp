// affcut: partition affinity pyramids, generate synthetic scenes, evaluate
// instance masks, time the cascade and solve tiny multicut instances exactly.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <cstdio>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "affcut/cascade.hpp"
#include "affcut/error.hpp"
#include "affcut/io.hpp"
#include "affcut/metrics.hpp"
#include "affcut/oracle.hpp"
#include "affcut/parallel.hpp"
#include "affcut/partition.hpp"
#include "affcut/synth.hpp"

namespace fs = std::filesystem;
using namespace affcut;

namespace {

constexpr int kUsageError = 2;

struct PartitionArgs {
  std::string pyramid;
  std::string out;
  double threshold = 0.5;
  double beta = 0.5;
  bool gas = false;
  bool no_pa_gaec = false;
  std::uint64_t seed = 0;
  std::size_t min_pixels = 16;
};

struct SynthArgs {
  std::string spec;
  std::string out;
};

struct EvalArgs {
  std::string pred;
  std::string gt;
  std::string out;
  std::string csv;
};

struct BenchArgs {
  std::vector<std::string> sizes;
  std::size_t repeats = 5;
  std::string out;
  std::uint64_t seed = 0;
  bool gas = false;
};

struct OracleArgs {
  std::string edges;
  std::size_t cap = kOracleVertexCap;
  bool compare_gaec = false;
};

int run_partition(const PartitionArgs& a) {
  const AffinityPyramid pyramid = io::read_pyramid(a.pyramid);
  PartitionOptions options;
  options.cascade.threshold = a.threshold;
  options.cascade.beta = a.beta;
  options.cascade.use_gas = a.gas;
  options.cascade.use_pa_gaec = !a.no_pa_gaec;
  options.cascade.seed = a.seed;
  options.render.min_pixels = a.min_pixels;
  const PartitionOutput result = partition(pyramid, options);

  const fs::path out(a.out);
  io::write_text(out / "segments.json", io::segment_table_json(result.instances, result.input_shape));
  io::write_pgm16(result.labels, out / "labels.pgm");
  std::cerr << "partition: " << result.instances.size() << " instances written to " << out.string() << '\n';
  return 0;
}

int run_synth(const SynthArgs& a) {
  std::size_t scenes = 1;
  const SceneSpec base = io::parse_scene_spec(io::read_text(a.spec), &scenes);
  const fs::path out(a.out);
  parallel_for(scenes, [&](std::size_t i) {
    SceneSpec spec = base;
    spec.seed = base.seed + i;
    const SyntheticScene scene = generate_scene(spec);
    char name[32];
    std::snprintf(name, sizeof name, "scene_%04zu", i);
    io::write_scene(scene, out / name);
  });
  std::cerr << "synth: " << scenes << " scenes written to " << out.string() << '\n';
  return 0;
}

// Pairs scene directories by name; a directory holding gt.json is a single scene.
std::vector<std::pair<fs::path, fs::path>> eval_pairs(const fs::path& pred, const fs::path& gt) {
  std::vector<std::pair<fs::path, fs::path>> pairs;
  if (fs::exists(gt / "gt.json")) {
    pairs.emplace_back(pred / "segments.json", gt / "gt.json");
    return pairs;
  }
  if (!fs::is_directory(gt)) throw InputError("ground-truth directory " + gt.string() + " does not exist");
  for (const auto& entry : fs::directory_iterator(gt)) {
    if (entry.is_directory() && fs::exists(entry.path() / "gt.json")) {
      pairs.emplace_back(pred / entry.path().filename() / "segments.json", entry.path() / "gt.json");
    }
  }
  std::sort(pairs.begin(), pairs.end());
  if (pairs.empty()) throw InputError("no gt.json found under " + gt.string());
  return pairs;
}

int run_eval(const EvalArgs& a) {
  const auto pairs = eval_pairs(a.pred, a.gt);
  std::vector<ImageEvaluation> images(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t i) {
    if (!fs::exists(pairs[i].first)) throw InputError("missing prediction " + pairs[i].first.string());
    images[i].predictions = io::parse_segment_table(io::read_text(pairs[i].first));
    images[i].truth = io::parse_truth_table(io::read_text(pairs[i].second));
  });
  const ApReport report = average_precision(images);
  io::write_text(a.out, io::ap_report_json(report, images.size()));
  if (!a.csv.empty()) io::write_text(a.csv, io::ap_report_csv(report));
  std::cout << "AP " << report.mean_ap << "  AP50 " << report.mean_ap50 << "  (" << images.size() << " images)\n";
  return 0;
}

GridShape parse_size(const std::string& text) {
  try {
    const auto x = text.find('x');
    if (x == std::string::npos) {
      const std::size_t side = std::stoul(text);
      return {side, side};
    }
    return {std::stoul(text.substr(0, x)), std::stoul(text.substr(x + 1))};
  } catch (const std::exception&) {
    throw InputError("bad size '" + text + "' (expected N or HxW)");
  }
}

int run_bench(const BenchArgs& a) {
  std::vector<GridShape> sizes;
  for (const auto& s : a.sizes) sizes.push_back(parse_size(s));
  CascadeConfig config;
  config.use_gas = a.gas;
  config.seed = a.seed;

  // One scene per size, drawn with the same seed so every size shows the same
  // layout; repeats only resample timing noise.
  std::map<std::pair<std::size_t, std::size_t>, std::shared_ptr<const SyntheticScene>> scenes;
  const RuntimeProfile profile = runtime_profile(sizes, a.repeats, [&](GridShape shape) -> TimedWork {
    auto& scene = scenes[{shape.height, shape.width}];
    if (!scene) {
      SceneSpec spec = moderate_noise_spec(shape, a.seed);
      spec.with_full_resolution_truth = false;
      scene = std::make_shared<const SyntheticScene>(generate_scene(spec));
    }
    return [scene, config] {
      const CascadeResult result = cascade_gaec(scene->pyramid, config);
      render_instances(result.labels, result.segments, scene->pyramid.class_kinds,
                       scene->pyramid.resolved_input_shape());
    };
  });
  io::write_text(a.out, runtime_csv(profile));
  if (profile.rows.size() >= 2) {
    std::cerr << "bench: log-log slope " << profile.fit.slope << ", R^2 " << profile.fit.r_squared << '\n';
  }
  return 0;
}

int run_oracle(const OracleArgs& a) {
  const io::CostGraph graph = io::parse_edge_list(io::read_text(a.edges));
  const MulticutSolution best = exact_multicut(graph.num_vertices, graph.costs, a.cap);
  nlohmann::json out;
  out["vertices"] = graph.num_vertices;
  out["edges"] = graph.costs.size();
  out["partition"] = best.partition;
  out["cost"] = best.cost;
  if (a.compare_gaec) {
    // Inverse of the logit cost transform.
    std::vector<WeightedEdge> affinities = graph.costs;
    for (auto& e : affinities) e.weight = 1.0 / (1.0 + std::exp(-e.weight));
    const auto greedy = gaec_partition(graph.num_vertices, affinities, 0.5);
    const double greedy_cost = multicut_cost(greedy, graph.costs);
    out["gaec_partition"] = greedy;
    out["gaec_cost"] = greedy_cost;
    out["gap"] = greedy_cost - best.cost;
  }
  std::cout << out.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Greedy multicut partitioning of affinity pyramids"};
  app.require_subcommand(1);

  PartitionArgs part;
  auto* partition = app.add_subcommand("partition", "Partition a pyramid container into instances");
  partition->add_option("pyramid", part.pyramid, "Pyramid container directory")->required();
  partition->add_option("--threshold", part.threshold, "Contraction threshold")->capture_default_str();
  partition->add_option("--beta", part.beta, "Position damping exponent")->capture_default_str();
  partition->add_flag("--gas", part.gas, "Greedy association at the finest level");
  partition->add_flag("--no-pa-gaec", part.no_pa_gaec, "Skip position-aware merging");
  partition->add_option("--seed", part.seed, "Seed for the association order")->capture_default_str();
  partition->add_option("--min-pixels", part.min_pixels, "Drop segments smaller than this (finest level)")
      ->capture_default_str();
  partition->add_option("-o,--output", part.out, "Output directory")->required();

  SynthArgs syn;
  auto* synth = app.add_subcommand("synth", "Generate synthetic pyramids with ground truth");
  synth->add_option("--spec", syn.spec, "Scene spec JSON")->required();
  synth->add_option("-o,--output", syn.out, "Output directory")->required();

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "Mask AP of predicted instances");
  eval->add_option("--pred", ev.pred, "Prediction directory")->required();
  eval->add_option("--gt", ev.gt, "Ground-truth directory")->required();
  eval->add_option("-o,--output", ev.out, "JSON report")->required();
  eval->add_option("--csv", ev.csv, "Also write a CSV report");

  BenchArgs bn;
  auto* bench = app.add_subcommand("bench", "Time the cascade over image sizes");
  bench->add_option("--sizes", bn.sizes, "Input sizes, N or HxW")->required()->delimiter(',');
  bench->add_option("--repeats", bn.repeats, "Runs per size")->capture_default_str()->check(CLI::PositiveNumber);
  bench->add_option("-o,--output", bn.out, "CSV output")->required();
  bench->add_option("--seed", bn.seed, "Scene seed")->capture_default_str();
  bench->add_flag("--gas", bn.gas, "Time with greedy association");

  OracleArgs orc;
  auto* oracle = app.add_subcommand("oracle", "Exact multicut of a small edge list");
  oracle->add_option("edgelist", orc.edges, "File of 'u v cost' lines")->required();
  oracle->add_option("--cap", orc.cap, "Largest vertex count to enumerate")->capture_default_str();
  oracle->add_flag("--compare-gaec", orc.compare_gaec, "Also report the greedy solution and its gap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    const CLI::App* failing = &app;
    for (const CLI::App* sub : app.get_subcommands()) failing = sub;
    std::cerr << "affcut: " << e.what() << "\n\n" << failing->help();
    return kUsageError;
  }

  try {
    if (*partition) return run_partition(part);
    if (*synth) return run_synth(syn);
    if (*eval) return run_eval(ev);
    if (*bench) return run_bench(bn);
    if (*oracle) return run_oracle(orc);
  } catch (const std::exception& e) {
    std::cerr << "affcut: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
