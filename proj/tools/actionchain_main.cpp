#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "actionchain/config.hpp"
#include "actionchain/errors.hpp"
#include "actionchain/io.hpp"
#include "actionchain/phase.hpp"
#include "actionchain/pipeline.hpp"
#include "actionchain/svg.hpp"
#include "actionchain/synth.hpp"

namespace fs = std::filesystem;
using namespace actionchain;

int main(int argc, char** argv) {
  CLI::App app{"Action-phase driving heterogeneity pipeline"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".";
  int seed = 0, jobs = 1;
  app.add_option("--config", config_path, "key-value config file")->capture_default_str();
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--seed", seed, "random seed");
  app.add_option("--jobs", jobs, "worker count (accepted; stages run deterministically)");

  std::string input_path, traj_dir, segments_dir, phases_dir, library_path, model_dir;
  std::string script_path, timeline_path, map_out;
  bool holdout = false;

  auto* ingest_cmd = app.add_subcommand("ingest", "parse and filter a trajectory export");
  ingest_cmd->add_option("--input", input_path, "NGSIM-format CSV")->required();

  auto* segment_cmd = app.add_subcommand("segment", "label per-variable action trends");
  segment_cmd->add_option("--trajectories", traj_dir, "ingest output dir")->required();

  auto* phases_cmd = app.add_subcommand("phases", "extract action phases and the library");
  phases_cmd->add_option("--segments", segments_dir, "segment output dir")->required();

  auto* chains_cmd = app.add_subcommand("chains", "estimate transitions and action-chains");
  chains_cmd->add_option("--phases", phases_dir, "phases output dir")->required();
  chains_cmd->add_option("--library", library_path, "library.csv path");

  auto* score_cmd = app.add_subcommand("score", "per-driver DH and flow statistics");
  score_cmd->add_option("--phases", phases_dir, "phases output dir")->required();
  score_cmd->add_option("--model", model_dir, "chains output dir")->required();
  score_cmd->add_flag("--holdout", holdout, "leave the scored driver out of the model");

  auto* map_cmd = app.add_subcommand("map", "render a driving behaviour map (SVG)");
  map_cmd->add_option("--timeline", timeline_path, "timeline csv for one driver")->required();
  map_cmd->add_option("--map-out", map_out, "output SVG path");

  auto* synth_cmd = app.add_subcommand("synth", "render a scripted synthetic trajectory");
  synth_cmd->add_option("--script", script_path, "script file (key-value format)")->required();

  auto* run_cmd = app.add_subcommand("run", "full pipeline: ingest through score");
  run_cmd->add_option("--input", input_path, "NGSIM-format CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    PipelineConfig cfg =
        config_path.empty() ? PipelineConfig::defaults() : PipelineConfig::load(config_path);

    if (*ingest_cmd) {
      auto summary = stage_ingest(input_path, cfg, out_dir);
      std::cout << "trajectories: " << summary.trajectories_emitted << " (episodes too short: "
                << summary.episodes_too_short << ")\n";
    } else if (*segment_cmd) {
      stage_segment(traj_dir, cfg, out_dir);
    } else if (*phases_cmd) {
      stage_phases(segments_dir, cfg, out_dir);
    } else if (*chains_cmd) {
      if (library_path.empty())
        library_path = (fs::path(phases_dir) / "library.csv").string();
      stage_chains(phases_dir, library_path, cfg, out_dir);
    } else if (*score_cmd) {
      fs::create_directories(out_dir);
      auto result = stage_score(phases_dir, model_dir,
                                (fs::path(out_dir) / "scores.json").string(), holdout);
      std::cout << "drivers: " << result.scores.size() << "  mu=" << result.stats.mu
                << "  sigma=" << result.stats.sigma
                << "  outliers=" << result.stats.outliers.size() << '\n';
    } else if (*map_cmd) {
      auto timelines = read_timelines(timeline_path);
      fs::create_directories(out_dir);
      if (map_out.empty())
        map_out = (fs::path(out_dir) /
                   (fs::path(timeline_path).stem().string() + ".svg")).string();
      render_map(timelines, cfg.ingest.dt_s, map_out);
      std::cout << map_out << '\n';
    } else if (*synth_cmd) {
      auto kv = KeyValueFile::parse_file(script_path);
      auto script = script_from_kv(kv);
      if (seed != 0) script.seed = static_cast<std::uint64_t>(seed);
      auto traj = render_trajectory(script, cfg.ingest.dt_s);
      fs::create_directories(out_dir);
      write_trajectories((fs::path(out_dir) / "trajectories.csv").string(), {traj});
    } else if (*run_cmd) {
      auto manifest = run_pipeline(cfg, input_path, out_dir);
      std::cout << "report: " << (fs::path(out_dir) / "report.json").string() << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
