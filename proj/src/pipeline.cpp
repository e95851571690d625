#include "actionchain/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <map>

#include <json.hpp>

#include "actionchain/errors.hpp"
#include "actionchain/segment.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace actionchain {

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  char buf[4096];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= 0x100000001b3ULL;
    }
    if (!in) break;
  }
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(hash));
  return hex;
}

IngestSummary stage_ingest(const std::string& input_path, const PipelineConfig& cfg,
                           const std::string& out_dir) {
  fs::create_directories(out_dir);
  auto records = load_records(input_path, cfg.ingest);
  IngestSummary summary;
  auto trajectories = build_trajectories(records, cfg.ingest, &summary);
  write_trajectories((fs::path(out_dir) / "trajectories.csv").string(), trajectories);
  ordered_json j;
  j["records_read"] = summary.records_read;
  j["vehicles_seen"] = summary.vehicles_seen;
  j["episodes_found"] = summary.episodes_found;
  j["episodes_too_short"] = summary.episodes_too_short;
  j["trajectories_emitted"] = summary.trajectories_emitted;
  std::ofstream out((fs::path(out_dir) / "ingest_summary.json").string());
  out << j.dump(2) << '\n';
  return summary;
}

void stage_segment(const std::string& trajectories_dir, const PipelineConfig& cfg,
                   const std::string& out_dir) {
  fs::create_directories(out_dir);
  auto trajectories =
      read_trajectories((fs::path(trajectories_dir) / "trajectories.csv").string());
  int window = cfg.ingest.smoothing_window_frames();
  for (const auto& traj : trajectories) {
    std::vector<TrendTimeline> timelines;
    for (Variable var : kVariableOrder) {
      auto series = smooth(traj.column(var), window);
      timelines.push_back(
          segment_variable(series, traj.dt, cfg.segment_for(var), var));
    }
    EpisodeRef ref{traj.driver_id, traj.episode_start};
    write_timelines((fs::path(out_dir) / episode_file_name("timeline", ref)).string(),
                    timelines);
  }
}

void stage_phases(const std::string& segments_dir, const PipelineConfig& cfg,
                  const std::string& out_dir) {
  fs::create_directories(out_dir);
  std::vector<std::vector<ActionPhase>> all_phases;
  for (const auto& [ref, path] : list_episode_files(segments_dir, "timeline")) {
    auto timelines = read_timelines(path);
    auto phases = extract_phases(timelines, cfg.tau, cfg.eta);
    write_phases((fs::path(out_dir) / episode_file_name("phases", ref)).string(), phases);
    all_phases.push_back(std::move(phases));
  }
  auto library = build_library(all_phases, cfg.flow_id);
  write_library((fs::path(out_dir) / "library.csv").string(), library);
}

namespace {

// One PhaseKey sequence per episode file, in (driver, episode) order.
std::vector<std::pair<EpisodeRef, std::vector<PhaseKey>>> load_sequences(
    const std::string& phases_dir) {
  std::vector<std::pair<EpisodeRef, std::vector<PhaseKey>>> out;
  for (const auto& [ref, path] : list_episode_files(phases_dir, "phases")) {
    std::vector<PhaseKey> seq;
    for (const auto& p : read_phases(path)) seq.push_back(p.key);
    out.emplace_back(ref, std::move(seq));
  }
  return out;
}

}  // namespace

void stage_chains(const std::string& phases_dir, const std::string& library_path,
                  const PipelineConfig& /*cfg*/, const std::string& out_dir) {
  fs::create_directories(out_dir);
  auto episodes = load_sequences(phases_dir);
  std::vector<std::vector<PhaseKey>> sequences;
  for (auto& [ref, seq] : episodes) sequences.push_back(seq);
  auto model = estimate(sequences);
  auto library = read_library(library_path);
  auto chains = build_action_chains(model, library);

  std::vector<std::string> state_labels;
  for (const auto& s : model.states) state_labels.push_back(state_token(s));
  write_matrix((fs::path(out_dir) / "state_matrix.csv").string(), model.state_matrix,
               state_labels);
  write_matrix((fs::path(out_dir) / "time_matrix.csv").string(), model.time_matrix,
               {"lg", "st"});
  write_chains((fs::path(out_dir) / "chains.csv").string(), chains);
}

DriverScore driver_dh_pooled(int driver_id,
                             const std::vector<std::vector<PhaseKey>>& sequences,
                             const TransitionModel& model, const ActionChainTable& chains) {
  DriverScore score;
  score.driver_id = driver_id;
  double sum = 0.0;
  for (const auto& seq : sequences) {
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
      auto it = chains.entries.find(seq[i]);
      if (it == chains.entries.end()) {
        ++score.transitions_skipped;
        continue;
      }
      double actual = joint_transition(model, seq[i], seq[i + 1]);
      double diff = actual - it->second.jtp;
      sum += diff * diff;
      ++score.transitions_used;
    }
  }
  if (score.transitions_used == 0 && score.transitions_skipped == 0)
    throw SequenceTooShort();
  score.dh = score.transitions_used > 0 ? sum / score.transitions_used : 0.0;
  return score;
}

ScoreResult stage_score(const std::string& phases_dir, const std::string& model_dir,
                        const std::string& out_path, bool holdout) {
  auto episodes = load_sequences(phases_dir);
  std::map<int, std::vector<std::vector<PhaseKey>>> by_driver;
  for (auto& [ref, seq] : episodes) by_driver[ref.driver_id].push_back(seq);

  ScoreResult result;
  if (!holdout) {
    // Model read back from the chain-stage artifacts.
    std::vector<std::string> state_labels;
    TransitionModel model;
    model.state_matrix =
        read_matrix((fs::path(model_dir) / "state_matrix.csv").string(), &state_labels);
    model.time_matrix = read_matrix((fs::path(model_dir) / "time_matrix.csv").string());
    for (const auto& label : state_labels) model.states.push_back(state_from_token(label));
    auto chains = read_chains((fs::path(model_dir) / "chains.csv").string());
    for (const auto& [driver, seqs] : by_driver)
      result.scores.push_back(driver_dh_pooled(driver, seqs, model, chains));
  } else {
    for (const auto& [driver, seqs] : by_driver) {
      std::vector<std::vector<PhaseKey>> others;
      std::vector<std::vector<ActionPhase>> other_phases;
      for (const auto& [other, oseqs] : by_driver) {
        if (other == driver) continue;
        for (const auto& s : oseqs) {
          others.push_back(s);
          std::vector<ActionPhase> ps;
          for (const auto& key : s) ps.push_back(ActionPhase{key, 0, 0});
          other_phases.push_back(std::move(ps));
        }
      }
      auto model = estimate(others);
      auto library = build_library(other_phases, "holdout");
      auto chains = build_action_chains(model, library);
      // Keys unseen by the holdout model cannot be scored; split each
      // sequence at them and score the known runs, counting the broken
      // pairs as skipped.
      std::vector<std::vector<PhaseKey>> scorable;
      int broken = 0;
      for (const auto& s : seqs) {
        std::vector<PhaseKey> run;
        for (const auto& key : s) {
          if (model.state_index(key.state) < 0) {
            if (!run.empty()) ++broken;
            if (run.size() >= 2) scorable.push_back(run);
            run.clear();
            continue;
          }
          run.push_back(key);
        }
        if (run.size() >= 2) scorable.push_back(run);
      }
      if (scorable.empty()) continue;
      auto score = driver_dh_pooled(driver, scorable, model, chains);
      score.transitions_skipped += broken;
      result.scores.push_back(score);
    }
  }
  result.stats = flow_stats(result.scores);

  ordered_json j;
  j["driver_scores"] = json::array();
  for (const auto& s : result.scores)
    j["driver_scores"].push_back({{"driver_id", s.driver_id},
                                  {"dh", s.dh},
                                  {"transitions_used", s.transitions_used},
                                  {"transitions_skipped", s.transitions_skipped}});
  j["flow_stats"] = {{"mu", result.stats.mu},
                     {"sigma", result.stats.sigma},
                     {"outliers", result.stats.outliers}};
  std::ofstream out(out_path);
  if (!out) throw IoError("cannot write " + out_path);
  out << j.dump(2) << '\n';
  return result;
}

RunManifest run_pipeline(const PipelineConfig& cfg, const std::string& input_path,
                         const std::string& out_dir) {
  fs::create_directories(out_dir);
  fs::path root(out_dir);
  RunManifest manifest;
  manifest.config = cfg.to_kv().entries();
  manifest.input_path = input_path;
  manifest.input_digest = file_digest(input_path);

  auto run_stage = [&](const std::string& name, auto&& fn) {
    fs::path stage_dir = root / name;
    try {
      fn(stage_dir.string());
    } catch (const std::exception& e) {
      std::error_code ec;
      fs::remove_all(stage_dir, ec);  // no partial stage outputs
      throw Error(name + " stage failed: " + e.what());
    }
  };

  IngestSummary summary;
  run_stage("ingest", [&](const std::string& d) { summary = stage_ingest(input_path, cfg, d); });
  run_stage("segment",
            [&](const std::string& d) { stage_segment((root / "ingest").string(), cfg, d); });
  run_stage("phases",
            [&](const std::string& d) { stage_phases((root / "segment").string(), cfg, d); });
  run_stage("chains", [&](const std::string& d) {
    stage_chains((root / "phases").string(), (root / "phases" / "library.csv").string(),
                 cfg, d);
  });
  ScoreResult score;
  run_stage("score", [&](const std::string& d) {
    fs::create_directories(d);
    score = stage_score((root / "phases").string(), (root / "chains").string(),
                        (fs::path(d) / "scores.json").string());
  });

  // final report
  auto library = read_library((root / "phases" / "library.csv").string());
  auto chains = read_chains((root / "chains" / "chains.csv").string());
  ordered_json report;
  report["flow_id"] = cfg.flow_id;
  report["library_top10"] = json::array();
  for (const auto& [key, count] : top_k(library, 10))
    report["library_top10"].push_back({{"phase", to_string(key)}, {"count", count}});
  report["library_size"] = library.entries.size();
  std::vector<std::pair<PhaseKey, ChainEntry>> top_chains(chains.entries.begin(),
                                                          chains.entries.end());
  std::sort(top_chains.begin(), top_chains.end(),
            [](const auto& a, const auto& b) { return a.second.jtp > b.second.jtp; });
  if (top_chains.size() > 10) top_chains.resize(10);
  report["chains_top"] = json::array();
  for (const auto& [from, entry] : top_chains)
    report["chains_top"].push_back({{"from", to_string(from)},
                                    {"to", to_string(entry.successor)},
                                    {"jtp", entry.jtp}});
  report["driver_scores"] = json::array();
  for (const auto& s : score.scores)
    report["driver_scores"].push_back({{"driver_id", s.driver_id},
                                       {"dh", s.dh},
                                       {"transitions_used", s.transitions_used},
                                       {"transitions_skipped", s.transitions_skipped}});
  report["flow_stats"] = {{"mu", score.stats.mu},
                          {"sigma", score.stats.sigma},
                          {"outliers", score.stats.outliers}};
  report["ingest_summary"] = {{"records_read", summary.records_read},
                              {"vehicles_seen", summary.vehicles_seen},
                              {"episodes_found", summary.episodes_found},
                              {"episodes_too_short", summary.episodes_too_short},
                              {"trajectories_emitted", summary.trajectories_emitted}};
  {
    std::ofstream out((root / "report.json").string());
    out << report.dump(2) << '\n';
  }

  // Paths recorded relative to the run directory so manifests from
  // identical inputs compare equal.
  manifest.outputs["trajectories"] = "ingest/trajectories.csv";
  manifest.outputs["library"] = "phases/library.csv";
  manifest.outputs["state_matrix"] = "chains/state_matrix.csv";
  manifest.outputs["time_matrix"] = "chains/time_matrix.csv";
  manifest.outputs["chains"] = "chains/chains.csv";
  manifest.outputs["scores"] = "score/scores.json";
  manifest.outputs["report"] = "report.json";
  for (const auto& [name, path] : manifest.outputs)
    manifest.output_digests[name] = file_digest((root / path).string());

  ordered_json mj;
  mj["tool_version"] = manifest.tool_version;
  mj["config"] = manifest.config;
  mj["input"] = {{"path", manifest.input_path}, {"digest", manifest.input_digest}};
  mj["outputs"] = json::object();
  for (const auto& [name, path] : manifest.outputs)
    mj["outputs"][name] = {{"path", path}, {"digest", manifest.output_digests.at(name)}};
  {
    std::ofstream out((root / "manifest.json").string());
    out << mj.dump(2) << '\n';
  }
  return manifest;
}

}  // namespace actionchain
