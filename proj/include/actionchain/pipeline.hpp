#pragma once

#include <map>
#include <string>
#include <vector>

#include "actionchain/chain.hpp"
#include "actionchain/config.hpp"
#include "actionchain/hetero.hpp"
#include "actionchain/ingest.hpp"
#include "actionchain/io.hpp"

namespace actionchain {

inline constexpr const char* kToolVersion = "actionchain 0.1.0";

struct RunManifest {
  std::string tool_version = kToolVersion;
  std::map<std::string, std::string> config;
  std::string input_path;
  std::string input_digest;
  std::map<std::string, std::string> outputs;  // logical name -> path
  std::map<std::string, std::string> output_digests;
};

// FNV-1a 64 over the file bytes, hex encoded.
std::string file_digest(const std::string& path);

IngestSummary stage_ingest(const std::string& input_path, const PipelineConfig& cfg,
                           const std::string& out_dir);
void stage_segment(const std::string& trajectories_dir, const PipelineConfig& cfg,
                   const std::string& out_dir);
void stage_phases(const std::string& segments_dir, const PipelineConfig& cfg,
                  const std::string& out_dir);
void stage_chains(const std::string& phases_dir, const std::string& library_path,
                  const PipelineConfig& cfg, const std::string& out_dir);

struct ScoreResult {
  std::vector<DriverScore> scores;
  FlowStats stats;
};

// holdout: re-estimate the model and chain table without the scored
// driver before scoring them.
ScoreResult stage_score(const std::string& phases_dir, const std::string& model_dir,
                        const std::string& out_path, bool holdout = false);

RunManifest run_pipeline(const PipelineConfig& cfg, const std::string& input_path,
                         const std::string& out_dir);

// Per-driver pooled DH over several episode sequences; pairs never span
// episodes.
DriverScore driver_dh_pooled(int driver_id,
                             const std::vector<std::vector<PhaseKey>>& sequences,
                             const TransitionModel& model, const ActionChainTable& chains);

}  // namespace actionchain
