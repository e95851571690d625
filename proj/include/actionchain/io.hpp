#pragma once

#include <string>
#include <vector>

#include "actionchain/chain.hpp"
#include "actionchain/hetero.hpp"
#include "actionchain/ingest.hpp"
#include "actionchain/phase.hpp"
#include "actionchain/types.hpp"

namespace actionchain {

// Identifies one trajectory's derived artifacts across stage files.
struct EpisodeRef {
  int driver_id = 0;
  int episode_start = 0;
};

// Trajectory store: per trajectory a header line
// "driver_id,episode_start,dt,length" followed by `length` rows
// "t,v,a,d,dv" at 6 decimal places.
void write_trajectories(const std::string& path, const std::vector<Trajectory>& trajectories);
std::vector<Trajectory> read_trajectories(const std::string& path);

// Timeline file: rows "variable,start_frame,end_frame,trend".
void write_timelines(const std::string& path, const std::vector<TrendTimeline>& timelines);
std::vector<TrendTimeline> read_timelines(const std::string& path);

// Phase file: rows "start_frame,end_frame,v,a,d,dv,time_label".
void write_phases(const std::string& path, const std::vector<ActionPhase>& phases);
std::vector<ActionPhase> read_phases(const std::string& path);

// Library file: rows "((v,a,d,dv), tl),count".
void write_library(const std::string& path, const PhaseLibrary& library);
PhaseLibrary read_library(const std::string& path);

// Dense row-major matrix with a label header row and column.
void write_matrix(const std::string& path, const Matrix& matrix,
                  const std::vector<std::string>& labels);
Matrix read_matrix(const std::string& path, std::vector<std::string>* labels = nullptr);

// Chain table: rows "from_key,to_key,jtp".
void write_chains(const std::string& path, const ActionChainTable& table);
ActionChainTable read_chains(const std::string& path);

// Compact state token used in matrix headers, e.g. "LLHH".
std::string state_token(const PhaseState& s);
PhaseState state_from_token(const std::string& token);

std::string episode_file_name(const std::string& stem, const EpisodeRef& ref);
std::vector<std::pair<EpisodeRef, std::string>> list_episode_files(
    const std::string& dir, const std::string& stem);

}  // namespace actionchain
