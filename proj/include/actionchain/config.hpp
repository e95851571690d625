#pragma once

#include <map>
#include <string>
#include <vector>

#include "actionchain/types.hpp"

namespace actionchain {

// Line-oriented "key = value" file with dotted section keys and '#' comments.
class KeyValueFile {
 public:
  KeyValueFile() = default;
  static KeyValueFile parse_file(const std::string& path);
  static KeyValueFile parse_text(const std::string& text);

  bool has(const std::string& key) const;
  std::string get(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  void set(const std::string& key, const std::string& value);

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

enum class UnitConversion { None, FeetToMeters };

struct IngestConfig {
  double min_duration_s = 50.0;
  double dt_s = 0.1;
  double smoothing_window_s = 0.5;
  UnitConversion unit_conversion = UnitConversion::None;
  // Column-name aliases, lowercase; the first header match wins.
  std::map<std::string, std::vector<std::string>> column_aliases = {
      {"vehicle_id", {"vehicle_id"}},
      {"frame_id", {"frame_id"}},
      {"velocity", {"v_vel", "velocity"}},
      {"acceleration", {"v_acc", "acceleration"}},
      {"space_headway", {"space_headway", "space_hdwy"}},
      {"preceding_id", {"preceding", "preceding_id"}},
  };

  int smoothing_window_frames() const;
  void validate() const;
};

// Per-variable thresholds for the rule-based labeling.
struct SegmentationConfig {
  double theta1 = 2.0;   // increase threshold, > 0
  double theta2 = -2.0;  // decrease threshold, < 0
  double delta = 20.0;   // high/low split for refined stables
  int gamma = 30;        // frames; short-stable merge threshold

  void validate() const;
};

struct PipelineConfig {
  IngestConfig ingest;
  std::array<SegmentationConfig, kNumVariables> segment;  // (v, a, d, dv)
  int tau = 10;  // frames; minimum phase duration
  int eta = 50;  // frames; lg/st split
  std::string flow_id = "flow";

  static PipelineConfig defaults();
  static PipelineConfig from_kv(const KeyValueFile& kv);
  static PipelineConfig load(const std::string& path);
  KeyValueFile to_kv() const;

  const SegmentationConfig& segment_for(Variable v) const {
    return segment[static_cast<std::size_t>(v)];
  }
  void validate() const;
};

}  // namespace actionchain
