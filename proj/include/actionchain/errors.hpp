#pragma once

#include <stdexcept>
#include <string>

namespace actionchain {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ingest
struct MissingColumn : Error {
  explicit MissingColumn(const std::string& name)
      : Error("missing column: " + name) {}
};
struct MalformedRow : Error {
  explicit MalformedRow(std::size_t line_no)
      : Error("malformed row at line " + std::to_string(line_no)) {}
};
struct EmptyFile : Error {
  explicit EmptyFile(const std::string& path) : Error("empty file: " + path) {}
};
struct WindowEven : Error {
  WindowEven() : Error("smoothing window must be odd") {}
};
struct WindowNonPositive : Error {
  WindowNonPositive() : Error("smoothing window must be >= 1") {}
};

// segment
struct SeriesTooShort : Error {
  SeriesTooShort() : Error("series too short for turning-point detection") {}
};

// phase
struct TimelineMismatch : Error {
  TimelineMismatch() : Error("timelines do not cover the same frame range") {}
};
struct EmptyInput : Error {
  explicit EmptyInput(const std::string& what) : Error("empty input: " + what) {}
};

// chain
struct NoTransitions : Error {
  NoTransitions() : Error("no transitions observed (all sequences length < 2)") {}
};
struct UnknownState : Error {
  explicit UnknownState(const std::string& key)
      : Error("state not in model: " + key) {}
};
struct DegenerateDenominator : Error {
  DegenerateDenominator()
      : Error("coupled conditional undefined: no common reachable state") {}
};

// hetero
struct SequenceTooShort : Error {
  SequenceTooShort() : Error("phase sequence has fewer than 2 entries") {}
};
struct TooFewScores : Error {
  TooFewScores() : Error("need at least 2 scores for flow statistics") {}
};

// synth
struct InvalidScript : Error {
  explicit InvalidScript(const std::string& what)
      : Error("invalid script: " + what) {}
};
struct DegenerateModel : Error {
  DegenerateModel() : Error("model has no non-absorbing row") {}
};

// cli / io
struct EmptyTimeline : Error {
  EmptyTimeline() : Error("timeline has no segments") {}
};
struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error("config: " + what) {}
};
struct IoError : Error {
  explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace actionchain
