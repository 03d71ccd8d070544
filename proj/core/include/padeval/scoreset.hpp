#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "padeval/metrics.hpp"

namespace padeval {

/// Where and how to reach a candidate scoring service.
struct EndpointConfig {
  std::string base_url;
  std::chrono::milliseconds timeout{std::chrono::seconds(180)};
  int max_retries = 2;
  int max_inflight = 4;

  /// Throws EvaluationError unless timeout > 0, max_retries >= 0 and
  /// max_inflight >= 1.
  void validate() const;
};

/// Result of scoring one sample. error_detail is set iff score.error_flag.
struct ScoreOutcome {
  std::string sample_id;
  Score score;
  std::chrono::microseconds latency{0};
  std::optional<std::string> error_detail;

  static ScoreOutcome success(std::string id, double value, std::chrono::microseconds latency = {});
  static ScoreOutcome failure(std::string id, std::string detail, std::chrono::microseconds latency = {});
};

struct ScoreSet {
  std::string run_id;
  EndpointConfig endpoint;
  std::map<std::string, ScoreOutcome> outcomes;  // keyed by sample_id
  std::chrono::system_clock::time_point started{};
  std::chrono::system_clock::time_point finished{};

  const ScoreOutcome* find(std::string_view sample_id) const;
  /// Throws EvaluationError on a duplicate sample_id.
  void insert(ScoreOutcome outcome);
};

inline constexpr std::string_view kScoresHeader = "sample_id,score,error_flag,error_detail";

/// One CSV line (with trailing newline). Commas and newlines in the detail
/// are replaced by spaces.
std::string scores_csv_row(const ScoreOutcome& o);

/// Header plus one row per outcome in sample_id order. No timing columns, so
/// two runs with the same results serialize byte-identically.
std::string write_scores_csv(const ScoreSet& s);

/// Throws IoError on malformed input or duplicate sample ids.
ScoreSet parse_scores_csv(std::string_view text);
ScoreSet load_scores_csv(const std::filesystem::path& file);

}  // namespace padeval
