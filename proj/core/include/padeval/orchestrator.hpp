#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "padeval/manifest.hpp"
#include "padeval/scoreset.hpp"

namespace padeval {

// Scoring wire protocol, candidate side:
//   POST {base_url}/score, body = raw image bytes,
//   Content-Type: image/png or image/jpeg.
//   Success is status 200 with a JSON object {"score": <finite number in [0,1]>}.
// Anything else (other status, invalid JSON, missing or non-numeric field,
// non-finite or out-of-range value, timeout, transport failure) is a
// processing error and the sample scores 0.

/// Verdict on one HTTP response: a score, or the reason it was rejected.
struct ResponseVerdict {
  std::optional<double> score;
  std::string error;
};

ResponseVerdict interpret_response(int status, std::string_view body);

/// image/png, image/jpeg, or application/octet-stream for anything else.
std::string_view content_type_for(const std::filesystem::path& path);

/// Connection to one scoring endpoint. Not thread-safe; use one per worker.
class ScoringClient {
 public:
  explicit ScoringClient(const EndpointConfig& cfg);
  ~ScoringClient();
  ScoringClient(ScoringClient&&) noexcept;
  ScoringClient& operator=(ScoringClient&&) noexcept;

  /// Sends the image, retrying up to cfg.max_retries times. Never throws for
  /// candidate-side failures; they come back as error outcomes with score 0.
  ScoreOutcome score(std::string sample_id, std::span<const std::uint8_t> image, std::string_view content_type);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Reads root/sample.path and scores it. Throws EvaluationError only when the
/// local image cannot be read.
ScoreOutcome score_one(const SampleRecord& sample, const std::filesystem::path& root, const EndpointConfig& cfg);

struct RunOptions {
  /// Empty: derived from the start time.
  std::string run_id;
  /// Outcomes from an interrupted run; those samples are not re-scored.
  std::optional<ScoreSet> resume;
  /// Scores CSV rewritten at start with the resumed outcomes and appended to
  /// as each sample completes. Empty: no checkpointing.
  std::filesystem::path checkpoint;
  std::function<void(const ScoreOutcome&, std::size_t done, std::size_t total)> on_progress;
};

/// Scores every manifest sample with at most cfg.max_inflight requests in
/// flight. The result holds exactly one outcome per sample, independent of
/// completion order. Throws EvaluationError for evaluator-side faults only
/// (missing image file, unwritable checkpoint).
ScoreSet run_evaluation(const Manifest& m, const EndpointConfig& cfg, const RunOptions& opts = {});

}  // namespace padeval
