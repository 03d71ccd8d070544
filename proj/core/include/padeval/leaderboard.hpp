#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "padeval/metrics.hpp"

namespace padeval {

enum class Track { kTrack1, kTrack2 };

std::string_view to_string(Track t);
/// Accepts "track1"/"track2" (any case) and the bare digits "1"/"2".
std::optional<Track> track_from_string(std::string_view s);

using Timestamp = std::chrono::sys_seconds;

/// ISO-8601 UTC, e.g. 2025-03-01T12:00:00Z.
std::string format_timestamp(Timestamp t);
std::optional<Timestamp> parse_timestamp(std::string_view s);

struct SubmissionRecord {
  std::string submission_id;
  std::string participant;
  Track track = Track::kTrack1;
  Timestamp submitted_at{};
  MetricsReport report;
  std::string scores_ref;

  friend bool operator==(const SubmissionRecord&, const SubmissionRecord&) = default;
};

/// Leaderboard order: lower av_rank, then lower EER, then earlier submission,
/// then submission_id so the order is total.
bool ranks_before(const SubmissionRecord& a, const SubmissionRecord& b);

/// One submission per participant on `track`: the one ranking first.
std::vector<SubmissionRecord> best_per_participant(std::span<const SubmissionRecord> records, Track track);

struct RankedRow {
  int rank = 0;
  std::string participant;
  double eer = 0.0;
  double bpcer10 = 0.0;
  double bpcer20 = 0.0;
  double bpcer100 = 0.0;
  double av_rank = 0.0;
};

struct RankedTable {
  Track track = Track::kTrack1;
  std::vector<RankedRow> rows;
};

/// Best submission per participant on `track`, plus the baseline records
/// (ordinary submissions under reserved names like "Baseline-1"), ranked
/// 1..n by ranks_before.
RankedTable rank_table(Track track, std::span<const SubmissionRecord> submissions,
                       std::span<const SubmissionRecord> baselines = {});

/// Single-line JSON form used by the store.
std::string serialize_submission(const SubmissionRecord& r);
/// Throws StoreError on malformed input.
SubmissionRecord parse_submission(std::string_view line);

/// Append-only JSON-lines store of submissions for one track.
class SubmissionStore {
 public:
  /// Loads an existing store; a missing file is an empty store.
  static SubmissionStore open(std::filesystem::path path);

  const std::filesystem::path& path() const noexcept { return path_; }
  const std::vector<SubmissionRecord>& records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }
  std::optional<Track> track() const;

  /// Appends and flushes one line. Throws StoreError on a duplicate id, a
  /// track other than the store's, an inconsistent report, or a write failure.
  std::string record(SubmissionRecord r);

  std::vector<SubmissionRecord> best_per_participant(Track track) const;

 private:
  explicit SubmissionStore(std::filesystem::path path) : path_(std::move(path)) {}

  std::filesystem::path path_;
  std::vector<SubmissionRecord> records_;
};

}  // namespace padeval
