#pragma once

// Published challenge result rows (percent) and helpers that turn them into
// reports carrying only the ranked quantities.

#include <string>
#include <vector>

#include "padeval/leaderboard.hpp"
#include "padeval/metrics.hpp"

namespace padeval::testing {

struct PublishedRow {
  Track track;
  int rank;
  std::string team;
  double eer, b10, b20, b100, av_rank;  // percent, as printed
};

inline const std::vector<PublishedRow>& published_rows() {
  static const std::vector<PublishedRow> rows = {
      {Track::kTrack1, 1, "dragons", 11.34, 13.21, 24.39, 61.04, 40.48},
      {Track::kTrack1, 2, "Idiap", 14.12, 18.30, 30.81, 61.43, 43.62},
      {Track::kTrack1, 3, "Baseline", 16.51, 27.80, 45.26, 77.11, 57.70},
      {Track::kTrack1, 4, "IDCH", 21.66, 39.36, 51.66, 71.75, 59.25},
      {Track::kTrack1, 5, "Asmodeus", 24.01, 43.08, 57.28, 80.73, 66.16},
      {Track::kTrack1, 6, "UNLJ-FRI-FE", 26.53, 51.29, 65.13, 83.95, 71.77},
      {Track::kTrack1, 7, "IDVC-PAD-IDCARD", 22.41, 46.86, 65.59, 91.33, 74.71},
      {Track::kTrack1, 8, "VISTeam", 36.30, 61.88, 73.09, 89.09, 78.85},
      {Track::kTrack1, 9, "PADINO-v2", 32.97, 72.05, 84.23, 97.04, 88.20},
      {Track::kTrack2, 1, "Incode", 6.36, 2.56, 9.08, 23.04, 14.76},
      {Track::kTrack2, 2, "Baseline-1", 6.07, 3.06, 7.90, 23.64, 14.80},
      {Track::kTrack2, 3, "Baseline-2", 7.10, 5.10, 9.76, 22.68, 15.29},
      {Track::kTrack2, 4, "Baseline-3", 8.86, 7.98, 12.88, 27.64, 19.28},
      {Track::kTrack2, 5, "IDVC-PAD-IDCARD", 23.87, 52.30, 63.74, 76.44, 67.80},
      {Track::kTrack2, 6, "Best-PAD-2024", 21.87, 46.06, 65.82, 90.70, 74.30},
      {Track::kTrack2, 7, "Idiap", 31.94, 57.22, 70.20, 87.72, 76.36},
      {Track::kTrack2, 8, "InvestigAI", 34.64, 70.32, 81.98, 94.26, 85.79},
      {Track::kTrack2, 9, "PADINO-v2", 45.64, 83.50, 100.0, 100.0, 96.70},
  };
  return rows;
}

/// Report holding only EER and the three BPCER_AP values (fractions).
inline MetricsReport summary_report(std::string run_id, double eer, double b10, double b20, double b100) {
  MetricsReport r;
  r.run_id = std::move(run_id);
  r.global.eer = eer;
  r.global.bpcer_ap[10] = {b10, 0.0};
  r.global.bpcer_ap[20] = {b20, 0.0};
  r.global.bpcer_ap[100] = {b100, 0.0};
  r.av_rank = av_rank(b10, b20, b100);
  return r;
}

inline MetricsReport summary_report(const PublishedRow& row) {
  return summary_report(row.team, row.eer / 100, row.b10 / 100, row.b20 / 100, row.b100 / 100);
}

inline SubmissionRecord submission(const PublishedRow& row, int minute = 0) {
  SubmissionRecord s;
  s.submission_id = row.team + "-" + std::to_string(minute);
  s.participant = row.team;
  s.track = row.track;
  s.submitted_at = Timestamp{std::chrono::minutes(minute)} + std::chrono::hours(24 * 365 * 55);
  s.report = summary_report(row);
  return s;
}

}  // namespace padeval::testing
