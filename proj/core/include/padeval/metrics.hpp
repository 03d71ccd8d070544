#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "padeval/manifest.hpp"

namespace padeval {

struct ScoreSet;

/// Candidate score in [0,1]; 1 means certain bona fide, 0 certain attack.
/// A processing error is recorded as value 0 with error_flag set.
struct Score {
  double value = 0.0;
  bool error_flag = false;

  /// Throws MetricsError when v is non-finite or outside [0,1].
  static Score of(double v);
  static Score error() noexcept { return {0.0, true}; }

  friend bool operator==(const Score&, const Score&) = default;
};

enum class Decision { kBonaFide, kAttack };

/// Upper sentinel threshold: strictly above every legal score, so it rejects
/// everything.
inline constexpr double kThresholdAboveMax = 1.0 + std::numeric_limits<double>::epsilon();

/// Bona fide iff score >= threshold.
constexpr Decision decide(double score, double threshold) noexcept {
  return score >= threshold ? Decision::kBonaFide : Decision::kAttack;
}

/// Fraction of attack scores accepted as bona fide at `threshold`.
double apcer(std::span<const double> attack_scores, double threshold);
/// Fraction of bona fide scores rejected as attacks at `threshold`.
double bpcer(std::span<const double> bonafide_scores, double threshold);

/// Either all attack species pooled together or a single PAIS.
struct AttackSelector {
  std::optional<PaisKind> pais;

  static AttackSelector pooled() noexcept { return {}; }
  static AttackSelector only(PaisKind kind) noexcept { return {kind}; }
};

struct ScorePartition {
  std::vector<double> bona_fide;
  std::map<PaisKind, std::vector<double>> attacks;

  std::vector<double> selected_attacks(AttackSelector sel) const;
  std::size_t attack_count() const noexcept;
};

struct DetPoint {
  double threshold = 0.0;
  double apcer = 0.0;
  double bpcer = 0.0;

  friend bool operator==(const DetPoint&, const DetPoint&) = default;
};

using DetCurve = std::vector<DetPoint>;

/// One point per candidate threshold: the distinct observed scores plus the
/// sentinels 0 and kThresholdAboveMax, in strictly increasing order.
DetCurve det_curve(std::span<const double> bonafide, std::span<const double> attacks);
DetCurve det_curve(const ScorePartition& p, AttackSelector sel);

struct EerResult {
  double eer = 0.0;
  double threshold = 0.0;
};

/// Equal error rate. Uses the smallest candidate threshold where APCER and
/// BPCER agree exactly; otherwise linearly interpolates between the two DET
/// points that bracket the sign change of APCER - BPCER.
EerResult eer(std::span<const double> bonafide, std::span<const double> attacks);
EerResult eer(const ScorePartition& p, AttackSelector sel);

struct OperatingPoint {
  double bpcer = 0.0;
  double threshold = 0.0;

  friend bool operator==(const OperatingPoint&, const OperatingPoint&) = default;
};

/// BPCER_AP: BPCER at the smallest candidate threshold whose APCER is at most
/// 1/ap. `ap` must be positive (10, 20 and 100 are the ranking points).
OperatingPoint bpcer_at_apcer(std::span<const double> bonafide, std::span<const double> attacks, int ap);
OperatingPoint bpcer_at_apcer(const ScorePartition& p, AttackSelector sel, int ap);

/// Worst-case variant: the threshold must bring every non-empty PAIS's own
/// APCER to at most 1/ap.
OperatingPoint bpcer_at_max_pais_apcer(const ScorePartition& p, int ap);

inline constexpr std::array<int, 3> kRankingPoints = {10, 20, 100};
inline constexpr std::array<double, 3> kAvRankWeights = {0.2, 0.3, 0.5};

/// 0.2*bpcer10 + 0.3*bpcer20 + 0.5*bpcer100, all as fractions in [0,1].
double av_rank(double bpcer10, double bpcer20, double bpcer100);

struct ClassCounts {
  std::size_t bona_fide = 0;
  std::map<PaisKind, std::size_t> attacks;

  std::size_t attack_total() const noexcept;
  friend bool operator==(const ClassCounts&, const ClassCounts&) = default;
};

/// Metrics for one bona fide vs. attack comparison (global, one PAIS or one
/// country).
struct BreakdownReport {
  ClassCounts counts;
  double eer = 0.0;
  double eer_threshold = 0.0;
  std::map<int, OperatingPoint> bpcer_ap;
  DetCurve det;

  friend bool operator==(const BreakdownReport&, const BreakdownReport&) = default;
};

BreakdownReport summarize(const ScorePartition& p, AttackSelector sel);

struct MetricsReport {
  std::string run_id;
  BreakdownReport global;
  /// BPCER_AP against the worst single PAIS; reported but not ranked on.
  std::map<int, OperatingPoint> bpcer_ap_max_pais;
  double av_rank = 0.0;
  std::map<PaisKind, BreakdownReport> per_pais;
  std::map<std::string, BreakdownReport> per_country;
  std::vector<std::string> warnings;

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

/// Global metrics pool all attacks; per-PAIS reports compare all bona fide
/// samples with one PAIS; per-country reports restrict both sides to the
/// country. Breakdowns lacking bona fide or attack samples are omitted and
/// noted in `warnings`.
MetricsReport evaluate_all(const ScoreSet& scores, const Manifest& m);

/// Same as evaluate_all for an already partitioned score set (no countries).
MetricsReport evaluate_partition(const ScorePartition& p, std::string run_id = {});

}  // namespace padeval
