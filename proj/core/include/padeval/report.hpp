#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "padeval/leaderboard.hpp"
#include "padeval/metrics.hpp"

namespace padeval {

/// Fraction to percent text, rounded half-up to two decimals ("40.48").
/// Exactly 100% renders as "100". Throws RenderError outside [0,1].
std::string format_percent(double fraction);

struct RenderedTable {
  std::string text;
  std::string csv;
};

/// Columns Rank, Team, EER, BPCER10, BPCER20, BPCER100, AVRank in percent.
/// Throws RenderError for an empty table or an empty team name.
RenderedTable render_rank_table(const RankedTable& t);

/// Standard normal quantile.
double probit(double p);

/// `threshold,apcer,bpcer,apcer_probit,bpcer_probit`. Rates are clamped to
/// [1/(2N), 1 - 1/(2N)] before the quantile, N being the attack or bona fide
/// count respectively.
std::string det_csv(const DetCurve& curve, std::size_t n_bona_fide, std::size_t n_attack);

enum class DetScope { kGlobal, kPais, kCountry };

std::string_view to_string(DetScope s);

/// Writes det_global.csv, det_pais_<kind>.csv or det_country_<CCC>.csv
/// into out_dir and returns the paths. Throws RenderError naming the
/// available scopes when the report lacks the requested one.
std::vector<std::filesystem::path> export_det(const MetricsReport& report, DetScope scope,
                                              const std::filesystem::path& out_dir);

/// Full-precision JSON with a fixed key order. Empty breakdowns are left out
/// rather than written as null. Throws RenderError when av_rank disagrees
/// with the global BPCER_AP values.
std::string export_report(const MetricsReport& report);

/// Inverse of export_report. Accepts partial reports (no DET curves or
/// counts) as long as the global EER and BPCER_10/20/100 are present; a
/// missing av_rank is computed. Throws RenderError on malformed input.
MetricsReport parse_report(std::string_view json_text);

/// `report_<run_id>.json`, or `report.json` when the run id is empty.
std::string report_filename(const MetricsReport& report);

}  // namespace padeval
