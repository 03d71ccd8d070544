#include "padeval/scoreset.hpp"

#include <algorithm>

#include "padeval/error.hpp"
#include "padeval/text.hpp"

namespace padeval {

void EndpointConfig::validate() const {
  if (timeout.count() <= 0) throw EvaluationError("timeout must be positive");
  if (max_retries < 0) throw EvaluationError("max_retries must be >= 0");
  if (max_inflight < 1) throw EvaluationError("max_inflight must be >= 1");
}

ScoreOutcome ScoreOutcome::success(std::string id, double value, std::chrono::microseconds latency) {
  return {std::move(id), Score::of(value), latency, std::nullopt};
}

ScoreOutcome ScoreOutcome::failure(std::string id, std::string detail, std::chrono::microseconds latency) {
  if (detail.empty()) detail = "error";
  return {std::move(id), Score::error(), latency, std::move(detail)};
}

const ScoreOutcome* ScoreSet::find(std::string_view sample_id) const {
  auto it = outcomes.find(std::string(sample_id));
  return it == outcomes.end() ? nullptr : &it->second;
}

void ScoreSet::insert(ScoreOutcome outcome) {
  auto id = outcome.sample_id;
  if (!outcomes.emplace(id, std::move(outcome)).second)
    throw EvaluationError("duplicate outcome for sample '" + id + "'");
}

std::string scores_csv_row(const ScoreOutcome& o) {
  std::string detail = o.error_detail.value_or("");
  std::replace_if(detail.begin(), detail.end(), [](char c) { return c == ',' || c == '\n' || c == '\r'; }, ' ');
  std::string row = o.sample_id;
  row += ',';
  row += text::format_double(o.score.value);
  row += o.score.error_flag ? ",1," : ",0,";
  row += detail;
  row += '\n';
  return row;
}

std::string write_scores_csv(const ScoreSet& s) {
  std::string out(kScoresHeader);
  out += '\n';
  for (const auto& [id, o] : s.outcomes) out += scores_csv_row(o);
  return out;
}

ScoreSet parse_scores_csv(std::string_view text) {
  const auto rows = text::lines(text);
  if (rows.empty() || rows[0] != kScoresHeader)
    throw IoError("scores file: bad header, expected '" + std::string(kScoresHeader) + "'");

  ScoreSet s;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].empty()) continue;
    const auto where = "scores file line " + std::to_string(i + 1) + ": ";
    const auto f = text::split(rows[i], ',');
    if (f.size() != 4) throw IoError(where + "expected 4 columns");
    double value = 0.0;
    if (!text::parse_double(f[1], value)) throw IoError(where + "bad score '" + std::string(f[1]) + "'");
    if (f[2] != "0" && f[2] != "1") throw IoError(where + "error_flag must be 0 or 1");

    ScoreOutcome o;
    try {
      if (f[2] == "1") {
        if (value != 0.0) throw IoError(where + "error-flagged score must be 0");
        o = ScoreOutcome::failure(std::string(f[0]), std::string(f[3]));
      } else {
        if (!f[3].empty()) throw IoError(where + "error_detail set without error_flag");
        o = ScoreOutcome::success(std::string(f[0]), value);
      }
      s.insert(std::move(o));
    } catch (const MetricsError& e) {
      throw IoError(where + e.what());
    } catch (const EvaluationError& e) {
      throw IoError(where + e.what());
    }
  }
  return s;
}

ScoreSet load_scores_csv(const std::filesystem::path& file) { return parse_scores_csv(text::read_file(file)); }

}  // namespace padeval
