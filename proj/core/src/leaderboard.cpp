#include "padeval/leaderboard.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <tuple>
#include <unordered_set>

#include "padeval/error.hpp"
#include "padeval/text.hpp"
#include "report_json.hpp"

namespace padeval {

std::string_view to_string(Track t) { return t == Track::kTrack1 ? "track1" : "track2"; }

std::optional<Track> track_from_string(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "track1" || lower == "1") return Track::kTrack1;
  if (lower == "track2" || lower == "2") return Track::kTrack2;
  return std::nullopt;
}

std::string format_timestamp(Timestamp t) {
  const auto tt = static_cast<std::time_t>(t.time_since_epoch().count());
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::optional<Timestamp> parse_timestamp(std::string_view s) {
  if (s.size() != 20 || s[19] != 'Z') return std::nullopt;
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, se = 0;
  char tail = 0;
  const std::string str(s);
  if (std::sscanf(str.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%c", &y, &mo, &d, &h, &mi, &se, &tail) != 7) return std::nullopt;
  const std::chrono::year_month_day ymd{std::chrono::year(y), std::chrono::month(static_cast<unsigned>(mo)),
                                        std::chrono::day(static_cast<unsigned>(d))};
  if (!ymd.ok() || h > 23 || mi > 59 || se > 60) return std::nullopt;
  return std::chrono::sys_days(ymd) + std::chrono::hours(h) + std::chrono::minutes(mi) + std::chrono::seconds(se);
}

bool ranks_before(const SubmissionRecord& a, const SubmissionRecord& b) {
  return std::tie(a.report.av_rank, a.report.global.eer, a.submitted_at, a.submission_id) <
         std::tie(b.report.av_rank, b.report.global.eer, b.submitted_at, b.submission_id);
}

std::vector<SubmissionRecord> best_per_participant(std::span<const SubmissionRecord> records, Track track) {
  std::map<std::string, const SubmissionRecord*> best;
  for (const auto& r : records) {
    if (r.track != track) continue;
    auto [it, inserted] = best.emplace(r.participant, &r);
    if (!inserted && ranks_before(r, *it->second)) it->second = &r;
  }
  std::vector<SubmissionRecord> out;
  out.reserve(best.size());
  for (const auto& [name, r] : best) out.push_back(*r);
  return out;
}

RankedTable rank_table(Track track, std::span<const SubmissionRecord> submissions,
                       std::span<const SubmissionRecord> baselines) {
  std::vector<SubmissionRecord> pool(submissions.begin(), submissions.end());
  for (auto b : baselines) {
    b.track = track;
    pool.push_back(std::move(b));
  }
  auto best = best_per_participant(pool, track);
  std::sort(best.begin(), best.end(), ranks_before);

  RankedTable t;
  t.track = track;
  int rank = 0;
  for (const auto& r : best) {
    const auto& g = r.report.global;
    t.rows.push_back({++rank, r.participant, g.eer, g.bpcer_ap.count(10) ? g.bpcer_ap.at(10).bpcer : 0.0,
                      g.bpcer_ap.count(20) ? g.bpcer_ap.at(20).bpcer : 0.0,
                      g.bpcer_ap.count(100) ? g.bpcer_ap.at(100).bpcer : 0.0, r.report.av_rank});
  }
  return t;
}

std::string serialize_submission(const SubmissionRecord& r) {
  detail::Json j;
  j["submission_id"] = r.submission_id;
  j["participant"] = r.participant;
  j["track"] = std::string(to_string(r.track));
  j["submitted_at"] = format_timestamp(r.submitted_at);
  j["scores_ref"] = r.scores_ref;
  try {
    j["report"] = detail::report_to_json(r.report);
  } catch (const RenderError& e) {
    throw StoreError("submission '" + r.submission_id + "': " + e.what());
  }
  return j.dump();
}

SubmissionRecord parse_submission(std::string_view line) {
  try {
    const auto j = detail::Json::parse(line);
    SubmissionRecord r;
    r.submission_id = j.at("submission_id").get<std::string>();
    r.participant = j.at("participant").get<std::string>();
    const auto track = track_from_string(j.at("track").get<std::string>());
    if (!track) throw StoreError("unknown track");
    r.track = *track;
    const auto ts = parse_timestamp(j.at("submitted_at").get<std::string>());
    if (!ts) throw StoreError("bad submitted_at timestamp");
    r.submitted_at = *ts;
    r.scores_ref = j.value("scores_ref", std::string{});
    r.report = detail::report_from_json(j.at("report"));
    return r;
  } catch (const detail::Json::exception& e) {
    throw StoreError(std::string("submission: ") + e.what());
  } catch (const RenderError& e) {
    throw StoreError(std::string("submission: ") + e.what());
  }
}

SubmissionStore SubmissionStore::open(std::filesystem::path path) {
  SubmissionStore store(std::move(path));
  if (!std::filesystem::exists(store.path_)) return store;
  std::string contents;
  try {
    contents = text::read_file(store.path_);
  } catch (const IoError& e) {
    throw StoreError(e.what());
  }
  std::unordered_set<std::string> ids;
  const auto rows = text::lines(contents);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].empty()) continue;
    try {
      auto r = parse_submission(rows[i]);
      if (!ids.insert(r.submission_id).second) throw StoreError("duplicate submission_id '" + r.submission_id + "'");
      store.records_.push_back(std::move(r));
    } catch (const StoreError& e) {
      throw StoreError(store.path_.string() + ":" + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return store;
}

std::optional<Track> SubmissionStore::track() const {
  if (records_.empty()) return std::nullopt;
  return records_.front().track;
}

std::string SubmissionStore::record(SubmissionRecord r) {
  if (r.submission_id.empty()) throw StoreError("empty submission_id");
  if (r.participant.empty()) throw StoreError("empty participant name");
  for (const auto& existing : records_)
    if (existing.submission_id == r.submission_id)
      throw StoreError("duplicate submission_id '" + r.submission_id + "'");
  if (auto t = track(); t && *t != r.track)
    throw StoreError("store holds " + std::string(to_string(*t)) + " submissions, got " +
                     std::string(to_string(r.track)));

  const auto line = serialize_submission(r) + "\n";
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  if (!out) throw StoreError("cannot open store " + path_.string() + " for append");
  out << line;
  out.flush();
  if (!out) throw StoreError("write to store " + path_.string() + " failed");

  records_.push_back(std::move(r));
  return records_.back().submission_id;
}

std::vector<SubmissionRecord> SubmissionStore::best_per_participant(Track track) const {
  return padeval::best_per_participant(records_, track);
}

}  // namespace padeval
