#include "padeval/report.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>

#include "padeval/error.hpp"
#include "padeval/text.hpp"
#include "report_json.hpp"

namespace padeval {
namespace detail {
namespace {

Json op_points_to_json(const std::map<int, OperatingPoint>& pts) {
  Json j = Json::object();
  for (const auto& [ap, op] : pts) j[std::to_string(ap)] = {{"bpcer", op.bpcer}, {"threshold", op.threshold}};
  return j;
}

Json counts_to_json(const ClassCounts& c) {
  Json attacks = Json::object();
  for (const auto& [kind, n] : c.attacks) attacks[std::string(to_string(kind))] = n;
  return {{"bona_fide", c.bona_fide}, {"attacks", std::move(attacks)}};
}

Json breakdown_to_json(const BreakdownReport& b) {
  Json j;
  j["counts"] = counts_to_json(b.counts);
  j["eer"] = b.eer;
  j["eer_threshold"] = b.eer_threshold;
  j["bpcer_ap"] = op_points_to_json(b.bpcer_ap);
  if (!b.det.empty()) {
    Json det = Json::array();
    for (const auto& p : b.det) det.push_back(Json::array({p.threshold, p.apcer, p.bpcer}));
    j["det"] = std::move(det);
  }
  return j;
}

std::map<int, OperatingPoint> op_points_from_json(const Json& j) {
  std::map<int, OperatingPoint> out;
  for (const auto& [key, v] : j.items()) {
    OperatingPoint op;
    op.bpcer = v.at("bpcer").get<double>();
    op.threshold = v.value("threshold", 0.0);
    out[std::stoi(key)] = op;
  }
  return out;
}

BreakdownReport breakdown_from_json(const Json& j) {
  BreakdownReport b;
  if (auto c = j.find("counts"); c != j.end()) {
    b.counts.bona_fide = c->value("bona_fide", std::size_t{0});
    if (auto a = c->find("attacks"); a != c->end()) {
      for (const auto& [name, n] : a->items()) {
        auto kind = pais_from_string(name);
        if (!kind) throw RenderError("report: unknown PAIS '" + name + "'");
        b.counts.attacks[*kind] = n.get<std::size_t>();
      }
    }
  }
  b.eer = j.at("eer").get<double>();
  b.eer_threshold = j.value("eer_threshold", 0.0);
  b.bpcer_ap = op_points_from_json(j.at("bpcer_ap"));
  if (auto d = j.find("det"); d != j.end()) {
    for (const auto& p : *d) b.det.push_back({p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>()});
  }
  return b;
}

double weighted_av_rank(const BreakdownReport& g) {
  for (int ap : kRankingPoints)
    if (!g.bpcer_ap.count(ap)) throw RenderError("report lacks BPCER_" + std::to_string(ap));
  return av_rank(g.bpcer_ap.at(10).bpcer, g.bpcer_ap.at(20).bpcer, g.bpcer_ap.at(100).bpcer);
}

}  // namespace

Json report_to_json(const MetricsReport& report) {
  const double check = weighted_av_rank(report.global);
  if (std::abs(check - report.av_rank) > kAvRankTolerance)
    throw RenderError("av_rank " + text::format_double(report.av_rank) + " differs from weighted BPCER sum " +
                      text::format_double(check));
  Json j;
  j["run_id"] = report.run_id;
  j["av_rank"] = report.av_rank;
  j["global"] = breakdown_to_json(report.global);
  if (!report.bpcer_ap_max_pais.empty()) j["bpcer_ap_max_pais"] = op_points_to_json(report.bpcer_ap_max_pais);
  if (!report.per_pais.empty()) {
    Json per = Json::object();
    for (const auto& [kind, b] : report.per_pais) per[std::string(to_string(kind))] = breakdown_to_json(b);
    j["per_pais"] = std::move(per);
  }
  if (!report.per_country.empty()) {
    Json per = Json::object();
    for (const auto& [country, b] : report.per_country) per[country] = breakdown_to_json(b);
    j["per_country"] = std::move(per);
  }
  if (!report.warnings.empty()) j["warnings"] = report.warnings;
  return j;
}

MetricsReport report_from_json(const Json& j) {
  try {
    MetricsReport r;
    r.run_id = j.value("run_id", std::string{});
    r.global = breakdown_from_json(j.at("global"));
    const double computed = weighted_av_rank(r.global);
    r.av_rank = computed;
    if (auto a = j.find("av_rank"); a != j.end()) {
      const double stored = a->get<double>();
      if (std::abs(stored - computed) > kAvRankTolerance)
        throw RenderError("report av_rank " + text::format_double(stored) + " differs from weighted BPCER sum " +
                          text::format_double(computed));
      r.av_rank = stored;
    }
    if (auto m = j.find("bpcer_ap_max_pais"); m != j.end()) r.bpcer_ap_max_pais = op_points_from_json(*m);
    if (auto p = j.find("per_pais"); p != j.end()) {
      for (const auto& [name, b] : p->items()) {
        auto kind = pais_from_string(name);
        if (!kind) throw RenderError("report: unknown PAIS '" + name + "'");
        r.per_pais[*kind] = breakdown_from_json(b);
      }
    }
    if (auto c = j.find("per_country"); c != j.end()) {
      for (const auto& [country, b] : c->items()) r.per_country[country] = breakdown_from_json(b);
    }
    if (auto w = j.find("warnings"); w != j.end()) r.warnings = w->get<std::vector<std::string>>();
    return r;
  } catch (const Json::exception& e) {
    throw RenderError(std::string("report: ") + e.what());
  } catch (const MetricsError& e) {
    throw RenderError(std::string("report: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw RenderError("report: operating point key is not an integer");
  }
}

}  // namespace detail

std::string format_percent(double fraction) {
  if (!std::isfinite(fraction) || fraction < 0.0 || fraction > 1.0)
    throw RenderError("rate " + text::format_double(fraction) + " outside [0,1]");
  // Hundredths of a percent, half-up. The slack absorbs binary noise such as
  // 0.66165 * 10000 == 6616.499999999999.
  const auto hundredths = static_cast<long long>(std::floor(fraction * 10000.0 + 0.5 + 1e-7));
  if (fraction == 1.0) return "100";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%lld.%02lld", hundredths / 100, hundredths % 100);
  return buf;
}

RenderedTable render_rank_table(const RankedTable& t) {
  if (t.rows.empty()) throw RenderError("rank table is empty");
  const std::vector<std::string> header = {"Rank", "Team", "EER", "BPCER10", "BPCER20", "BPCER100", "AVRank"};
  std::vector<std::vector<std::string>> cells;
  for (const auto& row : t.rows) {
    if (row.participant.empty()) throw RenderError("rank " + std::to_string(row.rank) + " has an empty team name");
    if (row.participant.find_first_of(",\n\r") != std::string::npos)
      throw RenderError("team name '" + row.participant + "' contains a comma or newline");
    cells.push_back({std::to_string(row.rank), row.participant, format_percent(row.eer),
                     format_percent(row.bpcer10), format_percent(row.bpcer20), format_percent(row.bpcer100),
                     format_percent(row.av_rank)});
  }

  RenderedTable out;
  auto join_csv = [](const std::vector<std::string>& v) {
    std::string line;
    for (std::size_t i = 0; i < v.size(); ++i) line += (i ? "," : "") + v[i];
    return line + "\n";
  };
  out.csv = join_csv(header);
  for (const auto& c : cells) out.csv += join_csv(c);

  std::vector<std::size_t> width(header.size());
  for (std::size_t i = 0; i < header.size(); ++i) width[i] = header[i].size();
  for (const auto& c : cells)
    for (std::size_t i = 0; i < c.size(); ++i) width[i] = std::max(width[i], c[i].size());
  std::ostringstream os;
  auto emit = [&](const std::vector<std::string>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      // Team name left-aligned, numbers right-aligned.
      if (i == 1)
        os << std::left << std::setw(static_cast<int>(width[i])) << v[i];
      else
        os << std::right << std::setw(static_cast<int>(width[i])) << v[i];
      os << (i + 1 < v.size() ? "  " : "\n");
    }
  };
  os << to_string(t.track) << " (all values in %)\n";
  emit(header);
  for (const auto& c : cells) emit(c);
  out.text = os.str();
  return out;
}

double probit(double p) { return boost::math::quantile(boost::math::normal_distribution<double>(), p); }

std::string det_csv(const DetCurve& curve, std::size_t n_bona_fide, std::size_t n_attack) {
  if (n_bona_fide == 0 || n_attack == 0) throw RenderError("DET export needs bona fide and attack counts");
  auto clamped_probit = [](double rate, std::size_t n) {
    const double lo = 1.0 / (2.0 * static_cast<double>(n));
    return probit(std::clamp(rate, lo, 1.0 - lo));
  };
  std::string out = "threshold,apcer,bpcer,apcer_probit,bpcer_probit\n";
  for (const auto& p : curve) {
    out += text::format_double(p.threshold) + "," + text::format_double(p.apcer) + "," +
           text::format_double(p.bpcer) + "," + text::format_double(clamped_probit(p.apcer, n_attack)) + "," +
           text::format_double(clamped_probit(p.bpcer, n_bona_fide)) + "\n";
  }
  return out;
}

std::string_view to_string(DetScope s) {
  switch (s) {
    case DetScope::kGlobal:
      return "global";
    case DetScope::kPais:
      return "pais";
    case DetScope::kCountry:
      return "country";
  }
  return "?";
}

std::vector<std::filesystem::path> export_det(const MetricsReport& report, DetScope scope,
                                              const std::filesystem::path& out_dir) {
  std::vector<std::pair<std::string, const BreakdownReport*>> targets;
  switch (scope) {
    case DetScope::kGlobal:
      if (!report.global.det.empty()) targets.emplace_back("det_global.csv", &report.global);
      break;
    case DetScope::kPais:
      for (const auto& [kind, b] : report.per_pais)
        if (!b.det.empty()) targets.emplace_back("det_pais_" + std::string(to_string(kind)) + ".csv", &b);
      break;
    case DetScope::kCountry:
      for (const auto& [country, b] : report.per_country)
        if (!b.det.empty()) targets.emplace_back("det_country_" + country + ".csv", &b);
      break;
  }
  if (targets.empty()) {
    std::string available;
    auto add = [&](std::string_view s) { available += (available.empty() ? "" : ", ") + std::string(s); };
    if (!report.global.det.empty()) add("global");
    if (std::any_of(report.per_pais.begin(), report.per_pais.end(), [](const auto& kv) { return !kv.second.det.empty(); }))
      add("pais");
    if (std::any_of(report.per_country.begin(), report.per_country.end(),
                    [](const auto& kv) { return !kv.second.det.empty(); }))
      add("country");
    throw RenderError("DET scope '" + std::string(to_string(scope)) + "' not in report; available: " +
                      (available.empty() ? "none" : available));
  }

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  for (const auto& [name, b] : targets) {
    const auto path = out_dir / name;
    text::write_file(path, det_csv(b->det, b->counts.bona_fide, b->counts.attack_total()));
    written.push_back(path);
  }
  return written;
}

std::string export_report(const MetricsReport& report) { return detail::report_to_json(report).dump(2) + "\n"; }

MetricsReport parse_report(std::string_view json_text) {
  detail::Json j;
  try {
    j = detail::Json::parse(json_text);
  } catch (const detail::Json::exception& e) {
    throw RenderError(std::string("report: ") + e.what());
  }
  return detail::report_from_json(j);
}

std::string report_filename(const MetricsReport& report) {
  return report.run_id.empty() ? "report.json" : "report_" + report.run_id + ".json";
}

}  // namespace padeval
