#include "padeval/cli.hpp"

#include <chrono>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <vector>

#include "CLI11.hpp"
#include "padeval/corpus.hpp"
#include "padeval/error.hpp"
#include "padeval/leaderboard.hpp"
#include "padeval/manifest.hpp"
#include "padeval/orchestrator.hpp"
#include "padeval/report.hpp"
#include "padeval/text.hpp"

namespace padeval::cli {
namespace {

namespace fs = std::filesystem;

constexpr const char* kProtocolHelp = R"(Scoring wire protocol (candidate side):
  POST <endpoint>/score   body: raw image bytes
                          Content-Type: image/png | image/jpeg
  200 {"score": s}        s a finite number in [0,1]; 1 = bona fide, 0 = attack
  Any other status, invalid JSON, missing/non-numeric/non-finite/out-of-range
  score, timeout or transport failure counts as a processing error: after the
  configured retries the sample is scored 0 (attack) and flagged.

Exit codes: 0 ok, 2 usage, 3 I/O, 4 manifest, 5 metrics, 6 evaluation,
            7 submission store, 8 rendering, 1 other.)";

struct GenCorpusArgs {
  std::string spec;
  std::string out;
  std::optional<int> size;
  std::optional<std::uint64_t> seed;
};

struct ValidateArgs {
  std::string manifest;
  bool json = false;
};

struct EvaluateArgs {
  std::string manifest;
  std::string endpoint;
  double timeout_s = 180.0;
  int inflight = 4;
  int retries = 2;
  std::string resume;
  std::string out;
  std::string run_id;
  bool quiet = false;
};

struct MetricsArgs {
  std::string manifest;
  std::string scores;
  std::string out;
  std::string run_id;
};

struct RankArgs {
  std::string store;
  std::vector<std::string> baselines;
  std::string out;
  std::string track;
};

struct SubmitArgs {
  std::string store;
  std::string participant;
  std::string track;
  std::string report;
  std::string id;
  std::string submitted_at;
  std::string scores_ref;
};

Track require_track(const std::string& s) {
  auto t = track_from_string(s);
  if (!t) throw StoreError("unknown track '" + s + "' (expected track1 or track2)");
  return *t;
}

int gen_corpus(const GenCorpusArgs& a, std::ostream& out) {
  auto spec = a.spec.empty() ? CorpusSpec::track1_default() : parse_corpus_spec(text::read_file(a.spec));
  if (a.size) spec.width = spec.height = *a.size;
  if (a.seed) spec.seed = *a.seed;
  const auto m = gen_corpus(spec, a.out);
  text::write_file(fs::path(a.out) / "corpus_spec.json", serialize_corpus_spec(spec));
  const auto rep = validate_manifest(m);
  out << "wrote " << m.size() << " images and " << (fs::path(a.out) / "manifest.csv").string() << "\n";
  out << render_validation_text(rep);
  return kOk;
}

int validate(const ValidateArgs& a, std::ostream& out) {
  const auto rep = validate_manifest(load_manifest(a.manifest));
  out << (a.json ? render_validation_json(rep) : render_validation_text(rep));
  return rep.ok() ? kOk : kManifest;
}

int evaluate(const EvaluateArgs& a, std::ostream& out) {
  const auto m = load_manifest(a.manifest);
  EndpointConfig cfg;
  cfg.base_url = a.endpoint;
  cfg.timeout = std::chrono::milliseconds(static_cast<long long>(a.timeout_s * 1000.0));
  cfg.max_inflight = a.inflight;
  cfg.max_retries = a.retries;

  RunOptions opts;
  opts.run_id = a.run_id;
  if (!a.resume.empty()) opts.resume = load_scores_csv(a.resume);
  opts.checkpoint = a.out + ".partial";
  if (!a.quiet) {
    opts.on_progress = [&out](const ScoreOutcome&, std::size_t done, std::size_t total) {
      if (done % 500 == 0 || done == total) out << "scored " << done << "/" << total << "\n" << std::flush;
    };
  }

  const auto scores = run_evaluation(m, cfg, opts);
  text::write_file(a.out, write_scores_csv(scores));
  std::error_code ec;
  fs::remove(opts.checkpoint, ec);

  std::size_t errors = 0;
  for (const auto& [id, o] : scores.outcomes) errors += o.score.error_flag ? 1 : 0;
  out << "run " << scores.run_id << ": " << scores.outcomes.size() << " scores, " << errors
      << " processing errors -> " << a.out << "\n";
  return kOk;
}

int metrics(const MetricsArgs& a, std::ostream& out) {
  const auto m = load_manifest(a.manifest);
  auto scores = load_scores_csv(a.scores);
  scores.run_id = a.run_id.empty() ? fs::path(a.scores).stem().string() : a.run_id;
  const auto report = evaluate_all(scores, m);

  const fs::path dir(a.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  text::write_file(dir / report_filename(report), export_report(report));
  export_det(report, DetScope::kGlobal, dir);
  if (!report.per_pais.empty()) export_det(report, DetScope::kPais, dir);
  if (!report.per_country.empty()) export_det(report, DetScope::kCountry, dir);

  const auto& g = report.global;
  out << "EER " << format_percent(g.eer) << "%  BPCER10 " << format_percent(g.bpcer_ap.at(10).bpcer)
      << "%  BPCER20 " << format_percent(g.bpcer_ap.at(20).bpcer) << "%  BPCER100 "
      << format_percent(g.bpcer_ap.at(100).bpcer) << "%  AVRank " << format_percent(report.av_rank) << "%\n";
  for (const auto& w : report.warnings) out << "warning: " << w << "\n";
  out << "wrote " << (dir / report_filename(report)).string() << " and DET curves\n";
  return kOk;
}

SubmissionRecord baseline_from(const std::string& arg, std::size_t index, std::size_t count) {
  std::string name;
  std::string path = arg;
  if (auto eq = arg.find('='); eq != std::string::npos) {
    name = arg.substr(0, eq);
    path = arg.substr(eq + 1);
  } else {
    name = count == 1 ? "Baseline" : "Baseline-" + std::to_string(index + 1);
  }
  SubmissionRecord r;
  r.submission_id = "baseline:" + name;
  r.participant = name;
  r.report = parse_report(text::read_file(path));
  r.scores_ref = path;
  return r;
}

int rank(const RankArgs& a, std::ostream& out) {
  const auto store = SubmissionStore::open(a.store);
  std::optional<Track> track;
  if (!a.track.empty()) {
    track = require_track(a.track);
  } else {
    track = store.track();
    for (const auto& r : store.records())
      if (r.track != *track) throw StoreError("store mixes tracks; pass --track");
  }
  if (!track) track = Track::kTrack1;

  std::vector<SubmissionRecord> baselines;
  for (std::size_t i = 0; i < a.baselines.size(); ++i)
    baselines.push_back(baseline_from(a.baselines[i], i, a.baselines.size()));

  const auto table = rank_table(*track, store.records(), baselines);
  const auto rendered = render_rank_table(table);
  text::write_file(a.out, rendered.csv);
  out << rendered.text;
  return kOk;
}

int submit(const SubmitArgs& a, std::ostream& out) {
  auto store = SubmissionStore::open(a.store);
  SubmissionRecord r;
  r.participant = a.participant;
  r.track = require_track(a.track);
  r.report = parse_report(text::read_file(a.report));
  r.scores_ref = a.scores_ref;
  if (a.submitted_at.empty()) {
    r.submitted_at = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
  } else {
    auto ts = parse_timestamp(a.submitted_at);
    if (!ts) throw StoreError("bad --submitted-at '" + a.submitted_at + "' (expected YYYY-MM-DDTHH:MM:SSZ)");
    r.submitted_at = *ts;
  }
  r.submission_id = a.id.empty() ? std::string(to_string(r.track)) + "-" + std::to_string(store.size() + 1) : a.id;
  const auto id = store.record(std::move(r));
  out << "recorded " << id << " (" << store.size() << " submissions in " << a.store << ")\n";
  return kOk;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Presentation attack detection evaluation: corpus generation, scoring runs, "
               "ISO/IEC 30107-3 metrics and leaderboards"};
  app.name(args.empty() ? "padeval" : fs::path(args[0]).filename().string());
  app.footer(kProtocolHelp);
  app.require_subcommand(1);

  GenCorpusArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-corpus", "Generate a synthetic marker corpus and its manifest");
  gen_cmd->add_option("--spec", gen.spec, "Corpus spec JSON (default: Track-1 shaped corpus)")->check(CLI::ExistingFile);
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();
  gen_cmd->add_option("--size", gen.size, "Override image width and height in pixels");
  gen_cmd->add_option("--seed", gen.seed, "Override the spec seed");

  ValidateArgs val;
  auto* val_cmd = app.add_subcommand("validate", "Validate a manifest and print per-class counts");
  val_cmd->add_option("--manifest", val.manifest, "Manifest CSV")->required()->check(CLI::ExistingFile);
  val_cmd->add_flag("--json", val.json, "Print the report as JSON");

  EvaluateArgs ev;
  auto* ev_cmd = app.add_subcommand("evaluate", "Score every manifest image against a scoring endpoint");
  ev_cmd->add_option("--manifest", ev.manifest, "Manifest CSV")->required()->check(CLI::ExistingFile);
  ev_cmd->add_option("--endpoint", ev.endpoint, "Base URL, e.g. http://127.0.0.1:8080")->required();
  ev_cmd->add_option("--timeout", ev.timeout_s, "Per-request timeout in seconds")->check(CLI::PositiveNumber);
  ev_cmd->add_option("--inflight", ev.inflight, "Maximum concurrent requests")->check(CLI::PositiveNumber);
  ev_cmd->add_option("--retries", ev.retries, "Re-attempts before a sample is scored 0")->check(CLI::NonNegativeNumber);
  ev_cmd->add_option("--resume", ev.resume, "Scores CSV of an interrupted run")->check(CLI::ExistingFile);
  ev_cmd->add_option("--run-id", ev.run_id, "Run identifier");
  ev_cmd->add_option("--out", ev.out, "Output scores CSV")->required();
  ev_cmd->add_flag("--quiet", ev.quiet, "No progress output");

  MetricsArgs me;
  auto* me_cmd = app.add_subcommand("metrics", "Compute metrics, write the report JSON and DET curve CSVs");
  me_cmd->add_option("--manifest", me.manifest, "Manifest CSV")->required()->check(CLI::ExistingFile);
  me_cmd->add_option("--scores", me.scores, "Scores CSV")->required()->check(CLI::ExistingFile);
  me_cmd->add_option("--out", me.out, "Output directory")->required();
  me_cmd->add_option("--run-id", me.run_id, "Run identifier (default: scores file stem)");

  RankArgs ra;
  auto* ra_cmd = app.add_subcommand("rank", "Rank the best submission per participant by AV_Rank");
  ra_cmd->add_option("--store", ra.store, "Submission store (JSON lines)")->required();
  ra_cmd->add_option("--baseline", ra.baselines, "Baseline report JSON, optionally NAME=path");
  ra_cmd->add_option("--track", ra.track, "track1 or track2 (default: the store's track)");
  ra_cmd->add_option("--out", ra.out, "Output CSV")->required();

  SubmitArgs su;
  auto* su_cmd = app.add_subcommand("submit", "Record a metrics report as a submission");
  su_cmd->add_option("--store", su.store, "Submission store (JSON lines)")->required();
  su_cmd->add_option("--participant", su.participant, "Team name")->required();
  su_cmd->add_option("--track", su.track, "track1 or track2")->required();
  su_cmd->add_option("--report", su.report, "Report JSON from `metrics`")->required()->check(CLI::ExistingFile);
  su_cmd->add_option("--id", su.id, "Submission id (default: <track>-<n>)");
  su_cmd->add_option("--submitted-at", su.submitted_at, "UTC timestamp YYYY-MM-DDTHH:MM:SSZ (default: now)");
  su_cmd->add_option("--scores-ref", su.scores_ref, "Path of the scores CSV behind the report");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*gen_cmd) return gen_corpus(gen, out);
    if (*val_cmd) return validate(val, out);
    if (*ev_cmd) return evaluate(ev, out);
    if (*me_cmd) return metrics(me, out);
    if (*ra_cmd) return rank(ra, out);
    if (*su_cmd) return submit(su, out);
  } catch (const ManifestError& e) {
    err << "error: " << e.what() << "\n";
    return kManifest;
  } catch (const MetricsError& e) {
    err << "error: " << e.what() << "\n";
    return kMetrics;
  } catch (const EvaluationError& e) {
    err << "error: " << e.what() << "\n";
    return kEvaluation;
  } catch (const StoreError& e) {
    err << "error: " << e.what() << "\n";
    return kStore;
  } catch (const RenderError& e) {
    err << "error: " << e.what() << "\n";
    return kRender;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUnexpected;
  }
  return kUsage;
}

}  // namespace padeval::cli
