#include "padeval/orchestrator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ctime>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>
#include <unordered_set>
#include <vector>

#include "httplib.h"
#include "json.hpp"
#include "padeval/error.hpp"
#include "padeval/text.hpp"

namespace padeval {
namespace {

using Clock = std::chrono::steady_clock;

struct ParsedUrl {
  std::string scheme_host_port;
  std::string score_path;
};

ParsedUrl parse_base_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw EvaluationError("endpoint URL needs a scheme: '" + url + "'");
  const auto path_start = url.find('/', scheme_end + 3);
  ParsedUrl out;
  out.scheme_host_port = url.substr(0, path_start);
  std::string prefix = path_start == std::string::npos ? std::string{} : url.substr(path_start);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  out.score_path = prefix + "/score";
  return out;
}

std::string default_run_id(std::chrono::system_clock::time_point t) {
  const auto tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "run-%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

std::vector<std::uint8_t> read_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw EvaluationError("cannot read image " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw EvaluationError("cannot read image " + path.string());
  return bytes;
}

class Checkpoint {
 public:
  Checkpoint(const std::filesystem::path& path, const ScoreSet& resumed) {
    if (path.empty()) return;
    out_.open(path, std::ios::binary | std::ios::trunc);
    if (!out_) throw EvaluationError("cannot write checkpoint " + path.string());
    path_ = path;
    write(std::string(kScoresHeader) + "\n");
    for (const auto& [id, o] : resumed.outcomes) write(scores_csv_row(o));
  }

  void append(const ScoreOutcome& o) {
    if (out_.is_open()) write(scores_csv_row(o));
  }

 private:
  void write(const std::string& s) {
    out_ << s;
    out_.flush();
    if (!out_) throw EvaluationError("checkpoint write failed: " + path_.string());
  }

  std::ofstream out_;
  std::filesystem::path path_;
};

}  // namespace

ResponseVerdict interpret_response(int status, std::string_view body) {
  if (status != 200) return {std::nullopt, "http status " + std::to_string(status)};
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception&) {
    return {std::nullopt, "malformed body"};
  }
  if (!j.is_object()) return {std::nullopt, "malformed body"};
  const auto it = j.find("score");
  if (it == j.end()) return {std::nullopt, "missing score field"};
  if (!it->is_number()) return {std::nullopt, "score not a number"};
  const double v = it->get<double>();
  if (!std::isfinite(v)) return {std::nullopt, "non-finite score"};
  if (v < 0.0 || v > 1.0) return {std::nullopt, "score out of range"};
  return {v, {}};
}

std::string_view content_type_for(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".png") return "image/png";
  if (ext == ".jpg" || ext == ".jpeg") return "image/jpeg";
  return "application/octet-stream";
}

struct ScoringClient::Impl {
  EndpointConfig cfg;
  ParsedUrl url;
  httplib::Client client;

  explicit Impl(const EndpointConfig& c)
      : cfg(c), url(parse_base_url(c.base_url)), client(url.scheme_host_port) {
    client.set_connection_timeout(cfg.timeout);
    client.set_read_timeout(cfg.timeout);
    client.set_write_timeout(cfg.timeout);
    client.set_keep_alive(true);
  }

  // One request; returns the score or an error description.
  ResponseVerdict attempt(std::span<const std::uint8_t> image, std::string_view content_type) {
    const auto t0 = Clock::now();
    auto res = client.Post(url.score_path, reinterpret_cast<const char*>(image.data()), image.size(),
                           std::string(content_type));
    if (!res) {
      const auto err = res.error();
      const bool timed_out = err == httplib::Error::ConnectionTimeout ||
                             (err == httplib::Error::Read && Clock::now() - t0 >= cfg.timeout);
      if (timed_out) return {std::nullopt, "timeout"};
      return {std::nullopt, "transport: " + httplib::to_string(err)};
    }
    return interpret_response(res->status, res->body);
  }
};

ScoringClient::ScoringClient(const EndpointConfig& cfg) {
  cfg.validate();
  impl_ = std::make_unique<Impl>(cfg);
}
ScoringClient::~ScoringClient() = default;
ScoringClient::ScoringClient(ScoringClient&&) noexcept = default;
ScoringClient& ScoringClient::operator=(ScoringClient&&) noexcept = default;

ScoreOutcome ScoringClient::score(std::string sample_id, std::span<const std::uint8_t> image,
                                  std::string_view content_type) {
  ResponseVerdict verdict;
  auto latency = std::chrono::microseconds{0};
  for (int attempt = 0; attempt <= impl_->cfg.max_retries; ++attempt) {
    const auto t0 = Clock::now();
    verdict = impl_->attempt(image, content_type);
    latency = std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - t0);
    if (verdict.score) return ScoreOutcome::success(std::move(sample_id), *verdict.score, latency);
  }
  return ScoreOutcome::failure(std::move(sample_id), verdict.error, latency);
}

ScoreOutcome score_one(const SampleRecord& sample, const std::filesystem::path& root, const EndpointConfig& cfg) {
  const auto path = root / sample.path;
  const auto bytes = read_image(path);
  ScoringClient client(cfg);
  return client.score(sample.sample_id, bytes, content_type_for(path));
}

ScoreSet run_evaluation(const Manifest& m, const EndpointConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  parse_base_url(cfg.base_url);

  ScoreSet result;
  result.endpoint = cfg;
  result.started = std::chrono::system_clock::now();
  result.run_id = opts.run_id.empty() ? default_run_id(result.started) : opts.run_id;

  std::unordered_set<std::string> ids;
  for (const auto& r : m.records) ids.insert(r.sample_id);
  if (opts.resume) {
    for (const auto& [id, o] : opts.resume->outcomes)
      if (ids.count(id)) result.insert(o);
  }

  std::vector<const SampleRecord*> pending;
  for (const auto& r : m.records) {
    if (result.outcomes.count(r.sample_id)) continue;
    const auto path = m.root / r.path;
    if (!std::filesystem::is_regular_file(path))
      throw EvaluationError("missing image for sample '" + r.sample_id + "': " + path.string());
    pending.push_back(&r);
  }

  Checkpoint checkpoint(opts.checkpoint, result);
  const std::size_t total = m.records.size();

  std::mutex mu;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  std::exception_ptr failure;

  auto worker = [&] {
    try {
      ScoringClient client(cfg);
      while (!abort.load()) {
        const auto i = next.fetch_add(1);
        if (i >= pending.size()) break;
        const auto& rec = *pending[i];
        const auto path = m.root / rec.path;
        auto outcome = client.score(rec.sample_id, read_image(path), content_type_for(path));

        std::lock_guard lock(mu);
        checkpoint.append(outcome);
        const auto& stored = result.outcomes.emplace(rec.sample_id, std::move(outcome)).first->second;
        if (opts.on_progress) opts.on_progress(stored, result.outcomes.size(), total);
      }
    } catch (...) {
      std::lock_guard lock(mu);
      if (!failure) failure = std::current_exception();
      abort = true;
    }
  };

  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(cfg.max_inflight), pending.size());
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  result.finished = std::chrono::system_clock::now();
  return result;
}

}  // namespace padeval
