#include "padeval/corpus.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <system_error>

#include "json.hpp"
#include "padeval/error.hpp"
#include "padeval/rng.hpp"
#include "padeval/text.hpp"
#include "png_io.hpp"

namespace padeval {
namespace {

// Corner marker: a 4x2 grid of square cells. The top row is the sync pattern
// white/black/white/black; the bottom row is one-hot over the class index
// (bona fide, print, screen, composite).
constexpr int kMarkerCols = 4;
constexpr int kMarkerRows = 2;
constexpr std::array<bool, kMarkerCols> kSyncRow = {true, false, true, false};
constexpr int kNoiseBlock = 8;
constexpr int kMinImageSide = 16;

int marker_cell(int width, int height) { return std::max(2, std::min(width, height) / 32); }

int class_index(const SampleClass& cls) {
  if (cls.is_bona_fide()) return 0;
  switch (*cls.pais) {
    case PaisKind::kPrint:
      return 1;
    case PaisKind::kScreen:
      return 2;
    case PaisKind::kComposite:
      return 3;
  }
  return 0;
}

SampleClass class_from_index(int idx) {
  switch (idx) {
    case 1:
      return SampleClass::attack(PaisKind::kPrint);
    case 2:
      return SampleClass::attack(PaisKind::kScreen);
    case 3:
      return SampleClass::attack(PaisKind::kComposite);
    default:
      return SampleClass::bona_fide();
  }
}

void fill_cell(png::RgbImage& img, int cell, int col, int row, bool white) {
  const std::uint8_t v = white ? 255 : 0;
  for (int y = row * cell; y < (row + 1) * cell; ++y)
    for (int x = col * cell; x < (col + 1) * cell; ++x) {
      auto* p = img.at(x, y);
      p[0] = p[1] = p[2] = v;
    }
}

// 1 = white, 0 = black, -1 = neither.
int read_cell(const png::RgbImage& img, int cell, int col, int row) {
  std::array<double, 3> sum{};
  for (int y = row * cell; y < (row + 1) * cell; ++y)
    for (int x = col * cell; x < (col + 1) * cell; ++x) {
      const auto* p = img.at(x, y);
      for (int c = 0; c < 3; ++c) sum[c] += p[c];
    }
  const double n = static_cast<double>(cell) * cell;
  const bool white = std::all_of(sum.begin(), sum.end(), [&](double s) { return s / n > 191.0; });
  const bool black = std::all_of(sum.begin(), sum.end(), [&](double s) { return s / n < 64.0; });
  return white ? 1 : (black ? 0 : -1);
}

std::string sample_id_for(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "s%05zu", index);
  return buf;
}

std::string subject_id_for(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "u%03zu", index);
  return buf;
}

void check_gaussian(const Gaussian& g, const char* which) {
  if (!(g.mean >= 0.0 && g.mean <= 1.0))
    throw MetricsError(std::string(which) + " mean must lie in [0,1]");
  if (!(g.stddev > 0.0) || !std::isfinite(g.stddev))
    throw MetricsError(std::string(which) + " stddev must be positive");
}

}  // namespace

CorpusSpec CorpusSpec::track1_default() {
  struct Share {
    SampleClass cls;
    std::size_t total;
  };
  const std::array shares = {
      Share{SampleClass::bona_fide(), 3000},
      Share{SampleClass::attack(PaisKind::kScreen), 3000},
      Share{SampleClass::attack(PaisKind::kPrint, "gray_print"), 1000},
      Share{SampleClass::attack(PaisKind::kPrint, "colour_print"), 2000},
      Share{SampleClass::attack(PaisKind::kComposite, "physical_composite"), 1500},
      Share{SampleClass::attack(PaisKind::kComposite, "digital_composite"), 1500},
  };
  const std::array<std::string, 4> countries = {"CHL", "GTM", "MEX", "PAN"};

  CorpusSpec spec;
  for (const auto& share : shares)
    for (const auto& country : countries)
      spec.entries.push_back({share.cls, country, share.total / countries.size()});
  return spec;
}

std::size_t CorpusSpec::total() const noexcept {
  std::size_t n = 0;
  for (const auto& e : entries) n += e.count;
  return n;
}

void CorpusSpec::validate() const {
  if (total() == 0) throw ManifestError("corpus spec has no samples");
  if (width < kMinImageSide || height < kMinImageSide)
    throw ManifestError("corpus image must be at least 16x16");
  if (subjects == 0) throw ManifestError("corpus spec needs at least one subject");
  for (const auto& e : entries) {
    if (!is_country_code(e.country)) throw ManifestError("corpus country '" + e.country + "' is not alpha-3");
    if (!detail_consistent(e.cls))
      throw ManifestError("corpus detail '" + e.cls.detail + "' inconsistent with " + std::string(e.cls.label()));
  }
}

CorpusSpec parse_corpus_spec(std::string_view json_text) {
  CorpusSpec spec;
  try {
    const auto j = nlohmann::json::parse(json_text);
    spec.seed = j.value("seed", spec.seed);
    spec.width = j.value("width", spec.width);
    spec.height = j.value("height", spec.height);
    spec.subjects = j.value("subjects", spec.subjects);
    for (const auto& e : j.at("counts")) {
      const auto label = e.at("label").get<std::string>();
      auto detail = e.value("detail", std::string{});
      CorpusEntry entry;
      if (label == "bonafide") {
        entry.cls = SampleClass::bona_fide(std::move(detail));
      } else if (auto kind = pais_from_string(label)) {
        entry.cls = SampleClass::attack(*kind, std::move(detail));
      } else {
        throw ManifestError("corpus spec: unknown label '" + label + "'");
      }
      entry.country = e.at("country").get<std::string>();
      entry.count = e.at("count").get<std::size_t>();
      spec.entries.push_back(std::move(entry));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ManifestError(std::string("corpus spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

std::string serialize_corpus_spec(const CorpusSpec& spec) {
  nlohmann::ordered_json j;
  j["generator"] = rng::kAlgorithm;
  j["seed"] = spec.seed;
  j["width"] = spec.width;
  j["height"] = spec.height;
  j["subjects"] = spec.subjects;
  auto counts = nlohmann::ordered_json::array();
  for (const auto& e : spec.entries)
    counts.push_back({{"label", std::string(e.cls.label())},
                      {"detail", e.cls.detail},
                      {"country", e.country},
                      {"count", e.count}});
  j["counts"] = std::move(counts);
  return j.dump(2) + "\n";
}

std::vector<std::uint8_t> render_sample_png(const SampleClass& cls, int width, int height,
                                            std::uint64_t image_seed) {
  png::RgbImage img{width, height, std::vector<std::uint8_t>(static_cast<std::size_t>(width) * height * 3)};
  rng::CounterRng noise(image_seed);
  for (int by = 0; by < height; by += kNoiseBlock) {
    for (int bx = 0; bx < width; bx += kNoiseBlock) {
      const auto bits = noise.next_u64();
      const std::uint8_t rgb[3] = {static_cast<std::uint8_t>(bits), static_cast<std::uint8_t>(bits >> 8),
                                   static_cast<std::uint8_t>(bits >> 16)};
      for (int y = by; y < std::min(by + kNoiseBlock, height); ++y)
        for (int x = bx; x < std::min(bx + kNoiseBlock, width); ++x) std::copy_n(rgb, 3, img.at(x, y));
    }
  }
  const int cell = marker_cell(width, height);
  const int idx = class_index(cls);
  for (int col = 0; col < kMarkerCols; ++col) {
    fill_cell(img, cell, col, 0, kSyncRow[col]);
    fill_cell(img, cell, col, 1, col == idx);
  }
  return png::encode(img);
}

std::optional<SampleClass> decode_class_marker(std::span<const std::uint8_t> png_bytes) {
  png::RgbImage img;
  if (!png::decode(png_bytes, img)) return std::nullopt;
  if (img.width < kMinImageSide || img.height < kMinImageSide) return std::nullopt;
  const int cell = marker_cell(img.width, img.height);
  for (int col = 0; col < kMarkerCols; ++col)
    if (read_cell(img, cell, col, 0) != (kSyncRow[col] ? 1 : 0)) return std::nullopt;
  int hot = -1;
  for (int col = 0; col < kMarkerCols; ++col) {
    const int v = read_cell(img, cell, col, 1);
    if (v < 0) return std::nullopt;
    if (v == 1) {
      if (hot >= 0) return std::nullopt;
      hot = col;
    }
  }
  if (hot < 0) return std::nullopt;
  return class_from_index(hot);
}

Manifest gen_corpus(const CorpusSpec& spec, const std::filesystem::path& out_dir) {
  spec.validate();
  const auto image_dir = out_dir / "images";
  std::error_code ec;
  std::filesystem::create_directories(image_dir, ec);
  if (ec) throw IoError("cannot create " + image_dir.string() + ": " + ec.message());

  Manifest m;
  m.name = out_dir.filename().string();
  m.root = out_dir;
  m.records.reserve(spec.total());

  std::map<std::string, std::size_t> per_class_index;
  std::size_t index = 0;
  for (const auto& entry : spec.entries) {
    const auto class_key = std::string(entry.cls.label()) + "/" + entry.cls.detail;
    for (std::size_t k = 0; k < entry.count; ++k) {
      ++index;
      SampleRecord r;
      r.sample_id = sample_id_for(index);
      r.path = "images/" + r.sample_id + ".png";
      r.cls = entry.cls;
      r.country = entry.country;
      r.subject_id = subject_id_for(per_class_index[class_key]++ % spec.subjects);

      const auto image_seed = rng::CounterRng::stream(spec.seed, index).next_u64();
      const auto bytes = render_sample_png(r.cls, spec.width, spec.height, image_seed);
      text::write_file(out_dir / r.path,
                       std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
      m.records.push_back(std::move(r));
    }
  }
  text::write_file(out_dir / "manifest.csv", serialize_manifest(m));
  return m;
}

void ScoreDistSpec::validate() const {
  check_gaussian(bona_fide, "bona fide");
  check_gaussian(attack, "attack");
  if (n_bona_fide == 0 || n_attack == 0) throw MetricsError("score counts must be at least 1");
}

ScorePartition gen_scores(const ScoreDistSpec& spec) {
  spec.validate();
  auto draw = [](rng::CounterRng& g, const Gaussian& d) {
    return std::clamp(d.mean + d.stddev * g.normal(), 0.0, 1.0);
  };
  ScorePartition p;
  rng::CounterRng bf_stream = rng::CounterRng::stream(spec.seed, 0);
  rng::CounterRng atk_stream = rng::CounterRng::stream(spec.seed, 1);
  p.bona_fide.reserve(spec.n_bona_fide);
  for (std::size_t i = 0; i < spec.n_bona_fide; ++i) p.bona_fide.push_back(draw(bf_stream, spec.bona_fide));
  for (std::size_t i = 0; i < spec.n_attack; ++i)
    p.attacks[kAllPais[i % std::size(kAllPais)]].push_back(draw(atk_stream, spec.attack));
  return p;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double analytic_eer(const ScoreDistSpec& spec) {
  check_gaussian(spec.bona_fide, "bona fide");
  check_gaussian(spec.attack, "attack");
  if (spec.bona_fide.stddev != spec.attack.stddev)
    throw MetricsError("closed-form EER needs equal stddevs; estimate by simulation with gen_scores instead");
  return normal_cdf(-std::abs(spec.bona_fide.mean - spec.attack.mean) / (2.0 * spec.bona_fide.stddev));
}

}  // namespace padeval
