#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "padeval/manifest.hpp"
#include "padeval/metrics.hpp"

namespace padeval {

struct CorpusEntry {
  SampleClass cls;
  std::string country;
  std::size_t count = 0;
};

/// Recipe for a synthetic marker corpus. Entries are generated in order.
struct CorpusSpec {
  std::vector<CorpusEntry> entries;
  int width = 384;
  int height = 384;
  std::uint64_t seed = 2025;
  /// Subject ids are cycled per class over this many synthetic subjects.
  std::size_t subjects = 155;

  /// Track-1 shaped corpus: 3,000 bona fide, 3,000 screen, 1,000 gray and
  /// 2,000 colour prints, 1,500 physical and 1,500 digital composites, split
  /// evenly over CHL, GTM, MEX and PAN.
  static CorpusSpec track1_default();

  std::size_t total() const noexcept;
  /// Throws ManifestError on an unusable spec (no samples, bad country,
  /// image smaller than 16x16, zero subjects).
  void validate() const;
};

CorpusSpec parse_corpus_spec(std::string_view json_text);
std::string serialize_corpus_spec(const CorpusSpec& spec);

/// Writes `images/<sample_id>.png` and `manifest.csv` under out_dir and
/// returns the manifest (root = out_dir). Output is a pure function of the
/// spec. Throws IoError when out_dir is not writable.
Manifest gen_corpus(const CorpusSpec& spec, const std::filesystem::path& out_dir);

/// The PNG for one sample: seeded 8x8-block colour noise with the class
/// marker stamped into the top-left corner.
std::vector<std::uint8_t> render_sample_png(const SampleClass& cls, int width, int height,
                                            std::uint64_t image_seed);

/// Reads the corner marker back. Empty when the bytes are not a PNG or the
/// marker is absent or corrupt. The returned class carries no detail.
std::optional<SampleClass> decode_class_marker(std::span<const std::uint8_t> png_bytes);

struct Gaussian {
  double mean = 0.5;
  double stddev = 0.1;
};

struct ScoreDistSpec {
  Gaussian bona_fide{0.7, 0.1};
  Gaussian attack{0.3, 0.1};
  std::size_t n_bona_fide = 10'000;
  std::size_t n_attack = 10'000;
  std::uint64_t seed = 1;

  /// Throws MetricsError: means must lie in [0,1], stddevs be positive and
  /// counts be at least 1.
  void validate() const;
};

/// Normal draws clipped to [0,1]. Attack scores are dealt round-robin over
/// print, screen and composite.
ScorePartition gen_scores(const ScoreDistSpec& spec);

/// Standard normal CDF.
double normal_cdf(double x);

/// Closed-form EER, Phi(-|mu_bf - mu_atk| / (2 sigma)), ignoring clipping.
/// Only valid for equal stddevs; throws MetricsError otherwise.
double analytic_eer(const ScoreDistSpec& spec);

}  // namespace padeval
