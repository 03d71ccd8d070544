#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace padeval {

/// Presentation attack instrument species, the three attack groupings used
/// for every metric breakdown. Sub-types (gray print, PVC, ...) live in
/// SampleClass::detail and never reach the metrics.
enum class PaisKind { kPrint, kScreen, kComposite };

inline constexpr PaisKind kAllPais[] = {PaisKind::kPrint, PaisKind::kScreen,
                                        PaisKind::kComposite};

std::string_view to_string(PaisKind kind);
std::optional<PaisKind> pais_from_string(std::string_view name);

/// Ground-truth class of a sample: bona fide when `pais` is empty.
struct SampleClass {
  std::optional<PaisKind> pais;
  std::string detail;

  static SampleClass bona_fide(std::string detail = {}) { return {std::nullopt, std::move(detail)}; }
  static SampleClass attack(PaisKind kind, std::string detail = {}) { return {kind, std::move(detail)}; }

  bool is_bona_fide() const noexcept { return !pais.has_value(); }
  /// CSV label: bonafide, print, screen or composite.
  std::string_view label() const;

  friend bool operator==(const SampleClass&, const SampleClass&) = default;
};

/// True when `detail` is empty, unknown free text, or a known sub-type that
/// belongs to the class's PAIS (e.g. "gray_print" only under print).
bool detail_consistent(const SampleClass& cls);

struct SampleRecord {
  std::string sample_id;
  std::string path;  // relative to Manifest::root
  SampleClass cls;
  std::string country;  // ISO-3166 alpha-3
  std::string subject_id;
  std::optional<std::string> document_version;

  friend bool operator==(const SampleRecord&, const SampleRecord&) = default;
};

bool is_country_code(std::string_view s) noexcept;

struct Manifest {
  std::string name;
  std::filesystem::path root;
  std::vector<SampleRecord> records;

  std::size_t size() const noexcept { return records.size(); }
  const SampleRecord* find(std::string_view sample_id) const;
};

inline constexpr std::string_view kManifestHeader = "sample_id,path,label,detail,country,subject_id";

/// Parses the manifest CSV. An optional seventh `document_version` column is
/// accepted when the header carries it. Throws ManifestError naming the line.
Manifest parse_manifest(std::string_view text, std::string name = {},
                        std::filesystem::path root = {});

/// Reads a manifest file; root defaults to the file's directory.
Manifest load_manifest(const std::filesystem::path& file);

/// Inverse of parse_manifest. Throws ManifestError when a field would break
/// the unquoted CSV (embedded comma or newline).
std::string serialize_manifest(const Manifest& m);

struct Violation {
  std::string sample_id;  // empty for manifest-level violations
  std::string message;
};

struct ValidationReport {
  std::size_t total = 0;
  std::size_t bona_fide = 0;
  std::size_t attacks = 0;
  std::map<std::string, std::size_t> by_label;           // bonafide/print/screen/composite
  std::map<std::string, std::size_t> by_detail;          // "label/detail"
  std::map<std::string, std::size_t> by_country;
  std::map<std::string, std::map<std::string, std::size_t>> by_label_country;
  std::map<std::string, std::size_t> unique_subjects_by_label;
  std::map<std::string, std::size_t> samples_per_subject;
  std::size_t unique_subjects = 0;
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  std::size_t count(std::string_view label) const;
  std::size_t count_detail(std::string_view label, std::string_view detail) const;
};

ValidationReport validate_manifest(const Manifest& m);

std::string render_validation_text(const ValidationReport& r);
std::string render_validation_json(const ValidationReport& r);

/// Record selector for per-PAIS and per-country splits. A PAIS filter keeps
/// every bona fide record plus that PAIS's attacks; a country filter keeps
/// only that country's records.
struct ManifestFilter {
  std::optional<PaisKind> pais;
  std::optional<std::string> country;

  bool matches(const SampleRecord& r) const;
};

Manifest filter_manifest(const Manifest& m, const ManifestFilter& f);

}  // namespace padeval
