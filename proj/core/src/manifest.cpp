#include "padeval/manifest.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <sstream>
#include <unordered_set>
#include <utility>

#include "json.hpp"
#include "padeval/error.hpp"
#include "padeval/text.hpp"

namespace padeval {
namespace {

struct KnownDetail {
  std::string_view detail;
  PaisKind pais;
};

// Sub-types with a fixed PAIS. Anything else in the detail column is treated
// as free text and accepted under any class.
constexpr std::array kKnownDetails = {
    KnownDetail{"gray_print", PaisKind::kPrint},
    KnownDetail{"colour_print", PaisKind::kPrint},
    KnownDetail{"color_print", PaisKind::kPrint},
    KnownDetail{"paper_print", PaisKind::kPrint},
    KnownDetail{"pvc", PaisKind::kPrint},
    KnownDetail{"smartphone", PaisKind::kScreen},
    KnownDetail{"tablet", PaisKind::kScreen},
    KnownDetail{"laptop", PaisKind::kScreen},
    KnownDetail{"physical_composite", PaisKind::kComposite},
    KnownDetail{"digital_composite", PaisKind::kComposite},
};

constexpr std::string_view kDocumentVersionColumn = "document_version";

SampleClass class_from_label(std::string_view label, std::string detail, std::size_t line) {
  if (label == "bonafide") return SampleClass::bona_fide(std::move(detail));
  if (auto kind = pais_from_string(label)) return SampleClass::attack(*kind, std::move(detail));
  throw ManifestError("unknown label '" + std::string(label) + "'", line);
}

bool has_forbidden_char(std::string_view s) {
  return s.find_first_of(",\n\r") != std::string_view::npos;
}

}  // namespace

std::string_view to_string(PaisKind kind) {
  switch (kind) {
    case PaisKind::kPrint:
      return "print";
    case PaisKind::kScreen:
      return "screen";
    case PaisKind::kComposite:
      return "composite";
  }
  return "?";
}

std::optional<PaisKind> pais_from_string(std::string_view name) {
  for (auto kind : kAllPais)
    if (to_string(kind) == name) return kind;
  return std::nullopt;
}

std::string_view SampleClass::label() const {
  return pais ? to_string(*pais) : std::string_view("bonafide");
}

bool detail_consistent(const SampleClass& cls) {
  if (cls.detail.empty()) return true;
  for (const auto& known : kKnownDetails) {
    if (known.detail == cls.detail) return cls.pais == known.pais;
  }
  return true;
}

bool is_country_code(std::string_view s) noexcept {
  return s.size() == 3 && std::all_of(s.begin(), s.end(), [](char c) { return c >= 'A' && c <= 'Z'; });
}

const SampleRecord* Manifest::find(std::string_view sample_id) const {
  for (const auto& r : records)
    if (r.sample_id == sample_id) return &r;
  return nullptr;
}

Manifest parse_manifest(std::string_view text, std::string name, std::filesystem::path root) {
  Manifest m;
  m.name = std::move(name);
  m.root = std::move(root);

  const auto rows = text::lines(text);
  if (rows.empty()) throw ManifestError("missing header", 1);

  bool with_version = false;
  if (rows[0] == kManifestHeader) {
    with_version = false;
  } else if (rows[0] == std::string(kManifestHeader) + "," + std::string(kDocumentVersionColumn)) {
    with_version = true;
  } else {
    throw ManifestError("bad header, expected '" + std::string(kManifestHeader) + "'", 1);
  }
  const std::size_t columns = with_version ? 7 : 6;

  std::unordered_set<std::string> seen;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const std::size_t line = i + 1;
    if (rows[i].empty()) continue;
    const auto fields = text::split(rows[i], ',');
    if (fields.size() != columns) {
      throw ManifestError("expected " + std::to_string(columns) + " columns, got " +
                              std::to_string(fields.size()),
                          line);
    }
    SampleRecord r;
    r.sample_id = fields[0];
    if (r.sample_id.empty()) throw ManifestError("empty sample_id", line);
    if (!seen.insert(r.sample_id).second)
      throw ManifestError("duplicate sample_id '" + r.sample_id + "'", line);
    r.path = fields[1];
    r.cls = class_from_label(fields[2], std::string(fields[3]), line);
    r.country = fields[4];
    r.subject_id = fields[5];
    if (with_version && !fields[6].empty()) r.document_version = std::string(fields[6]);
    m.records.push_back(std::move(r));
  }
  return m;
}

Manifest load_manifest(const std::filesystem::path& file) {
  auto m = parse_manifest(text::read_file(file), file.stem().string(), file.parent_path());
  return m;
}

std::string serialize_manifest(const Manifest& m) {
  const bool with_version = std::any_of(m.records.begin(), m.records.end(),
                                        [](const SampleRecord& r) { return r.document_version.has_value(); });
  std::string out(kManifestHeader);
  if (with_version) out += "," + std::string(kDocumentVersionColumn);
  out += '\n';
  for (const auto& r : m.records) {
    for (std::string_view field : {std::string_view(r.sample_id), std::string_view(r.path),
                                   std::string_view(r.cls.detail), std::string_view(r.country),
                                   std::string_view(r.subject_id)}) {
      if (has_forbidden_char(field))
        throw ManifestError("field of '" + r.sample_id + "' contains a comma or newline");
    }
    out += r.sample_id;
    out += ',';
    out += r.path;
    out += ',';
    out += r.cls.label();
    out += ',';
    out += r.cls.detail;
    out += ',';
    out += r.country;
    out += ',';
    out += r.subject_id;
    if (with_version) {
      out += ',';
      if (r.document_version) {
        if (has_forbidden_char(*r.document_version))
          throw ManifestError("document_version of '" + r.sample_id + "' contains a comma or newline");
        out += *r.document_version;
      }
    }
    out += '\n';
  }
  return out;
}

std::size_t ValidationReport::count(std::string_view label) const {
  auto it = by_label.find(std::string(label));
  return it == by_label.end() ? 0 : it->second;
}

std::size_t ValidationReport::count_detail(std::string_view label, std::string_view detail) const {
  auto it = by_detail.find(std::string(label) + "/" + std::string(detail));
  return it == by_detail.end() ? 0 : it->second;
}

ValidationReport validate_manifest(const Manifest& m) {
  ValidationReport rep;
  rep.total = m.records.size();
  for (auto label : {"bonafide", "print", "screen", "composite"}) rep.by_label[label] = 0;

  std::map<std::string, std::set<std::string>> subjects_by_label;
  std::set<std::string> ids;
  for (const auto& r : m.records) {
    const std::string label(r.cls.label());
    ++rep.by_label[label];
    (r.cls.is_bona_fide() ? rep.bona_fide : rep.attacks) += 1;
    ++rep.by_detail[label + "/" + r.cls.detail];
    ++rep.by_country[r.country];
    ++rep.by_label_country[label][r.country];
    ++rep.samples_per_subject[r.subject_id];
    subjects_by_label[label].insert(r.subject_id);

    if (r.sample_id.empty()) rep.violations.push_back({r.sample_id, "empty sample_id"});
    if (!ids.insert(r.sample_id).second) rep.violations.push_back({r.sample_id, "duplicate sample_id"});
    if (r.path.empty()) rep.violations.push_back({r.sample_id, "empty path"});
    if (!is_country_code(r.country))
      rep.violations.push_back({r.sample_id, "country not 3 uppercase letters"});
    if (!detail_consistent(r.cls))
      rep.violations.push_back({r.sample_id, "detail '" + r.cls.detail + "' inconsistent with label " + label});
  }
  for (const auto& [label, subjects] : subjects_by_label) rep.unique_subjects_by_label[label] = subjects.size();
  rep.unique_subjects = rep.samples_per_subject.size();
  if (rep.bona_fide == 0) rep.violations.push_back({"", "no bona fide records"});
  return rep;
}

std::string render_validation_text(const ValidationReport& r) {
  std::ostringstream os;
  os << "records: " << r.total << " (bona fide " << r.bona_fide << ", attacks " << r.attacks << ")\n";
  os << "unique subjects: " << r.unique_subjects << '\n';
  os << "by class:\n";
  for (const auto& [label, n] : r.by_label) {
    auto subj = r.unique_subjects_by_label.find(label);
    os << "  " << label << ": " << n << " (subjects "
       << (subj == r.unique_subjects_by_label.end() ? 0 : subj->second) << ")\n";
  }
  os << "by sub-type:\n";
  for (const auto& [key, n] : r.by_detail) os << "  " << key << ": " << n << '\n';
  os << "by country:\n";
  for (const auto& [country, n] : r.by_country) os << "  " << country << ": " << n << '\n';
  if (r.violations.empty()) {
    os << "violations: none\n";
  } else {
    os << "violations: " << r.violations.size() << '\n';
    for (const auto& v : r.violations)
      os << "  " << (v.sample_id.empty() ? "<manifest>" : v.sample_id) << ": " << v.message << '\n';
  }
  return os.str();
}

std::string render_validation_json(const ValidationReport& r) {
  nlohmann::ordered_json j;
  j["total"] = r.total;
  j["bona_fide"] = r.bona_fide;
  j["attacks"] = r.attacks;
  j["unique_subjects"] = r.unique_subjects;
  j["by_label"] = r.by_label;
  j["by_detail"] = r.by_detail;
  j["by_country"] = r.by_country;
  j["by_label_country"] = r.by_label_country;
  j["unique_subjects_by_label"] = r.unique_subjects_by_label;
  auto violations = nlohmann::ordered_json::array();
  for (const auto& v : r.violations) violations.push_back({{"sample_id", v.sample_id}, {"message", v.message}});
  j["violations"] = std::move(violations);
  return j.dump(2) + "\n";
}

bool ManifestFilter::matches(const SampleRecord& r) const {
  if (country && r.country != *country) return false;
  if (pais && !r.cls.is_bona_fide() && r.cls.pais != pais) return false;
  return true;
}

Manifest filter_manifest(const Manifest& m, const ManifestFilter& f) {
  Manifest out;
  out.name = m.name;
  out.root = m.root;
  std::copy_if(m.records.begin(), m.records.end(), std::back_inserter(out.records),
               [&](const SampleRecord& r) { return f.matches(r); });
  return out;
}

}  // namespace padeval
