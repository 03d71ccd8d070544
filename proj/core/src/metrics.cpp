#include "padeval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>

#include "padeval/error.hpp"
#include "padeval/scoreset.hpp"

namespace padeval {
namespace {

void check_scores(std::span<const double> scores) {
  for (double s : scores) {
    if (!std::isfinite(s) || s < 0.0 || s > 1.0)
      throw MetricsError("score " + std::to_string(s) + " outside [0,1]");
  }
}

// Error counts at one candidate threshold. Rates are derived from these so
// that equality tests are exact integer comparisons.
struct SweepPoint {
  double threshold;
  std::size_t attacks_accepted;
  std::size_t bonafide_rejected;
};

struct Sweep {
  std::size_t n_bonafide = 0;
  std::size_t n_attack = 0;
  std::vector<SweepPoint> points;

  DetPoint det(const SweepPoint& p) const {
    return {p.threshold, static_cast<double>(p.attacks_accepted) / static_cast<double>(n_attack),
            static_cast<double>(p.bonafide_rejected) / static_cast<double>(n_bonafide)};
  }
};

std::vector<double> sorted_copy(std::span<const double> v) {
  std::vector<double> out(v.begin(), v.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> candidate_thresholds(std::span<const std::vector<double>* const> sorted_lists) {
  std::vector<double> cands{0.0, kThresholdAboveMax};
  for (const auto* list : sorted_lists) cands.insert(cands.end(), list->begin(), list->end());
  std::sort(cands.begin(), cands.end());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
  return cands;
}

Sweep sweep(std::span<const double> bonafide, std::span<const double> attacks) {
  if (bonafide.empty()) throw MetricsError("no bona fide samples");
  if (attacks.empty()) throw MetricsError("no attack samples for PAIS");
  check_scores(bonafide);
  check_scores(attacks);

  const auto bf = sorted_copy(bonafide);
  const auto atk = sorted_copy(attacks);
  const std::vector<double>* lists[] = {&bf, &atk};
  const auto cands = candidate_thresholds(lists);

  Sweep s;
  s.n_bonafide = bf.size();
  s.n_attack = atk.size();
  s.points.reserve(cands.size());
  // Both cursors only move forward as the threshold grows.
  std::size_t bf_below = 0;
  std::size_t atk_below = 0;
  for (double t : cands) {
    while (bf_below < bf.size() && bf[bf_below] < t) ++bf_below;
    while (atk_below < atk.size() && atk[atk_below] < t) ++atk_below;
    s.points.push_back({t, atk.size() - atk_below, bf_below});
  }
  return s;
}

// Positive while APCER > BPCER, compared exactly via cross-multiplication.
int crossing_sign(const Sweep& s, const SweepPoint& p) {
  const auto lhs = static_cast<std::uint64_t>(p.attacks_accepted) * s.n_bonafide;
  const auto rhs = static_cast<std::uint64_t>(p.bonafide_rejected) * s.n_attack;
  return lhs > rhs ? 1 : (lhs < rhs ? -1 : 0);
}

void check_ap(int ap) {
  if (ap <= 0) throw MetricsError("operating point AP must be positive, got " + std::to_string(ap));
}

ClassCounts counts_of(const ScorePartition& p) {
  ClassCounts c;
  c.bona_fide = p.bona_fide.size();
  for (const auto& [kind, scores] : p.attacks)
    if (!scores.empty()) c.attacks[kind] = scores.size();
  return c;
}

}  // namespace

Score Score::of(double v) {
  if (!std::isfinite(v) || v < 0.0 || v > 1.0)
    throw MetricsError("score " + std::to_string(v) + " outside [0,1]");
  return {v, false};
}

double apcer(std::span<const double> attack_scores, double threshold) {
  if (attack_scores.empty()) throw MetricsError("no attack samples for PAIS");
  const auto accepted = std::count_if(attack_scores.begin(), attack_scores.end(), [&](double s) {
    return decide(s, threshold) == Decision::kBonaFide;
  });
  return static_cast<double>(accepted) / static_cast<double>(attack_scores.size());
}

double bpcer(std::span<const double> bonafide_scores, double threshold) {
  if (bonafide_scores.empty()) throw MetricsError("no bona fide samples");
  const auto rejected = std::count_if(bonafide_scores.begin(), bonafide_scores.end(), [&](double s) {
    return decide(s, threshold) == Decision::kAttack;
  });
  return static_cast<double>(rejected) / static_cast<double>(bonafide_scores.size());
}

std::vector<double> ScorePartition::selected_attacks(AttackSelector sel) const {
  if (sel.pais) {
    auto it = attacks.find(*sel.pais);
    return it == attacks.end() ? std::vector<double>{} : it->second;
  }
  std::vector<double> pooled;
  pooled.reserve(attack_count());
  for (const auto& [kind, scores] : attacks) pooled.insert(pooled.end(), scores.begin(), scores.end());
  return pooled;
}

std::size_t ScorePartition::attack_count() const noexcept {
  std::size_t n = 0;
  for (const auto& [kind, scores] : attacks) n += scores.size();
  return n;
}

DetCurve det_curve(std::span<const double> bonafide, std::span<const double> attacks) {
  const auto s = sweep(bonafide, attacks);
  DetCurve curve;
  curve.reserve(s.points.size());
  for (const auto& p : s.points) curve.push_back(s.det(p));
  return curve;
}

DetCurve det_curve(const ScorePartition& p, AttackSelector sel) {
  return det_curve(p.bona_fide, p.selected_attacks(sel));
}

EerResult eer(std::span<const double> bonafide, std::span<const double> attacks) {
  const auto s = sweep(bonafide, attacks);
  for (const auto& p : s.points) {
    if (crossing_sign(s, p) == 0) return {s.det(p).apcer, p.threshold};
  }
  // The sentinels force sign +1 at threshold 0 and -1 above 1, and the sign
  // is non-increasing along the sweep, so exactly one bracket exists.
  for (std::size_t i = 0; i + 1 < s.points.size(); ++i) {
    if (crossing_sign(s, s.points[i]) > 0 && crossing_sign(s, s.points[i + 1]) < 0) {
      const auto lo = s.det(s.points[i]);
      const auto hi = s.det(s.points[i + 1]);
      const double d_lo = lo.apcer - lo.bpcer;
      const double d_hi = hi.apcer - hi.bpcer;
      const double frac = d_lo / (d_lo - d_hi);
      const double rate = lo.apcer + (hi.apcer - lo.apcer) * frac;
      const double threshold = lo.threshold + (hi.threshold - lo.threshold) * frac;
      return {std::clamp(rate, 0.0, 1.0), threshold};
    }
  }
  throw MetricsError("no APCER/BPCER crossing found");
}

EerResult eer(const ScorePartition& p, AttackSelector sel) {
  return eer(p.bona_fide, p.selected_attacks(sel));
}

OperatingPoint bpcer_at_apcer(std::span<const double> bonafide, std::span<const double> attacks, int ap) {
  check_ap(ap);
  const auto s = sweep(bonafide, attacks);
  const auto target = static_cast<std::uint64_t>(ap);
  for (const auto& p : s.points) {
    // apcer <= 1/ap  <=>  accepted * ap <= n_attack
    if (static_cast<std::uint64_t>(p.attacks_accepted) * target <= s.n_attack) return {s.det(p).bpcer, p.threshold};
  }
  throw MetricsError("no threshold reaches the APCER target");
}

OperatingPoint bpcer_at_apcer(const ScorePartition& p, AttackSelector sel, int ap) {
  return bpcer_at_apcer(p.bona_fide, p.selected_attacks(sel), ap);
}

OperatingPoint bpcer_at_max_pais_apcer(const ScorePartition& p, int ap) {
  check_ap(ap);
  if (p.bona_fide.empty()) throw MetricsError("no bona fide samples");
  if (p.attack_count() == 0) throw MetricsError("no attack samples for PAIS");
  check_scores(p.bona_fide);

  const auto bf = sorted_copy(p.bona_fide);
  std::vector<std::vector<double>> species;
  for (const auto& [kind, scores] : p.attacks) {
    if (scores.empty()) continue;
    check_scores(scores);
    species.push_back(sorted_copy(scores));
  }
  std::vector<const std::vector<double>*> lists{&bf};
  for (const auto& v : species) lists.push_back(&v);
  const auto cands = candidate_thresholds(lists);

  const auto target = static_cast<std::uint64_t>(ap);
  for (double t : cands) {
    const bool all_within = std::all_of(species.begin(), species.end(), [&](const std::vector<double>& v) {
      const auto accepted = static_cast<std::uint64_t>(v.end() - std::lower_bound(v.begin(), v.end(), t));
      return accepted * target <= v.size();
    });
    if (all_within) {
      const auto rejected = std::lower_bound(bf.begin(), bf.end(), t) - bf.begin();
      return {static_cast<double>(rejected) / static_cast<double>(bf.size()), t};
    }
  }
  throw MetricsError("no threshold reaches the APCER target");
}

double av_rank(double bpcer10, double bpcer20, double bpcer100) {
  for (double b : {bpcer10, bpcer20, bpcer100}) {
    if (!std::isfinite(b) || b < 0.0 || b > 1.0)
      throw MetricsError("BPCER " + std::to_string(b) + " outside [0,1]; expected a fraction");
  }
  return kAvRankWeights[0] * bpcer10 + kAvRankWeights[1] * bpcer20 + kAvRankWeights[2] * bpcer100;
}

std::size_t ClassCounts::attack_total() const noexcept {
  std::size_t n = 0;
  for (const auto& [kind, c] : attacks) n += c;
  return n;
}

BreakdownReport summarize(const ScorePartition& p, AttackSelector sel) {
  const auto attacks = p.selected_attacks(sel);
  BreakdownReport r;
  r.counts.bona_fide = p.bona_fide.size();
  if (sel.pais) {
    r.counts.attacks[*sel.pais] = attacks.size();
  } else {
    r.counts = counts_of(p);
  }
  const auto e = eer(p.bona_fide, attacks);
  r.eer = e.eer;
  r.eer_threshold = e.threshold;
  for (int ap : kRankingPoints) r.bpcer_ap[ap] = bpcer_at_apcer(p.bona_fide, attacks, ap);
  r.det = det_curve(p.bona_fide, attacks);
  return r;
}

MetricsReport evaluate_partition(const ScorePartition& p, std::string run_id) {
  if (p.bona_fide.empty()) throw MetricsError("no bona fide samples");
  if (p.attack_count() == 0) throw MetricsError("no attack samples");

  MetricsReport rep;
  rep.run_id = std::move(run_id);
  rep.global = summarize(p, AttackSelector::pooled());
  for (int ap : kRankingPoints) rep.bpcer_ap_max_pais[ap] = bpcer_at_max_pais_apcer(p, ap);
  rep.av_rank = av_rank(rep.global.bpcer_ap.at(10).bpcer, rep.global.bpcer_ap.at(20).bpcer,
                        rep.global.bpcer_ap.at(100).bpcer);
  for (PaisKind kind : kAllPais) {
    auto it = p.attacks.find(kind);
    if (it == p.attacks.end() || it->second.empty()) {
      rep.warnings.push_back("no " + std::string(to_string(kind)) + " attacks; PAIS breakdown omitted");
      continue;
    }
    rep.per_pais[kind] = summarize(p, AttackSelector::only(kind));
  }
  return rep;
}

MetricsReport evaluate_all(const ScoreSet& scores, const Manifest& m) {
  ScorePartition global;
  std::map<std::string, ScorePartition> by_country;

  for (const auto& r : m.records) {
    const auto* outcome = scores.find(r.sample_id);
    if (outcome == nullptr) throw MetricsError("missing score for sample '" + r.sample_id + "'");
    const double v = outcome->score.value;
    auto& country = by_country[r.country];
    if (r.cls.is_bona_fide()) {
      global.bona_fide.push_back(v);
      country.bona_fide.push_back(v);
    } else {
      global.attacks[*r.cls.pais].push_back(v);
      country.attacks[*r.cls.pais].push_back(v);
    }
  }

  auto rep = evaluate_partition(global, scores.run_id);
  for (const auto& [country, part] : by_country) {
    if (part.bona_fide.empty() || part.attack_count() == 0) {
      rep.warnings.push_back("country " + country + " lacks " +
                             (part.bona_fide.empty() ? "bona fide" : "attack") +
                             " samples; country breakdown omitted");
      continue;
    }
    rep.per_country[country] = summarize(part, AttackSelector::pooled());
  }
  return rep;
}

}  // namespace padeval
