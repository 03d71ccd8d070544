#pragma once

// Brute-force reference for the threshold metrics. Every rate is recounted
// from scratch at every candidate threshold with an O(n) scan, sharing no
// code with the sorted sweep in the library.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <set>
#include <stdexcept>
#include <vector>

namespace padeval::bruteforce {

inline constexpr double kAboveMax = 1.0 + std::numeric_limits<double>::epsilon();

struct Counts {
  std::size_t attacks_accepted = 0;
  std::size_t bonafide_rejected = 0;
};

struct Point {
  double threshold;
  double apcer;
  double bpcer;
  Counts counts;
};

inline std::vector<double> candidates(const std::vector<double>& bf, const std::vector<double>& atk) {
  std::set<double> s{0.0, kAboveMax};
  s.insert(bf.begin(), bf.end());
  s.insert(atk.begin(), atk.end());
  return {s.begin(), s.end()};
}

inline Counts count_at(const std::vector<double>& bf, const std::vector<double>& atk, double t) {
  Counts c;
  for (double s : atk)
    if (s >= t) ++c.attacks_accepted;
  for (double s : bf)
    if (s < t) ++c.bonafide_rejected;
  return c;
}

inline std::vector<Point> curve(const std::vector<double>& bf, const std::vector<double>& atk) {
  std::vector<Point> pts;
  for (double t : candidates(bf, atk)) {
    const auto c = count_at(bf, atk, t);
    pts.push_back({t, double(c.attacks_accepted) / double(atk.size()),
                   double(c.bonafide_rejected) / double(bf.size()), c});
  }
  return pts;
}

struct Eer {
  double eer;
  double threshold;
};

inline Eer eer(const std::vector<double>& bf, const std::vector<double>& atk) {
  const auto pts = curve(bf, atk);
  auto diff_sign = [&](const Point& p) {
    const auto l = std::uint64_t(p.counts.attacks_accepted) * bf.size();
    const auto r = std::uint64_t(p.counts.bonafide_rejected) * atk.size();
    return l > r ? 1 : (l < r ? -1 : 0);
  };
  for (const auto& p : pts)
    if (diff_sign(p) == 0) return {p.apcer, p.threshold};
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (diff_sign(pts[i]) > 0 && diff_sign(pts[i + 1]) < 0) {
      const auto& a = pts[i];
      const auto& b = pts[i + 1];
      const double da = a.apcer - a.bpcer;
      const double db = b.apcer - b.bpcer;
      const double f = da / (da - db);
      return {a.apcer + (b.apcer - a.apcer) * f, a.threshold + (b.threshold - a.threshold) * f};
    }
  }
  throw std::logic_error("bruteforce: no crossing");
}

struct Op {
  double bpcer;
  double threshold;
};

inline Op bpcer_at_apcer(const std::vector<double>& bf, const std::vector<double>& atk, int ap) {
  for (const auto& p : curve(bf, atk))
    if (std::uint64_t(p.counts.attacks_accepted) * std::uint64_t(ap) <= atk.size()) return {p.bpcer, p.threshold};
  throw std::logic_error("bruteforce: target unreachable");
}

}  // namespace padeval::bruteforce
