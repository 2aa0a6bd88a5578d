#pragma once
/**
 * @file heading_set.hpp
 * @brief Wrap-aware sets of heading intervals on the circle.
 *
 * A HeadingSet is a canonical union of disjoint counterclockwise arcs,
 * sorted by start angle; the empty set and the full circle are distinct
 * canonical values. Arcs separated by less than the merge tolerance are
 * coalesced, so the algebra is exact up to zero-measure boundary
 * degeneracies.
 */

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "dmc/angles.hpp"
#include "dmc/maneuver_cue.hpp"

namespace dmc {

/// Counterclockwise arc from lo spanning width radians; width in [0, 2*pi].
struct AngularInterval {
  double lo;
  double width;

  double hi() const { return lo + width; }  // unwrapped end angle

  /// Wrap-invariant closed containment test.
  bool contains(double theta) const {
    if (width >= kTwoPi) return true;
    return wrap_two_pi(theta - lo) <= width;
  }

  double midpoint() const { return wrap_angle(lo + 0.5 * width); }
};

class HeadingSet {
 public:
  static constexpr double kMergeTol = 1e-12;

  HeadingSet() = default;

  static HeadingSet empty() { return {}; }

  static HeadingSet full() {
    HeadingSet s;
    s.arcs_.push_back({-kPi, kTwoPi});
    return s;
  }

  /// Single arc; width is clamped to [0, 2*pi].
  static HeadingSet arc(double lo, double width) {
    width = std::clamp(width, 0.0, kTwoPi);
    if (width >= kTwoPi) return full();
    HeadingSet s;
    s.arcs_.push_back({wrap_angle(lo), width});
    return s;
  }

  /// Union of arbitrary arcs, normalized to canonical form.
  static HeadingSet from_arcs(std::vector<AngularInterval> arcs);

  bool is_empty() const { return arcs_.empty(); }
  bool is_full() const {
    return arcs_.size() == 1 && arcs_.front().width >= kTwoPi;
  }

  const std::vector<AngularInterval>& arcs() const { return arcs_; }

  bool contains(double theta) const {
    for (const auto& a : arcs_) {
      if (a.contains(theta)) return true;
    }
    return false;
  }

  /// Total angular measure, in [0, 2*pi].
  double measure() const {
    double total = 0.0;
    for (const auto& a : arcs_) total += a.width;
    return std::min(total, kTwoPi);
  }

  HeadingSet complement() const;

 private:
  std::vector<AngularInterval> arcs_;  // sorted by lo, pairwise disjoint
};

inline HeadingSet HeadingSet::from_arcs(std::vector<AngularInterval> arcs) {
  std::erase_if(arcs, [](const AngularInterval& a) { return a.width < 0.0; });
  if (arcs.empty()) return empty();
  for (auto& a : arcs) {
    if (a.width >= kTwoPi) return full();
    a.lo = wrap_angle(a.lo);
  }

  // Work on unwrapped segments [s, e] with every start in [base, base + 2pi).
  struct Seg {
    double s, e;
  };
  double base = arcs.front().lo;
  for (const auto& a : arcs) base = std::min(base, a.lo);

  std::vector<Seg> segs;
  segs.reserve(arcs.size());
  for (const auto& a : arcs) segs.push_back({a.lo, a.lo + a.width});
  std::sort(segs.begin(), segs.end(),
            [](const Seg& a, const Seg& b) { return a.s < b.s; });

  std::vector<Seg> merged;
  for (const auto& sg : segs) {
    if (!merged.empty() && sg.s <= merged.back().e + kMergeTol) {
      merged.back().e = std::max(merged.back().e, sg.e);
    } else {
      merged.push_back(sg);
    }
  }

  // Only the last segment can spill past one revolution; fold it back and
  // merge the folded tail with the leading segments.
  const double wrap_at = base + kTwoPi;
  if (merged.back().e > wrap_at) {
    Seg carry{base, merged.back().e - kTwoPi};
    merged.back().e = wrap_at;
    std::size_t consumed = 0;
    while (consumed < merged.size() &&
           merged[consumed].s <= carry.e + kMergeTol) {
      carry.e = std::max(carry.e, merged[consumed].e);
      ++consumed;
    }
    merged.erase(merged.begin(), merged.begin() + consumed);
    merged.insert(merged.begin(), carry);
  }

  // Seam merge: last arc ending where the first begins (mod 2pi).
  if (merged.size() >= 2) {
    const double seam_gap = (merged.front().s + kTwoPi) - merged.back().e;
    if (seam_gap <= kMergeTol) {
      Seg joined{merged.back().s, merged.front().e + kTwoPi};
      merged.erase(merged.begin());
      merged.back() = joined;
    }
  }

  double total = 0.0;
  for (const auto& sg : merged) total += sg.e - sg.s;
  if (total >= kTwoPi - kMergeTol) return full();

  HeadingSet out;
  out.arcs_.reserve(merged.size());
  for (const auto& sg : merged) {
    out.arcs_.push_back({wrap_angle(sg.s), std::min(sg.e - sg.s, kTwoPi)});
  }
  std::sort(out.arcs_.begin(), out.arcs_.end(),
            [](const AngularInterval& a, const AngularInterval& b) {
              return a.lo < b.lo;
            });
  return out;
}

inline HeadingSet HeadingSet::complement() const {
  if (is_empty()) return full();
  if (is_full()) return empty();
  std::vector<AngularInterval> gaps;
  const std::size_t n = arcs_.size();
  gaps.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double end_i = arcs_[i].hi();
    const double next_lo =
        (i + 1 < n) ? arcs_[i + 1].lo : arcs_.front().lo + kTwoPi;
    const double w = std::max(0.0, next_lo - end_i);
    gaps.push_back({wrap_angle(end_i), w});
  }
  return from_arcs(std::move(gaps));
}

/// Exact wrap-aware intersection; associative and commutative.
inline HeadingSet intersect(const HeadingSet& a, const HeadingSet& b) {
  if (a.is_full()) return b;
  if (b.is_full()) return a;
  if (a.is_empty() || b.is_empty()) return HeadingSet::empty();
  const HeadingSet ac = a.complement();
  const HeadingSet bc = b.complement();
  std::vector<AngularInterval> arcs = ac.arcs();
  arcs.insert(arcs.end(), bc.arcs().begin(), bc.arcs().end());
  return HeadingSet::from_arcs(std::move(arcs)).complement();
}

inline HeadingSet intersect(std::span<const HeadingSet> sets) {
  HeadingSet acc = HeadingSet::full();
  for (const auto& s : sets) {
    acc = intersect(acc, s);
    if (acc.is_empty()) break;
  }
  return acc;
}

/**
 * @brief Heading-space cue against a safe heading set.
 *
 * Zero when the heading is already safe; otherwise the signed turn with the
 * smallest magnitude that lands on a boundary point of the safe set, with
 * counterclockwise preferred on exact ties. Saturates at +pi when the set is
 * empty.
 */
inline DmcResult dmc_multi(double psi, const HeadingSet& safe) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  psi = wrap_angle(psi);
  if (safe.is_full()) return {0.0, nan, CueMode::AllSafe, psi};
  if (safe.is_empty()) {
    return {kPi, nan, CueMode::AllUnsafe, wrap_angle(psi + kPi)};
  }
  if (safe.contains(psi)) return {0.0, nan, CueMode::Boundary, psi};
  double best = kTwoPi;
  double best_heading = psi;
  for (const auto& a : safe.arcs()) {
    for (const double endpoint : {a.lo, a.hi()}) {
      const double turn = wrap_angle(endpoint - psi);
      if (std::abs(turn) < std::abs(best) ||
          (std::abs(turn) == std::abs(best) && turn > best)) {
        best = turn;
        best_heading = wrap_angle(endpoint);
      }
    }
  }
  return {best, nan, CueMode::Boundary, best_heading};
}

}  // namespace dmc
