#pragma once
/**
 * @file safe_cone.hpp
 * @brief Per-threat safe heading cones and their joint intersection.
 *
 * Each threat blocks a cone of headings centered on the line of sight to it;
 * the jointly safe set is the intersection of the per-threat complements and
 * may be noncontiguous or empty.
 */

#include <span>
#include <stdexcept>
#include <vector>

#include "dmc/heading_set.hpp"
#include "dmc/states.hpp"

namespace dmc {

enum class CueVariant { Penetration, Stayout };

/// Unsafe cone half-width for one threat at the given range.
inline UnsafeCone unsafe_cone(const ThreatParams& p, double dist,
                              CueVariant variant) {
  return variant == CueVariant::Penetration ? boundary_cone(p, dist)
                                            : stayout_cone(p, dist);
}

/**
 * @brief Safe heading set with respect to one threat.
 *
 * The complement of the unsafe cone centered on the agent-to-threat bearing;
 * the full circle when every heading is safe, empty when none is. Boundary
 * headings count as safe. Throws for coincident positions.
 */
inline HeadingSet safe_cone_for_threat(const AgentState& agent,
                                       const ThreatState& threat,
                                       CueVariant variant) {
  const double dist = distance(agent.position, threat.position);
  if (dist == 0.0) {
    throw std::invalid_argument(
        "safe_cone_for_threat: agent and threat coincide");
  }
  const UnsafeCone cone = unsafe_cone(threat.params, dist, variant);
  if (cone.kind == ConeKind::AllSafe) return HeadingSet::full();
  if (cone.kind == ConeKind::AllUnsafe) return HeadingSet::empty();
  const double los = bearing(agent.position, threat.position);
  return HeadingSet::arc(los + cone.half_width,
                         kTwoPi - 2.0 * cone.half_width);
}

/// Intersection of the per-threat safe cones.
inline HeadingSet joint_safe_set(const AgentState& agent,
                                 std::span<const ThreatState> threats,
                                 CueVariant variant) {
  HeadingSet acc = HeadingSet::full();
  for (const auto& t : threats) {
    acc = intersect(acc, safe_cone_for_threat(agent, t, variant));
    if (acc.is_empty()) break;
  }
  return acc;
}

/**
 * @brief Allocation-free |cue| evaluation for hot loops.
 *
 * Computes the same magnitude as dmc_multi over joint_safe_set but merges
 * the per-threat unsafe arcs in reused scratch buffers. Instances are cheap;
 * each one must stay confined to a single thread.
 */
class JointCueEvaluator {
 public:
  /// |cue| at a position and heading: zero when safe, the turn magnitude to
  /// the nearest safe heading otherwise, pi when no safe heading exists.
  double abs_cue(const Vec2& position, double psi,
                 std::span<const ThreatState> threats, CueVariant variant) {
    segs_.clear();
    for (const auto& t : threats) {
      const double dist = distance(position, t.position);
      if (dist == 0.0) return kPi;
      const UnsafeCone cone = unsafe_cone(t.params, dist, variant);
      if (cone.kind == ConeKind::AllUnsafe) return kPi;
      if (cone.kind == ConeKind::AllSafe || cone.half_width <= 0.0) continue;
      const double lo =
          wrap_angle(bearing(position, t.position) - cone.half_width);
      segs_.push_back({lo, lo + 2.0 * cone.half_width});
    }
    if (segs_.empty()) return 0.0;
    constexpr double tol = HeadingSet::kMergeTol;
    std::sort(segs_.begin(), segs_.end(),
              [](const Seg& a, const Seg& b) { return a.s < b.s; });
    merged_.clear();
    for (const auto& sg : segs_) {
      if (!merged_.empty() && sg.s <= merged_.back().e + tol) {
        merged_.back().e = std::max(merged_.back().e, sg.e);
      } else {
        merged_.push_back(sg);
      }
    }
    const double base = merged_.front().s;
    const double wrap_at = base + kTwoPi;
    if (merged_.back().e > wrap_at) {
      Seg carry{base, merged_.back().e - kTwoPi};
      merged_.back().e = wrap_at;
      std::size_t consumed = 0;
      while (consumed < merged_.size() &&
             merged_[consumed].s <= carry.e + tol) {
        carry.e = std::max(carry.e, merged_[consumed].e);
        ++consumed;
      }
      merged_.erase(merged_.begin(), merged_.begin() + consumed);
      merged_.insert(merged_.begin(), carry);
    }
    if (merged_.size() >= 2 &&
        (merged_.front().s + kTwoPi) - merged_.back().e <= tol) {
      const Seg joined{merged_.back().s, merged_.front().e + kTwoPi};
      merged_.erase(merged_.begin());
      merged_.back() = joined;
    }
    double covered = 0.0;
    for (const auto& sg : merged_) covered += sg.e - sg.s;
    if (covered >= kTwoPi - tol) return kPi;
    for (const auto& sg : merged_) {
      const double off = wrap_two_pi(psi - sg.s);
      const double len = sg.e - sg.s;
      if (off <= len) return std::min(off, len - off);
    }
    return 0.0;
  }

 private:
  struct Seg {
    double s, e;
  };
  std::vector<Seg> segs_;
  std::vector<Seg> merged_;
};

/**
 * @brief Fallback heading when no jointly safe heading exists.
 *
 * Maximizes the minimum signed clearance to the per-threat unsafe cones
 * (negative inside a cone). Candidates are the midpoints of the complement
 * arcs of each pairwise cone union plus a 720-point sweep; deterministic for
 * fixed inputs.
 */
inline double least_violation_heading(const AgentState& agent,
                                      std::span<const ThreatState> threats,
                                      CueVariant variant) {
  struct Cone {
    ConeKind kind;
    double los;
    double half_width;
  };
  std::vector<Cone> cones;
  cones.reserve(threats.size());
  for (const auto& t : threats) {
    const double dist = distance(agent.position, t.position);
    if (dist == 0.0) {
      cones.push_back({ConeKind::AllUnsafe, 0.0, kPi});
      continue;
    }
    const UnsafeCone c = unsafe_cone(t.params, dist, variant);
    const double los = (c.kind == ConeKind::Cone)
                           ? bearing(agent.position, t.position)
                           : 0.0;
    cones.push_back({c.kind, los, c.half_width});
  }

  auto clearance = [&](double theta) {
    double worst = kPi;
    for (const auto& c : cones) {
      double cl = kPi;
      if (c.kind == ConeKind::AllUnsafe) {
        cl = -kPi;
      } else if (c.kind == ConeKind::Cone) {
        cl = angular_distance(theta, c.los) - c.half_width;
      }
      worst = std::min(worst, cl);
    }
    return worst;
  };

  std::vector<double> candidates;
  candidates.reserve(720 + 4 * cones.size() * cones.size());
  for (int k = 0; k < 720; ++k) {
    candidates.push_back(-kPi + (k + 0.5) * (kTwoPi / 720.0));
  }
  for (std::size_t i = 0; i < cones.size(); ++i) {
    if (cones[i].kind != ConeKind::Cone) continue;
    for (std::size_t j = i + 1; j < cones.size(); ++j) {
      if (cones[j].kind != ConeKind::Cone) continue;
      const HeadingSet pair_union = HeadingSet::from_arcs(
          {{cones[i].los - cones[i].half_width, 2.0 * cones[i].half_width},
           {cones[j].los - cones[j].half_width, 2.0 * cones[j].half_width}});
      const HeadingSet pair_gaps = pair_union.complement();
      for (const auto& gap : pair_gaps.arcs()) {
        candidates.push_back(gap.midpoint());
      }
    }
  }

  double best = candidates.front();
  double best_clearance = clearance(best);
  for (const double cand : candidates) {
    const double cl = clearance(cand);
    if (cl > best_clearance) {
      best = cand;
      best_clearance = cl;
    }
  }
  return wrap_angle(best);
}

}  // namespace dmc
