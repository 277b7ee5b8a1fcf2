#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "core.hpp"

namespace tangles {

/// A nonempty set of objects, stored sorted and without duplicates.
class WitnessSet {
public:
  explicit WitnessSet(std::vector<std::size_t> members) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    if (members_.empty())
      throw ValidationError("witness set must be nonempty");
  }

  const std::vector<std::size_t>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }

  void validate(const FeatureSystem& fs) const {
    for (std::size_t v : members_)
      fs.check_object(v);
  }

  /// The members as a bit vector over `fs`'s objects.
  BitVector mask(const FeatureSystem& fs) const {
    validate(fs);
    BitVector out(fs.object_count());
    for (std::size_t v : members_)
      out.set(v);
    return out;
  }

  friend bool operator==(const WitnessSet&, const WitnessSet&) = default;

private:
  std::vector<std::size_t> members_;
};

/// Nonnegative integer weight per object.
struct WitnessWeights {
  std::vector<std::uint64_t> weight;

  /// Weight 1 on members of `x`, 0 elsewhere.
  static WitnessWeights indicator(const FeatureSystem& fs, const WitnessSet& x) {
    x.validate(fs);
    WitnessWeights w{std::vector<std::uint64_t>(fs.object_count(), 0)};
    for (std::size_t v : x.members())
      w.weight[v] = 1;
    return w;
  }
};

struct FeatureMajority {
  std::size_t agree = 0;
  std::size_t disagree = 0;

  double fraction() const {
    const std::size_t total = agree + disagree;
    return total == 0 ? 0.0 : static_cast<double>(agree) / static_cast<double>(total);
  }
};

/// Per-feature agreement of a witness set with a specification.
struct PopularityProfile {
  std::vector<FeatureMajority> features;
};

inline PopularityProfile popularity_profile(const FeatureSystem& fs, const Specification& spec,
                                            const WitnessSet& x) {
  fs.check_specification(spec);
  const BitVector members = x.mask(fs);
  PopularityProfile profile;
  profile.features.reserve(fs.feature_count());
  for (std::size_t s = 0; s < fs.feature_count(); ++s) {
    const std::size_t agree = intersection_count(members, fs.extent(spec.orientation(s)));
    profile.features.push_back({agree, x.size() - agree});
  }
  return profile;
}

/// Strict majority of `x` agrees with `spec` on every feature.
inline bool check_witness_set(const FeatureSystem& fs, const Specification& spec, const WitnessSet& x) {
  const auto profile = popularity_profile(fs, spec, x);
  return std::all_of(profile.features.begin(), profile.features.end(),
                     [](const FeatureMajority& m) { return m.agree > m.disagree; });
}

/// Weighted strict majority agrees with `spec` on every feature.
inline bool check_witness_weights(const FeatureSystem& fs, const Specification& spec,
                                  const WitnessWeights& w) {
  fs.check_specification(spec);
  if (w.weight.size() != fs.object_count())
    throw ValidationError("weight map has " + std::to_string(w.weight.size()) + " entries, expected " +
                          std::to_string(fs.object_count()));
  for (std::size_t s = 0; s < fs.feature_count(); ++s) {
    const BitVector& agreeing = fs.extent(spec.orientation(s));
    std::uint64_t agree = 0;
    std::uint64_t disagree = 0;
    for (std::size_t v = 0; v < fs.object_count(); ++v)
      (agreeing.test(v) ? agree : disagree) += w.weight[v];
    if (!(agree > disagree))
      return false;
  }
  return true;
}

/// Thresholds tried by find_witness_set below the caller's starting value.
/// The last entry admits any object agreeing on strictly more than half.
inline constexpr double witness_relaxation_steps[] = {0.8, 0.7, 0.6, 0.5};

/**
 * Heuristic witness search.
 *
 * Collects every object agreeing with `spec` on at least `threshold` of the
 * features and verifies the result; on failure the threshold is lowered
 * through witness_relaxation_steps, ending at "strictly above one half".
 * std::nullopt does not prove that no witness exists.
 */
inline std::optional<WitnessSet> find_witness_set(const FeatureSystem& fs, const Specification& spec,
                                                  double threshold = 0.8) {
  fs.check_specification(spec);
  if (!(threshold > 0.0 && threshold <= 1.0))
    throw ValidationError("witness threshold must lie in (0, 1]");
  const std::size_t m = fs.feature_count();
  if (fs.object_count() == 0)
    return std::nullopt;

  std::vector<std::size_t> agree_count(fs.object_count(), 0);
  for (std::size_t s = 0; s < m; ++s)
    for (std::size_t v : fs.extent(spec.orientation(s)).indices())
      ++agree_count[v];

  std::vector<double> schedule{threshold};
  for (double step : witness_relaxation_steps)
    if (step < threshold)
      schedule.push_back(step);

  std::vector<std::size_t> previous;
  for (std::size_t round = 0; round < schedule.size(); ++round) {
    const double t = schedule[round];
    const bool strict = (t == 0.5);
    std::vector<std::size_t> members;
    for (std::size_t v = 0; v < fs.object_count(); ++v) {
      // Correctly rounded division keeps exact ratios such as 3/5 equal to 0.6.
      const double frac = m == 0 ? 1.0 : static_cast<double>(agree_count[v]) / static_cast<double>(m);
      if (strict ? frac > t : frac >= t)
        members.push_back(v);
    }
    if (members.empty() || members == previous)
      continue;
    previous = members;
    WitnessSet x(std::move(members));
    if (check_witness_set(fs, spec, x))
      return x;
  }
  return std::nullopt;
}

} // namespace tangles
