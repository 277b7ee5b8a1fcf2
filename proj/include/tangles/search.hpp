#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <thread>
#include <vector>

#include "core.hpp"

namespace tangles {

/// A specification that is typical at `found_at_n`, with its full agreement value.
struct Tangle {
  Specification specification;
  std::size_t agreement = 0;
  std::size_t found_at_n = 0;

  friend bool operator==(const Tangle&, const Tangle&) = default;
};

enum class FeatureOrder {
  balanced, ///< most balanced features first
  input,    ///< feature index order
};

struct SearchOptions {
  FeatureOrder policy = FeatureOrder::balanced;
  /// Explicit permutation of feature indices; overrides `policy` when set.
  std::optional<std::vector<std::size_t>> order;
  /// Worker threads. 1 searches serially.
  unsigned threads = 1;
  /// Depth at which subtrees are handed to workers when threads > 1.
  std::size_t split_depth = 8;
};

/// Features by descending min(|extent(+)|, |extent(-)|), ties by index.
inline std::vector<std::size_t> balanced_order(const FeatureSystem& fs) {
  std::vector<std::size_t> order(fs.feature_count());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<std::size_t> balance(order.size());
  for (std::size_t s = 0; s < order.size(); ++s) {
    const std::size_t pos = fs.extent(Orientation::positive(s)).count();
    balance[s] = std::min(pos, fs.object_count() - pos);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return balance[a] > balance[b]; });
  return order;
}

namespace detail {

inline std::vector<std::size_t> resolve_order(const FeatureSystem& fs, const SearchOptions& opts) {
  const std::size_t m = fs.feature_count();
  if (opts.order) {
    const auto& order = *opts.order;
    if (order.size() != m)
      throw ValidationError("feature order has " + std::to_string(order.size()) + " entries, expected " +
                            std::to_string(m));
    std::vector<bool> seen(m, false);
    for (std::size_t f : order) {
      if (f >= m || seen[f])
        throw ValidationError("feature order is not a permutation of 0.." + std::to_string(m - 1));
      seen[f] = true;
    }
    return order;
  }
  if (opts.policy == FeatureOrder::balanced)
    return balanced_order(fs);
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  return order;
}

/**
 * Depth-first extension of partial specifications along a fixed feature order.
 *
 * A child is pruned as soon as some multiset of at most three fixed
 * orientations containing the newly fixed one has agreement below n. Fixed
 * orientations never change below a node, so the check at each depth only
 * needs multisets that include the new orientation.
 */
class TangleSearch {
public:
  TangleSearch(const FeatureSystem& fs, std::size_t n, std::vector<std::size_t> order)
      : fs_(fs), n_(n), order_(std::move(order)) {}

  struct Node {
    std::vector<Sign> signs; // indexed by position in the order
  };

  /// Partial assignments of the first `depth` positions that survive pruning.
  std::vector<Node> frontier(std::size_t depth) const {
    State state(*this);
    std::vector<Node> out;
    collect_frontier(state, std::min(depth, order_.size()), out);
    return out;
  }

  /// Completes every surviving extension of `node` and appends the tangles to `out`.
  void complete(const Node& node, std::vector<Tangle>& out) const {
    State state(*this);
    for (std::size_t k = 0; k < node.signs.size(); ++k)
      state.push(node.signs[k]);
    descend(state, out);
  }

  void run(std::vector<Tangle>& out) const { complete(Node{}, out); }

private:
  struct State {
    explicit State(const TangleSearch& search) : search(search) {
      fixed.reserve(search.order_.size());
      signs.reserve(search.order_.size());
    }

    std::size_t depth() const { return signs.size(); }

    void push(Sign s) {
      fixed.push_back(&search.fs_.extent({search.order_[depth()], s}));
      signs.push_back(s);
    }

    void pop() {
      fixed.pop_back();
      signs.pop_back();
    }

    const TangleSearch& search;
    std::vector<const BitVector*> fixed;
    std::vector<Sign> signs;
    BitVector scratch;
  };

  bool admissible(State& state, const BitVector& next) const {
    const std::size_t n = n_;
    if (next.count() < n)
      return false;
    const auto& fixed = state.fixed;
    for (const BitVector* prev : fixed)
      if (!intersection_count_at_least(*prev, next, n))
        return false;
    for (std::size_t j = 1; j < fixed.size(); ++j) {
      state.scratch.assign_intersection(*fixed[j], next);
      for (std::size_t i = 0; i < j; ++i)
        if (!intersection_count_at_least(state.scratch, *fixed[i], n))
          return false;
    }
    return true;
  }

  void collect_frontier(State& state, std::size_t depth, std::vector<Node>& out) const {
    if (state.depth() == depth) {
      out.push_back(Node{state.signs});
      return;
    }
    for (Sign s : {Sign::positive, Sign::negative}) {
      const std::size_t feature = order_[state.depth()];
      if (!admissible(state, fs_.extent({feature, s})))
        continue;
      state.push(s);
      collect_frontier(state, depth, out);
      state.pop();
    }
  }

  void descend(State& state, std::vector<Tangle>& out) const {
    if (state.depth() == order_.size()) {
      std::vector<Sign> signs(order_.size());
      for (std::size_t k = 0; k < order_.size(); ++k)
        signs[order_[k]] = state.signs[k];
      Specification spec(std::move(signs));
      const std::size_t value = agreement_value(fs_, spec);
      out.push_back(Tangle{std::move(spec), value, n_});
      return;
    }
    for (Sign s : {Sign::positive, Sign::negative}) {
      const std::size_t feature = order_[state.depth()];
      if (!admissible(state, fs_.extent({feature, s})))
        continue;
      state.push(s);
      descend(state, out);
      state.pop();
    }
  }

  const FeatureSystem& fs_;
  std::size_t n_;
  std::vector<std::size_t> order_;
};

inline void sort_tangles(std::vector<Tangle>& tangles) {
  std::sort(tangles.begin(), tangles.end(),
            [](const Tangle& a, const Tangle& b) { return a.specification < b.specification; });
}

} // namespace detail

/**
 * All tangles of `fs` at agreement parameter n, sorted lexicographically by
 * sign vector with positive before negative.
 *
 * Output does not depend on the feature order or the thread count.
 */
inline std::vector<Tangle> enumerate_tangles(const FeatureSystem& fs, std::size_t n,
                                             const SearchOptions& opts = {}) {
  if (n < 1)
    throw ValidationError("agreement parameter n must be at least 1");
  std::vector<std::size_t> order = detail::resolve_order(fs, opts);
  std::vector<Tangle> result;
  if (n > fs.object_count())
    return result;

  const detail::TangleSearch search(fs, n, std::move(order));
  const unsigned threads = std::max(1u, opts.threads);
  if (threads == 1 || fs.feature_count() == 0) {
    search.run(result);
    detail::sort_tangles(result);
    return result;
  }

  const auto frontier = search.frontier(opts.split_depth);
  std::vector<std::vector<Tangle>> partial(threads);
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      workers.emplace_back([&, t] {
        for (std::size_t i = next++; i < frontier.size(); i = next++)
          search.complete(frontier[i], partial[t]);
      });
    }
  }
  for (auto& part : partial)
    result.insert(result.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  detail::sort_tangles(result);
  return result;
}

/// Exhaustive oracle: tests all 2^|S| specifications with is_tangle.
/// Throws CapExceeded above `feature_cap` features.
inline std::vector<Tangle> brute_force_tangles(const FeatureSystem& fs, std::size_t n,
                                               std::size_t feature_cap = 20) {
  if (n < 1)
    throw ValidationError("agreement parameter n must be at least 1");
  const std::size_t m = fs.feature_count();
  if (m > feature_cap || m >= 63)
    throw CapExceeded("brute force is capped at " + std::to_string(feature_cap) + " features, got " +
                      std::to_string(m) + "; use enumerate_tangles");
  std::vector<Tangle> result;
  const std::uint64_t total = std::uint64_t{1} << m;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    // Bit (m-1-s) is the sign of feature s, so increasing masks are already
    // in lexicographic order.
    std::vector<Sign> signs(m);
    for (std::size_t s = 0; s < m; ++s)
      signs[s] = ((mask >> (m - 1 - s)) & 1u) ? Sign::negative : Sign::positive;
    Specification spec(std::move(signs));
    if (is_tangle(fs, spec, n)) {
      const std::size_t value = agreement_value(fs, spec);
      result.push_back(Tangle{std::move(spec), value, n});
    }
  }
  return result;
}

struct SweepLevel {
  std::size_t n = 0;
  std::vector<Specification> tangles;

  std::size_t count() const { return tangles.size(); }
};

/// Tangles per agreement parameter, from the starting n up to n_max.
struct SweepReport {
  std::vector<SweepLevel> levels;
  /// Largest n with at least one tangle; 0 when the starting level is empty.
  std::size_t n_max = 0;
};

struct SweepOptions {
  /// First level reported. Levels below it are skipped, which avoids
  /// enumerating the usually very large tangle set at n = 1.
  std::size_t min_n = 1;
  SearchOptions search;
};

/**
 * Runs the tangle search for n = min_n, min_n + 1, ... until no tangle remains.
 *
 * A specification is a tangle at n exactly when its agreement value is at
 * least n, so one enumeration at min_n determines every higher level.
 */
inline SweepReport sweep_agreement(const FeatureSystem& fs, const SweepOptions& opts = {}) {
  if (opts.min_n < 1)
    throw ValidationError("sweep must start at n >= 1");
  SweepReport report;
  if (opts.min_n > fs.object_count())
    return report;
  const auto base = enumerate_tangles(fs, opts.min_n, opts.search);
  for (const Tangle& t : base)
    report.n_max = std::max(report.n_max, t.agreement);
  for (std::size_t n = opts.min_n; n <= report.n_max; ++n) {
    SweepLevel level{n, {}};
    for (const Tangle& t : base)
      if (t.agreement >= n)
        level.tangles.push_back(t.specification);
    report.levels.push_back(std::move(level));
  }
  return report;
}

} // namespace tangles
