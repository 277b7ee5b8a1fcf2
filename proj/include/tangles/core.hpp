#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "bitvector.hpp"
#include "error.hpp"

namespace tangles {

/// Which side of a binary feature. Ordered so that positive sorts first.
enum class Sign : std::uint8_t { positive = 0, negative = 1 };

constexpr Sign opposite(Sign s) { return s == Sign::positive ? Sign::negative : Sign::positive; }

constexpr char sign_char(Sign s) { return s == Sign::positive ? '+' : '-'; }

/// One side of a feature: the feature itself or its negation.
struct Orientation {
  std::size_t feature = 0;
  Sign sign = Sign::positive;

  static constexpr Orientation positive(std::size_t f) { return {f, Sign::positive}; }
  static constexpr Orientation negative(std::size_t f) { return {f, Sign::negative}; }

  friend constexpr bool operator==(const Orientation&, const Orientation&) = default;
  friend constexpr auto operator<=>(const Orientation&, const Orientation&) = default;
};

/// A total choice of one orientation per feature.
class Specification {
public:
  Specification() = default;
  explicit Specification(std::vector<Sign> signs) : signs_(std::move(signs)) {}
  Specification(std::initializer_list<Sign> signs) : signs_(signs) {}

  /// All features set to `fill`.
  static Specification uniform(std::size_t feature_count, Sign fill) {
    return Specification(std::vector<Sign>(feature_count, fill));
  }

  /// Parses a string over {+,-}. Throws ValidationError on any other character.
  static Specification parse(std::string_view text) {
    std::vector<Sign> signs;
    signs.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (text[i] == '+')
        signs.push_back(Sign::positive);
      else if (text[i] == '-')
        signs.push_back(Sign::negative);
      else
        throw ValidationError("sign string: invalid character '" + std::string(1, text[i]) +
                              "' at position " + std::to_string(i + 1) + " (expected '+' or '-')");
    }
    return Specification(std::move(signs));
  }

  std::size_t size() const { return signs_.size(); }
  Sign operator[](std::size_t feature) const { return signs_[feature]; }
  Sign& operator[](std::size_t feature) { return signs_[feature]; }
  Orientation orientation(std::size_t feature) const { return {feature, signs_.at(feature)}; }
  const std::vector<Sign>& signs() const { return signs_; }

  std::string to_string() const {
    std::string out;
    out.reserve(signs_.size());
    for (Sign s : signs_)
      out.push_back(sign_char(s));
    return out;
  }

  /// Lexicographic over sign vectors, positive < negative.
  friend bool operator==(const Specification&, const Specification&) = default;
  friend auto operator<=>(const Specification&, const Specification&) = default;

private:
  std::vector<Sign> signs_;
};

/// A multiset of at most three orientations.
class AgreementQuery {
public:
  static constexpr std::size_t max_size = 3;

  AgreementQuery() = default;
  AgreementQuery(std::initializer_list<Orientation> items) {
    if (items.size() > max_size)
      throw std::invalid_argument("AgreementQuery: at most 3 orientations");
    for (const Orientation& o : items)
      items_[size_++] = o;
  }

  void push(Orientation o) {
    if (size_ == max_size)
      throw std::invalid_argument("AgreementQuery: at most 3 orientations");
    items_[size_++] = o;
  }

  std::size_t size() const { return size_; }
  const Orientation* begin() const { return items_; }
  const Orientation* end() const { return items_ + size_; }

private:
  Orientation items_[max_size]{};
  std::size_t size_ = 0;
};

/**
 * Immutable objects × features incidence structure.
 *
 * Each feature carries two packed extents (objects having the feature, and
 * objects lacking it) which partition the object set. Rows are kept packed
 * for read-off of realized specifications.
 */
class FeatureSystem {
public:
  FeatureSystem() = default;

  /// Builds from a row-major matrix. Throws ValidationError on ragged rows,
  /// duplicate or empty names, or a column count that does not match `names`.
  FeatureSystem(const std::vector<std::vector<bool>>& matrix, std::vector<std::string> names)
      : names_(std::move(names)), object_count_(matrix.size()) {
    std::unordered_set<std::string_view> seen;
    for (const std::string& name : names_) {
      if (name.empty())
        throw ValidationError("feature names must be nonempty");
      if (!seen.insert(name).second)
        throw ValidationError("duplicate feature name '" + name + "'");
    }
    const std::size_t features = names_.size();
    positive_.assign(features, BitVector(object_count_));
    rows_.reserve(object_count_);
    for (std::size_t v = 0; v < object_count_; ++v) {
      const auto& row = matrix[v];
      if (row.size() != features)
        throw ValidationError("row " + std::to_string(v + 1) + " has " + std::to_string(row.size()) +
                              " entries, expected " + std::to_string(features));
      BitVector packed(features);
      for (std::size_t s = 0; s < features; ++s) {
        if (row[s]) {
          positive_[s].set(v);
          packed.set(s);
        }
      }
      rows_.push_back(std::move(packed));
    }
    negative_.reserve(features);
    for (const BitVector& ext : positive_)
      negative_.push_back(~ext);
    all_ = BitVector(object_count_, true);
  }

  std::size_t object_count() const { return object_count_; }
  std::size_t feature_count() const { return names_.size(); }
  const std::vector<std::string>& feature_names() const { return names_; }

  bool incidence(std::size_t object, std::size_t feature) const {
    check_object(object);
    check_feature(feature);
    return rows_[object].test(feature);
  }

  /// Objects having orientation `o`.
  const BitVector& extent(Orientation o) const {
    check_feature(o.feature);
    return o.sign == Sign::positive ? positive_[o.feature] : negative_[o.feature];
  }

  /// Bit vector with every object set; the extent of the empty query.
  const BitVector& all_objects() const { return all_; }

  /// The specification realized by object `v`.
  Specification specification_of(std::size_t v) const {
    check_object(v);
    std::vector<Sign> signs(feature_count());
    for (std::size_t s = 0; s < signs.size(); ++s)
      signs[s] = rows_[v].test(s) ? Sign::positive : Sign::negative;
    return Specification(std::move(signs));
  }

  void check_feature(std::size_t feature) const {
    if (feature >= feature_count())
      throw std::out_of_range("feature index " + std::to_string(feature) + " out of range (|S| = " +
                              std::to_string(feature_count()) + ")");
  }

  void check_object(std::size_t object) const {
    if (object >= object_count_)
      throw std::out_of_range("object index " + std::to_string(object) + " out of range (|V| = " +
                              std::to_string(object_count_) + ")");
  }

  void check_specification(const Specification& spec) const {
    if (spec.size() != feature_count())
      throw ValidationError("specification has " + std::to_string(spec.size()) +
                            " signs, feature system has " + std::to_string(feature_count()) +
                            " features");
  }

private:
  std::vector<std::string> names_;
  std::size_t object_count_ = 0;
  std::vector<BitVector> positive_;
  std::vector<BitVector> negative_;
  std::vector<BitVector> rows_;
  BitVector all_;
};

inline FeatureSystem build_feature_system(const std::vector<std::vector<bool>>& matrix,
                                          std::vector<std::string> names) {
  return FeatureSystem(matrix, std::move(names));
}

/// Number of objects having every orientation in `q`; the object count for an empty query.
inline std::size_t agreement(const FeatureSystem& fs, const AgreementQuery& q) {
  for (const Orientation& o : q)
    fs.check_feature(o.feature);
  switch (q.size()) {
  case 0:
    return fs.object_count();
  case 1:
    return fs.extent(*q.begin()).count();
  case 2:
    return intersection_count(fs.extent(q.begin()[0]), fs.extent(q.begin()[1]));
  default:
    return intersection_count(fs.extent(q.begin()[0]), fs.extent(q.begin()[1]),
                              fs.extent(q.begin()[2]));
  }
}

/// Smallest agreement over all multisets of at most three orientations of `spec`.
/// With no features this is the object count.
inline std::size_t agreement_value(const FeatureSystem& fs, const Specification& spec) {
  fs.check_specification(spec);
  const std::size_t m = fs.feature_count();
  std::size_t best = fs.object_count();
  std::vector<const BitVector*> ext(m);
  for (std::size_t s = 0; s < m; ++s)
    ext[s] = &fs.extent(spec.orientation(s));
  // Repeated orientations collapse, so i < j < k plus singletons and pairs
  // covers every multiset.
  for (std::size_t i = 0; i < m && best > 0; ++i) {
    best = std::min(best, ext[i]->count());
    for (std::size_t j = i + 1; j < m && best > 0; ++j) {
      best = std::min(best, intersection_count(*ext[i], *ext[j]));
      for (std::size_t k = j + 1; k < m && best > 0; ++k)
        best = std::min(best, intersection_count(*ext[i], *ext[j], *ext[k]));
    }
  }
  return best;
}

/// True iff every multiset of at most three orientations of `spec` has agreement >= n.
inline bool is_tangle(const FeatureSystem& fs, const Specification& spec, std::size_t n) {
  if (n < 1)
    throw ValidationError("agreement parameter n must be at least 1");
  fs.check_specification(spec);
  if (n > fs.object_count())
    return false;
  const std::size_t m = fs.feature_count();
  std::vector<const BitVector*> ext(m);
  for (std::size_t s = 0; s < m; ++s)
    ext[s] = &fs.extent(spec.orientation(s));
  for (std::size_t i = 0; i < m; ++i) {
    if (ext[i]->count() < n)
      return false;
    for (std::size_t j = i + 1; j < m; ++j) {
      if (!intersection_count_at_least(*ext[i], *ext[j], n))
        return false;
      for (std::size_t k = j + 1; k < m; ++k)
        if (!intersection_count_at_least(*ext[i], *ext[j], *ext[k], n))
          return false;
    }
  }
  return true;
}

/// No multiset of at most three orientations of `spec` is shared by zero objects.
inline bool is_consistent(const FeatureSystem& fs, const Specification& spec) {
  return is_tangle(fs, spec, 1);
}

} // namespace tangles
