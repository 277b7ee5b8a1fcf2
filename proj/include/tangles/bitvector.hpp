#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace tangles {

/**
 * Dynamically sized packed bit vector over 64-bit words.
 *
 * Bits past size() in the last word are always zero, so word-wise
 * intersections can be popcounted without masking.
 */
class BitVector {
public:
  using word_type = std::uint64_t;
  static constexpr std::size_t bits_per_word = 64;

  BitVector() = default;

  explicit BitVector(std::size_t size, bool value = false)
      : size_(size), words_(word_count(size), value ? ~word_type{0} : word_type{0}) {
    clear_tail();
  }

  static constexpr std::size_t word_count(std::size_t bits) {
    return (bits + bits_per_word - 1) / bits_per_word;
  }

  std::size_t size() const { return size_; }

  bool test(std::size_t i) const {
    return (words_[i / bits_per_word] >> (i % bits_per_word)) & word_type{1};
  }

  void set(std::size_t i) { words_[i / bits_per_word] |= word_type{1} << (i % bits_per_word); }

  void reset(std::size_t i) { words_[i / bits_per_word] &= ~(word_type{1} << (i % bits_per_word)); }

  void assign(std::size_t i, bool value) {
    if (value)
      set(i);
    else
      reset(i);
  }

  std::size_t count() const {
    std::size_t total = 0;
    for (word_type w : words_)
      total += static_cast<std::size_t>(std::popcount(w));
    return total;
  }

  bool none() const {
    for (word_type w : words_)
      if (w != 0)
        return false;
    return true;
  }

  /// Complement within [0, size()).
  BitVector operator~() const {
    BitVector out(*this);
    for (word_type& w : out.words_)
      w = ~w;
    out.clear_tail();
    return out;
  }

  BitVector& operator&=(const BitVector& other) {
    check_same_size(other);
    for (std::size_t i = 0; i < words_.size(); ++i)
      words_[i] &= other.words_[i];
    return *this;
  }

  /// Overwrites *this with a ∩ b without reallocating when sizes already match.
  void assign_intersection(const BitVector& a, const BitVector& b) {
    a.check_same_size(b);
    size_ = a.size_;
    words_.resize(a.words_.size());
    for (std::size_t i = 0; i < words_.size(); ++i)
      words_[i] = a.words_[i] & b.words_[i];
  }

  BitVector& operator|=(const BitVector& other) {
    check_same_size(other);
    for (std::size_t i = 0; i < words_.size(); ++i)
      words_[i] |= other.words_[i];
    return *this;
  }

  friend BitVector operator&(BitVector a, const BitVector& b) { return a &= b; }
  friend BitVector operator|(BitVector a, const BitVector& b) { return a |= b; }

  friend bool operator==(const BitVector&, const BitVector&) = default;

  std::span<const word_type> words() const { return words_; }

  /// Indices of set bits in increasing order.
  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    out.reserve(count());
    for (std::size_t wi = 0; wi < words_.size(); ++wi) {
      word_type w = words_[wi];
      while (w != 0) {
        out.push_back(wi * bits_per_word + static_cast<std::size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
    return out;
  }

private:
  void clear_tail() {
    const std::size_t rem = size_ % bits_per_word;
    if (rem != 0 && !words_.empty())
      words_.back() &= (word_type{1} << rem) - 1;
  }

  void check_same_size(const BitVector& other) const {
    if (other.size_ != size_)
      throw std::invalid_argument("BitVector: size mismatch");
  }

  std::size_t size_ = 0;
  std::vector<word_type> words_;
};

// Intersection cardinalities. Callers guarantee equal sizes; these sit on the
// search hot path and skip the check.

inline std::size_t intersection_count(const BitVector& a, const BitVector& b) {
  const auto wa = a.words();
  const auto wb = b.words();
  std::size_t total = 0;
  for (std::size_t i = 0; i < wa.size(); ++i)
    total += static_cast<std::size_t>(std::popcount(wa[i] & wb[i]));
  return total;
}

inline std::size_t intersection_count(const BitVector& a, const BitVector& b, const BitVector& c) {
  const auto wa = a.words();
  const auto wb = b.words();
  const auto wc = c.words();
  std::size_t total = 0;
  for (std::size_t i = 0; i < wa.size(); ++i)
    total += static_cast<std::size_t>(std::popcount(wa[i] & wb[i] & wc[i]));
  return total;
}

/// True iff |a ∩ b| >= threshold. Stops scanning once the threshold is met.
inline bool intersection_count_at_least(const BitVector& a, const BitVector& b, std::size_t threshold) {
  if (threshold == 0)
    return true;
  const auto wa = a.words();
  const auto wb = b.words();
  std::size_t total = 0;
  for (std::size_t i = 0; i < wa.size(); ++i) {
    total += static_cast<std::size_t>(std::popcount(wa[i] & wb[i]));
    if (total >= threshold)
      return true;
  }
  return false;
}

/// True iff |a ∩ b ∩ c| >= threshold. Stops scanning once the threshold is met.
inline bool intersection_count_at_least(const BitVector& a, const BitVector& b, const BitVector& c,
                                        std::size_t threshold) {
  if (threshold == 0)
    return true;
  const auto wa = a.words();
  const auto wb = b.words();
  const auto wc = c.words();
  std::size_t total = 0;
  for (std::size_t i = 0; i < wa.size(); ++i) {
    total += static_cast<std::size_t>(std::popcount(wa[i] & wb[i] & wc[i]));
    if (total >= threshold)
      return true;
  }
  return false;
}

} // namespace tangles
