#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <system_error>
#include <tuple>
#include <vector>

#include "core.hpp"
#include "ingest.hpp"

namespace tangles {

/**
 * Portable seeded generator.
 *
 * Raw bits come from std::mt19937_64, whose output sequence is fixed by the
 * C++ standard. Distributions are implemented here rather than taken from
 * <random>, whose algorithms vary between standard libraries:
 *   uniform01: top 53 bits scaled by 2^-53, in [0, 1)
 *   below(n):  rejection sampling on the top bits, unbiased
 *   normal:    Box-Muller, both variates used in turn
 */
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform01(); // (0, 1]
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

struct PointCloud {
  std::size_t dimension = 0;
  std::vector<std::vector<double>> points;
  /// Generating blob per point. Ground truth for evaluation only.
  std::vector<std::size_t> labels;
  /// Blob centers when produced by gen_blobs; empty after parsing.
  std::vector<std::vector<double>> centers;

  std::size_t size() const { return points.size(); }
};

/**
 * k isotropic Gaussian blobs of `per` points each in d dimensions.
 *
 * Centers occupy distinct sites of a lattice with spacing 1.25·sep, each
 * jittered by at most 0.125·sep per coordinate, so any two centers differ by
 * at least sep along some axis. Sites and jitter are drawn from `seed`.
 */
inline PointCloud gen_blobs(std::size_t k, std::size_t per, std::size_t d, double sep, double spread,
                            std::uint64_t seed) {
  if (k < 1 || per < 1 || d < 1)
    throw ValidationError("gen_blobs: k, per and d must be at least 1");
  if (!(sep > 0.0) || !(spread > 0.0))
    throw ValidationError("gen_blobs: sep and spread must be positive");

  // Smallest side m with m^d >= k.
  std::size_t side = 1;
  auto fits = [&](std::size_t m) {
    long double cap = 1;
    for (std::size_t i = 0; i < d && cap < static_cast<long double>(k); ++i)
      cap *= static_cast<long double>(m);
    return cap >= static_cast<long double>(k);
  };
  while (!fits(side))
    ++side;

  Rng rng(seed);
  std::set<std::vector<std::size_t>> used;
  std::vector<std::vector<double>> centers;
  const double spacing = 1.25 * sep;
  const double jitter = 0.125 * sep;
  while (centers.size() < k) {
    std::vector<std::size_t> site(d);
    for (auto& c : site)
      c = rng.below(side);
    if (!used.insert(site).second)
      continue;
    std::vector<double> center(d);
    for (std::size_t a = 0; a < d; ++a)
      center[a] = spacing * static_cast<double>(site[a]) + jitter * (2.0 * rng.uniform01() - 1.0);
    centers.push_back(std::move(center));
  }

  PointCloud cloud;
  cloud.dimension = d;
  cloud.centers = centers;
  cloud.points.reserve(k * per);
  cloud.labels.reserve(k * per);
  for (std::size_t b = 0; b < k; ++b) {
    for (std::size_t i = 0; i < per; ++i) {
      std::vector<double> p(d);
      for (std::size_t a = 0; a < d; ++a)
        p[a] = centers[b][a] + spread * rng.normal();
      cloud.points.push_back(std::move(p));
      cloud.labels.push_back(b);
    }
  }
  return cloud;
}

/// An axis-aligned partition: positive side is coordinate `axis` below `threshold`.
struct CutSpec {
  std::size_t axis = 0;
  double threshold = 0.0;
  /// Close point pairs (distance < radius) on opposite sides.
  double cost = 0.0;
};

struct CutSystem {
  FeatureSystem features;
  std::vector<CutSpec> cuts;
};

/**
 * Bottleneck cuts of a point cloud as a feature system.
 *
 * Per axis, candidate i of c sits between the order statistics around the
 * i/(c+1) quantile (the midpoint of the two neighbouring sorted values), so it
 * puts round(i·N/(c+1)) points below when values are distinct. Each
 * candidate's cost is the number of point pairs closer than `radius` that it
 * separates. The `keep` cheapest candidates (ties by axis, then threshold)
 * become features named "x<axis>_q<i>", in that order.
 *
 * A cloud of identical points yields constant features of cost zero.
 */
inline CutSystem cuts_from_points(const PointCloud& cloud, std::size_t candidates_per_axis, std::size_t keep,
                                  double radius) {
  if (!(radius > 0.0))
    throw ValidationError("cuts_from_points: radius must be positive");
  const std::size_t n = cloud.size();
  const std::size_t d = cloud.dimension;
  for (const auto& p : cloud.points)
    if (p.size() != d)
      throw ValidationError("cuts_from_points: inconsistent point dimension");
  const std::size_t total = n < 2 ? 0 : candidates_per_axis * d;
  if (keep > total)
    throw ValidationError("cuts_from_points: keep = " + std::to_string(keep) + " exceeds " +
                          std::to_string(total) + " candidate cuts");

  struct Candidate {
    CutSpec spec;
    std::size_t index; // 1-based quantile index on its axis
  };
  std::vector<Candidate> candidates;
  candidates.reserve(total);
  if (total > 0) {
    for (std::size_t a = 0; a < d; ++a) {
      std::vector<double> values(n);
      for (std::size_t v = 0; v < n; ++v)
        values[v] = cloud.points[v][a];
      std::sort(values.begin(), values.end());
      for (std::size_t i = 1; i <= candidates_per_axis; ++i) {
        const double pos = static_cast<double>(i) * static_cast<double>(n) /
                           static_cast<double>(candidates_per_axis + 1);
        const std::size_t idx = std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(pos)), 1, n - 1);
        candidates.push_back({{a, 0.5 * (values[idx - 1] + values[idx]), 0.0}, i});
      }
    }

    // Close pairs as per-axis coordinate intervals [lo, hi]; a cut separates
    // the pair iff lo < threshold <= hi.
    const double r2 = radius * radius;
    std::vector<std::vector<std::pair<double, double>>> spans(d);
    for (std::size_t u = 0; u < n; ++u) {
      for (std::size_t v = u + 1; v < n; ++v) {
        double dist2 = 0.0;
        for (std::size_t a = 0; a < d && dist2 < r2; ++a) {
          const double diff = cloud.points[u][a] - cloud.points[v][a];
          dist2 += diff * diff;
        }
        if (dist2 >= r2)
          continue;
        for (std::size_t a = 0; a < d; ++a)
          spans[a].emplace_back(std::minmax(cloud.points[u][a], cloud.points[v][a]));
      }
    }
    for (Candidate& c : candidates) {
      std::size_t cost = 0;
      for (const auto& [lo, hi] : spans[c.spec.axis])
        if (lo < c.spec.threshold && c.spec.threshold <= hi)
          ++cost;
      c.spec.cost = static_cast<double>(cost);
    }
  }

  std::stable_sort(candidates.begin(), candidates.end(), [](const Candidate& x, const Candidate& y) {
    return std::tie(x.spec.cost, x.spec.axis, x.spec.threshold) <
           std::tie(y.spec.cost, y.spec.axis, y.spec.threshold);
  });
  candidates.resize(keep);

  std::vector<std::string> names;
  std::vector<CutSpec> cuts;
  std::vector<std::vector<bool>> matrix(n, std::vector<bool>(keep));
  for (std::size_t f = 0; f < keep; ++f) {
    const CutSpec& cut = candidates[f].spec;
    char index[8];
    std::snprintf(index, sizeof index, "%02zu", candidates[f].index);
    names.push_back("x" + std::to_string(cut.axis) + "_q" + index);
    cuts.push_back(cut);
    for (std::size_t v = 0; v < n; ++v)
      matrix[v][f] = cloud.points[v][cut.axis] < cut.threshold;
  }
  return CutSystem{FeatureSystem(matrix, std::move(names)), std::move(cuts)};
}

/// Feature system of `cuts` as a Dataset, for the ingest CSV format.
inline Dataset cut_dataset(const CutSystem& cuts) {
  const FeatureSystem& fs = cuts.features;
  Dataset data;
  data.feature_names = fs.feature_names();
  data.rows.assign(fs.object_count(), std::vector<bool>(fs.feature_count()));
  for (std::size_t v = 0; v < fs.object_count(); ++v)
    for (std::size_t s = 0; s < fs.feature_count(); ++s)
      data.rows[v][s] = fs.incidence(v, s);
  return data;
}

struct PlantedSurvey {
  std::vector<Specification> mindsets;
  double flip_probability = 0.0;
  /// Questions "q1".."qQ"; answer 1 is the positive orientation.
  Dataset dataset;
  /// Hidden mindset index per respondent.
  std::vector<std::size_t> assignment;
};

inline std::size_t hamming_distance(const Specification& a, const Specification& b) {
  std::size_t d = 0;
  for (std::size_t s = 0; s < a.size(); ++s)
    d += a[s] != b[s];
  return d;
}

/// Draws per mindset before gen_planted_survey gives up on the distance constraint.
inline constexpr std::size_t mindset_retry_budget = 10000;

/**
 * Survey answers from k planted mindsets.
 *
 * Mindsets are uniform random sign vectors, redrawn until each is at Hamming
 * distance >= questions/3 from all earlier ones. Respondents are assigned in
 * contiguous blocks, sizes differing by at most one with the larger blocks
 * first. Each answer is the mindset's answer flipped with probability epsilon.
 */
inline PlantedSurvey gen_planted_survey(std::size_t k, std::size_t respondents, std::size_t questions,
                                        double epsilon, std::uint64_t seed) {
  if (k < 1 || questions < 1)
    throw ValidationError("gen_planted_survey: k and questions must be at least 1");
  if (respondents < k)
    throw ValidationError("gen_planted_survey: need at least one respondent per mindset");
  if (!(epsilon >= 0.0 && epsilon < 0.5))
    throw ValidationError("gen_planted_survey: flip probability must lie in [0, 0.5)");

  Rng rng(seed);
  PlantedSurvey survey;
  survey.flip_probability = epsilon;
  while (survey.mindsets.size() < k) {
    bool placed = false;
    for (std::size_t attempt = 0; attempt < mindset_retry_budget && !placed; ++attempt) {
      std::vector<Sign> signs(questions);
      for (auto& s : signs)
        s = (rng.bits() >> 63) ? Sign::positive : Sign::negative;
      Specification candidate(std::move(signs));
      placed = std::all_of(survey.mindsets.begin(), survey.mindsets.end(), [&](const Specification& m) {
        return 3 * hamming_distance(candidate, m) >= questions;
      });
      if (placed)
        survey.mindsets.push_back(std::move(candidate));
    }
    if (!placed)
      throw ValidationError("gen_planted_survey: could not place mindset " +
                            std::to_string(survey.mindsets.size() + 1) + " at distance >= " +
                            std::to_string(questions) + "/3 within " + std::to_string(mindset_retry_budget) +
                            " draws");
  }

  for (std::size_t q = 0; q < questions; ++q)
    survey.dataset.feature_names.push_back("q" + std::to_string(q + 1));
  survey.dataset.rows.reserve(respondents);
  survey.assignment.reserve(respondents);
  const std::size_t base = respondents / k;
  const std::size_t extra = respondents % k;
  for (std::size_t m = 0; m < k; ++m) {
    const std::size_t block = base + (m < extra ? 1 : 0);
    for (std::size_t i = 0; i < block; ++i) {
      std::vector<bool> row(questions);
      for (std::size_t q = 0; q < questions; ++q) {
        const bool answer = survey.mindsets[m][q] == Sign::positive;
        row[q] = (rng.uniform01() < epsilon) ? !answer : answer;
      }
      survey.dataset.rows.push_back(std::move(row));
      survey.assignment.push_back(m);
    }
  }
  return survey;
}

namespace detail {

inline std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

} // namespace detail

/// CSV with header x0,...,x<d-1>,label; shortest round-trip number formatting.
inline void write_point_cloud_csv(std::ostream& out, const PointCloud& cloud) {
  std::string line;
  for (std::size_t a = 0; a < cloud.dimension; ++a)
    line += "x" + std::to_string(a) + ",";
  out << line << "label\n";
  for (std::size_t v = 0; v < cloud.size(); ++v) {
    line.clear();
    for (double x : cloud.points[v])
      line += detail::format_double(x) + ",";
    out << line << cloud.labels[v] << '\n';
  }
}

/// Reads the format written by write_point_cloud_csv. The label column is optional.
inline PointCloud parse_point_cloud_csv(std::string_view text) {
  const auto lines = detail::split_lines(text);
  if (lines.empty())
    throw ParseError(0, "", "", "empty input");
  const auto header = detail::split_fields(lines[0]);
  const bool has_label = header.back() == "label";
  PointCloud cloud;
  cloud.dimension = header.size() - (has_label ? 1 : 0);
  if (cloud.dimension == 0)
    throw ParseError(0, "", std::string(lines[0]), "no coordinate columns");
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto fields = detail::split_fields(lines[r]);
    if (fields.size() != header.size())
      throw ParseError(r, "", std::string(lines[r]),
                       "expected " + std::to_string(header.size()) + " fields, found " +
                           std::to_string(fields.size()));
    std::vector<double> p(cloud.dimension);
    for (std::size_t a = 0; a < cloud.dimension; ++a) {
      const auto cell = fields[a];
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), p[a]);
      if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size() || !std::isfinite(p[a]))
        throw ParseError(r, std::string(header[a]), std::string(cell),
                         "not a finite number: '" + std::string(cell) + "'");
    }
    std::size_t label = 0;
    if (has_label) {
      const auto cell = fields.back();
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), label);
      if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size())
        throw ParseError(r, "label", std::string(cell), "label must be a nonnegative integer");
    }
    cloud.points.push_back(std::move(p));
    cloud.labels.push_back(label);
  }
  return cloud;
}

} // namespace tangles
