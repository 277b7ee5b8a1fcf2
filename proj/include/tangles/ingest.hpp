#pragma once

#include <cstddef>
#include <istream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "core.hpp"
#include "search.hpp"
#include "witness.hpp"

namespace tangles {

/**
 * Objects × features data as read from CSV.
 *
 * Format: a header row of feature names, optionally preceded by a column
 * named exactly "id" carrying object labels; every other cell is the single
 * character 0 or 1. Lines end in LF or CRLF and the final newline is
 * optional. There is no quoting, so names may not contain commas.
 */
struct Dataset {
  std::vector<std::string> feature_names;
  std::optional<std::vector<std::string>> object_labels;
  std::vector<std::vector<bool>> rows;

  std::size_t object_count() const { return rows.size(); }

  FeatureSystem feature_system() const { return FeatureSystem(rows, feature_names); }

  /// Object labels, defaulting to 1-based row numbers.
  std::vector<std::string> labels() const {
    if (object_labels)
      return *object_labels;
    std::vector<std::string> out;
    out.reserve(rows.size());
    for (std::size_t v = 0; v < rows.size(); ++v)
      out.push_back(std::to_string(v + 1));
    return out;
  }
};

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos)
      nl = text.size();
    std::string_view line = text.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r')
      line.remove_suffix(1);
    lines.push_back(line);
    start = nl + 1;
  }
  return lines;
}

} // namespace detail

/// Parses and validates CSV text. Throws ParseError naming the offending location.
inline Dataset parse_csv(std::string_view text) {
  const auto lines = detail::split_lines(text);
  if (lines.empty())
    throw ParseError(0, "", "", "empty input");

  Dataset data;
  auto header = detail::split_fields(lines[0]);
  const bool has_ids = !header.empty() && header[0] == "id";
  const std::size_t first = has_ids ? 1 : 0;
  {
    std::unordered_set<std::string_view> seen;
    for (std::size_t c = first; c < header.size(); ++c) {
      if (header[c].empty())
        throw ParseError(0, "", "", "empty feature name in column " + std::to_string(c + 1));
      if (!seen.insert(header[c]).second)
        throw ParseError(0, std::string(header[c]), std::string(header[c]),
                         "duplicate feature name '" + std::string(header[c]) + "'");
      data.feature_names.emplace_back(header[c]);
    }
  }
  if (has_ids)
    data.object_labels.emplace();

  std::unordered_set<std::string> seen_ids;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto fields = detail::split_fields(lines[r]);
    if (fields.size() != header.size())
      throw ParseError(r, "", std::string(lines[r]),
                       "expected " + std::to_string(header.size()) + " fields, found " +
                           std::to_string(fields.size()));
    if (has_ids) {
      std::string id(fields[0]);
      if (id.empty())
        throw ParseError(r, "id", id, "empty object id");
      if (!seen_ids.insert(id).second)
        throw ParseError(r, "id", id, "duplicate object id '" + id + "'");
      data.object_labels->push_back(std::move(id));
    }
    std::vector<bool> row(data.feature_names.size());
    for (std::size_t c = first; c < fields.size(); ++c) {
      const std::string_view cell = fields[c];
      if (cell == "1")
        row[c - first] = true;
      else if (cell != "0")
        throw ParseError(r, std::string(header[c]), std::string(cell),
                         cell.empty() ? "missing value (cells must be 0 or 1)"
                                      : "non-binary cell '" + std::string(cell) + "' (cells must be 0 or 1)");
    }
    data.rows.push_back(std::move(row));
  }
  return data;
}

inline Dataset parse_csv(std::istream& in) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_csv(std::string_view(text));
}

/// Serializes in the format accepted by parse_csv, LF line endings.
inline void write_csv(std::ostream& out, const Dataset& data) {
  const bool has_ids = data.object_labels.has_value();
  std::string line = has_ids ? "id" : "";
  for (std::size_t c = 0; c < data.feature_names.size(); ++c) {
    if (has_ids || c > 0)
      line += ',';
    line += data.feature_names[c];
  }
  out << line << '\n';
  for (std::size_t r = 0; r < data.rows.size(); ++r) {
    line = has_ids ? (*data.object_labels)[r] : "";
    for (std::size_t c = 0; c < data.rows[r].size(); ++c) {
      if (has_ids || c > 0)
        line += ',';
      line += data.rows[r][c] ? '1' : '0';
    }
    out << line << '\n';
  }
}

using ordered_json = nlohmann::ordered_json;

inline ordered_json witness_json(const FeatureSystem& fs, const Specification& spec, const WitnessSet& x,
                                 const std::vector<std::string>& labels) {
  ordered_json members = ordered_json::array();
  for (std::size_t v : x.members())
    members.push_back(labels.at(v));
  const auto profile = popularity_profile(fs, spec, x);
  ordered_json majorities = ordered_json::object();
  for (std::size_t s = 0; s < fs.feature_count(); ++s) {
    const auto& m = profile.features[s];
    majorities[fs.feature_names()[s]] = ordered_json{
        {"agree", m.agree}, {"disagree", m.disagree}, {"fraction", m.fraction()}};
  }
  return ordered_json{{"members", std::move(members)}, {"majorities", std::move(majorities)}};
}

/**
 * Tangle report document:
 *
 *   { "feature_names": [...], "n": N,
 *     "tangles": [ { "signs": "+-..", "orientation": { "<feature>": "+" | "-" },
 *                    "agreement": a, "found_at_n": N,
 *                    "witness": { "members": [...], "majorities": {...} } } ] }
 *
 * "witness" appears only when `witnesses` is given, and is null for a tangle
 * whose search found nothing. Keys are emitted in this fixed order.
 */
inline ordered_json report_json(const std::vector<Tangle>& tangles, const FeatureSystem& fs, std::size_t n,
                                const std::vector<std::string>& labels,
                                const std::vector<std::optional<WitnessSet>>* witnesses = nullptr) {
  if (witnesses && witnesses->size() != tangles.size())
    throw ValidationError("one witness result per tangle required");
  if (labels.size() != fs.object_count())
    throw ValidationError("one label per object required");
  ordered_json list = ordered_json::array();
  for (std::size_t i = 0; i < tangles.size(); ++i) {
    const Tangle& t = tangles[i];
    ordered_json orientation = ordered_json::object();
    for (std::size_t f = 0; f < fs.feature_count(); ++f)
      orientation[fs.feature_names()[f]] = std::string(1, sign_char(t.specification[f]));
    ordered_json entry{{"signs", t.specification.to_string()},
                       {"orientation", std::move(orientation)},
                       {"agreement", t.agreement},
                       {"found_at_n", t.found_at_n}};
    if (witnesses) {
      const auto& w = (*witnesses)[i];
      entry["witness"] = w ? witness_json(fs, t.specification, *w, labels) : ordered_json(nullptr);
    }
    list.push_back(std::move(entry));
  }
  return ordered_json{{"feature_names", fs.feature_names()}, {"n", n}, {"tangles", std::move(list)}};
}

inline void write_report(std::ostream& out, const std::vector<Tangle>& tangles, const FeatureSystem& fs,
                         std::size_t n, const std::vector<std::string>& labels,
                         const std::vector<std::optional<WitnessSet>>* witnesses = nullptr) {
  out << report_json(tangles, fs, n, labels, witnesses).dump(2) << '\n';
}

/// { "feature_names": [...], "n_max": k, "levels": [ { "n", "count", "tangles": ["+-.."] } ] }
inline ordered_json sweep_json(const SweepReport& report, const FeatureSystem& fs) {
  ordered_json levels = ordered_json::array();
  for (const SweepLevel& level : report.levels) {
    ordered_json signs = ordered_json::array();
    for (const Specification& spec : level.tangles)
      signs.push_back(spec.to_string());
    levels.push_back(ordered_json{{"n", level.n}, {"count", level.count()}, {"tangles", std::move(signs)}});
  }
  return ordered_json{
      {"feature_names", fs.feature_names()}, {"n_max", report.n_max}, {"levels", std::move(levels)}};
}

inline void write_sweep_report(std::ostream& out, const SweepReport& report, const FeatureSystem& fs) {
  out << sweep_json(report, fs).dump(2) << '\n';
}

} // namespace tangles
