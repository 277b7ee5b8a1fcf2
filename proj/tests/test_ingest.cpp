#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include <tangles/ingest.hpp>

#include "support/oracle.hpp"

using namespace tangles;
using namespace tangles::testing;

namespace {
const char* const furniture_csv = "p,q,r,s\n1,0,0,0\n0,1,0,0\n0,0,1,0\n0,0,0,1\n";

ParseError parse_error_of(std::string_view text) {
  try {
    parse_csv(text);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected a parse error for: " << text);
  throw std::logic_error("unreachable");
}
} // namespace

TEST_CASE("parse_csv accepts well-formed input", "[ingest]") {
  SECTION("furniture fixture") {
    const Dataset data = parse_csv(std::string_view(furniture_csv));
    CHECK(data.feature_names == std::vector<std::string>{"p", "q", "r", "s"});
    CHECK(data.rows == furniture4_matrix());
    CHECK_FALSE(data.object_labels.has_value());
  }
  SECTION("single cell") {
    const Dataset data = parse_csv(std::string_view("a\n1\n"));
    CHECK(data.object_count() == 1);
    CHECK(data.feature_names.size() == 1);
    CHECK(data.rows[0][0]);
  }
  SECTION("id column, CRLF and no final newline") {
    const Dataset data = parse_csv(std::string_view("id,x,y\r\nchair,1,0\r\ntable,0,0"));
    REQUIRE(data.object_labels.has_value());
    CHECK(*data.object_labels == std::vector<std::string>{"chair", "table"});
    CHECK(data.rows == Matrix{{true, false}, {false, false}});
  }
  SECTION("header only") {
    const Dataset data = parse_csv(std::string_view("a,b\n"));
    CHECK(data.object_count() == 0);
    CHECK(data.feature_system().feature_count() == 2);
  }
  SECTION("constant columns are kept") {
    const Dataset data = parse_csv(std::string_view("a,b\n1,0\n1,1\n"));
    CHECK(data.feature_system().extent(Orientation::negative(0)).none());
  }
  SECTION("stream overload") {
    std::istringstream in(furniture_csv);
    CHECK(parse_csv(in).rows == furniture4_matrix());
  }
}

TEST_CASE("parse_csv rejects malformed input with a location", "[ingest]") {
  {
    const auto e = parse_error_of("a,b\n1,2\n");
    CHECK(e.row() == 1);
    CHECK(e.column() == "b");
    CHECK(e.text() == "2");
    CHECK(std::string(e.what()).find("row 1, column b") != std::string::npos);
  }
  {
    const auto e = parse_error_of("");
    CHECK(e.row() == 0);
  }
  {
    const auto e = parse_error_of("a,a\n1,0\n");
    CHECK(e.row() == 0);
    CHECK(e.column() == "a");
  }
  {
    const auto e = parse_error_of("a,b\n1,0\n1\n");
    CHECK(e.row() == 2);
  }
  {
    const auto e = parse_error_of("a,b\n1,\n");
    CHECK(e.column() == "b");
  }

  const std::vector<std::string> malformed{
      "\n",              // empty header name
      "a,,b\n1,0,1\n",   // empty header name in the middle
      "a,b\n1,0,1\n",    // too many fields
      "a,b\n\n",         // blank data row
      "a\ntrue\n",       // no truthy aliases
      "a\n 1\n",         // no whitespace trimming
      "a\n01\n",         // single character only
      "id,a\nx,1\nx,0\n", // duplicate ids
      "id,a\n,1\n",      // empty id
      "a,b\n0,1\n1,?\n", // missing-value marker
  };
  for (const auto& text : malformed) {
    INFO(text);
    CHECK_THROWS_AS(parse_csv(std::string_view(text)), ParseError);
  }
}

TEST_CASE("write_csv round-trips parsed data", "[ingest][property]") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    Dataset data;
    const std::size_t features = 1 + rng() % 6;
    data.feature_names = default_names(features);
    data.rows = random_matrix(rng() % 12, features, rng);
    if (rng() & 1) {
      data.object_labels.emplace();
      for (std::size_t v = 0; v < data.rows.size(); ++v)
        data.object_labels->push_back("obj" + std::to_string(v));
    }
    std::ostringstream out;
    write_csv(out, data);
    const Dataset back = parse_csv(std::string_view(out.str()));
    REQUIRE(back.feature_names == data.feature_names);
    REQUIRE(back.rows == data.rows);
    REQUIRE(back.object_labels == data.object_labels);
    std::ostringstream again;
    write_csv(again, back);
    REQUIRE(again.str() == out.str());
  }
  std::ostringstream out;
  write_csv(out, parse_csv(std::string_view(furniture_csv)));
  CHECK(out.str() == furniture_csv);
}

TEST_CASE("write_report", "[ingest]") {
  const Dataset data = parse_csv(std::string_view(furniture_csv));
  const FeatureSystem fs = data.feature_system();
  const auto tangles = enumerate_tangles(fs, 1);

  SECTION("five tangles in order") {
    const auto doc = report_json(tangles, fs, 1, data.labels());
    CHECK(doc["feature_names"] == nlohmann::json({"p", "q", "r", "s"}));
    CHECK(doc["n"] == 1);
    REQUIRE(doc["tangles"].size() == 5);
    CHECK(doc["tangles"][0]["signs"] == "+---");
    CHECK(doc["tangles"][4]["signs"] == "----");
    CHECK(doc["tangles"][0]["orientation"] == nlohmann::json({{"p", "+"}, {"q", "-"}, {"r", "-"}, {"s", "-"}}));
    CHECK(doc["tangles"][0]["agreement"] == 1);
    CHECK(doc["tangles"][0]["found_at_n"] == 1);
    CHECK_FALSE(doc["tangles"][0].contains("witness"));
  }
  SECTION("empty tangle list") {
    std::ostringstream out;
    write_report(out, {}, fs, 2, data.labels());
    CHECK(out.str() == "{\n  \"feature_names\": [\n    \"p\",\n    \"q\",\n    \"r\",\n    \"s\"\n  ],\n"
                       "  \"n\": 2,\n  \"tangles\": []\n}\n");
  }
  SECTION("witness details") {
    std::vector<std::optional<WitnessSet>> witnesses(tangles.size());
    witnesses.back() = WitnessSet({0, 1, 2, 3});
    const auto doc = report_json(tangles, fs, 1, data.labels(), &witnesses);
    CHECK(doc["tangles"][0]["witness"].is_null());
    const auto& w = doc["tangles"][4]["witness"];
    CHECK(w["members"] == nlohmann::json({"1", "2", "3", "4"}));
    CHECK(w["majorities"]["p"]["agree"] == 3);
    CHECK(w["majorities"]["p"]["disagree"] == 1);
    CHECK(w["majorities"]["p"]["fraction"] == 0.75);
  }
  SECTION("byte-identical output, fixed key order") {
    std::ostringstream a, b;
    write_report(a, tangles, fs, 1, data.labels());
    write_report(b, enumerate_tangles(fs, 1), fs, 1, data.labels());
    CHECK(a.str() == b.str());
    const auto text = a.str();
    CHECK(text.find("\"feature_names\"") < text.find("\"n\""));
    CHECK(text.find("\"n\"") < text.find("\"tangles\""));
    CHECK(text.find("\"signs\"") < text.find("\"agreement\""));
  }
}

TEST_CASE("write_sweep_report", "[ingest]") {
  const FeatureSystem fs = furniture4();
  const auto doc = sweep_json(sweep_agreement(fs), fs);
  CHECK(doc["n_max"] == 1);
  REQUIRE(doc["levels"].size() == 1);
  CHECK(doc["levels"][0]["count"] == 5);
  CHECK(doc["levels"][0]["tangles"][4] == "----");
}
