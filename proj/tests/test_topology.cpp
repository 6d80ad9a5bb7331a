#include <doctest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "test_support.hpp"
#include "wayfield/benchmark.hpp"
#include "wayfield/engine.hpp"
#include "wayfield/topology.hpp"

using namespace wayfield;

namespace {

FieldSet spread_all(const Scenario& s) {
  FieldSet fields;
  for (const Marker* o : s.of_kind(MarkerKind::Opening)) {
    fields.path.emplace(o->id, spread_path_field(s, o->cells, o->id));
  }
  for (const Marker* d : s.of_kind(MarkerKind::FinalDestination)) {
    fields.path.emplace(d->id, spread_path_field(s, d->cells, d->id));
  }
  return fields;
}

}  // namespace

TEST_CASE("two rooms joined by one opening") {
  const Scenario s = parse_scenario(
      "[grid]\n"
      "S....\n"
      ".....\n"
      "##a##\n"
      ".....\n"
      "....1\n");
  std::vector<Violation> violations;
  const CognitiveMap cm = build_cognitive_map(s, &violations);
  CHECK(violations.empty());
  CHECK(cm.regions.size() == 2);
  CHECK(cm.openings.size() == 1);
  CHECK(cm.openings[0].valid());
  CHECK(cm.openings[0].width_m == doctest::Approx(0.4));
  CHECK(cm.destination_region.at("1") == 1);
}

TEST_CASE("single room, destination inside, no openings") {
  const Scenario s = parse_scenario("[grid]\nS...1\n");
  const CognitiveMap cm = build_cognitive_map(s);
  CHECK(cm.regions.size() == 1);
  CHECK(cm.openings.empty());
}

TEST_CASE("benchmark cognitive map: 4 regions, 7 edges") {
  const Scenario s = parse_scenario(benchmark_scenario_text());
  std::vector<Violation> violations;
  const CognitiveMap cm = build_cognitive_map(s, &violations);
  CHECK(violations.empty());
  CHECK(cm.regions.size() == 4);
  CHECK(cm.openings.size() == 7);
  double total_width = 0.0;
  for (const OpeningEdge& e : cm.openings) {
    CHECK(e.valid());
    total_width += e.width_m;
  }
  CHECK(total_width == doctest::Approx(2.4 + 6 * 0.8));
}

TEST_CASE("every walkable cell is in exactly one region or on an opening") {
  const Scenario s = parse_scenario(benchmark_scenario_text());
  const CognitiveMap cm = build_cognitive_map(s);
  for (int y = 0; y < s.geometry.height; ++y) {
    for (int x = 0; x < s.geometry.width; ++x) {
      const Cell c{x, y};
      if (!s.is_walkable(c)) {
        CHECK(cm.region_of.at(c) == -1);
        continue;
      }
      const bool in_region = cm.region_of.at(c) >= 0;
      const bool on_opening = cm.opening_at.at(c) >= 0;
      CHECK(in_region != on_opening);
    }
  }
}

TEST_CASE("opening adjacent to a single region is a violation") {
  // The opening touches walkable space on one side only.
  const Scenario s = parse_scenario(
      "[grid]\n"
      "S....\n"
      "##a##\n"
      "#####\n"
      "....1\n");
  std::vector<Violation> violations;
  build_cognitive_map(s, &violations);
  bool found = false;
  for (const Violation& v : violations) found = found || v.code == "opening adjacency";
  CHECK(found);
}

TEST_CASE("benchmark paths tree from the first transition") {
  const Scenario s = parse_scenario(benchmark_scenario_text());
  const CognitiveMap cm = build_cognitive_map(s);
  const FieldSet fields = spread_all(s);

  SUBCASE("all nine loop-free sequences retained with a large factor") {
    const PathsTree tree = build_paths_tree(cm, fields, "1", 4.0 / 3.0, 1000.0);
    const auto& records = tree.entries.at("a");
    int from_room1 = 0;
    for (const PathRecord& r : records) {
      if (r.origin_region == 0) ++from_room1;
    }
    CHECK(from_room1 == 9);
    CHECK(oracles::count_loop_free_paths(cm, "a", 0, cm.destination_region.at("1")) == 9);
  }

  SUBCASE("factor 1 keeps only the fastest path per opening") {
    const PathsTree tree = build_paths_tree(cm, fields, "1", 4.0 / 3.0, 1.0);
    for (const auto& [opening, records] : tree.entries) {
      std::map<int, double> best;
      for (const PathRecord& r : records) {
        if (best.count(r.origin_region)) {
          CHECK(r.tt == doctest::Approx(best.at(r.origin_region)).epsilon(1e-9));
        } else {
          best[r.origin_region] = r.tt;
        }
      }
    }
  }
}

TEST_CASE("linear corridor of three regions: one path per opening") {
  const Scenario s = parse_scenario(
      "[grid]\n"
      "S....\n"
      "##a##\n"
      ".....\n"
      "##b##\n"
      "....1\n");
  const CognitiveMap cm = build_cognitive_map(s);
  const FieldSet fields = spread_all(s);
  const PathsTree tree = build_paths_tree(cm, fields, "1", 1.0, 1000.0);
  REQUIRE(tree.entries.count("a") == 1);
  REQUIRE(tree.entries.count("b") == 1);
  CHECK(tree.entries.at("a").size() == 1);
  CHECK(tree.entries.at("b").size() == 1);
  CHECK(tree.entries.at("a").front().openings == std::vector<std::string>{"a", "b"});
}

TEST_CASE("paths() views") {
  const Scenario s = parse_scenario(benchmark_scenario_text());
  const CognitiveMap cm = build_cognitive_map(s);
  const FieldSet fields = spread_all(s);
  const PathsTree tree = build_paths_tree(cm, fields, "1", 4.0 / 3.0, 3.0);

  SUBCASE("room 2 options start at the three doors into room 3") {
    std::set<std::string> firsts;
    for (const PathOption& o : paths(tree, 1, cm)) firsts.insert(o.first_opening);
    CHECK(firsts == std::set<std::string>{"b", "c", "d"});
  }
  SUBCASE("destination region has no tactical options") {
    CHECK(paths(tree, cm.destination_region.at("1"), cm).empty());
  }
  SUBCASE("unknown region throws") {
    CHECK_THROWS_AS(paths(tree, 99, cm), std::invalid_argument);
  }
  SUBCASE("path sequences are consistent with the cognitive map") {
    for (int region = 0; region < static_cast<int>(cm.regions.size()); ++region) {
      for (const PathOption& o : paths(tree, region, cm)) {
        int current = region;
        for (size_t i = 0; i + 1 < o.nodes.size(); ++i) {  // last node is the destination
          const int idx = cm.opening_index(o.nodes[i]);
          REQUIRE(idx >= 0);
          const OpeningEdge& e = cm.openings[static_cast<size_t>(idx)];
          REQUIRE((e.regions[0] == current || e.regions[1] == current));
          current = e.other_side(current);
        }
        CHECK(current == cm.destination_region.at("1"));
      }
    }
  }
  SUBCASE("dead-end region routes through its single opening") {
    const Scenario t = parse_scenario(
        "[grid]\n"
        "S....\n"
        "##a##\n"
        "....1\n");
    const CognitiveMap tm = build_cognitive_map(t);
    const FieldSet tf = spread_all(t);
    const PathsTree tt = build_paths_tree(tm, tf, "1", 1.0, 3.0);
    const auto options = paths(tt, 0, tm);
    REQUIRE(options.size() == 1);
    CHECK(options.front().first_opening == "a");
  }
}

TEST_CASE("minimum stored travel time agrees with the opening-graph oracle") {
  auto check_tree = [](const Scenario& s) {
    const CognitiveMap cm = build_cognitive_map(s);
    const FieldSet fields = spread_all(s);
    const double speed = 4.0 / 3.0;
    const PathsTree tree = build_paths_tree(cm, fields, "1", speed, 1e9);
    int checked = 0;
    for (const auto& [opening, records] : tree.entries) {
      std::map<int, double> best;
      for (const PathRecord& r : records) {
        auto it = best.find(r.origin_region);
        if (it == best.end() || r.tt < it->second) best[r.origin_region] = r.tt;
      }
      for (const auto& [origin, tt] : best) {
        const double oracle =
            oracles::opening_graph_min_distance(cm, fields, "1", opening, origin) / speed;
        REQUIRE(tt == doctest::Approx(oracle).epsilon(1e-9));
        ++checked;
      }
    }
    return checked;
  };

  CHECK(check_tree(parse_scenario(benchmark_scenario_text())) == 7);

  Rng rng(2024);
  int total = 0;
  for (int trial = 0; trial < 20; ++trial) {
    total += check_tree(parse_scenario(test_support::random_room_scenario_text(rng)));
  }
  CHECK(total > 20);
}

TEST_CASE("doubling the reference speed halves every travel time exactly") {
  const Scenario s = parse_scenario(benchmark_scenario_text());
  const CognitiveMap cm = build_cognitive_map(s);
  const FieldSet fields = spread_all(s);
  const PathsTree a = build_paths_tree(cm, fields, "1", 1.0, 3.0);
  const PathsTree b = build_paths_tree(cm, fields, "1", 2.0, 3.0);
  for (const auto& [opening, records] : a.entries) {
    const auto& other = b.entries.at(opening);
    REQUIRE(records.size() == other.size());
    for (size_t i = 0; i < records.size(); ++i) {
      CHECK(other[i].tt == records[i].tt / 2.0);
    }
  }
}

TEST_CASE("region type labels attach to regions") {
  const Scenario s = parse_scenario(
      "[grid]\n"
      "SRR..\n"
      "##a##\n"
      "....1\n");
  const CognitiveMap cm = build_cognitive_map(s);
  REQUIRE(cm.regions.size() == 2);
  CHECK(cm.regions[0].type_label == "R");
  CHECK(cm.regions[1].type_label.empty());
}
