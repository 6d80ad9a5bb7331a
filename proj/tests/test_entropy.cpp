#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "test_support.hpp"
#include "wayfield/benchmark.hpp"
#include "wayfield/entropy.hpp"

using namespace wayfield;

namespace {

const double kLog2Of3 = std::log2(3.0);

WorldState benchmark_world(uint64_t seed) {
  return init_world(parse_scenario(benchmark_scenario_text()), ModelParams{}, seed);
}

// The benchmark cell whose three options lie closest to the uniform split.
Cell most_uniform_cell(const WorldState& w, double* spread_out = nullptr) {
  Cell best{-1, -1};
  double best_spread = 1e9;
  for (int y = 0; y < w.scenario.geometry.height; ++y) {
    for (int x = 0; x < w.scenario.geometry.width; ++x) {
      const Cell c{x, y};
      if (!w.scenario.is_walkable(c) || w.cmap.region_of.at(c) < 0) continue;
      const auto probs = choice_distribution_at(w, c, "1");
      if (probs.size() != 3) continue;
      double spread = 0.0;
      for (double p : probs) spread = std::max(spread, std::abs(p - 1.0 / 3.0));
      if (spread < best_spread) {
        best_spread = spread;
        best = c;
      }
    }
  }
  if (spread_out != nullptr) *spread_out = best_spread;
  return best;
}

}  // namespace

TEST_CASE("entropy_of") {
  CHECK(entropy_of(std::vector<double>{1.0}) == 0.0);
  CHECK(entropy_of(std::vector<double>{0.5, 0.5}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(entropy_of(std::vector<double>{1.0 / 3, 1.0 / 3, 1.0 / 3}) ==
        doctest::Approx(kLog2Of3).epsilon(1e-12));
  CHECK(entropy_of(std::vector<double>{1.0, 0.0}) == 0.0);  // 0 log(1/0) contributes nothing
  CHECK_THROWS_AS(entropy_of(std::vector<double>{0.4, 0.4}), std::invalid_argument);
  CHECK_THROWS_AS(entropy_of(std::vector<double>{1.2, -0.2}), std::invalid_argument);
}

TEST_CASE("mirror-symmetric doors split the choice evenly") {
  const std::string text =
      "[grid]\n"
      "S..........\n"
      "...........\n"
      "##a#####b##\n"
      "...........\n"
      ".....1.....\n";
  WorldState w = init_world(parse_scenario(text), ModelParams{}, 1);
  const Cell center{5, 1};  // on the mirror axis
  const auto probs = choice_distribution_at(w, center, "1");
  REQUIRE(probs.size() == 2);
  CHECK(probs[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(probs[1] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(entropy_of(probs) == doctest::Approx(1.0).epsilon(1e-9));

  SUBCASE("moving the destination toward one door breaks the tie that way") {
    const std::string shifted =
        "[grid]\n"
        "S..........\n"
        "...........\n"
        "##a#####b##\n"
        "...........\n"
        "...1.......\n";
    WorldState v = init_world(parse_scenario(shifted), ModelParams{}, 1);
    const auto moved = scored_distribution_at(v, center, "1");
    REQUIRE(moved.options.size() == 2);
    for (const ScoredOption& o : moved.options) {
      if (o.option.first_opening == "a") CHECK(o.probability > 0.5);
      if (o.option.first_opening == "b") CHECK(o.probability < 0.5);
    }
    CHECK(entropy_of(choice_distribution_at(v, center, "1")) < 1.0);
  }
}

TEST_CASE("benchmark equidistance cells reach the uniform three-way split") {
  const WorldState w = benchmark_world(1);
  double spread = 1.0;
  const Cell tie = most_uniform_cell(w, &spread);
  REQUIRE(tie.x >= 0);
  CHECK(spread <= 1e-9);
  const auto probs = choice_distribution_at(w, tie, "1");
  CHECK(entropy_of(probs) == doctest::Approx(kLog2Of3).epsilon(1e-9));
}

TEST_CASE("cells in the destination's region are certain") {
  const WorldState w = benchmark_world(1);
  const Cell in_room4{5, 45};
  REQUIRE(w.cmap.region_of.at(in_room4) == w.cmap.destination_region.at("1"));
  const auto probs = choice_distribution_at(w, in_room4, "1");
  REQUIRE(probs.size() == 1);
  CHECK(probs[0] == 1.0);
  CHECK(entropy_of(probs) == 0.0);
}

TEST_CASE("single-route scenarios have an all-zero map") {
  WorldState w = init_world(parse_scenario(
                                "[grid]\n"
                                "S....\n"
                                "##a##\n"
                                "....1\n"),
                            ModelParams{}, 1);
  const EntropyMap m = entropy_map(w, "1");
  CHECK(m.h_max == 0.0);
  for (int y = 0; y < m.values.height(); ++y) {
    for (int x = 0; x < m.values.width(); ++x) {
      if (w.scenario.is_walkable({x, y})) {
        CHECK(m.values.at({x, y}) == 0.0);
      } else {
        CHECK(m.values.at({x, y}) == EntropyMap::kSentinel);
      }
    }
  }
}

TEST_CASE("entropy map: bounds, purity, and seed independence at step 0") {
  const WorldState w1 = benchmark_world(1);
  const EntropyMap a = entropy_map(w1, "1");
  const EntropyMap b = entropy_map(w1, "1");
  CHECK(a.values == b.values);
  CHECK(a.h_max == doctest::Approx(kLog2Of3).epsilon(1e-12));

  const WorldState w2 = benchmark_world(998877);
  const EntropyMap c = entropy_map(w2, "1");
  CHECK(a.values == c.values);

  int sentinels = 0;
  for (int y = 0; y < a.values.height(); ++y) {
    for (int x = 0; x < a.values.width(); ++x) {
      const Cell cell{x, y};
      const double v = a.values.at(cell);
      if (v == EntropyMap::kSentinel) {
        CHECK(!w1.scenario.is_walkable(cell));
        ++sentinels;
        continue;
      }
      const auto probs = choice_distribution_at(w1, cell, "1");
      CHECK(v >= 0.0);
      CHECK(v <= std::log2(static_cast<double>(probs.size())) + 1e-12);
    }
  }
  CHECK(sentinels > 0);
}

TEST_CASE("choice-field influence is marginalized, not sampled") {
  ModelParams params;
  params.kappa_f = 5.0;
  WorldState w = init_world(parse_scenario(
                                "[grid]\n"
                                "S........\n"
                                ".........\n"
                                "##a#b#c##\n"
                                ".........\n"
                                "........1\n"),
                            params, 1);
  const Cell probe{4, 0};
  // diff weights 2:1 for doors b and c at the probe cell
  w.choice_field.diffuse(w.scenario, probe, 11, "b", 0.0);
  w.choice_field.diffuse(w.scenario, probe, 12, "b", 0.0);
  w.choice_field.diffuse(w.scenario, probe, 13, "c", 0.0);

  const auto module = choice_distribution_at(w, probe, "1");
  const auto reference = oracles::distribution(w, probe, "1");
  REQUIRE(module.size() == reference.size());
  for (size_t i = 0; i < module.size(); ++i) {
    CHECK(module[i] == doctest::Approx(reference[i]).epsilon(1e-12));
  }
  // repeated evaluation is deterministic (no sampling noise)
  CHECK(choice_distribution_at(w, probe, "1") == module);
}

TEST_CASE("live congestion shifts the phantom distribution") {
  ModelParams params;
  params.kappa_q = 20.0;
  params.gamma_m = 100.0;  // keep the queue perceivable from the distant tie cell
  WorldState w = init_world(parse_scenario(benchmark_scenario_text()), params, 1);
  const Cell tie = most_uniform_cell(w);
  REQUIRE(tie.x >= 0);
  const auto before = scored_distribution_at(w, tie, "1");

  // Queue several agents onto the first option's door.
  const std::string door = before.options.front().option.first_opening;
  const OpeningEdge& edge = w.cmap.openings[static_cast<size_t>(w.cmap.opening_index(door))];
  int placed = 0;
  for (Cell c : edge.cells) {
    const Cell above{c.x, c.y - 1};
    if (w.scenario.is_walkable(above) && w.occupancy.at(above) == kFreeCell) {
      const uint64_t id = inject_agent(w, above, 1.0, "1");
      for (AgentState& a : w.agents) {
        if (a.id == id) a.dest = door;
      }
      ++placed;
    }
  }
  REQUIRE(placed > 0);
  const auto after = scored_distribution_at(w, tie, "1");
  REQUIRE(after.options.size() == before.options.size());
  CHECK(after.options.front().probability < before.options.front().probability);
}

TEST_CASE("csv export format") {
  EntropyMap m;
  m.step = 7;
  m.destination = "1";
  m.h_max = kLog2Of3;
  m.values = Grid<double>(1, 1, 0.0);

  const std::filesystem::path path = std::filesystem::temp_directory_path() / "wf_entropy_test.csv";
  export_csv(m, path);
  std::ifstream in(path);
  std::string header, body;
  std::getline(in, header);
  std::getline(in, body);
  CHECK(header == "# entropy-map step=7 dest=1 hmax=1.584963");
  CHECK(body == "0.000000");

  SUBCASE("sentinel prints as -1.000000") {
    EntropyMap s = m;
    s.values = Grid<double>(2, 1, 0.0);
    s.values.at({1, 0}) = EntropyMap::kSentinel;
    export_csv(s, path);
    std::ifstream in2(path);
    std::getline(in2, header);
    std::getline(in2, body);
    CHECK(body == "0.000000,-1.000000");
  }
  std::filesystem::remove(path);
}

TEST_CASE("image export scales to 255 and writes the sentinel mask") {
  EntropyMap m;
  m.step = 0;
  m.destination = "1";
  m.h_max = kLog2Of3;
  m.values = Grid<double>(3, 1, 0.0);
  m.values.at({0, 0}) = kLog2Of3;             // full scale
  m.values.at({1, 0}) = EntropyMap::kSentinel;
  m.values.at({2, 0}) = kLog2Of3 / 2.0;

  const std::filesystem::path path = std::filesystem::temp_directory_path() / "wf_entropy_test.pgm";
  export_image(m, path);

  auto read_pgm = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::string magic, comment, dims, maxval;
    std::getline(in, magic);
    std::getline(in, comment);
    std::getline(in, dims);
    std::getline(in, maxval);
    REQUIRE(magic == "P5");
    REQUIRE(maxval == "255");
    std::vector<unsigned char> pixels;
    char ch;
    while (in.get(ch)) pixels.push_back(static_cast<unsigned char>(ch));
    return pixels;
  };
  const auto img = read_pgm(path);
  REQUIRE(img.size() == 3);
  CHECK(img[0] == 255);
  CHECK(img[1] == 0);
  CHECK(img[2] == 128);  // round(255/2)

  std::filesystem::path mask = path;
  mask += ".mask.pgm";
  const auto msk = read_pgm(mask);
  REQUIRE(msk.size() == 3);
  CHECK(msk[0] == 0);
  CHECK(msk[1] == 255);
  CHECK(msk[2] == 0);

  std::filesystem::remove(path);
  std::filesystem::remove(mask);
}

TEST_CASE("opening cells commit to the next target") {
  const WorldState w = benchmark_world(1);
  const Cell on_a = w.cmap.openings[static_cast<size_t>(w.cmap.opening_index("a"))].cells.front();
  const auto probs = choice_distribution_at(w, on_a, "1");
  REQUIRE(probs.size() == 1);
  CHECK(probs[0] == 1.0);
}
