#include <algorithm>
#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "civp/report.hpp"
#include "reference/grid_count.hpp"

using civp::PartitionPlan;
using civp::ResourceReport;
using civp::TileSet;

namespace {

void check_against_grid(const PartitionPlan& plan) {
  const ResourceReport r = civp::analyze(plan);
  const testref::GridCount g = testref::grid_count(plan);
  REQUIRE(g.exact_cover);
  REQUIRE(r.capacity_bitproducts == g.capacity);
  REQUIRE(r.useful_bitproducts == g.useful);
  REQUIRE(r.underutilized_tiles == g.underutilized);
  REQUIRE(r.useful_bitproducts ==
          static_cast<std::uint64_t>(plan.a_width) * static_cast<std::uint64_t>(plan.b_width));
  REQUIRE(r.capacity_bitproducts >= r.useful_bitproducts);
  REQUIRE(r.utilization > 0.0);
  REQUIRE(r.utilization <= 1.0);
}

}  // namespace

TEST_CASE("analyze p57") {
  const ResourceReport r = civp::analyze(civp::plan_p57());
  CHECK(r.useful_bitproducts == 2809);  // 53^2
  CHECK(r.capacity_bitproducts == 3249);  // 4*576 + 4*216 + 81
  CHECK(r.total_tiles == 9);
  CHECK(r.underutilized_tiles == 5);
  CHECK(r.utilization == Catch::Approx(2809.0 / 3249.0).epsilon(1e-12));
  check_against_grid(civp::plan_p57());
}

TEST_CASE("analyze p114") {
  const ResourceReport r = civp::analyze(civp::plan_p114());
  CHECK(r.census.at({24, 24}) == 16);
  CHECK(r.census.at({24, 9}) == 16);
  CHECK(r.census.at({9, 9}) == 4);
  CHECK(r.capacity_bitproducts == 12996);
  CHECK(r.useful_bitproducts == 12769);  // 113^2
  CHECK(r.utilization == Catch::Approx(12769.0 / 12996.0).epsilon(1e-12));
  // The 2*6-1 steps touching the one pad-carrying top slice per operand.
  CHECK(r.underutilized_tiles == 11);
  check_against_grid(civp::plan_p114());
}

TEST_CASE("analyze the 18x18 quadruple-precision baseline") {
  const PartitionPlan plan = civp::plan_generic(113, 113, *civp::find_tileset("baseline18"));
  const ResourceReport r = civp::analyze(plan);
  CHECK(r.total_tiles == 49);
  CHECK(r.useful_bitproducts == 12769);
  CHECK(r.capacity_bitproducts == 15876);  // 49 * 324
  CHECK(r.underutilized_tiles == 13);      // 12 at 5x18 or 18x5, one at 5x5
  CHECK(r.utilization == Catch::Approx(12769.0 / 15876.0).epsilon(1e-12));
  check_against_grid(plan);

  REQUIRE(r.paper_claim.has_value());
  CHECK(r.paper_claim->total_tiles == 49);
  CHECK(r.paper_claim->underutilized_tiles == 17);
  CHECK(r.paper_claim->underutilized_percent == 35);
  const std::string text = civp::report_to_text(r);
  CHECK(text.find("underutilized_tiles: 13") != std::string::npos);
  CHECK(text.find("paper_claim: tiles 49, underutilized 17 (35%)") != std::string::npos);
}

TEST_CASE("useful bit-products always equal the true width product") {
  std::mt19937_64 rng(0x9219);
  const TileSet toy{"toy", {{3, 3}, {3, 2}, {2, 2}}};
  const std::vector<const TileSet*> sets = {civp::find_tileset("civp"),
                                            civp::find_tileset("baseline18"), &toy};
  for (int i = 0; i < 60; ++i) {
    const int aw = 1 + static_cast<int>(rng() % 130);
    const int bw = 1 + static_cast<int>(rng() % 130);
    const TileSet& set = *sets[static_cast<std::size_t>(rng() % sets.size())];
    check_against_grid(civp::plan_generic(aw, bw, set));
  }
}

TEST_CASE("square-tile underutilization formula") {
  for (int n : {3, 7, 18}) {
    const TileSet square{"square", {{n, n}}};
    for (int w = 1; w <= 60; ++w) {
      const ResourceReport r = civp::analyze(civp::plan_generic(w, w, square));
      const int k = (w + n - 1) / n;
      const int expected = (w % n == 0) ? 0 : 2 * k - 1;
      REQUIRE(r.underutilized_tiles == expected);
    }
  }
}

TEST_CASE("analyze is step-order invariant") {
  PartitionPlan plan = civp::plan_generic(113, 113, *civp::find_tileset("baseline18"));
  const ResourceReport before = civp::analyze(plan);
  std::mt19937_64 rng(0xBEE);
  std::shuffle(plan.steps.begin(), plan.steps.end(), rng);
  const ResourceReport after = civp::analyze(plan);
  CHECK(before.capacity_bitproducts == after.capacity_bitproducts);
  CHECK(before.useful_bitproducts == after.useful_bitproducts);
  CHECK(before.underutilized_tiles == after.underutilized_tiles);
  CHECK(before.census == after.census);
}

TEST_CASE("compare 113x113") {
  const auto rows = civp::compare(113, 113, {*civp::find_tileset("civp"),
                                             *civp::find_tileset("baseline18")});
  REQUIRE(rows.size() == 2);
  // sorted by capacity: civp first
  CHECK(rows[0].set_name == "civp");
  CHECK(rows[1].set_name == "baseline18");
  REQUIRE(rows[0].feasible);
  REQUIRE(rows[1].feasible);
  CHECK(rows[0].report->total_tiles == 36);
  CHECK(rows[1].report->total_tiles == 49);
  CHECK(rows[0].report->total_tiles < rows[1].report->total_tiles);
  CHECK(rows[0].report->utilization > rows[1].report->utilization);
  CHECK(rows[0].report->plan_name == "p114");  // fixed paper plan at 113
}

TEST_CASE("compare presets and small cases") {
  const auto r54 = civp::compare(54, 54, {*civp::find_tileset("baseline18")});
  REQUIRE(r54.size() == 1);
  CHECK(r54[0].report->total_tiles == 9);
  CHECK(r54[0].report->paper_claim->total_tiles == 9);

  const auto r24 = civp::compare(24, 24, {*civp::find_tileset("civp")});
  REQUIRE(r24.size() == 1);
  CHECK(r24[0].report->total_tiles == 1);
  CHECK(r24[0].report->utilization == 1.0);
  CHECK(r24[0].report->underutilized_tiles == 0);

  // the double-precision pairing uses the fixed p57 plan on the civp row
  const auto r53 = civp::compare(53, 53, {*civp::find_tileset("civp"),
                                          *civp::find_tileset("baseline18")});
  REQUIRE(r53.size() == 2);
  for (const auto& row : r53) {
    if (row.set_name == "civp") {
      CHECK(row.report->plan_name == "p57");
      CHECK(row.report->total_tiles == 9);
    } else {
      CHECK(row.report->total_tiles == 9);
      CHECK(row.report->a_padded == 54);
    }
  }
}

TEST_CASE("compare renders infeasible rows without aborting") {
  const auto rows = civp::compare(113, 113, {*civp::find_tileset("existing-fpga"),
                                             *civp::find_tileset("civp")});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].set_name == "civp");
  CHECK(rows[0].feasible);
  CHECK_FALSE(rows[1].feasible);
  CHECK(rows[1].error.find("25x25") != std::string::npos);
  const std::string text = civp::compare_to_text(113, 113, rows);
  CHECK(text.find("error: no tile in set 'existing-fpga'") != std::string::npos);
}

TEST_CASE("json form carries stable fields") {
  const auto rows = civp::compare(113, 113, {*civp::find_tileset("civp"),
                                             *civp::find_tileset("baseline18")});
  const nlohmann::ordered_json j = civp::compare_to_json(113, 113, rows);
  CHECK(j["a_width"] == 113);
  REQUIRE(j["rows"].size() == 2);
  const auto& civp_row = j["rows"][0];
  CHECK(civp_row["set"] == "civp");
  CHECK(civp_row["total_tiles"] == 36);
  CHECK(civp_row["utilization"] == 0.9825);
  CHECK(civp_row["census"][0]["tile"] == "24x24");
  CHECK(civp_row["census"][0]["count"] == 16);
  const auto& base_row = j["rows"][1];
  CHECK(base_row["paper_claim"]["underutilized_tiles"] == 17);
  CHECK(base_row["paper_claim"]["underutilized_percent"] == 35);
  CHECK(base_row["underutilized_tiles"] == 13);
}
