#pragma once

// Resource accounting over partition plans: tile censuses, structural
// utilization (significant bit-products vs tile capacity), and side-by-side
// tile-set comparisons. Published claims that our counting does not reproduce
// are displayed as annotations next to the computed figures; only computed
// figures are ever asserted.

#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "civp/partition.hpp"
#include "civp/tiles.hpp"

namespace civp {

struct PaperClaim {
  std::optional<int> total_tiles;
  std::optional<int> underutilized_tiles;
  std::optional<int> underutilized_percent;

  std::string to_string() const {
    std::string s;
    if (total_tiles) s += "tiles " + std::to_string(*total_tiles);
    if (underutilized_tiles) {
      if (!s.empty()) s += ", ";
      s += "underutilized " + std::to_string(*underutilized_tiles);
      if (underutilized_percent) s += " (" + std::to_string(*underutilized_percent) + "%)";
    }
    return s;
  }
};

struct ResourceReport {
  std::string plan_name;
  std::string tileset_name;
  int a_width = 0, b_width = 0;
  int a_padded = 0, b_padded = 0;
  std::map<TileShape, int> census;
  int total_tiles = 0;
  std::uint64_t capacity_bitproducts = 0;
  std::uint64_t useful_bitproducts = 0;
  double utilization = 0.0;
  int underutilized_tiles = 0;
  double underutilized_fraction = 0.0;
  std::optional<PaperClaim> paper_claim;
};

// Published figures for specific width/set combinations, displayed alongside
// the computed numbers. The 113x113 baseline's underutilized count is claimed
// as 17 (35%); grid counting gives 13 — both are shown, only computed values
// are ever asserted.
inline std::optional<PaperClaim> paper_claim_for(int a_width, int b_width,
                                                 const std::string& tileset_name) {
  if (a_width == 113 && b_width == 113 && tileset_name == "baseline18") {
    return PaperClaim{49, 17, 35};
  }
  if (a_width == 54 && b_width == 54 && tileset_name == "baseline18") {
    return PaperClaim{9, std::nullopt, std::nullopt};
  }
  if (a_width == 53 && b_width == 53 && tileset_name == "civp") {
    return PaperClaim{9, std::nullopt, std::nullopt};
  }
  if (a_width == 113 && b_width == 113 && tileset_name == "civp") {
    return PaperClaim{36, std::nullopt, std::nullopt};
  }
  return std::nullopt;
}

// Significant bits of a slice: the bits below the operand's true width.
inline int slice_significant_bits(const SliceSpec& s, int true_width) {
  const int sig = true_width - s.low;
  if (sig <= 0) return 0;
  return sig < s.len ? sig : s.len;
}

inline ResourceReport analyze(const PartitionPlan& plan) {
  ResourceReport r;
  r.plan_name = plan.name;
  r.tileset_name = plan.tileset_name;
  r.a_width = plan.a_width;
  r.b_width = plan.b_width;
  r.a_padded = plan.a_padded;
  r.b_padded = plan.b_padded;
  r.census = plan_census(plan);
  for (const PlanStep& step : plan.steps) {
    const SliceSpec& sa = plan.a_slices[static_cast<std::size_t>(step.a_index)];
    const SliceSpec& sb = plan.b_slices[static_cast<std::size_t>(step.b_index)];
    const int sig_a = slice_significant_bits(sa, plan.a_width);
    const int sig_b = slice_significant_bits(sb, plan.b_width);
    // Map the significant counts onto the tile ports in execution orientation.
    TileInvocation inv{step.tile, sig_a, sig_b};
    if (!(sa.len <= step.tile.w && sb.len <= step.tile.h)) {
      inv.a_bits = sig_b;
      inv.b_bits = sig_a;
    }
    const double util = tile_utilization(inv);
    r.capacity_bitproducts += static_cast<std::uint64_t>(step.tile.capacity());
    r.useful_bitproducts += static_cast<std::uint64_t>(sig_a) * static_cast<std::uint64_t>(sig_b);
    if (util < 1.0) r.underutilized_tiles += 1;
  }
  r.total_tiles = static_cast<int>(plan.steps.size());
  r.utilization =
      static_cast<double>(r.useful_bitproducts) / static_cast<double>(r.capacity_bitproducts);
  r.underutilized_fraction = static_cast<double>(r.underutilized_tiles) / r.total_tiles;
  r.paper_claim = paper_claim_for(plan.a_width, plan.b_width, plan.tileset_name);
  return r;
}

struct CompareRow {
  std::string set_name;
  bool feasible = false;
  std::string error;
  std::optional<ResourceReport> report;
};

// Plan selection for comparison rows: the fixed paper plans cover their true
// widths under the civp set; everything else goes through the generic planner.
inline PartitionPlan plan_for_comparison(int a_width, int b_width, const TileSet& set) {
  if (set.name == "civp" && a_width == 53 && b_width == 53) return plan_p57();
  if (set.name == "civp" && a_width == 113 && b_width == 113) return plan_p114();
  return plan_generic(a_width, b_width, set);
}

// One row per tile set, sorted by capacity; infeasible sets become error rows
// without aborting the rest.
inline std::vector<CompareRow> compare(int a_width, int b_width,
                                       const std::vector<TileSet>& sets) {
  if (sets.empty()) throw ContractError("compare needs at least one tile set");
  std::vector<CompareRow> rows;
  for (const TileSet& set : sets) {
    CompareRow row;
    row.set_name = set.name;
    try {
      row.report = analyze(plan_for_comparison(a_width, b_width, set));
      row.feasible = true;
    } catch (const PlanError& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const CompareRow& x, const CompareRow& y) {
    if (x.feasible != y.feasible) return x.feasible;
    if (!x.feasible) return false;
    return x.report->capacity_bitproducts < y.report->capacity_bitproducts;
  });
  return rows;
}

inline double round4(double v) { return std::round(v * 10000.0) / 10000.0; }

// Block form, used by `mul --report`.
inline std::string report_to_text(const ResourceReport& r) {
  char buf[64];
  std::string out;
  out += "plan: " + r.plan_name + "\n";
  out += "tileset: " + r.tileset_name + "\n";
  out += "census: " + census_to_string(r.census) + "\n";
  out += "tiles: " + std::to_string(r.total_tiles) + "\n";
  out += "capacity_bitproducts: " + std::to_string(r.capacity_bitproducts) + "\n";
  out += "useful_bitproducts: " + std::to_string(r.useful_bitproducts) + "\n";
  std::snprintf(buf, sizeof(buf), "utilization: %.4f\n", round4(r.utilization));
  out += buf;
  out += "underutilized_tiles: " + std::to_string(r.underutilized_tiles) + "\n";
  std::snprintf(buf, sizeof(buf), "underutilized_fraction: %.4f\n",
                round4(r.underutilized_fraction));
  out += buf;
  if (r.paper_claim) out += "paper_claim: " + r.paper_claim->to_string() + "\n";
  return out;
}

// Aligned table, one row per tile set.
inline std::string compare_to_text(int a_width, int b_width,
                                   const std::vector<CompareRow>& rows) {
  std::string out = "compare: " + std::to_string(a_width) + "x" + std::to_string(b_width) + "\n";
  char line[256];
  std::snprintf(line, sizeof(line), "%-14s %6s %9s %8s %12s %10s  %s\n", "set", "tiles",
                "capacity", "useful", "utilization", "underutil", "census");
  out += line;
  for (const CompareRow& row : rows) {
    if (!row.feasible) {
      std::snprintf(line, sizeof(line), "%-14s %6s %9s %8s %12s %10s  error: %s\n",
                    row.set_name.c_str(), "-", "-", "-", "-", "-", row.error.c_str());
      out += line;
      continue;
    }
    const ResourceReport& r = *row.report;
    std::string census = census_to_string(r.census);
    if (r.paper_claim) census += "  [paper_claim: " + r.paper_claim->to_string() + "]";
    std::snprintf(line, sizeof(line), "%-14s %6d %9llu %8llu %12.4f %10d  %s\n",
                  row.set_name.c_str(), r.total_tiles,
                  static_cast<unsigned long long>(r.capacity_bitproducts),
                  static_cast<unsigned long long>(r.useful_bitproducts), round4(r.utilization),
                  r.underutilized_tiles, census.c_str());
    out += line;
  }
  return out;
}

inline nlohmann::ordered_json report_to_json(const ResourceReport& r) {
  nlohmann::ordered_json j;
  j["plan"] = r.plan_name;
  j["set"] = r.tileset_name;
  j["a_width"] = r.a_width;
  j["b_width"] = r.b_width;
  j["a_padded"] = r.a_padded;
  j["b_padded"] = r.b_padded;
  j["census"] = nlohmann::ordered_json::array();
  for (const auto& [shape, count] : r.census) {
    j["census"].push_back({{"tile", shape.label()}, {"count", count}});
  }
  j["total_tiles"] = r.total_tiles;
  j["capacity_bitproducts"] = r.capacity_bitproducts;
  j["useful_bitproducts"] = r.useful_bitproducts;
  j["utilization"] = round4(r.utilization);
  j["underutilized_tiles"] = r.underutilized_tiles;
  j["underutilized_fraction"] = round4(r.underutilized_fraction);
  if (r.paper_claim) {
    nlohmann::ordered_json claim;
    if (r.paper_claim->total_tiles) claim["total_tiles"] = *r.paper_claim->total_tiles;
    if (r.paper_claim->underutilized_tiles) {
      claim["underutilized_tiles"] = *r.paper_claim->underutilized_tiles;
    }
    if (r.paper_claim->underutilized_percent) {
      claim["underutilized_percent"] = *r.paper_claim->underutilized_percent;
    }
    j["paper_claim"] = claim;
  } else {
    j["paper_claim"] = nullptr;
  }
  return j;
}

inline nlohmann::ordered_json compare_to_json(int a_width, int b_width,
                                              const std::vector<CompareRow>& rows) {
  nlohmann::ordered_json j;
  j["a_width"] = a_width;
  j["b_width"] = b_width;
  j["rows"] = nlohmann::ordered_json::array();
  for (const CompareRow& row : rows) {
    if (row.feasible) {
      nlohmann::ordered_json rj = report_to_json(*row.report);
      rj["feasible"] = true;
      j["rows"].push_back(rj);
    } else {
      j["rows"].push_back({{"set", row.set_name}, {"feasible", false}, {"error", row.error}});
    }
  }
  return j;
}

}  // namespace civp
