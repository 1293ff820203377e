// civp command-line tool: bit-exact tiled floating-point multiplication,
// plan inspection, tile-set comparison, and a built-in oracle selftest.
//
// Exit codes: 0 ok, 1 selftest/verification failure, 2 usage error.

#include <cstdio>
#include <cstdlib>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "civp/civp.hpp"
#include "civp/fp_reference.hpp"

namespace {

using civp::FpFormat;
using civp::FpValue;
using civp::PartitionPlan;
using civp::RoundingMode;
using civp::TileSet;
using civp::WideUint;

RoundingMode mode_from_name(const std::string& name) {
  if (name == "nearest-even") return RoundingMode::NearestEven;
  if (name == "toward-zero") return RoundingMode::TowardZero;
  if (name == "toward-positive") return RoundingMode::TowardPositive;
  if (name == "toward-negative") return RoundingMode::TowardNegative;
  throw civp::ParseError("unknown rounding mode '" + name + "'");
}

int run_mul(const std::string& format_name, const std::string& a_hex, const std::string& b_hex,
            const std::string& mode_name, bool with_report) {
  const FpFormat* fmt = FpFormat::by_name(format_name);
  if (!fmt) {
    std::fprintf(stderr, "error: unknown format '%s'\n", format_name.c_str());
    return 2;
  }
  FpValue a{*fmt, WideUint(1)}, b{*fmt, WideUint(1)};
  RoundingMode mode;
  try {
    mode = mode_from_name(mode_name);
    a = civp::fp_from_hex(*fmt, a_hex);
    b = civp::fp_from_hex(*fmt, b_hex);
  } catch (const civp::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  const civp::FpResult res = civp::fp_multiply(a, b, mode);
  std::printf("result: %s\n", res.value.bits.to_hex().c_str());
  std::printf("flags: %s\n", res.flags.to_string().c_str());
  if (with_report) {
    std::fputs(civp::report_to_text(civp::analyze(civp::significand_plan(*fmt))).c_str(),
               stdout);
  }
  return 0;
}

int run_plan(const std::string& preset, const std::vector<int>& widths,
             const std::string& tileset_name) {
  PartitionPlan plan;
  if (!preset.empty()) {
    if (!widths.empty()) {
      std::fprintf(stderr, "error: give either --preset or explicit widths, not both\n");
      return 2;
    }
    if (preset == "p57") {
      plan = civp::plan_p57();
    } else if (preset == "p114") {
      plan = civp::plan_p114();
    } else {
      std::fprintf(stderr, "error: unknown preset '%s' (try p57 or p114)\n", preset.c_str());
      return 2;
    }
  } else {
    if (widths.size() != 2) {
      std::fprintf(stderr, "error: plan needs WIDTH_A WIDTH_B or --preset\n");
      return 2;
    }
    const TileSet* set = civp::find_tileset(tileset_name);
    if (!set) {
      std::fprintf(stderr, "error: unknown tile set '%s'\n", tileset_name.c_str());
      return 2;
    }
    try {
      plan = civp::plan_generic(widths[0], widths[1], *set);
    } catch (const civp::Error& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return 2;
    }
  }
  std::fputs(civp::plan_to_text(plan).c_str(), stdout);
  return 0;
}

int run_compare(const std::vector<std::string>& args, const std::string& preset, bool as_json) {
  int a_width = 0, b_width = 0;
  std::size_t first_set = 0;
  if (!preset.empty()) {
    if (preset == "single") {
      a_width = b_width = 24;
    } else if (preset == "double") {
      a_width = b_width = 53;
    } else if (preset == "quad") {
      a_width = b_width = 113;
    } else {
      std::fprintf(stderr, "error: unknown preset '%s' (try single, double, quad)\n",
                   preset.c_str());
      return 2;
    }
  } else {
    if (args.size() < 2) {
      std::fprintf(stderr, "error: compare needs WIDTH_A WIDTH_B SET... or --preset\n");
      return 2;
    }
    try {
      a_width = std::stoi(args[0]);
      b_width = std::stoi(args[1]);
    } catch (const std::exception&) {
      std::fprintf(stderr, "error: widths must be integers, got '%s' '%s'\n", args[0].c_str(),
                   args[1].c_str());
      return 2;
    }
    if (a_width < 1 || b_width < 1) {
      std::fprintf(stderr, "error: widths must be >= 1\n");
      return 2;
    }
    first_set = 2;
  }
  std::vector<TileSet> sets;
  for (std::size_t i = first_set; i < args.size(); ++i) {
    const TileSet* set = civp::find_tileset(args[i]);
    if (!set) {
      std::fprintf(stderr, "error: unknown tile set '%s'\n", args[i].c_str());
      return 2;
    }
    sets.push_back(*set);
  }
  if (sets.empty()) {
    std::fprintf(stderr, "error: compare needs at least one tile set name\n");
    return 2;
  }
  const std::vector<civp::CompareRow> rows = civp::compare(a_width, b_width, sets);
  if (as_json) {
    std::printf("%s\n", civp::compare_to_json(a_width, b_width, rows).dump(2).c_str());
  } else {
    std::fputs(civp::compare_to_text(a_width, b_width, rows).c_str(), stdout);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// selftest

WideUint random_wide(std::mt19937_64& rng, int width) {
  WideUint acc(width);
  for (int low = 0; low < width; low += 32) {
    const int len = width - low < 32 ? width - low : 32;
    const std::uint64_t chunk = rng() & ((1ull << len) - 1);
    if (chunk) acc = acc.add_shifted(WideUint::from_u64(chunk, len), low);
  }
  return acc;
}

// Random encodings with the interesting regions oversampled.
WideUint random_pattern(std::mt19937_64& rng, const FpFormat& f) {
  WideUint frac = random_wide(rng, f.frac_bits);
  const std::uint64_t e_mask = (1ull << f.exp_bits) - 1;
  std::uint64_t e_field = 0;
  switch (rng() % 10) {
    case 0:
      e_field = 0;  // zeros and subnormals
      break;
    case 1:
      e_field = e_mask;  // infinities and NaNs
      break;
    case 2:
      e_field = 1 + rng() % 3;  // just above the subnormal range
      break;
    case 3:
      e_field = e_mask - 1 - rng() % 3;  // near overflow
      break;
    default:
      e_field = rng() % (e_mask + 1);
      break;
  }
  return civp::detail::packed_bits(f, rng() % 2 == 0, e_field, frac);
}

civp::ref::RefBits ref_bits_of(const WideUint& bits, int total) {
  civp::ref::RefBits rb;
  rb.lo = bits.slice(0, total < 64 ? total : 64).to_u64();
  rb.hi = total > 64 ? bits.slice(64, total - 64).to_u64() : 0;
  return rb;
}

struct SuiteOutcome {
  bool ok = true;
  long ran = 0;
};

struct SelftestContext {
  std::uint64_t seed = 0;
  long samples = 0;
  bool inject_fault = false;
  bool any_fail = false;
};

void report_suite(const char* name, const SuiteOutcome& out) {
  if (out.ok) std::printf("suite %s: %ld/%ld ok\n", name, out.ran, out.ran);
}

// Flips bit 0 of every tile product: the accumulated result is always off by
// at least 1, so any plan suite must catch it.
WideUint faulty_tile(const civp::TileShape& shape, const WideUint& x, const WideUint& y) {
  const WideUint p = civp::tile_mul(shape, x, y);
  WideUint flipped = p.slice(1, p.width() - 1).shifted_left(1);
  if (!p.bit(0)) flipped = flipped.add_shifted(WideUint::from_u64(1, 1), 0);
  return flipped;
}

SuiteOutcome run_plan_suite(SelftestContext& ctx, const char* name, const PartitionPlan& plan,
                            std::uint64_t salt) {
  std::mt19937_64 rng(ctx.seed + salt);
  SuiteOutcome out;
  const civp::TileMulFn tile_fn =
      ctx.inject_fault
          ? civp::TileMulFn(faulty_tile)
          : civp::TileMulFn([](const civp::TileShape& s, const WideUint& x, const WideUint& y) {
              return civp::tile_mul(s, x, y);
            });
  for (long i = 0; i < ctx.samples; ++i) {
    const WideUint a = random_wide(rng, plan.a_width);
    const WideUint b = random_wide(rng, plan.b_width);
    const WideUint got = civp::execute_plan(plan, a, b, tile_fn);
    const WideUint want = civp::mul_oracle(a, b);
    ++out.ran;
    if (got != want) {
      out.ok = false;
      ctx.any_fail = true;
      std::printf("suite %s: FAIL at vector %ld\n", name, i);
      std::printf("  a:    %s\n", a.to_hex().c_str());
      std::printf("  b:    %s\n", b.to_hex().c_str());
      std::printf("  got:  %s\n", got.to_hex().c_str());
      std::printf("  want: %s\n", want.to_hex().c_str());
      return out;
    }
  }
  report_suite(name, out);
  return out;
}

SuiteOutcome run_fp_suite(SelftestContext& ctx, const char* name, const FpFormat& fmt,
                          const civp::ref::RefFormat& ref_fmt, std::uint64_t salt) {
  std::mt19937_64 rng(ctx.seed + salt);
  SuiteOutcome out;
  for (long i = 0; i < ctx.samples; ++i) {
    const WideUint pa = random_pattern(rng, fmt);
    const WideUint pb = random_pattern(rng, fmt);
    const auto mode = static_cast<RoundingMode>(i % 4);
    const auto ref_mode = static_cast<civp::ref::RefRounding>(i % 4);
    const civp::FpResult got = civp::fp_multiply({fmt, pa}, {fmt, pb}, mode);
    civp::ref::RefFlags ref_flags;
    const civp::ref::RefBits want =
        civp::ref::ref_multiply(ref_fmt, ref_bits_of(pa, fmt.total_bits),
                                ref_bits_of(pb, fmt.total_bits), ref_mode, ref_flags);
    const civp::ref::RefBits got_bits = ref_bits_of(got.value.bits, fmt.total_bits);
    const bool bits_ok = got_bits.lo == want.lo && got_bits.hi == want.hi;
    const bool flags_ok = got.flags.invalid == ref_flags.invalid &&
                          got.flags.overflow == ref_flags.overflow &&
                          got.flags.underflow == ref_flags.underflow &&
                          got.flags.inexact == ref_flags.inexact;
    ++out.ran;
    if (!bits_ok || !flags_ok) {
      out.ok = false;
      ctx.any_fail = true;
      std::printf("suite %s: FAIL at vector %ld (mode %ld)\n", name, i, i % 4);
      std::printf("  a:    %s\n", pa.to_hex().c_str());
      std::printf("  b:    %s\n", pb.to_hex().c_str());
      std::printf("  got:  %s flags %s\n", got.value.bits.to_hex().c_str(),
                  got.flags.to_string().c_str());
      civp::FpFlags wf{ref_flags.invalid, ref_flags.overflow, ref_flags.underflow,
                       ref_flags.inexact};
      WideUint wref(fmt.total_bits);
      if (want.lo) wref = wref.add_shifted(WideUint::from_u64(want.lo, 64), 0);
      if (want.hi) wref = wref.add_shifted(WideUint::from_u64(want.hi, 64), 64);
      std::printf("  want: %s flags %s\n", wref.to_hex().c_str(), wf.to_string().c_str());
      return out;
    }
  }
  report_suite(name, out);
  return out;
}

SuiteOutcome run_reassembly_suite(SelftestContext& ctx, std::uint64_t salt) {
  std::mt19937_64 rng(ctx.seed + salt);
  SuiteOutcome out;
  for (long i = 0; i < ctx.samples; ++i) {
    const int width = 1 + static_cast<int>(rng() % 120);
    const WideUint x = random_wide(rng, width);
    WideUint acc(width);
    int low = 0;
    while (low < width) {
      const int len = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(width - low));
      acc = acc.add_shifted(x.slice(low, len), low);
      low += len;
    }
    ++out.ran;
    if (acc != x) {
      out.ok = false;
      ctx.any_fail = true;
      std::printf("suite wideint-reassembly: FAIL at vector %ld\n", i);
      std::printf("  x:   %s\n", x.to_hex().c_str());
      std::printf("  got: %s\n", acc.to_hex().c_str());
      return out;
    }
  }
  report_suite("wideint-reassembly", out);
  return out;
}

int run_selftest(long samples, std::optional<std::uint64_t> seed_opt, bool inject_fault) {
  SelftestContext ctx;
  ctx.samples = samples;
  ctx.inject_fault = inject_fault;
  if (seed_opt) {
    ctx.seed = *seed_opt;
  } else if (const char* env = std::getenv("CIVP_SEED")) {
    try {
      ctx.seed = std::stoull(env);
    } catch (const std::exception&) {
      std::fprintf(stderr, "error: CIVP_SEED is not a number: '%s'\n", env);
      return 2;
    }
  } else {
    ctx.seed = 0xC17ED01EULL;
  }
  std::printf("seed: %llu\n", static_cast<unsigned long long>(ctx.seed));
  if (samples == 0) {
    std::printf("warning: sample count is 0; all suites pass vacuously\n");
    std::printf("selftest: PASS (vacuous)\n");
    return 0;
  }

  int suites = 0;
  run_reassembly_suite(ctx, 1);
  ++suites;
  run_plan_suite(ctx, "plan-p57", civp::plan_p57(), 2);
  ++suites;
  run_plan_suite(ctx, "plan-p114", civp::plan_p114(), 3);
  ++suites;
  run_plan_suite(ctx, "plan-generic-113x113-baseline18",
                 civp::plan_generic(113, 113, *civp::find_tileset("baseline18")), 4);
  ++suites;
  run_plan_suite(ctx, "plan-generic-57x57-civp",
                 civp::plan_generic(57, 57, *civp::find_tileset("civp")), 5);
  ++suites;
  run_fp_suite(ctx, "fp-single", FpFormat::binary32(), civp::ref::kRefSingle, 6);
  ++suites;
  run_fp_suite(ctx, "fp-double", FpFormat::binary64(), civp::ref::kRefDouble, 7);
  ++suites;
  run_fp_suite(ctx, "fp-quad", FpFormat::binary128(), civp::ref::kRefQuad, 8);
  ++suites;

  if (ctx.any_fail) {
    std::printf("selftest: FAIL\n");
    return 1;
  }
  std::printf("selftest: PASS (%d suites, %ld samples each)\n", suites, samples);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"civp: variable-precision floating-point multiplication built from fixed-size "
               "multiplier tiles"};
  app.require_subcommand(1);

  // mul
  auto* mul = app.add_subcommand("mul", "multiply two values given as hex bit patterns");
  std::string format_name, a_hex, b_hex, mode_name = "nearest-even";
  bool with_report = false;
  mul->add_option("--format", format_name, "single, double, or quad")->required();
  mul->add_option("a", a_hex, "first operand (hex, full width)")->required();
  mul->add_option("b", b_hex, "second operand (hex, full width)")->required();
  mul->add_option("--mode", mode_name,
                  "rounding: nearest-even, toward-zero, toward-positive, toward-negative");
  mul->add_flag("--report", with_report, "append the significand plan's resource report");

  // plan
  auto* plan = app.add_subcommand("plan", "print a partition plan");
  std::string preset;
  std::vector<int> widths;
  std::string tileset_name = "civp";
  plan->add_option("--preset", preset, "p57 or p114");
  plan->add_option("widths", widths, "WIDTH_A WIDTH_B")->expected(0, 2);
  plan->add_option("--tileset", tileset_name, "civp, baseline18, or existing-fpga");

  // compare
  auto* cmp = app.add_subcommand("compare", "compare tile sets for a multiplication width");
  std::vector<std::string> cmp_args;
  std::string cmp_preset;
  bool as_json = false;
  cmp->add_option("args", cmp_args, "WIDTH_A WIDTH_B SET... (or SET... with --preset)");
  cmp->add_option("--preset", cmp_preset, "single, double, or quad");
  cmp->add_flag("--json", as_json, "machine-readable output");

  // selftest
  auto* st = app.add_subcommand("selftest", "run the oracle-equivalence suites");
  long samples = 1000;
  std::optional<std::uint64_t> seed_opt;
  bool inject_fault = false;
  st->add_option("--samples", samples, "vectors per suite (default 1000)")
      ->check(CLI::NonNegativeNumber);
  st->add_option("--seed", seed_opt, "RNG seed (default: CIVP_SEED env or builtin)");
  st->add_flag("--inject-tile-fault", inject_fault)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (mul->parsed()) return run_mul(format_name, a_hex, b_hex, mode_name, with_report);
    if (plan->parsed()) return run_plan(preset, widths, tileset_name);
    if (cmp->parsed()) return run_compare(cmp_args, cmp_preset, as_json);
    if (st->parsed()) return run_selftest(samples, seed_opt, inject_fault);
  } catch (const civp::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
