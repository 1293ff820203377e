#include <algorithm>
#include <random>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "civp/wideint.hpp"
#include "reference/bytewise_mul.hpp"

using civp::WideUint;

namespace {

WideUint random_wide(std::mt19937_64& rng, int width) {
  WideUint acc(width);
  for (int low = 0; low < width; low += 32) {
    const int len = std::min(32, width - low);
    const std::uint64_t chunk = rng() & ((1ull << len) - 1);
    if (chunk) acc = acc.add_shifted(WideUint::from_u64(chunk, len), low);
  }
  return acc;
}

std::string strip_zeros(const std::string& hex) {
  const std::size_t first = hex.find_first_not_of('0');
  return first == std::string::npos ? "0" : hex.substr(first);
}

}  // namespace

TEST_CASE("from_hex basics") {
  CHECK(WideUint::from_hex("F", 4).to_u64() == 15);
  CHECK(WideUint::from_hex("F", 4).width() == 4);

  const WideUint z = WideUint::from_hex("0", 113);
  CHECK(z.is_zero());
  CHECK(z.width() == 113);

  const WideUint ones53 = WideUint::from_hex("1FFFFFFFFFFFFF", 53);
  CHECK(ones53 == WideUint::ones(53));
  CHECK(ones53.msb_index() == 52);

  CHECK(WideUint::from_hex("abCDef", 24).to_u64() == 0xABCDEFu);
  CHECK(WideUint::from_hex("00000001", 1).to_u64() == 1);  // leading zeros fine
}

TEST_CASE("from_hex errors") {
  CHECK_THROWS_AS(WideUint::from_hex("", 8), civp::ParseError);
  CHECK_THROWS_AS(WideUint::from_hex("G1", 8), civp::ParseError);
  CHECK_THROWS_AS(WideUint::from_hex("10", 4), civp::OverflowError);
  CHECK_THROWS_MATCHES(WideUint::from_hex("FFF", 4), civp::OverflowError,
                       Catch::Matchers::MessageMatches(
                           Catch::Matchers::ContainsSubstring("width 4")));
  CHECK_THROWS_AS(WideUint(0), civp::ContractError);
}

TEST_CASE("to_hex is fixed width uppercase") {
  CHECK(WideUint::from_u64(15, 4).to_hex() == "F");
  CHECK(WideUint::from_u64(1, 8).to_hex() == "01");
  CHECK(WideUint(113).to_hex() == std::string(29, '0'));
  CHECK(WideUint::from_hex("1abcdef0123", 57).to_hex() == "00001ABCDEF0123");
  CHECK(WideUint::from_hex("1abcdef0123", 57).to_hex().size() == 15);
}

TEST_CASE("slice tracks bit positions") {
  // Single set bit at 56 lands at local position 8 of slice [48, 57).
  const WideUint x = WideUint(57).add_shifted(WideUint::from_u64(1, 1), 56);
  CHECK(x.slice(48, 9) == WideUint::from_u64(1ull << 8, 9));

  CHECK(WideUint::ones(57).slice(0, 24) == WideUint::ones(24));

  // Middle 24 bits, frozen from an independent big-integer computation.
  const WideUint y = WideUint::from_hex("1ABCDEF01234567", 57);
  CHECK(y.slice(24, 24) == WideUint::from_u64(0xCDEF01, 24));

  CHECK_THROWS_AS(y.slice(40, 18), civp::BoundsError);
  CHECK_THROWS_AS(y.slice(0, 0), civp::BoundsError);
  CHECK_THROWS_AS(y.slice(-1, 4), civp::BoundsError);
}

TEST_CASE("add_shifted places and accumulates exactly") {
  const WideUint one(WideUint::from_u64(1, 1));
  const WideUint top = WideUint(114).add_shifted(one, 113);
  CHECK(top.msb_index() == 113);
  CHECK(top.to_hex() == "20000000000000000000000000000");

  CHECK(WideUint::from_u64(5, 8).add_shifted(WideUint::from_u64(3, 2), 2).to_u64() == 17);

  const WideUint acc = WideUint::from_u64((1ull << 48) - 1, 64);
  const WideUint term = WideUint::from_u64(0xFFFF, 16);
  CHECK(acc.add_shifted(term, 48) == WideUint::ones(64));
}

TEST_CASE("add_shifted rejects overflow") {
  // Precondition: term.width + shift must fit.
  CHECK_THROWS_AS(WideUint(8).add_shifted(WideUint::from_u64(1, 4), 5), civp::OverflowError);
  // Carry past the declared width.
  CHECK_THROWS_AS(WideUint::ones(8).add_shifted(WideUint::from_u64(1, 1), 0),
                  civp::OverflowError);
  CHECK_THROWS_AS(WideUint::ones(64).add_shifted(WideUint::from_u64(1, 1), 0),
                  civp::OverflowError);
  CHECK_THROWS_AS(WideUint::ones(65).add_shifted(WideUint::from_u64(1, 1), 0),
                  civp::OverflowError);
}

TEST_CASE("mul_oracle fixed values") {
  const WideUint zero24(24);
  CHECK(mul_oracle(zero24, WideUint::ones(24)).is_zero());

  // (2^24-1)^2 = 2^48 - 2^25 + 1
  const WideUint sq = mul_oracle(WideUint::ones(24), WideUint::ones(24));
  CHECK(sq.width() == 48);
  CHECK(sq.to_u64() == 281474943156225ull);

  CHECK(mul_oracle(WideUint::ones(9), WideUint::ones(9)).to_u64() == 261121);
}

TEST_CASE("mul_oracle agrees with an independent bytewise multiplier") {
  std::mt19937_64 rng(0xB17EB17Eull);
  for (int i = 0; i < 500; ++i) {
    const WideUint a = random_wide(rng, 57);
    const WideUint b = random_wide(rng, 57);
    const std::string got = strip_zeros(mul_oracle(a, b).to_hex());
    const std::string want = testref::mul_hex(a.to_hex(), b.to_hex());
    REQUIRE(got == want);
  }
  // and at mixed widths
  for (int i = 0; i < 200; ++i) {
    const int wa = 1 + static_cast<int>(rng() % 130);
    const int wb = 1 + static_cast<int>(rng() % 130);
    const WideUint a = random_wide(rng, wa);
    const WideUint b = random_wide(rng, wb);
    REQUIRE(strip_zeros(mul_oracle(a, b).to_hex()) == testref::mul_hex(a.to_hex(), b.to_hex()));
  }
}

TEST_CASE("mul_oracle exhaustive at width 8") {
  for (std::uint64_t a = 0; a < 256; ++a) {
    for (std::uint64_t b = 0; b < 256; ++b) {
      const WideUint p = mul_oracle(WideUint::from_u64(a, 8), WideUint::from_u64(b, 8));
      REQUIRE(p.width() == 16);
      REQUIRE(p.to_u64() == a * b);
    }
  }
}

TEST_CASE("mul_oracle commutes and respects the identity") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const WideUint a = random_wide(rng, 113);
    const WideUint b = random_wide(rng, 113);
    CHECK(mul_oracle(a, b) == mul_oracle(b, a));
    CHECK(mul_oracle(a, WideUint::from_u64(1, 1)) == a);
  }
}

TEST_CASE("partition reassembly identity") {
  std::mt19937_64 rng(0x51ECE5);
  for (int i = 0; i < 300; ++i) {
    const int width = 1 + static_cast<int>(rng() % 150);
    const WideUint x = random_wide(rng, width);
    WideUint acc(width);
    int low = 0;
    while (low < width) {
      const int len = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(width - low));
      acc = acc.add_shifted(x.slice(low, len), low);
      low += len;
    }
    REQUIRE(acc == x);
  }
}

TEST_CASE("accumulation order does not matter") {
  std::mt19937_64 rng(0xACC);
  for (int i = 0; i < 100; ++i) {
    const int width = 96;
    std::vector<std::pair<WideUint, int>> terms;
    for (int t = 0; t < 8; ++t) {
      const int shift = static_cast<int>(rng() % 60);
      const int len = 1 + static_cast<int>(rng() % 16);
      terms.emplace_back(random_wide(rng, len), shift);
    }
    WideUint first(width);
    for (const auto& [term, shift] : terms) first = first.add_shifted(term, shift);
    for (int round = 0; round < 4; ++round) {
      std::shuffle(terms.begin(), terms.end(), rng);
      WideUint again(width);
      for (const auto& [term, shift] : terms) again = again.add_shifted(term, shift);
      REQUIRE(again == first);
    }
  }
}

TEST_CASE("value equality ignores declared width") {
  CHECK(WideUint::from_u64(5, 8) == WideUint::from_u64(5, 200));
  CHECK(WideUint(1) == WideUint(113));
  CHECK(WideUint::from_u64(5, 8) != WideUint::from_u64(6, 8));
  CHECK(WideUint::from_u64(1, 65).zero_extend(300) == WideUint::from_u64(1, 65));
}

TEST_CASE("misc accessors") {
  const WideUint x = WideUint::from_hex("8000000000000001", 64);
  CHECK(x.bit(0));
  CHECK(x.bit(63));
  CHECK_FALSE(x.bit(32));
  CHECK(x.msb_index() == 63);
  CHECK(x.any_below(1));
  CHECK_FALSE(WideUint::from_u64(8, 8).any_below(3));
  CHECK(WideUint::from_u64(8, 8).any_below(4));
  CHECK_THROWS_AS(x.bit(64), civp::BoundsError);
  CHECK_THROWS_AS(WideUint::ones(70).to_u64(), civp::OverflowError);
  CHECK(WideUint::from_u64(1, 1).shifted_left(99).msb_index() == 99);
  CHECK_THROWS_AS(x.zero_extend(32), civp::ContractError);
}
