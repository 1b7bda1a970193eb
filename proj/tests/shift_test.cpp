#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "tdlc/shift/model.hpp"

using namespace tdlc;
using namespace tdlc::shift;

namespace {

EPSeq random_epseq(std::mt19937_64& rng, int p) {
  std::uniform_int_distribution<int> digit(0, p - 1), len(1, 3), core(0, 6), off(-8, 8);
  auto word = [&](int n) {
    EPSeq::Word w(static_cast<std::size_t>(n));
    for (auto& d : w) d = digit(rng);
    return w;
  };
  return EPSeq(p, word(len(rng)), word(core(rng)), off(rng), word(len(rng)));
}

ShiftElement random_shift_element(std::mt19937_64& rng, int p) {
  std::uniform_int_distribution<int> m(-3, 3);
  return {random_epseq(rng, p), m(rng)};
}

// Reference semantics: coordinate-wise definition over a finite range.
bool agree_on(const EPSeq& a, const std::vector<int>& ref, Pos lo) {
  for (std::size_t i = 0; i < ref.size(); ++i)
    if (a.at(lo + static_cast<Pos>(i)) != ref[i]) return false;
  return true;
}

}  // namespace

TEST(EPSeq, CanonicalFormIsUnique) {
  // 0101...|core|...  written two different ways
  EPSeq a(2, {0, 1}, {0, 1, 1}, 0, {1});
  EPSeq b(2, {1, 0, 1, 0}, {1}, 1, {1, 1});
  EXPECT_EQ(a, b);
  EXPECT_EQ(EPSeq(2, {0}, {0, 0}, 5, {0}), EPSeq::zero(2));
  EXPECT_EQ(EPSeq(3, {1}, {}, 0, {1}), EPSeq::constant(3, 1));
  EXPECT_EQ(EPSeq(3, {1, 1}, {1, 1, 1}, -4, {1, 1, 1}), EPSeq::constant(3, 1));
}

TEST(EPSeq, ArithmeticMatchesCoordinates) {
  std::mt19937_64 rng(1);
  for (int p : {2, 3, 5}) {
    for (int trial = 0; trial < 100; ++trial) {
      EPSeq a = random_epseq(rng, p), b = random_epseq(rng, p);
      std::uniform_int_distribution<int> sd(-7, 7);
      const Pos s = sd(rng);
      std::vector<int> sum, shifted, prod;
      for (Pos i = -40; i <= 40; ++i) {
        sum.push_back((a.at(i) + b.at(i)) % p);
        shifted.push_back(a.at(i - s));
        prod.push_back(a.at(i) * b.at(i) % p);
      }
      EXPECT_TRUE(agree_on(a + b, sum, -40));
      EXPECT_TRUE(agree_on(a.shifted(s), shifted, -40));
      EXPECT_TRUE(agree_on(a.times(b), prod, -40));
      // canonical output is a fixed point of re-canonicalization
      const EPSeq c = a + b;
      EXPECT_EQ(EPSeq(p, c.left(), c.core(), c.offset(), c.right()), c);
      EXPECT_EQ((a - b) + b, a);
    }
  }
}

TEST(EPSeq, ZeroOnAndNearestSupport) {
  EXPECT_EQ(EPSeq::delta(2, 5).nearest_support(), 5);
  EXPECT_EQ(EPSeq::delta(2, -3).nearest_support(), 3);
  EXPECT_FALSE(EPSeq::zero(2).nearest_support());
  const EPSeq tail = EPSeq::indicator(2, 4, std::nullopt);
  EXPECT_TRUE(tail.zero_on(std::nullopt, 3));
  EXPECT_FALSE(tail.zero_on(std::nullopt, 4));
  EXPECT_TRUE(EPSeq(2, {1, 0, 0}, {}, 0, {0}).zero_on(1, 2));
}

TEST(ShiftElement, MultiplicationLaw) {
  const int p = 2;
  const ShiftElement id = ShiftElement::identity(p);
  const ShiftElement d0 = ShiftElement::lamp_only(EPSeq::delta(p, 0));
  const ShiftElement g = ShiftElement::translation(p, 1);
  EXPECT_EQ(id * d0, d0);
  EXPECT_EQ(d0 * d0, id);
  EXPECT_EQ(conjugate(g, d0), ShiftElement::lamp_only(EPSeq::delta(p, 1)));
  EXPECT_THROW(d0 * ShiftElement::identity(3), PrimeMismatch);
}

TEST(ShiftElement, GroupAxiomsOnSamples) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const int p = trial % 2 ? 3 : 2;
    auto x = random_shift_element(rng, p), y = random_shift_element(rng, p), z = random_shift_element(rng, p);
    EXPECT_EQ((x * y) * z, x * (y * z));
    EXPECT_TRUE((x * inverse(x)).is_identity());
    EXPECT_EQ(power(x, 3), x * x * x);
    EXPECT_EQ(power(x, -2), inverse(x * x));
  }
}

TEST(ShiftGrammar, RoundTrip) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const int p = 2 + trial % 2;
    auto x = random_shift_element(rng, p);
    EXPECT_EQ(parse_element(format_element(x), p), x);
  }
  EXPECT_EQ(parse_element("shift:1", 2), ShiftElement::translation(2, 1));
  EXPECT_EQ(parse_element("lamp:0;shift:1", 2), (ShiftElement{EPSeq::delta(2, 0), 1}));
  EXPECT_EQ(parse_element("lamp:-3,2*2", 3).lamp, EPSeq::delta(3, -3) + EPSeq::delta(3, 2, 2));
  EXPECT_EQ(format_element(ShiftElement{EPSeq::delta(2, 0), 1}), "lamp:0;shift:1");
}

TEST(ShiftGrammar, ErrorsCarryPositions) {
  try {
    parse_element("shift:1;lamp:0", 2);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 8u);
  }
  EXPECT_THROW(parse_element("lamp:0,", 2), ParseError);
  EXPECT_THROW(parse_element("lamp-ep:2|@0|0", 2), ParseError);
  EXPECT_THROW(parse_element("", 2), ParseError);
  EXPECT_THROW(parse_element("shift:x", 2), ParseError);
}

TEST(ShiftModel, Proximity) {
  ShiftModel m(2);
  EXPECT_EQ(m.proximity(m.identity()), Level::infinity());
  EXPECT_EQ(m.proximity(ShiftElement::lamp_only(EPSeq::delta(2, 5))), Level::at(4));
  EXPECT_EQ(m.proximity(ShiftElement::lamp_only(EPSeq::delta(2, -5))), Level::at(4));
  EXPECT_EQ(m.proximity(ShiftElement::lamp_only(EPSeq::delta(2, 0))), Level::outside());
  EXPECT_EQ(m.proximity(ShiftElement::translation(2, 1)), Level::outside());
}

TEST(ShiftModel, ProximityIsUltrametricOnSamples) {
  ShiftModel m(2);
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    auto x = random_shift_element(rng, 2), y = random_shift_element(rng, 2);
    if (trial % 2) x.shift = y.shift = 0;
    EXPECT_GE(m.proximity(x * y), min(m.proximity(x), m.proximity(y)));
  }
}

TEST(ShiftModel, ContractionOracle) {
  ShiftModel m(2);
  const auto g = ShiftElement::translation(2, 1);
  EXPECT_TRUE(m.con_oracle(g, ShiftElement::lamp_only(EPSeq::delta(2, 0))));
  EXPECT_FALSE(m.con_oracle(g, ShiftElement::lamp_only(EPSeq::constant(2, 1))));
  EXPECT_TRUE(m.con_oracle(g, ShiftElement::lamp_only(EPSeq::indicator(2, 0, std::nullopt))));
  EXPECT_FALSE(m.con_oracle(m.inv(g), ShiftElement::lamp_only(EPSeq::indicator(2, 0, std::nullopt))));
  EXPECT_FALSE(m.con_oracle(m.identity(), ShiftElement::lamp_only(EPSeq::delta(2, 0))));
  EXPECT_TRUE(m.con_oracle(m.identity(), m.identity()));
  // independence of the lamp component of g
  const ShiftElement g2{EPSeq::delta(2, 0), 1};
  EXPECT_TRUE(m.con_oracle(g2, ShiftElement::lamp_only(EPSeq::delta(2, 7))));
}

TEST(ShiftModel, ContractionOracleImpliesTrajectoryConvergence) {
  ShiftModel m(2);
  std::mt19937_64 rng(5);
  for (int s : {1, -1, 2}) {
    const ShiftElement g{EPSeq::delta(2, 3), s};
    for (const auto& x : m.con_samples(g, 30, rng)) {
      ASSERT_TRUE(m.con_oracle(g, x));
      const Pos width = std::abs(x.lamp.offset()) + static_cast<Pos>(x.lamp.core().size()) + 4;
      for (int k = 0; k <= 8; ++k) {
        const Pos n0 = k + width;
        for (Pos n = n0; n <= n0 + 10; ++n) EXPECT_TRUE(m.proximity(m.conj(m.pow(g, n), x)).at_least(k));
      }
    }
  }
}

TEST(LampSubspace, IntervalFormAndImages) {
  const auto w2 = LampSubspace::W(2, 2);
  ASSERT_TRUE(w2.interval_form());
  EXPECT_EQ(*w2.interval_form(), (Interval{-2, 2}));
  EXPECT_EQ(w2.image(4).size(), 16u);
  EXPECT_EQ(LampSubspace::full(2).image(3).size(), 128u);
  EXPECT_TRUE(LampSubspace::full(2).interval_form()->empty());
  const LampSubspace diag(kernel::FpSubspace(2, -1, 1, {{1, 1, 0}}));
  EXPECT_FALSE(diag.interval_form());
  EXPECT_EQ(diag.shifted(1), LampSubspace(kernel::FpSubspace(2, 0, 2, {{1, 1, 0}}).extended(-2, 2)));
  EXPECT_TRUE(diag.contains(ShiftElement::lamp_only(EPSeq::delta(2, -1) + EPSeq::delta(2, 0) + EPSeq::delta(2, 9))));
  EXPECT_FALSE(diag.contains(ShiftElement::lamp_only(EPSeq::delta(2, -1))));
  EXPECT_EQ(parse_lamp_subspace(diag.to_string(), 2), diag);
  EXPECT_EQ(parse_lamp_subspace("W(3)", 2), LampSubspace::W(2, 3));
  EXPECT_EQ(parse_lamp_subspace("vanish:-1,4", 2), LampSubspace::vanishing_on(2, -1, 4));
}

TEST(ShiftModel, IntervalPartsAgreeWithFiniteIntersections) {
  ShiftModel m(2);
  const auto g = ShiftElement::translation(2, 1);
  const auto u = LampSubspace::W(2, 2);
  auto parts = m.symbolic_parts(u, g);
  ASSERT_TRUE(parts);
  EXPECT_EQ(parts->plus, LampSet::vanishing_on(2, Interval{-2, std::nullopt}));
  EXPECT_EQ(parts->minus, LampSet::vanishing_on(2, Interval{std::nullopt, 2}));
  EXPECT_TRUE(parts->zero.is_trivial());
  // window oracle: intersect 30 conjugates and compare images
  for (int sign : {1, -1}) {
    const auto h = m.pow(g, sign);
    auto plus = u, minus = u;
    for (int i = 1; i <= 30; ++i) {
      plus = plus.intersect(m.conjugate(u, m.pow(h, i)));
      minus = minus.intersect(m.conjugate(u, m.pow(h, -i)));
    }
    auto sp = m.symbolic_parts(u, h);
    for (int k = 0; k <= 4; ++k) {
      EXPECT_EQ(m.image(sp->plus, k), m.image(plus, k));
      EXPECT_EQ(m.image(sp->minus, k), m.image(minus, k));
    }
  }
  auto trivial = m.symbolic_parts(u, m.identity());
  EXPECT_EQ(trivial->plus, *u.as_lamp_set());
  EXPECT_EQ(trivial->minus_minus, *u.as_lamp_set());
  EXPECT_FALSE(m.symbolic_parts(LampSubspace::W(2, 0), ShiftElement::translation(2, 3)));
}

TEST(ShiftModel, MinusMinusImageEqualsContractionTimesZero) {
  ShiftModel m(2);
  const auto g = ShiftElement::translation(2, 1);
  auto parts = m.symbolic_parts(LampSubspace::W(2, 2), g);
  const auto full = LampSubspace::full(2).image(4);
  EXPECT_EQ(m.image(parts->minus_minus, 4), full);
  EXPECT_EQ(m.image(m.con_set(g), 4), full);
  EXPECT_FALSE(parts->minus_minus.is_closed());
}

TEST(ShiftModel, SplitRoundTrip) {
  ShiftModel m(3);
  std::mt19937_64 rng(6);
  for (int s : {1, -1, 2, 0}) {
    const auto g = ShiftElement::translation(3, s);
    for (int k : {1, 2, 3}) {
      const auto u = LampSubspace::W(3, k);
      auto parts = m.symbolic_parts(u, g);
      ASSERT_TRUE(parts);
      for (int trial = 0; trial < 20; ++trial) {
        const auto x = m.random_in(u, rng);
        auto r = m.split(u, g, x);
        ASSERT_TRUE(r) << r.failure;
        EXPECT_EQ(m.mul(r.split->minus, r.split->plus), x);
        EXPECT_TRUE(parts->minus.contains(r.split->minus));
        EXPECT_TRUE(parts->plus.contains(r.split->plus));
      }
    }
  }
  EXPECT_FALSE(m.split(LampSubspace::W(3, 1), ShiftElement::translation(3, 1),
                       ShiftElement::lamp_only(EPSeq::delta(3, 0))));
}

TEST(ShiftModel, BelowWitnessForIntervals) {
  ShiftModel m(2);
  const auto g = ShiftElement::translation(2, 1);
  for (int k = 0; k <= 3; ++k) {
    const auto u = LampSubspace::W(2, k);
    auto parts = m.symbolic_parts(u, g);
    auto w = m.below_witness(u, g, 20);
    ASSERT_TRUE(w);
    EXPECT_TRUE(u.contains(w->x));
    EXPECT_TRUE(parts->minus_minus.contains(w->x));
    EXPECT_FALSE(parts->minus.contains(w->x));
  }
  // the lamp at -3 is another witness for W(1)
  const auto d3 = ShiftElement::lamp_only(EPSeq::delta(2, -3));
  auto parts = m.symbolic_parts(LampSubspace::W(2, 1), g);
  EXPECT_TRUE(LampSubspace::W(2, 1).contains(d3) && parts->minus_minus.contains(d3) && !parts->minus.contains(d3));
  EXPECT_FALSE(m.below_witness(LampSubspace::full(2), g, 20));
  EXPECT_FALSE(m.below_witness(LampSubspace::W(2, 1), m.identity(), 20));
}
