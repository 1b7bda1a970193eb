#include <gtest/gtest.h>

#include <random>

#include "tdlc/linear/model.hpp"
#include "tdlc/shift/model.hpp"
#include "tdlc/verify/anisotropy.hpp"
#include "tdlc/verify/structure.hpp"
#include "tdlc/verify/tits_core.hpp"
#include "tdlc/verify/witness.hpp"

using namespace tdlc;
using namespace tdlc::verify;

namespace {

using linear::LinearModel;
using linear::QMatrix;
using linear::Rational;
using shift::EPSeq;
using shift::ShiftModel;

QMatrix diag(std::initializer_list<Rational> d) { return QMatrix::diagonal(std::vector<Rational>(d)); }

}  // namespace

TEST(TitsCore, ShiftFillsWindow) {
  ShiftModel a(2);
  for (int k = 0; k <= 5; ++k) {
    const auto img = tits_core_image(a, k, {a.parse("shift:1"), a.parse("shift:-1")});
    EXPECT_EQ(img.image.size(), a.window(k).order()) << k;
    EXPECT_TRUE(std::is_sorted(img.sizes.begin(), img.sizes.end()));
  }
  EXPECT_EQ(tits_core_image(a, 3, {a.parse("shift:1")}).image.size(), 128u);
  EXPECT_EQ(tits_core_image(a, 3, {}).image.size(), 1u);
  EXPECT_EQ(tits_core_image(a, 3, {a.parse("lamp:0,2")}).image.size(), 1u);
}

TEST(TitsCore, LinearContainsSL2) {
  for (int p : {2, 3}) {
    LinearModel b(p);
    const auto img = tits_core_image(b, 1, {diag({p, 1}), diag({1, p})});
    // Brute force SL_2(Z/p) in the level-1 window.
    const auto w = b.window(1);
    std::size_t sl = 0;
    for (auto c : w.all_elements()) {
      const auto m = w.decode(c);
      if (w.determinant(m) % p == 1 % p) {
        ++sl;
        EXPECT_TRUE(img.image.contains(c));
      }
    }
    EXPECT_EQ(sl, static_cast<std::size_t>(p * (p * p - 1)));
    EXPECT_EQ(img.image.size(), sl);
    EXPECT_EQ(tits_core_image(b, 2, {}).image.size(), 1u);
  }
}

TEST(TitsCore, MonotoneInSchedule) {
  LinearModel b(2, 3);
  const auto img = tits_core_image(b, 1, {b.identity(), diag({2, 1, 1}), diag({1, 2, 1}), diag({1, 1, 2})});
  ASSERT_EQ(img.sizes.size(), 4u);
  EXPECT_EQ(img.sizes[0], 1u);
  EXPECT_TRUE(std::is_sorted(img.sizes.begin(), img.sizes.end()));
}

TEST(Anisotropy, LampSubgroupAndTrivial) {
  std::mt19937_64 rng(3);
  ShiftModel a(2);
  const std::vector<shift::ShiftElement> with_shift{a.parse("shift:1"), a.parse("lamp:0;shift:1"), a.parse("shift:-2")};
  const std::vector<shift::ShiftElement> elliptic{a.identity(), a.parse("lamp:0,3")};
  for (int k = 0; k <= 4; ++k) {
    const QuotientDescriptor lamps{a, NormalKind::LampSubgroup};
    const auto r1 = quotient_anisotropy_check(lamps, with_shift, k, rng);
    EXPECT_TRUE(r1.pass);
    EXPECT_TRUE(r1.quotient_anisotropic);
    EXPECT_TRUE(r1.core_in_normal);
    const QuotientDescriptor triv{a, NormalKind::Trivial};
    const auto r2 = quotient_anisotropy_check(triv, with_shift, k, rng);
    EXPECT_TRUE(r2.pass);
    EXPECT_FALSE(r2.quotient_anisotropic);
    EXPECT_FALSE(r2.core_in_normal);
    const auto r3 = quotient_anisotropy_check(triv, elliptic, k, rng);
    EXPECT_TRUE(r3.pass);
    EXPECT_TRUE(r3.quotient_anisotropic);
    EXPECT_TRUE(r3.core_in_normal);
  }
}

TEST(Witness, Examples) {
  const auto w0 = normal_closure_witness(EPSeq::delta(2, 0));
  EXPECT_EQ(w0.a, EPSeq::indicator(2, 0, std::nullopt));
  EXPECT_TRUE(w0.replay);
  const auto wz = normal_closure_witness(EPSeq::zero(3));
  EXPECT_TRUE(wz.a.is_zero());
  EXPECT_TRUE(wz.replay);
  const auto w2 = normal_closure_witness(EPSeq::from_support(2, {{-3, 1}, {2, 1}}));
  EXPECT_EQ(w2.a, EPSeq::indicator(2, -3, 1));
  EXPECT_TRUE(w2.replay);
  EXPECT_THROW(normal_closure_witness(EPSeq::indicator(2, std::nullopt, 0)), UnsupportedElement);
}

TEST(Witness, RandomFinitelySupported) {
  std::mt19937_64 rng(9);
  for (int p : {2, 3}) {
    ShiftModel a(p);
    std::uniform_int_distribution<int> pos(-10, 10), digit(0, p - 1), count(0, 8);
    for (int i = 0; i < 100; ++i) {
      std::vector<std::pair<shift::Pos, int>> terms;
      for (int j = count(rng); j > 0; --j) terms.emplace_back(pos(rng), digit(rng));
      const auto b = EPSeq::from_support(p, terms);
      const auto w = normal_closure_witness(b);
      EXPECT_TRUE(w.replay);
      // Independent check of the telescoping: a_i − a_{i−1} = b_i on a wide range.
      for (shift::Pos j = -15; j <= 15; ++j) EXPECT_EQ(((w.a.at(j) - w.a.at(j - 1)) % p + p) % p, b.at(j));
      EXPECT_TRUE(a.con_oracle(a.parse("shift:1"), shift::ShiftElement::lamp_only(b)));
    }
  }
}

TEST(Structure, ShiftBattery) {
  ShiftModel a(2);
  for (const char* gs : {"shift:1", "shift:-2", "lamp:0", "lamp:-1;shift:1", "shift:3"}) {
    const auto g = a.parse(gs);
    for (int k = 0; k <= 3; ++k) {
      // Symbolic parts need the shift to fit inside the window of W(k).
      if (std::abs(g.shift) > 2 * k + 1) continue;
      const auto rep = structure_identities(a, a.filtration(k), g, 4, false);
      EXPECT_TRUE(rep.pass()) << gs << " W(" << k << ")";
    }
    const auto tidy = *a.tidy_subgroup(g);
    EXPECT_TRUE(structure_identities(a, tidy, g, 4, true).pass()) << gs;
  }
}

TEST(Structure, LinearBattery) {
  for (int p : {2, 3}) {
    LinearModel b(p);
    for (const auto& g : {diag({p, 1}), diag({1, p}), diag({p * p, 1}), diag({Rational(1, p), p}), b.identity()}) {
      for (const auto& u : {b.iwahori(), b.filtration(1), *b.tidy_subgroup(g)}) {
        const auto rep = structure_identities(b, u, g, p == 2 ? 4 : 2, false);
        EXPECT_TRUE(rep.pass()) << p << " " << b.format(g) << " " << b.format(u);
      }
      EXPECT_TRUE(structure_identities(b, *b.tidy_subgroup(g), g, p == 2 ? 4 : 2, true).pass()) << b.format(g);
    }
  }
}

TEST(Structure, TidyOnlyIdentityFailsBelowNonTidy) {
  // W(1) is tidy above but not tidy below for the shift.
  ShiftModel a(2);
  const auto rep = structure_identities(a, a.filtration(1), a.parse("shift:1"), 3, true);
  EXPECT_FALSE(rep.pass());
  for (const auto& c : rep.checks)
    if (c.name == "minus-minus" || c.name == "plus-plus" || c.name == "minus" || c.name == "plus") {
      EXPECT_TRUE(c.holds) << c.name;
    }
}
