#include <gtest/gtest.h>

#include <random>

#include "tdlc/dynamics/membership.hpp"
#include "tdlc/dynamics/nub.hpp"
#include "tdlc/dynamics/tidy.hpp"
#include "tdlc/linear/model.hpp"
#include "tdlc/shift/model.hpp"

using namespace tdlc;
using namespace tdlc::dynamics;

namespace {

using linear::LinearModel;
using linear::QMatrix;
using linear::Rational;
using shift::ShiftModel;

QMatrix diag(std::initializer_list<Rational> d) { return QMatrix::diagonal(std::vector<Rational>(d)); }
QMatrix m2(Rational a, Rational b, Rational c, Rational d) { return QMatrix(2, {a, b, c, d}); }
// h g h^{-1}
QMatrix conj(const QMatrix& h, const QMatrix& g) { return h * g * h.inverse(); }

// Models with the symbolic descriptors hidden, to exercise the window fallback.
struct PlainShift : ShiftModel {
  using ShiftModel::ShiftModel;
  std::optional<SymbolicParts<Closed>> symbolic_parts(const CompactOpen&, const Element&) const { return std::nullopt; }
};
struct PlainLinear : LinearModel {
  using LinearModel::LinearModel;
  std::optional<SymbolicParts<Closed>> symbolic_parts(const CompactOpen&, const Element&) const { return std::nullopt; }
};

}  // namespace

TEST(UParts, IdentityGivesUEverywhere) {
  ShiftModel a(2);
  const auto pa = u_parts(a, a.filtration(2), a.identity(), 3);
  ASSERT_TRUE(pa.is_symbolic());
  for (Part p : {Part::Plus, Part::Minus, Part::Zero, Part::MinusMinus, Part::PlusPlus})
    EXPECT_EQ(part_image(a, pa, p, 3), a.image(a.filtration(2), 3));
  LinearModel b(2);
  const auto pb = u_parts(b, b.reference(), b.identity(), 2);
  for (Part p : {Part::Plus, Part::Minus, Part::Zero}) EXPECT_EQ(part_image(b, pb, p, 2), b.image(b.reference(), 2));
}

TEST(UParts, WindowFallbackMatchesSymbolic) {
  ShiftModel a(2);
  PlainShift a0(2);
  for (int m : {-2, -1, 1, 2}) {
    const auto g = a.parse("shift:" + std::to_string(m));
    for (int k = 0; k <= 2; ++k) {
      const auto s = u_parts(a, a.filtration(k), g, 3);
      const auto w = u_parts(a0, a0.filtration(k), g, 3);
      ASSERT_FALSE(w.is_symbolic());
      ASSERT_TRUE(w.conclusive());
      for (int lvl = 0; lvl <= 3; ++lvl)
        for (Part p : {Part::Plus, Part::Minus, Part::Zero})
          EXPECT_EQ(part_image(a, s, p, lvl), part_image(a0, w, p, lvl)) << m << " " << k << " " << lvl;
    }
  }
  LinearModel b(2);
  PlainLinear b0(2);
  for (const auto& g : {diag({2, 1}), diag({1, 2}), diag({2, Rational(1, 2)})}) {
    for (const auto& u : {b.reference(), b.iwahori(), b.filtration(1)}) {
      const auto s = u_parts(b, u, g, 3);
      const auto w = u_parts(b0, u, g, 3);
      ASSERT_TRUE(w.conclusive());
      for (int lvl = 0; lvl <= 3; ++lvl)
        for (Part p : {Part::Plus, Part::Minus, Part::Zero})
          EXPECT_EQ(part_image(b, s, p, lvl), part_image(b0, w, p, lvl));
    }
  }
}

TEST(UParts, ProductOfPartImagesLiesInU) {
  LinearModel b(3);
  const auto g = diag({3, 1});
  const auto parts = u_parts(b, b.reference(), g, 2);
  const auto w = b.window(2);
  const auto prod = kernel::product_set(w, part_image(b, parts, Part::Plus, 2), part_image(b, parts, Part::Minus, 2));
  const auto u = b.image(b.reference(), 2);
  for (auto c : prod) EXPECT_TRUE(u.contains(c));
  const auto zero = part_image(b, parts, Part::Zero, 2);
  EXPECT_EQ(kernel::intersect(part_image(b, parts, Part::Plus, 2), part_image(b, parts, Part::Minus, 2)), zero);
}

TEST(TidyAbove, LevelZeroFailsWithAntidiagonalMissing) {
  for (int p : {2, 3}) {
    LinearModel b(p);
    const auto g = diag({p, 1});
    const auto r = is_tidy_above(b, b.reference(), g, 3);
    ASSERT_EQ(r.verdict, Verdict::False);
    EXPECT_EQ(r.failing_level, 1);
    ASSERT_TRUE(r.witness);
    const auto parts = u_parts(b, b.reference(), g, 3);
    const auto w = b.window(1);
    const auto prod = kernel::product_set(w, part_image(b, parts, Part::Plus, 1), part_image(b, parts, Part::Minus, 1));
    EXPECT_FALSE(std::binary_search(prod.begin(), prod.end(), *r.witness));
    const auto anti = b.project(m2(0, 1, 1, 0), 1);
    EXPECT_FALSE(std::binary_search(prod.begin(), prod.end(), anti));
  }
}

TEST(TidyAbove, Examples) {
  ShiftModel a(2);
  EXPECT_EQ(is_tidy_above(a, a.filtration(2), a.parse("shift:1"), 5).verdict, Verdict::True);
  EXPECT_EQ(is_tidy_above(a, a.filtration(2), a.identity(), 5).verdict, Verdict::True);
  LinearModel b(2);
  EXPECT_EQ(is_tidy_above(b, b.reference(), b.identity(), 3).verdict, Verdict::True);
  EXPECT_EQ(is_tidy_above(b, b.iwahori(), diag({2, 1}), 3).verdict, Verdict::True);
}

TEST(TidyAbove, ProcedureExamples) {
  for (int p : {2, 3}) {
    LinearModel b(p);
    const auto r = tidy_above_procedure(b, b.reference(), diag({p, 1}), 10, p == 2 ? 3 : 2);
    EXPECT_EQ(r.k, 1);
    EXPECT_EQ(r.v.shape(), b.iwahori().shape());
    ASSERT_EQ(r.rejected.size(), 1u);
    EXPECT_TRUE(r.rejected[0].witness.has_value());
  }
  ShiftModel a(2);
  const auto r = tidy_above_procedure(a, a.filtration(2), a.parse("shift:1"));
  EXPECT_EQ(r.k, 0);
  EXPECT_EQ(r.v, a.filtration(2));
  EXPECT_EQ(tidy_above_procedure(a, a.filtration(1), a.identity()).k, 0);
}

TEST(TidyAbove, ProcedureOutputIsTidyAboveOnBattery) {
  ShiftModel a(2);
  for (const char* g : {"shift:1", "shift:-1", "shift:2", "lamp:0;shift:1", "lamp:1,-2;shift:-3"})
    for (int k = 0; k <= 3; ++k) {
      const auto r = tidy_above_procedure(a, a.filtration(k), a.parse(g), 10, 4);
      EXPECT_EQ(is_tidy_above(a, r.v, a.parse(g), 4).verdict, Verdict::True);
    }
  LinearModel b(2);
  for (const auto& g : {diag({2, 1}), diag({1, 2}), diag({4, 1}), diag({2, Rational(1, 2)})})
    for (int k = 0; k <= 1; ++k) {
      const auto r = tidy_above_procedure(b, b.filtration(k), g, 10, 3);
      EXPECT_EQ(is_tidy_above(b, r.v, g, 3).verdict, Verdict::True);
    }
}

TEST(TidyAbove, CapExceededWhenMaxKTooSmall) {
  LinearModel b(2);
  EXPECT_THROW(tidy_above_procedure(b, b.reference(), diag({2, 1}), 0, 3), CapExceeded);
}

TEST(TidyBelow, ShiftFiltrationHasWitness) {
  ShiftModel a(2);
  const auto g = a.parse("shift:1");
  for (int k = 0; k <= 3; ++k) {
    const auto r = is_tidy_below(a, a.filtration(k), g);
    ASSERT_EQ(r.verdict, Verdict::False) << k;
    ASSERT_TRUE(r.witness);
    const auto parts = *a.symbolic_parts(a.filtration(k), g);
    EXPECT_TRUE(a.contains(a.filtration(k), *r.witness));
    EXPECT_TRUE(parts.minus_minus.contains(*r.witness));
    EXPECT_FALSE(parts.minus.contains(*r.witness));
  }
  const auto w1 = is_tidy_below(a, a.filtration(1), g);
  const auto fmt = a.format(*w1.witness);
  EXPECT_TRUE(fmt == "lamp:-2" || fmt == "lamp:-3") << fmt;
}

TEST(TidyBelow, CertifiedCases) {
  LinearModel b(2);
  EXPECT_EQ(is_tidy_below(b, b.iwahori(), diag({2, 1})).verdict, Verdict::True);
  ShiftModel a(3);
  EXPECT_EQ(is_tidy_below(a, a.filtration(2), a.identity()).verdict, Verdict::True);
  EXPECT_EQ(is_tidy_below(a, a.reference(), a.parse("shift:1")).verdict, Verdict::True);
}

TEST(Scale, IndexMatchesFormula) {
  for (int p : {2, 3}) {
    LinearModel b(p);
    const auto c = m2(p + 1, p, 1, 1);
    const auto h = m2(1, Rational(1, p), 0, 1);
    for (const auto& g : {diag({p, 1}), diag({1, p}), diag({p, Rational(1, p)}), b.identity(),
                          conj(c, diag({p, 1})), conj(h, diag({p, 1})), conj(h, diag({1, p}))}) {
      const auto s = scale_index(b, g, p == 2 ? 3 : 2);
      EXPECT_EQ(s.value, b.scale_formula(g)) << b.format(g);
    }
  }
  LinearModel b(2);
  EXPECT_EQ(scale_index(b, diag({2, 1}), 3).value, 2u);
  EXPECT_EQ(scale_index(b, diag({2, Rational(1, 2)}), 3).value, 4u);
  LinearModel b3(2, 3);
  const auto s = scale_index(b3, QMatrix::diagonal({4, 2, 1}), 2);
  EXPECT_EQ(s.value, 16u);
  EXPECT_EQ(b3.scale_formula(QMatrix::diagonal({4, 2, 1})), 16u);
  ShiftModel a(2);
  EXPECT_EQ(scale_index(a, a.parse("shift:1"), 4).value, 1u);
  EXPECT_EQ(scale_index(a, a.parse("lamp:0;shift:-2"), 4).value, 1u);
  EXPECT_EQ(scale_index(a, a.identity(), 4).value, 1u);
}

TEST(Scale, StableInResolution) {
  LinearModel b(2);
  const auto g = diag({2, Rational(1, 2)});
  const auto s2 = scale_index(b, g, 2).value;
  EXPECT_EQ(scale_index(b, g, 3).value, s2);
  EXPECT_EQ(scale_index(b, g, 4).value, s2);
}

TEST(Membership, Examples) {
  ShiftModel a(2);
  EXPECT_EQ(con_membership(a, a.parse("shift:1"), a.parse("lamp:0"), 3, 20).verdict, Verdict::True);
  EXPECT_EQ(con_membership(a, a.identity(), a.identity(), 3, 20).verdict, Verdict::True);
  EXPECT_EQ(par_membership(a, a.parse("shift:1"), a.parse("lamp:0,4"), 20).verdict, Verdict::True);
  LinearModel b(2);
  const auto g = diag({2, 1});
  EXPECT_EQ(con_membership(b, g, m2(1, 0, 1, 1), 3, 20).verdict, Verdict::False);
  EXPECT_EQ(par_membership(b, g, m2(1, 0, 1, 1), 20).verdict, Verdict::False);
  EXPECT_EQ(par_membership(b, g, b.identity(), 20).verdict, Verdict::True);
  EXPECT_EQ(con_membership(b, g, m2(1, 5, 0, 1), 3, 20).method, "oracle");
}

TEST(Membership, TrajectoryFallbackNeverContradictsOracle) {
  // Unipotent g has no eigenbasis, so the linear oracle is unavailable.
  LinearModel b(2);
  const auto u = m2(1, 1, 0, 1);
  const auto r = con_membership(b, u, m2(1, 2, 0, 1), 3, 30);
  EXPECT_EQ(r.method, "trajectory");
  EXPECT_NE(r.verdict, Verdict::False);
  // Agreement with the oracle where both are available.
  ShiftModel a(2);
  std::mt19937_64 rng(3);
  const auto g = a.parse("shift:1");
  for (const auto& x : a.con_samples(g, 30, rng)) {
    if (!a.in_reference(x)) continue;
    const auto y = a.conj(a.pow(g, 40), x);
    EXPECT_TRUE(a.proximity(y).at_least(3));
  }
}

TEST(Nub, ShiftTypeIsFull) {
  ShiftModel a(2);
  for (const char* g : {"shift:1", "shift:-1", "shift:2", "lamp:0;shift:1", "lamp:-3,5;shift:-2", "lamp:1;shift:3"}) {
    for (int k = 0; k <= 4; ++k) {
      const auto r = nub_compute(a, a.parse(g), k, 3);
      EXPECT_EQ(r.image, a.image(a.reference(), k)) << g;
      EXPECT_TRUE(r.all_agree());
      int checked = 0;
      for (const auto& route : r.routes) checked += route.checked && route.image ? 1 : 0;
      EXPECT_EQ(checked, 5);
    }
  }
}

TEST(Nub, TrivialCases) {
  ShiftModel a(2);
  for (const char* g : {"lamp:0", "lamp:1,2"}) {
    const auto r = nub_compute(a, a.parse(g), 3, 3);
    EXPECT_EQ(r.image.size(), 1u);
  }
  EXPECT_EQ(nub_compute(a, a.identity(), 3, 3).image.size(), 1u);
  for (int p : {2, 3}) {
    LinearModel b(p);
    const auto c = m2(p + 1, p, 1, 1);
    const auto h = m2(1, Rational(1, p), 0, 1);
    for (const auto& g : {diag({p, 1}), diag({1, p}), diag({p, Rational(1, p)}), diag({p, p}), b.identity(),
                          conj(c, diag({p, 1})), conj(h, diag({1, p}))}) {
      const auto r = nub_compute(b, g, p == 2 ? 3 : 2, 3);
      EXPECT_EQ(r.image.size(), 1u) << b.format(g);
      int checked = 0;
      for (const auto& route : r.routes) checked += route.checked && route.image ? 1 : 0;
      EXPECT_EQ(checked, 5) << b.format(g);
    }
  }
}

TEST(Structure, DoubleMinusIsConTimesZero) {
  ShiftModel a(2);
  PlainShift a0(2);
  for (const char* gs : {"shift:1", "shift:-2", "lamp:0", "shift:3"}) {
    const auto g = a.parse(gs);
    for (int k = 0; k <= 2; ++k) {
      const auto u = a.filtration(k);
      const auto parts = u_parts(a, u, g, 4);
      const auto plain = u_parts(a0, u, g, 4);
      ASSERT_TRUE(plain.conclusive());
      for (int lvl = 0; lvl <= 4; ++lvl) {
        const auto w = a.window(lvl);
        const auto con = a.image(a.con_set(g), lvl);
        const auto zero = part_image(a, parts, Part::Zero, lvl);
        EXPECT_TRUE(kernel::product_set_equals(w, con, zero, part_image(a, parts, Part::MinusMinus, lvl)).equal);
        EXPECT_EQ(part_image(a0, plain, Part::MinusMinus, lvl), part_image(a, parts, Part::MinusMinus, lvl));
        EXPECT_EQ(part_image(a0, plain, Part::PlusPlus, lvl), part_image(a, parts, Part::PlusPlus, lvl));
        if (!parts.is_symbolic()) continue;
        const auto minus = part_image(a, parts, Part::Minus, lvl);
        const auto con_minus = a.image(a.intersect(a.con_set(g), parts.closed(Part::Minus)), lvl);
        EXPECT_TRUE(kernel::product_set_equals(w, con_minus, zero, minus).equal);
      }
    }
  }
}

TEST(Structure, EllipticFixesFiltration) {
  LinearModel b(2);
  const auto h = m2(1, 1, 0, 1);
  const auto g = h * diag({1, 3}) * h.inverse();
  for (int k = 0; k <= 2; ++k)
    for (int lvl = 0; lvl <= 3; ++lvl)
      EXPECT_EQ(b.image(b.conjugate(b.filtration(k), g), lvl), b.image(b.filtration(k), lvl));
}
