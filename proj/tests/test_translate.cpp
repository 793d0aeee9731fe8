#include <gtest/gtest.h>

#include "cl4/decide.hpp"
#include "cl4/translate.hpp"
#include "fixtures.hpp"
#include "generators.hpp"

using namespace cl4;
using namespace cl4::testkit;

TEST(Signature, SizeAndNames) {
  auto sig = MoleculeSignature::for_formula(parse("P"));
  EXPECT_EQ(sig.m(), 2u);
  EXPECT_EQ(sig.letter("P", 1, 2), "mP_1_2");
  auto d = sig.decode("mP_2_1");
  ASSERT_TRUE(d.has_value());
  EXPECT_EQ(std::get<0>(*d), "P");
  EXPECT_EQ(std::get<1>(*d), 2u);
  EXPECT_EQ(std::get<2>(*d), 1u);
  EXPECT_FALSE(sig.decode("mP_3_1").has_value());
  EXPECT_EQ(MoleculeSignature::for_formula(parse("P -> P /\\ P")).m(), 3u);
}

TEST(Signature, AvoidsSourceLetters) {
  auto sig = MoleculeSignature::for_formula(parse("P \\/ mP_1_1"));
  EXPECT_NE(sig.letter("P", 1, 1), "mP_1_1");
  EXPECT_FALSE(sig.decode("mP_1_1").has_value());
}

TEST(Signature, RoundTripsThroughStems) {
  auto sig = MoleculeSignature::for_formula(parse("P(x) -> Q \\/ P(0)"));
  EXPECT_EQ(MoleculeSignature::from_stems(sig.m(), sig.stems()), sig);
  EXPECT_THROW(MoleculeSignature::from_stems(1, sig.stems()), std::invalid_argument);
}

TEST(Lift, SingleAtom) {
  Formula l = lift(parse("P"));
  EXPECT_EQ(l, parse("(mP_1_1 !\\/ mP_1_2) !/\\ (mP_2_1 !\\/ mP_2_2)"));
}

TEST(Lift, OccurrenceCountSetsM) {
  Formula f = parse("P -> P /\\ P");
  auto sig = MoleculeSignature::for_formula(f);
  Formula l = lift(f, sig);
  Formula big = sig.large("P", {});
  EXPECT_EQ(l, Formula::implies(big, Formula::nary(Op::And, {big, big})));
  EXPECT_EQ(big.kids().size(), 3u);
  EXPECT_EQ(big.kid(0).kids().size(), 3u);
}

TEST(Lift, NoGeneralAtomsUnchanged) {
  Formula f = parse("p !\\/ (q /\\ r)");
  EXPECT_EQ(lift(f), f);
  EXPECT_THROW(lift(parse("P#q \\/ ~P#q")), std::invalid_argument);
}

TEST(Floor, RoundTrip) {
  Rng rng(17);
  FormulaShape s;
  s.arity = 1;
  for (int i = 0; i < 100; ++i) {
    Formula f = random_formula(rng, s);
    auto sig = MoleculeSignature::for_formula(f);
    EXPECT_EQ(floorify(lift(f, sig), sig), f) << to_string(f);
  }
}

TEST(Floor, IsolatedAndSharedSmallMolecules) {
  auto sig = MoleculeSignature::make(2, {"P"});
  Formula t = Formula::atom(Letter::elementary(sig.letter("P", 1, 1)), {Term::var("z")});
  EXPECT_EQ(floorify(t, sig), parse("P(z)"));
  Formula both = Formula::implies(t, Formula::atom(Letter::elementary(sig.letter("P", 1, 1)), {Term::constant(1)}));
  EXPECT_EQ(floorify(both, sig), both);
  Formula med = sig.medium("P", 2, {});
  EXPECT_EQ(floorify(Formula::nary(Op::Or, {med, sig.small("P", 2, 1, {})}), sig), parse("P \\/ P"));
}

TEST(Good, Conditions) {
  for (const auto& it : exercise_items()) {
    if (!it.blind_free) continue;
    Formula f = parse(it.text);
    auto sig = MoleculeSignature::for_formula(f);
    auto g = is_good(lift(f, sig), sig);
    EXPECT_TRUE(g.ok) << it.label << " " << g.detail;
  }
  auto sig = MoleculeSignature::make(2, {"P"});
  Formula s = sig.small("P", 1, 1, {});
  auto c3 = is_good(Formula::nary(Op::Or, {s, s}), sig);
  EXPECT_EQ(c3.cond, 3);
  Formula l = sig.large("P", {});
  auto c1 = is_good(Formula::nary(Op::Or, {l, l, l}), sig);
  EXPECT_EQ(c1.cond, 1);
  auto c2 = is_good(Formula::nary(Op::ChoAnd, {sig.medium("P", 1, {}), parse("q")}), sig);
  EXPECT_EQ(c2.cond, 2);
  auto c4 = is_good(Formula::nary(Op::Or, {sig.medium("P", 1, {}), sig.small("P", 1, 2, {})}), sig);
  EXPECT_EQ(c4.cond, 4);
  // A negative small next to a positive medium is fine.
  EXPECT_TRUE(is_good(Formula::implies(sig.small("P", 1, 2, {}), sig.medium("P", 1, {})), sig).ok);
}

TEST(Independence, NestedMoleculesAreNotIndependent) {
  auto sig = MoleculeSignature::make(2, {"P"});
  auto occ = independent_molecules(sig.large("P", {}), sig);
  ASSERT_EQ(occ.size(), 1u);
  EXPECT_EQ(occ[0].size, MoleculeSize::Large);
  EXPECT_TRUE(occ[0].surface);
}

TEST(Translate, CompletenessContrapositive) {
  for (const auto& it : exercise_items()) {
    if (!it.blind_free || it.provable) continue;
    Formula f = parse(it.text);
    EXPECT_TRUE(decide_blindfree(lift(f)).unprovable()) << it.label;
  }
}

TEST(Translate, GoodSamplesFloorToProvable) {
  Rng rng(23);
  auto sig = MoleculeSignature::make(2, {"P", "Q"}, {"q"});
  int provable = 0;
  for (int i = 0; i < 5000 && provable < 10; ++i) {
    auto e = random_good_cl3(rng, sig, 2);
    if (!e) continue;
    if (!decide_blindfree(*e).provable()) continue;
    ++provable;
    EXPECT_TRUE(decide_blindfree(floorify(*e, sig)).provable()) << to_string(*e);
  }
  EXPECT_EQ(provable, 10);
}
