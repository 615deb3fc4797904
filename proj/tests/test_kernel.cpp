#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "helpers.hpp"

using namespace catlog;
using namespace catlog::testing;

namespace {

TheoryView pure_category() {
  Signature sig;
  return {sig, equality_axioms(sig)};
}

}  // namespace

TEST_CASE("equality_axioms contain the stated closures") {
  std::vector<Formula> ax = equality_axioms({});
  REQUIRE(ax.size() == kEqualityAxiomCount);
  for (const Formula& a : ax) CHECK_NOTHROW(check_formula({}, {}, a));

  CHECK(ax[kAxiomTrans] ==
        parse_formula("forall A . forall B . forall f : A -> B . forall g : A -> B . "
                      "forall h : A -> B . f = g => (g = h => f = h)"));
  CHECK(ax[kAxiomAssoc] ==
        parse_formula("forall A . forall B . forall C . forall D . forall f : A -> B . "
                      "forall g : B -> C . forall h : C -> D . "
                      "comp h (comp g f) = comp (comp h g) f"));
  CHECK(ax[kAxiomIdentity] ==
        parse_formula("forall A . forall B . forall f : A -> B . "
                      "f = comp (id B) f /\\ f = comp f (id A)"));
}

TEST_CASE("check_proof on the examples") {
  TheoryView tv = pure_category();
  Context ctx = parse_context("A : Obj, B : Obj, f : A -> B");
  CHECK_NOTHROW(check_proof({tv, ctx, {}, parse_formula("f = f")}, Proof::eq_refl()));

  // wrong disjunct
  Judgement j{tv, ctx, {parse_formula("f = f")},
              parse_formula("f = comp (id B) f \\/ f = f")};
  try {
    check_proof(j, Proof::or_intro_l(Proof::hypothesis(0)));
    FAIL("wrong disjunct accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::RuleMismatch);
  }

  // unknown axiom id
  CHECK_THROWS_AS(check_proof({tv, ctx, {}, parse_formula("f = f")}, Proof::axiom(99)),
                  Error);
}

TEST_CASE("eigenvariable capture is rejected") {
  TheoryView tv = pure_category();
  Context ctx = parse_context("A : Obj");
  // proving forall X . top with an eigenvariable already in the context
  Judgement j{tv, ctx, {}, parse_formula("forall X . top")};
  CHECK_NOTHROW(check_proof(j, Proof::forall_obj_intro("X", Proof::top_intro())));
  try {
    check_proof(j, Proof::forall_obj_intro("A", Proof::top_intro()));
    FAIL("captured eigenvariable accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EigenvariableCapture);
  }
}

TEST_CASE("machine-found proof of the identity collapse") {
  TheoryView tv = pure_category();
  Judgement j{tv, parse_context("A : Obj"), {},
              parse_formula("id A = comp (id A) (id A)")};
  auto p = bounded_search(j, 10);
  REQUIRE(p.has_value());
  CHECK(p->size() <= 10);
  CHECK_NOTHROW(check_proof(j, *p));
}

TEST_CASE("bounded_search basics") {
  TheoryView tv = pure_category();
  Judgement hyp{tv, {}, {Formula::top()}, Formula::top()};
  auto p = bounded_search(hyp, 1);
  REQUIRE(p.has_value());
  CHECK(p->rule() == Rule::Hypothesis);
  CHECK(p->index() == 0);

  CHECK_FALSE(bounded_search({tv, {}, {}, Formula::bot()}, 8).has_value());

  // determinism
  Judgement j{tv, parse_context("A : Obj"), {},
              parse_formula("id A = comp (id A) (id A)")};
  auto p1 = bounded_search(j, 10);
  auto p2 = bounded_search(j, 10);
  REQUIRE(p1.has_value());
  CHECK(print_certificate(*p1) == print_certificate(*p2));
}

TEST_CASE("derive_substitution on the examples and fuzzed predicates") {
  Signature sig;
  TheoryView tv{sig, equality_axioms(sig)};
  Context ctx =
      parse_context("A : Obj, B : Obj, x : A -> B, h : A -> B, f : A -> B, g : A -> B");

  auto checked = [&](const Formula& P) {
    Proof p = derive_substitution(sig, ctx, P, "x", ArrowTerm::ref("f"),
                                  ArrowTerm::ref("g"));
    Subst sf, sg;
    sf.arrows["x"] = ArrowTerm::ref("f");
    sg.arrows["x"] = ArrowTerm::ref("g");
    Formula target = Formula::implies(
        parse_formula("f = g"),
        Formula::implies(substitute(P, sf), substitute(P, sg)));
    check_proof({tv, ctx, {}, target}, p);
    return p;
  };

  checked(parse_formula("x = h"));
  checked(parse_formula("exists k : A -> B . k = x /\\ top"));
  Proof topCase = checked(Formula::top());
  CHECK(topCase.size() == 3);  // two intros over top_intro

  // sort mismatch between the variable and the plugged terms
  Context bad = parse_context("A : Obj, B : Obj, x : A -> A, f : A -> B");
  CHECK_THROWS_AS(derive_substitution(sig, bad, parse_formula("x = x"), "x",
                                      ArrowTerm::ref("f"), ArrowTerm::ref("f")),
                  Error);
  CHECK_THROWS_AS(
      derive_substitution(
          sig, parse_context("A : Obj, B : Obj, x : A -> B, q : A -> A"),
          parse_formula("x = x"), "x", ArrowTerm::ref("q"), ArrowTerm::ref("q")),
      Error);

  Rng rng(3);
  FormulaGen gen{sig, rng, 1, true};
  for (int i = 0; i < 60; ++i) {
    Formula P = gen.gen(ctx, 3);
    checked(P);
  }
}

TEST_CASE("weakening: context extension and appended hypotheses") {
  TheoryView tv = pure_category();
  Context ctx = parse_context("A : Obj, B : Obj, f : A -> B");
  Formula goal = parse_formula("f = f \\/ bot");
  Proof p = Proof::or_intro_l(Proof::eq_refl());
  check_proof({tv, ctx, {}, goal}, p);

  // extend the context and append hypotheses (indices unchanged)
  Context bigger = ctx.extended({"C", std::nullopt}).extended({"h", ArrowSort{
      ObjectTerm::ref("C"), ObjectTerm::ref("C")}});
  check_proof({tv, bigger, {Formula::top()}, goal}, p);

  // prepended hypotheses shift indices
  Judgement withHyp{tv, ctx, {goal, parse_formula("f = f")}, parse_formula("f = f")};
  Proof useSecond = Proof::hypothesis(1);
  check_proof(withHyp, useSecond);
  Judgement prepended{tv, ctx,
                      {Formula::top(), goal, parse_formula("f = f")},
                      parse_formula("f = f")};
  check_proof(prepended, shift_hypotheses(useSecond, 0, 1));
}

TEST_CASE("substitution stability of accepted proofs") {
  Theory t = two_arrows();
  TheoryView tv = t.view();
  Context ctx = parse_context("X : Obj, x : One -> X");
  Formula goal = parse_formula("exists y : One -> X . y = x");
  Proof p = Proof::exists_arr_intro(ArrowTerm::ref("x"), Proof::eq_refl());
  check_proof({tv, ctx, {}, goal}, p);

  Subst s;
  s.objects["X"] = ObjectTerm::ref("A");
  s.arrows["x"] = ArrowTerm::ref("a1");
  check_proof({tv, {}, {}, substitute(goal, s)}, substitute(p, s));
}

TEST_CASE("certificates round trip") {
  TheoryView tv = pure_category();
  Judgement j{tv, parse_context("A : Obj"), {},
              parse_formula("id A = comp (id A) (id A)")};
  auto p = bounded_search(j, 10);
  REQUIRE(p.has_value());
  Proof re = parse_certificate(print_certificate(*p));
  CHECK_NOTHROW(check_proof(j, re));
  CHECK(print_certificate(re) == print_certificate(*p));

  CHECK_THROWS_AS(parse_certificate("0 bogus_rule"), ParseError);
  CHECK_THROWS_AS(parse_certificate(""), ParseError);
  CHECK_THROWS_AS(parse_certificate("0 and_intro 3 4"), ParseError);
}

TEST_CASE("every emitted derive_substitution proof uses no axioms") {
  // pure-logic output: replay under a theory with no axioms at all
  Signature sig;
  TheoryView bare{sig, {}};
  Context ctx = parse_context("A : Obj, x : A -> A, f : A -> A, g : A -> A");
  Formula P = parse_formula("x = x \\/ bot");
  Proof p = derive_substitution(sig, ctx, P, "x", ArrowTerm::ref("f"), ArrowTerm::ref("g"));
  Subst sf, sg;
  sf.arrows["x"] = ArrowTerm::ref("f");
  sg.arrows["x"] = ArrowTerm::ref("g");
  Formula target = Formula::implies(parse_formula("f = g"),
                                    Formula::implies(substitute(P, sf), substitute(P, sg)));
  CHECK_NOTHROW(check_proof({bare, ctx, {}, target}, p));
}
