#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "helpers.hpp"

#include <fstream>

using namespace catlog;
using namespace catlog::testing;

TEST_CASE("theory files parse, validate, and print") {
  ParsedTheory pt = parse_theory(kTwoArrowsSource);
  CHECK(pt.name == "two_arrows");
  CHECK(pt.signature.objects.size() == 2);
  CHECK(pt.signature.arrows.size() == 4);
  CHECK(pt.axioms.size() == 2);
  ParsedTheory again = parse_theory(print_theory(pt.name, pt.signature, pt.axioms));
  CHECK(again.signature.arrows == pt.signature.arrows);
  CHECK(again.axioms == pt.axioms);

  CHECK_THROWS_AS(parse_theory("theory x { arrow f : A -> }"), ParseError);
  // an axiom failing well-formedness is rejected at construction
  ParsedTheory bad = parse_theory(
      "theory bad { object A\n axiom forall X . forall f : X -> X . forall X . f = id X\n}");
  CHECK_THROWS_AS(make_theory_data(bad.name, bad.signature, bad.axioms), Error);
}

TEST_CASE("congruence oracle: equational answers carry kernel proofs") {
  Theory t = two_arrows();
  auto q = t.oracle().query(parse_formula("comp idA (comp a1 idOne) = a1"));
  REQUIRE(q.yes);
  REQUIRE(q.certificate.has_value());
  CHECK_NOTHROW(check_proof(
      {t.view(), {}, {}, parse_formula("comp idA (comp a1 idOne) = a1")},
      *q.certificate));

  CHECK_FALSE(t.oracle().query(parse_formula("a1 = a2")).yes);
  CHECK(t.oracle().complete());

  // quantified sentences through the word model
  CHECK(t.oracle().query(parse_formula("forall f : One -> A . comp idA f = f")).yes);
  CHECK(t.oracle().query(parse_formula("exists f : One -> A . f = a2")).yes);
  CHECK_FALSE(t.oracle().query(parse_formula("forall f : One -> A . f = a1")).yes);
  CHECK_FALSE(t.oracle().query(Formula::bot()).yes);
}

TEST_CASE("conditional axioms fire through the closure") {
  Signature sig;
  sig.objects = {"A"};
  sig.arrows["p"] = {ObjectTerm::ref("A"), ObjectTerm::ref("A")};
  sig.arrows["q"] = {ObjectTerm::ref("A"), ObjectTerm::ref("A")};
  sig.arrows["r"] = {ObjectTerm::ref("A"), ObjectTerm::ref("A")};
  // p = q unconditionally; q = r once p = q holds
  Theory t = make_congruence_theory(
      "horn", sig, {parse_formula("p = q"), parse_formula("p = q => q = r")});
  auto ans = t.oracle().query(parse_formula("p = r"));
  REQUIRE(ans.yes);
  REQUIRE(ans.certificate.has_value());
  CHECK_NOTHROW(check_proof({t.view(), {}, {}, parse_formula("p = r")}, *ans.certificate));
}

TEST_CASE("universally quantified equations instantiate over constants") {
  Signature sig;
  sig.objects = {"B", "One"};
  sig.arrows["u"] = {ObjectTerm::ref("B"), ObjectTerm::ref("One")};
  sig.arrows["v"] = {ObjectTerm::ref("B"), ObjectTerm::ref("One")};
  Theory t = make_congruence_theory(
      "terminalish", sig, {parse_formula("forall f : B -> One . forall g : B -> One . f = g")});
  auto ans = t.oracle().query(parse_formula("u = v"));
  REQUIRE(ans.yes);
  REQUIRE(ans.certificate.has_value());
  CHECK_NOTHROW(check_proof({t.view(), {}, {}, parse_formula("u = v")}, *ans.certificate));
}

TEST_CASE("search oracle and certificate oracle") {
  ParsedTheory pt = parse_theory(kTwoArrowsSource);
  auto data = make_theory_data(pt.name, pt.signature, pt.axioms);
  Theory ts{data, make_search_oracle(data, 6)};
  Formula goal = parse_formula("exists x : One -> A . x = x");
  auto ans = ts.oracle().query(goal);
  REQUIRE(ans.yes);
  REQUIRE(ans.certificate.has_value());
  CHECK_NOTHROW(check_proof({ts.view(), {}, {}, goal}, *ans.certificate));
  CHECK_FALSE(ts.oracle().complete());

  // certificate database: store then replay
  std::filesystem::path dir = std::filesystem::temp_directory_path() / "catlog_certdb";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / (digest(print(goal)) + ".prf"));
    out << print_certificate(*ans.certificate);
  }
  Theory tc{data, make_certificate_oracle(data, dir)};
  auto hit = tc.oracle().query(goal);
  CHECK(hit.yes);
  CHECK_FALSE(tc.oracle().query(parse_formula("a1 = a2")).yes);
}

TEST_CASE("term_category enumerations") {
  Theory t = two_arrows();

  // distinct almost-category arrows: 1_X and 1_X . 1_X both appear
  TermCategory tc = term_category(t, parse_context("X : Obj"), 2);
  auto homXX = tc.hom(ObjectTerm::ref("X"), ObjectTerm::ref("X"));
  std::set<ArrowTerm> sXX(homXX.begin(), homXX.end());
  CHECK(sXX.count(parse_arrow_term("id X")));
  CHECK(sXX.count(parse_arrow_term("comp (id X) (id X)")));

  // the empty theory over the empty context has no objects at all
  Theory empty = make_congruence_theory("empty", {}, {});
  TermCategory te = term_category(empty, {}, 3);
  CHECK(te.objects().empty());

  // depth-1 hom of the one-arrow signature, against brute force
  Signature sig;
  sig.objects = {"A", "B"};
  sig.arrows["f"] = {ObjectTerm::ref("A"), ObjectTerm::ref("B")};
  Theory tf = make_congruence_theory("onearrow", sig, {});
  TermCategory tcf = term_category(tf, {}, 1);
  auto homAB = tcf.hom(ObjectTerm::ref("A"), ObjectTerm::ref("B"));
  std::set<ArrowTerm> got(homAB.begin(), homAB.end());
  std::set<ArrowTerm> expected = {
      parse_arrow_term("f"), parse_arrow_term("comp f (id A)"),
      parse_arrow_term("comp (id B) f")};
  CHECK(got == expected);

  // brute-force oracle at depth 2 over the full fixture
  TermCategory t2 = term_category(t, {}, 2);
  std::set<ArrowTerm> brute;
  brute_terms(t.signature(), {}, ObjectTerm::ref("One"), ObjectTerm::ref("A"), 2,
              t2.objects(), brute);
  auto hom2 = t2.hom(ObjectTerm::ref("One"), ObjectTerm::ref("A"));
  CHECK(std::set<ArrowTerm>(hom2.begin(), hom2.end()) == brute);
}

TEST_CASE("assignments: identity, application, composition law") {
  Theory t = two_arrows();
  Context ctx = parse_context("X : Obj, x : One -> X");
  Assignment id = Assignment::identity(t.signature(), ctx);
  Formula f = parse_formula("comp idA x = x");
  CHECK(apply_assignment(id, f) == f);

  Assignment a;
  a.map = id.map;
  a.map.objects["X"] = ObjectTerm::ref("A");
  a.map.arrows["x"] = ArrowTerm::ref("a2");
  CHECK(apply_assignment(a, parse_arrow_term("comp x (id One)")) ==
        parse_arrow_term("comp a2 (id One)"));
  CHECK_NOTHROW(check_assignment(t.signature(), ctx, t.signature(), {}, a));

  Assignment bad = a;
  bad.map.arrows["x"] = ArrowTerm::ref("idA");  // wrong sort
  CHECK_THROWS_AS(check_assignment(t.signature(), ctx, t.signature(), {}, bad), Error);

  // composition law on fuzzed terms: both routes agree
  Rng rng(5);
  FormulaGen gen{t.signature(), rng, 2, false};
  Assignment b = Assignment::identity(t.signature(), {});
  b.map.arrows["a1"] = ArrowTerm::ref("a2");
  b.map.arrows["a2"] = parse_arrow_term("comp idA a1");
  for (int i = 0; i < 100; ++i) {
    auto pool = gen.arrow_pool(ctx, {ObjectTerm::ref("One"), ObjectTerm::ref("X")}, 2);
    const ArrowTerm& term = pool[pick(rng, static_cast<int>(pool.size()))];
    CHECK(apply_assignment(b, apply_assignment(a, term)) ==
          apply_assignment(compose(b, a), term));
  }
}

TEST_CASE("extend_by_constants") {
  Theory t = two_arrows();
  // a unique endomorphism of One equal to the identity
  Context df = parse_context("h : One -> One");
  Formula P = parse_formula("h = id One");
  Extension e = extend_by_constants(t, {{df, P}});
  CHECK(e.target.signature().arrows.size() == 5);
  CHECK(e.target.signature().arrows.count("c_h") == 1);
  CHECK_NOTHROW(e.verify_axioms());
  // the defining axiom is present and provable
  CHECK(e.target.oracle().query(parse_formula("c_h = id One")).yes);

  // identity extension from the empty entry list
  Extension idext = extend_by_constants(t, {});
  CHECK(idext.target.signature().arrows.size() == 4);

  // an underdetermined description is rejected
  Context dg = parse_context("x : One -> A");
  try {
    extend_by_constants(t, {{dg, Formula::top()}});
    FAIL("non-unique description accepted");
  } catch (const Error& e2) {
    CHECK(e2.kind() == ErrorKind::NotProvablyUnique);
  }
}

TEST_CASE("term-complete extension stages") {
  // budget 0: only the stage-3 quotient runs
  Theory t = two_arrows();
  TermCompleteExtension e0 = term_complete_extension(t, 0);
  CHECK(e0.merged.empty());
  CHECK(canonical_constant(e0, parse_arrow_term("id One")) == "idOne");
  CHECK(canonical_constant(e0, parse_arrow_term("a1")) == "a1");
  CHECK(canonical_constant(e0, parse_arrow_term("comp a1 idOne")) == "a1");

  // provably equal constants are merged onto the lex-least one
  Signature sig;
  sig.objects = {"A", "B"};
  sig.arrows["f"] = {ObjectTerm::ref("A"), ObjectTerm::ref("B")};
  sig.arrows["g"] = {ObjectTerm::ref("A"), ObjectTerm::ref("B")};
  Theory tfg = make_congruence_theory("fg", sig, {parse_formula("f = g")});
  TermCompleteExtension efg = term_complete_extension(tfg, 0);
  REQUIRE(efg.merged.size() == 1);
  CHECK(efg.merged.at("g") == "f");
  CHECK(efg.extension.target.signature().arrows.count("g") == 0);
  CHECK(apply_assignment(efg.extension.translation, ArrowTerm::ref("g")) ==
        ArrowTerm::ref("f"));

  // uniqueness: every enumerated term has exactly one provably equal constant
  TermCategory cat = term_category(e0.extension.target, {}, 2);
  const Theory& t3 = e0.extension.target;
  for (const ObjectTerm& a : cat.objects()) {
    for (const ObjectTerm& b : cat.objects()) {
      for (const ArrowTerm& term : cat.hom(a, b)) {
        int hits = 0;
        for (const auto& [c, s] : t3.signature().arrows) {
          if (!(s == ArrowSort{a, b})) continue;
          if (t3.oracle().query(Formula::eq(term, ArrowTerm::ref(c))).yes) ++hits;
        }
        CAPTURE(print(term));
        CHECK(hits == 1);
      }
    }
  }

  // out-of-budget canonicalization is reported, not guessed
  Signature s2;
  s2.objects = {"P", "Q"};
  s2.arrows["u"] = {ObjectTerm::ref("P"), ObjectTerm::ref("Q")};
  Theory tu = make_congruence_theory("uncanonical", s2, {});
  TermCompleteExtension eu = term_complete_extension(tu, 0);
  CHECK_THROWS_AS(canonical_constant(eu, parse_arrow_term("id P")), Error);
}

TEST_CASE("stage 1 and 2 budgets add certified constants") {
  Theory t = two_arrows();
  TermCompleteExtension e = term_complete_extension(t, 12);
  // some descriptions certify (e.g. the unique endo of One equal to id);
  // after the stage-3 quotient no two constants are provably equal
  const Theory& t3 = e.extension.target;
  std::vector<std::string> names;
  for (const auto& [n, _] : t3.signature().arrows) names.push_back(n);
  for (std::size_t i = 0; i < names.size(); ++i)
    for (std::size_t j = i + 1; j < names.size(); ++j) {
      if (!(t3.signature().arrows.at(names[i]) == t3.signature().arrows.at(names[j])))
        continue;
      CHECK_FALSE(
          t3.oracle().query(Formula::eq(ArrowTerm::ref(names[i]), ArrowTerm::ref(names[j]))).yes);
    }
  CHECK(e.extension.source.name() == "two_arrows");
}

TEST_CASE("conservativity of the term-complete extension on sentences") {
  Theory t = two_arrows();
  TermCompleteExtension e = term_complete_extension(t, 0);
  Rng rng(17);
  FormulaGen gen{t.signature(), rng, 1, true};
  for (int i = 0; i < 100; ++i) {
    Formula f = gen.gen({}, 3);
    Formula tr = e.extension.translate(f);
    CHECK(t.oracle().query(f).yes == e.extension.target.oracle().query(tr).yes);
  }
}

TEST_CASE("extension composition is the composite assignment") {
  Theory t = two_arrows();
  Extension e1 = extend_by_constants(t, {{parse_context("h : One -> One"),
                                          parse_formula("h = id One")}});
  Extension e2 = extend_by_constants(e1.target, {{parse_context("k : A -> A"),
                                                  parse_formula("k = id A")}});
  Extension both = compose(e2, e1);
  CHECK(both.source.name() == t.name());
  CHECK(both.target.name() == e2.target.name());
  Formula f = parse_formula("comp idA a1 = a1");
  CHECK(both.translate(f) == e2.translate(e1.translate(f)));
  CHECK_NOTHROW(both.verify_axioms());
}

TEST_CASE("canonicalization identifies exactly the provably equal terms") {
  Theory t = two_arrows();
  TermCompleteExtension e = term_complete_extension(t, 0);
  const Theory& t3 = e.extension.target;
  TermCategory cat = term_category(t3, {}, 2);
  for (const ObjectTerm& a : cat.objects()) {
    for (const ObjectTerm& b : cat.objects()) {
      std::vector<ArrowTerm> terms = cat.hom(a, b);
      for (std::size_t i = 0; i < terms.size(); ++i) {
        for (std::size_t j = i; j < terms.size(); ++j) {
          bool provable =
              t3.oracle().query(Formula::eq(terms[i], terms[j])).yes;
          bool sameConstant =
              canonical_constant(e, terms[i]) == canonical_constant(e, terms[j]);
          CAPTURE(print(terms[i]));
          CAPTURE(print(terms[j]));
          CHECK(provable == sameConstant);
        }
      }
    }
  }
}
