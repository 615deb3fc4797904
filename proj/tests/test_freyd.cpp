#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "helpers.hpp"

using namespace catlog;
using namespace catlog::testing;

namespace {

struct Glued {
  Theory base;
  TermCompleteExtension ext;
  GlobalSections gs;
  FreydCategory f;
  Theory star;
  Model model;
};

Glued glue_fixture() {
  Glued g{two_arrows(), {}, {}, {}, {}, {}};
  g.ext = term_complete_extension(g.base, 0);
  g.gs = global_sections(g.ext, "One");
  g.f = comma_glue(functions_category(2), g.ext, g.gs);
  g.star = star_theory(g.f);
  g.model = freyd_model(g.f, g.star);
  return g;
}

}  // namespace

TEST_CASE("finite category fixtures and files") {
  FiniteCategory tiny = functions_category(2);
  CHECK(tiny.objects.size() == 3);
  CHECK(tiny.arrows.size() == 11);
  CHECK(*tiny.terminal() == "S1");
  CHECK(tiny.elements("S2").size() == 2);
  CHECK(tiny.elements("S0").empty());

  FiniteCategory re = parse_category(print_category(tiny));
  CHECK(re.arrows.size() == tiny.arrows.size());
  CHECK(re.comp == tiny.comp);
  CHECK(re.identity == tiny.identity);

  // a missing composition row is a load-time error
  FiniteCategory broken = tiny;
  broken.comp.erase(broken.comp.begin());
  CHECK_THROWS_AS(parse_category(print_category(broken)), Error);

  // an associativity violation is detected
  FiniteCategory assoc = functions_category(1);
  assoc.comp[{"m11_0", "m11_0"}] = "m01_e";  // breaks endpoints too
  CHECK_THROWS_AS(assoc.validate(), Error);
}

TEST_CASE("global sections functor data") {
  Theory t = two_arrows();
  TermCompleteExtension e = term_complete_extension(t, 0);
  GlobalSections gs = global_sections(e, "One");
  CHECK(gs.of("One") == std::vector<std::string>{"idOne"});
  CHECK(gs.of("A") == std::vector<std::string>{"a1", "a2"});

  // identity law: GS(idA) fixes the sections of A
  for (const std::string& s : gs.of("A")) CHECK(gs.apply("idA", s) == s);
  // functor law on composites, exhaustively over the finite data
  for (const auto& [phi, sortPhi] : t.signature().arrows) {
    for (const auto& [psi, sortPsi] : t.signature().arrows) {
      if (!(sortPhi.cod == sortPsi.dom)) continue;
      for (const std::string& s : gs.of(sortPhi.dom.name())) {
        std::string byParts = gs.apply(psi, gs.apply(phi, s));
        std::string whole = canonical_constant(
            e, ArrowTerm::comp(ArrowTerm::comp(ArrowTerm::ref(psi), ArrowTerm::ref(phi)),
                               ArrowTerm::ref(s)));
        CHECK(byParts == whole);
      }
    }
  }
}

TEST_CASE("comma gluing: counts, laws, projections") {
  Glued g = glue_fixture();
  const FreydCategory& f = g.f;

  // 1 + 2 + 4 functions into the two-section object
  int overA = 0, overOne = 0;
  for (const FreydObject& o : f.objects) {
    if (o.minus == "A") ++overA;
    if (o.minus == "One") ++overOne;
  }
  CHECK(overA == 7);
  CHECK(overOne == 3);
  CHECK(f.objects.size() == 10);

  // identities: (identity, identity-constant) on each object
  for (const FreydObject& o : f.objects) {
    const FreydArrow& e = f.arrow(f.identityOf.at(o.name));
    CHECK(e.plus == f.tiny.identity.at(o.plus));
    CHECK(f.base.oracle()
              .query(Formula::eq(ArrowTerm::ref(e.minus),
                                 ArrowTerm::id(ObjectTerm::ref(o.minus))))
              .yes);
  }

  // category laws over the full tables
  for (const FreydArrow& a : f.arrows) {
    CHECK(f.comp.at({f.identityOf.at(f.objects[a.dst].name), a.name}) == a.name);
    CHECK(f.comp.at({a.name, f.identityOf.at(f.objects[a.src].name)}) == a.name);
  }
  for (const FreydArrow& x : f.arrows) {
    for (const FreydArrow& y : f.arrows) {
      if (y.src != x.dst) continue;
      for (const FreydArrow& z : f.arrows) {
        if (z.src != y.dst) continue;
        CHECK(f.comp.at({z.name, f.comp.at({y.name, x.name})}) ==
              f.comp.at({f.comp.at({z.name, y.name}), x.name}));
      }
    }
  }

  // the projections are functorial and the legs commute
  for (const FreydArrow& x : f.arrows) {
    const FreydObject& src = f.objects[x.src];
    const FreydObject& dst = f.objects[x.dst];
    CHECK(f.tiny.compose(f.gsArrow.at(x.minus), src.down) ==
          f.tiny.compose(dst.down, x.plus));
    for (const FreydArrow& y : f.arrows) {
      if (y.src != x.dst) continue;
      const FreydArrow& comp = f.arrow(f.comp.at({y.name, x.name}));
      CHECK(comp.plus == f.tiny.compose(y.plus, x.plus));
      CHECK(g.base.oracle()
                .query(Formula::eq(ArrowTerm::ref(comp.minus),
                                   ArrowTerm::comp(ArrowTerm::ref(y.minus),
                                                   ArrowTerm::ref(x.minus))))
                .yes);
    }
  }
}

TEST_CASE("the terminal's points are the plus elements") {
  Glued g = glue_fixture();
  std::string one = g.f.terminal_object();
  for (const FreydObject& o : g.f.objects) {
    CHECK(g.f.hom(one, o.name).size() == g.f.tiny.elements(o.plus).size());
  }
}

TEST_CASE("the induced theory proves through the second projection") {
  Glued g = glue_fixture();
  const Theory& s = g.star;

  // equal minus, different plus: provably equal yet distinct constants
  bool foundPair = false;
  for (const FreydArrow& x : g.f.arrows) {
    for (const FreydArrow& y : g.f.arrows) {
      if (x.name == y.name || x.src != y.src || x.dst != y.dst) continue;
      if (x.minus != y.minus || x.plus == y.plus) continue;
      foundPair = true;
      CHECK(s.oracle().query(Formula::eq(ArrowTerm::ref(x.name), ArrowTerm::ref(y.name))).yes);
    }
  }
  CHECK(foundPair);

  // conservativity on translated sentences, fuzzed
  Subst section = star_section(g.f);
  Rng rng(61);
  FormulaGen gen{g.base.signature(), rng, 1, false};
  for (int i = 0; i < 60; ++i) {
    Formula f = gen.gen({}, 3);
    CHECK(g.base.oracle().query(f).yes ==
          s.oracle().query(substitute(f, section)).yes);
  }

  // translated axioms of the base are among the induced theory's axioms
  for (const Formula& ax : g.base.explicit_axioms()) {
    Formula tr = substitute(ax, section);
    bool present = false;
    for (const Formula& sax : s.explicit_axioms())
      if (sax == tr) present = true;
    CHECK(present);
  }
}

TEST_CASE("the glued model validates and folds composites through the tables") {
  Glued g = glue_fixture();
  CHECK_NOTHROW(validate_model(g.star, g.model));

  // composite with an identity folds back onto the arrow
  const FreydArrow& any = g.f.arrows.front();
  std::string idArrow = g.f.identityOf.at(g.f.objects[any.src].name);
  ArrowTerm composite =
      ArrowTerm::comp(ArrowTerm::ref(any.name), ArrowTerm::ref(idArrow));
  CHECK(g.model.canon(composite) == any.name);

  // equal-minus distinct-plus arrows are NOT merged
  for (const FreydArrow& x : g.f.arrows) {
    for (const FreydArrow& y : g.f.arrows) {
      if (x.name == y.name || x.src != y.src || x.dst != y.dst) continue;
      if (x.minus == y.minus && x.plus != y.plus)
        CHECK(g.model.rep_of(x.name) != g.model.rep_of(y.name));
    }
  }
}

TEST_CASE("gluing rejects unrealizable section sets") {
  Theory t = two_arrows();
  TermCompleteExtension e = term_complete_extension(t, 0);
  GlobalSections gs = global_sections(e, "One");
  // size-1 sets cannot realize the two sections of A
  CHECK_THROWS_AS(comma_glue(functions_category(1), e, gs), Error);
  try {
    comma_glue(functions_category(1), e, gs);
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::GsNotInTiny);
  }
}
