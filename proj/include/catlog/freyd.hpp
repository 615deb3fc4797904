#pragma once

// Finite categories given by explicit tables, the gluing of a finite
// category to a term-complete theory along global sections, and the
// induced theory (constants = objects and arrows of the glued category,
// provability through the second projection) with its model (arrows
// identified exactly when the gluing identifies them).

#include "catlog/slash.hpp"

namespace catlog {

struct FiniteCategory {
  struct Arrow {
    std::string name, dom, cod;
  };

  std::string name;
  std::vector<std::string> objects;
  std::vector<Arrow> arrows;
  std::map<std::pair<std::string, std::string>, std::string> comp;  // (g, f) -> g.f
  std::map<std::string, std::string> identity;  // object -> identity arrow

  const Arrow& arrow(const std::string& n) const;
  bool composable(const std::string& g, const std::string& f) const;
  const std::string& compose(const std::string& g, const std::string& f) const;
  std::vector<std::string> hom(const std::string& a, const std::string& b) const;

  // Associativity and identity laws over the full tables; identities are
  // derived (the unique two-sided unit per object) if not yet set.
  void validate();

  // The object with a unique arrow from every object, if any.
  std::optional<std::string> terminal() const;
  // Arrows from the terminal object, the "elements" of x, sorted.
  std::vector<std::string> elements(const std::string& x) const;
};

// category <name> { object X ... arrow f : X -> Y ... g ∘ f = h ... }
FiniteCategory parse_category(const std::string& text);
std::string print_category(const FiniteCategory& c);

// The skeleton of finite sets of size <= maxSize: objects S0..S<n>, arrows
// all functions between them, encoded m<i><j>_<digits> (m12_00 maps both
// elements of S1... elements are 0-indexed, the empty map is m<i><j>_e).
FiniteCategory functions_category(int maxSize);

// ---------------------------------------------------------------------------
// Global sections

struct GlobalSections {
  std::string terminal;  // the designated terminal object constant
  std::map<std::string, std::vector<std::string>> sections;  // object -> sorted constants
  std::map<std::pair<std::string, std::string>, std::string> action;  // (arrow, section) -> section

  const std::vector<std::string>& of(const std::string& object) const;
  const std::string& apply(const std::string& arrow, const std::string& section) const;
};

// GS(X) = the canonical arrow constants terminal -> X; GS(phi) sends a
// section s to the canonical constant of phi . s. Throws OutOfBudget when
// the extension cannot canonicalize a composite.
GlobalSections global_sections(const TermCompleteExtension& e, const std::string& terminal);

// ---------------------------------------------------------------------------
// The glued category

struct FreydObject {
  std::string name;   // constant name in the induced theory
  std::string plus;   // finite-category object
  std::string minus;  // base object constant
  std::string down;   // finite-category arrow plus -> tinyOf(minus)
};

struct FreydArrow {
  std::string name;
  std::size_t src = 0, dst = 0;  // object indices
  std::string plus;              // finite-category arrow
  std::string minus;             // base arrow constant
};

struct FreydCategory {
  FiniteCategory tiny;
  Theory base;  // the term-complete theory
  GlobalSections gs;
  std::map<std::string, std::string> tinyOf;   // base object -> tiny object
  std::map<std::string, std::string> gsArrow;  // base arrow constant -> tiny arrow
  std::vector<FreydObject> objects;
  std::vector<FreydArrow> arrows;
  std::map<std::pair<std::string, std::string>, std::string> comp;  // arrow names
  std::map<std::string, std::string> identityOf;                    // object -> arrow

  const FreydObject& object(const std::string& n) const;
  const FreydArrow& arrow(const std::string& n) const;
  std::vector<std::string> hom(const std::string& a, const std::string& b) const;
  // the index of the object playing the terminal (tiny terminal over the
  // base terminal with the identity leg)
  std::string terminal_object() const;
};

// Objects are all triples (X, S, f : X -> GS(S)); arrows all square-
// commuting pairs. Requires every GS(S) to be realized by a tiny object
// (element counts must match; GsNotInTiny otherwise) and every GS action
// by a unique tiny arrow.
FreydCategory comma_glue(const FiniteCategory& tiny, const TermCompleteExtension& e,
                         const GlobalSections& gs);

// The induced theory: constants are the glued category's objects and
// arrows; provability delegates through the minus projection to the base
// oracle; axioms are the base axioms translated along the canonical
// section S -> (tinyOf(S), S, identity).
Theory star_theory(const FreydCategory& f);

// Substitution renaming base constants into the star theory along the
// canonical section S -> (tinyOf(S), S, identity), for translating proofs
// and sentences.
Subst star_section(const FreydCategory& f);
// The reverse rename: star constants to their minus projections.
Subst star_minus(const FreydCategory& f);

// Arrows are identified exactly when the gluing identifies them: the model
// is discrete on constants, and composite terms fold through the glued
// category's tables.
Model freyd_model(const FreydCategory& f, const Theory& star);

}  // namespace catlog
