#pragma once

// Natural-deduction proof objects and their checker.
//
// Proofs are immutable trees. Checking is top-down against an expected
// conclusion: introduction rules are driven by the conclusion's shape,
// elimination rules carry the premise information the conclusion does not
// determine (the lost conjunct, the antecedent, the eliminated quantifier
// formula, the middle term of a transitivity step).
//
// Hypotheses are addressed by absolute position in the judgement's list;
// rules that discharge a hypothesis append it at the end, so indices of
// existing hypotheses are stable as a derivation grows downward.
//
// The equality family is rule-governed (refl/sym/trans/cong-comp). The
// category axioms (associativity, identity) and the universal closures of
// the equality axioms are available as formulas via equality_axioms for
// use as theory axioms.

#include "catlog/syntax.hpp"

#include <functional>
#include <optional>

namespace catlog {

enum class Rule {
  Hypothesis, Axiom,
  AndIntro, AndElimL, AndElimR,
  OrIntroL, OrIntroR, OrElim,
  ImpliesIntro, ImpliesElim,
  TopIntro, BotElim,
  ForallObjIntro, ForallObjElim, ExistsObjIntro, ExistsObjElim,
  ForallArrIntro, ForallArrElim, ExistsArrIntro, ExistsArrElim,
  EqRefl, EqSym, EqTrans, EqCongComp,
};

const char* rule_name(Rule r);

class Proof {
public:
  Proof() = default;  // null

  static Proof hypothesis(std::size_t index);
  static Proof axiom(std::size_t id);
  static Proof and_intro(Proof l, Proof r);
  static Proof and_elim_l(Proof p, Formula other);
  static Proof and_elim_r(Proof p, Formula other);
  static Proof or_intro_l(Proof p);
  static Proof or_intro_r(Proof p);
  static Proof or_elim(Proof disjunction, Proof leftCase, Proof rightCase,
                       Formula left, Formula right);
  static Proof implies_intro(Proof p);
  static Proof implies_elim(Proof implication, Proof argument, Formula antecedent);
  static Proof top_intro();
  static Proof bot_elim(Proof p);
  static Proof forall_obj_intro(std::string eigen, Proof p);
  static Proof forall_obj_elim(Proof p, Formula universal, ObjectTerm at);
  static Proof exists_obj_intro(ObjectTerm witness, Proof p);
  static Proof exists_obj_elim(Proof existsProof, Proof bodyProof,
                               Formula existential, std::string eigen);
  static Proof forall_arr_intro(std::string eigen, Proof p);
  static Proof forall_arr_elim(Proof p, Formula universal, ArrowTerm at);
  static Proof exists_arr_intro(ArrowTerm witness, Proof p);
  static Proof exists_arr_elim(Proof existsProof, Proof bodyProof,
                               Formula existential, std::string eigen);
  static Proof eq_refl();
  static Proof eq_sym(Proof p);
  static Proof eq_trans(Proof p, Proof q, ArrowTerm mid);
  static Proof eq_cong_comp(Proof inner, Proof outer);

  bool valid() const { return node_ != nullptr; }
  Rule rule() const;
  const std::vector<Proof>& premises() const;
  std::size_t index() const;            // Hypothesis / Axiom
  const Formula& formula() const;       // rule-specific payload
  const Formula& formula2() const;      // or_elim right disjunct
  const ObjectTerm& object_term() const;
  const ArrowTerm& arrow_term() const;
  const std::string& eigen() const;
  std::size_t size() const;             // node count

private:
  struct Node;
  std::shared_ptr<const Node> node_;
  static Proof wrap(std::shared_ptr<Node> n);
};

// Theory data as the checker sees it: a signature plus closed axioms
// addressed by index.
struct TheoryView {
  Signature signature;
  std::vector<Formula> axioms;
};

struct Judgement {
  TheoryView theory;
  Context context;
  std::vector<Formula> hypotheses;
  Formula conclusion;
};

// Throws on an invalid derivation: RuleMismatch(path, expected, found),
// EigenvariableCapture(path), UnknownAxiom(id), or a well-formedness error
// from the syntax layer.
void check_proof(const Judgement& j, const Proof& p);

// Renumber every hypothesis index >= `from` by +`by` (used when a checked
// proof is replayed under a judgement with extra leading hypotheses).
Proof shift_hypotheses(const Proof& p, std::size_t from, std::size_t by);

// Apply a substitution to every formula and instantiation term of a proof.
// A sort-correct assignment maps an accepted proof to an accepted proof of
// the substituted judgement.
Proof substitute(const Proof& p, const Subst& s);

// Universal closures of reflexivity, symmetry, transitivity, composition
// congruence, associativity, and the identity laws, in that order. These
// are implicitly part of every theory.
std::vector<Formula> equality_axioms(const Signature& sig);
constexpr std::size_t kEqualityAxiomCount = 6;
constexpr std::size_t kAxiomRefl = 0;
constexpr std::size_t kAxiomSym = 1;
constexpr std::size_t kAxiomTrans = 2;
constexpr std::size_t kAxiomCongComp = 3;
constexpr std::size_t kAxiomAssoc = 4;
constexpr std::size_t kAxiomIdentity = 5;

// For a formula P with distinguished free arrow variable x declared in ctx,
// builds a checked proof of  f = g => P[f/x] => P[g/x]  by structural
// induction on P. The proof uses no axioms and no ambient hypotheses.
Proof derive_substitution(const Signature& sig, const Context& ctx,
                          const Formula& P, const std::string& x,
                          const ArrowTerm& f, const ArrowTerm& g);

// Bounded goal-directed search. Returns a proof of size <= depth when the
// search fragment finds one; not-found is not a refutation. Deterministic:
// rule applications and instantiation candidates are tried in a fixed
// lexicographic order. The instantiation pool for quantifiers is drawn
// from the context, the signature, subterms of the goal and hypotheses,
// and identities on available objects.
std::optional<Proof> bounded_search(const Judgement& j, std::size_t depth);

// Line-oriented certificate format; see proofs.md.
std::string print_certificate(const Proof& p);
Proof parse_certificate(const std::string& text);

}  // namespace catlog
