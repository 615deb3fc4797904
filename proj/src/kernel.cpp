#include "catlog/kernel.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace catlog {

struct Proof::Node {
  Rule rule;
  std::vector<Proof> premises;
  std::size_t index = 0;
  Formula formulaA;
  Formula formulaB;
  ObjectTerm objectTerm;
  ArrowTerm arrowTerm;
  std::string eigen;
  std::size_t size = 1;
};

Proof Proof::wrap(std::shared_ptr<Node> n) {
  for (const Proof& p : n->premises) n->size += p.size();
  Proof out;
  out.node_ = std::move(n);
  return out;
}

Proof Proof::hypothesis(std::size_t index) {
  auto n = std::make_shared<Node>();
  n->rule = Rule::Hypothesis;
  n->index = index;
  return wrap(std::move(n));
}

Proof Proof::axiom(std::size_t id) {
  auto n = std::make_shared<Node>();
  n->rule = Rule::Axiom;
  n->index = id;
  return wrap(std::move(n));
}

Proof Proof::and_intro(Proof l, Proof r) {
  auto n = std::make_shared<Node>();
  n->rule = Rule::AndIntro;
  n->premises = {std::move(l), std::move(r)};
  return wrap(std::move(n));
}

Proof Proof::and_elim_l(Proof p, Formula other) {
  auto n = std::make_shared<Node>();
  n->rule = Rule::AndElimL;
  n->premises = {std::move(p)};
  n->formulaA = std::move(other);
  return wrap(std::move(n));
}

Proof Proof::and_elim_r(Proof p, Formula other) {
  auto n = std::make_shared<Node>();
  n->rule = Rule::AndElimR;
  n->premises = {std::move(p)};
  n->formulaA = std::move(other);
  return wrap(std::move(n));
}

Proof Proof::or_intro_l(Proof p) {
  auto n = std::make_shared<Node>();
  n->rule = Rule::OrIntroL;
  n->premises = {std::move(p)};
  return wrap(std::move(n));
}

Proof Proof::or_intro_r(Proof p) {
  auto n = std::make_shared<Node>();
  n->rule = Rule::OrIntroR;
  n->premises = {std::move(p)};
  return wrap(std::move(n));
}

Proof Proof::or_elim(Proof disjunction, Proof leftCase, Proof rightCase,
                     Formula left, Formula right) {
  auto n = std::make_shared<Node>();
  n->rule = Rule::OrElim;
  n->premises = {std::move(disjunction), std::move(leftCase), std::move(rightCase)};
  n->formulaA = std::move(left);
  n->formulaB = std::move(right);
  return wrap(std::move(n));
}

Proof Proof::implies_intro(Proof p) {
  auto n = std::make_shared<Node>();
  n->rule = Rule::ImpliesIntro;
  n->premises = {std::move(p)};
  return wrap(std::move(n));
}

Proof Proof::implies_elim(Proof implication, Proof argument, Formula antecedent) {
  auto n = std::make_shared<Node>();
  n->rule = Rule::ImpliesElim;
  n->premises = {std::move(implication), std::move(argument)};
  n->formulaA = std::move(antecedent);
  return wrap(std::move(n));
}

Proof Proof::top_intro() {
  auto n = std::make_shared<Node>();
  n->rule = Rule::TopIntro;
  return wrap(std::move(n));
}

Proof Proof::bot_elim(Proof p) {
  auto n = std::make_shared<Node>();
  n->rule = Rule::BotElim;
  n->premises = {std::move(p)};
  return wrap(std::move(n));
}

Proof Proof::forall_obj_intro(std::string eigen, Proof p) {
  auto n = std::make_shared<Node>();
  n->rule = Rule::ForallObjIntro;
  n->premises = {std::move(p)};
  n->eigen = std::move(eigen);
  return wrap(std::move(n));
}

Proof Proof::forall_obj_elim(Proof p, Formula universal, ObjectTerm at) {
  auto n = std::make_shared<Node>();
  n->rule = Rule::ForallObjElim;
  n->premises = {std::move(p)};
  n->formulaA = std::move(universal);
  n->objectTerm = std::move(at);
  return wrap(std::move(n));
}

Proof Proof::exists_obj_intro(ObjectTerm witness, Proof p) {
  auto n = std::make_shared<Node>();
  n->rule = Rule::ExistsObjIntro;
  n->premises = {std::move(p)};
  n->objectTerm = std::move(witness);
  return wrap(std::move(n));
}

Proof Proof::exists_obj_elim(Proof existsProof, Proof bodyProof,
                             Formula existential, std::string eigen) {
  auto n = std::make_shared<Node>();
  n->rule = Rule::ExistsObjElim;
  n->premises = {std::move(existsProof), std::move(bodyProof)};
  n->formulaA = std::move(existential);
  n->eigen = std::move(eigen);
  return wrap(std::move(n));
}

Proof Proof::forall_arr_intro(std::string eigen, Proof p) {
  auto n = std::make_shared<Node>();
  n->rule = Rule::ForallArrIntro;
  n->premises = {std::move(p)};
  n->eigen = std::move(eigen);
  return wrap(std::move(n));
}

Proof Proof::forall_arr_elim(Proof p, Formula universal, ArrowTerm at) {
  auto n = std::make_shared<Node>();
  n->rule = Rule::ForallArrElim;
  n->premises = {std::move(p)};
  n->formulaA = std::move(universal);
  n->arrowTerm = std::move(at);
  return wrap(std::move(n));
}

Proof Proof::exists_arr_intro(ArrowTerm witness, Proof p) {
  auto n = std::make_shared<Node>();
  n->rule = Rule::ExistsArrIntro;
  n->premises = {std::move(p)};
  n->arrowTerm = std::move(witness);
  return wrap(std::move(n));
}

Proof Proof::exists_arr_elim(Proof existsProof, Proof bodyProof,
                             Formula existential, std::string eigen) {
  auto n = std::make_shared<Node>();
  n->rule = Rule::ExistsArrElim;
  n->premises = {std::move(existsProof), std::move(bodyProof)};
  n->formulaA = std::move(existential);
  n->eigen = std::move(eigen);
  return wrap(std::move(n));
}

Proof Proof::eq_refl() {
  auto n = std::make_shared<Node>();
  n->rule = Rule::EqRefl;
  return wrap(std::move(n));
}

Proof Proof::eq_sym(Proof p) {
  auto n = std::make_shared<Node>();
  n->rule = Rule::EqSym;
  n->premises = {std::move(p)};
  return wrap(std::move(n));
}

Proof Proof::eq_trans(Proof p, Proof q, ArrowTerm mid) {
  auto n = std::make_shared<Node>();
  n->rule = Rule::EqTrans;
  n->premises = {std::move(p), std::move(q)};
  n->arrowTerm = std::move(mid);
  return wrap(std::move(n));
}

Proof Proof::eq_cong_comp(Proof inner, Proof outer) {
  auto n = std::make_shared<Node>();
  n->rule = Rule::EqCongComp;
  n->premises = {std::move(inner), std::move(outer)};
  return wrap(std::move(n));
}

Rule Proof::rule() const { return node_->rule; }
const std::vector<Proof>& Proof::premises() const { return node_->premises; }
std::size_t Proof::index() const { return node_->index; }
const Formula& Proof::formula() const { return node_->formulaA; }
const Formula& Proof::formula2() const { return node_->formulaB; }
const ObjectTerm& Proof::object_term() const { return node_->objectTerm; }
const ArrowTerm& Proof::arrow_term() const { return node_->arrowTerm; }
const std::string& Proof::eigen() const { return node_->eigen; }
std::size_t Proof::size() const { return node_ ? node_->size : 0; }

// ---------------------------------------------------------------------------
// Checking

namespace {

struct CheckState {
  const TheoryView& theory;
  std::vector<int> path;

  std::string path_str() const {
    std::string s = "[";
    for (std::size_t i = 0; i < path.size(); ++i) {
      if (i) s += " ";
      s += std::to_string(path[i]);
    }
    return s + "]";
  }

  [[noreturn]] void mismatch(const std::string& what, const Formula& expected) {
    throw Error(ErrorKind::RuleMismatch,
                path_str() + " " + what + "; expected " + print(expected));
  }

  void require_fresh(const std::string& eigen, const Context& ctx,
                     const std::vector<Formula>& hyps,
                     std::initializer_list<const Formula*> formulas) {
    bool captured = ctx.find(eigen) != nullptr || theory.signature.has_name(eigen);
    if (!captured) {
      for (const Formula& h : hyps)
        if (free_names(h).contains(eigen)) { captured = true; break; }
    }
    if (!captured) {
      for (const Formula* f : formulas)
        if (free_names(*f).contains(eigen)) { captured = true; break; }
    }
    if (captured)
      throw Error(ErrorKind::EigenvariableCapture, path_str() + " " + eigen);
  }

  void check(const Context& ctx, const std::vector<Formula>& hyps,
             const Formula& expected, const Proof& p) {
    if (!p.valid())
      throw Error(ErrorKind::RuleMismatch, path_str() + " missing subproof");
    const Signature& sig = theory.signature;
    switch (p.rule()) {
      case Rule::Hypothesis: {
        if (p.index() >= hyps.size())
          mismatch("hypothesis index " + std::to_string(p.index()) + " out of range",
                   expected);
        if (!(hyps[p.index()] == expected))
          mismatch("hypothesis " + std::to_string(p.index()) + " is " +
                       print(hyps[p.index()]),
                   expected);
        return;
      }
      case Rule::Axiom: {
        if (p.index() >= theory.axioms.size())
          throw Error(ErrorKind::UnknownAxiom, std::to_string(p.index()));
        if (!(theory.axioms[p.index()] == expected))
          mismatch("axiom " + std::to_string(p.index()) + " is " +
                       print(theory.axioms[p.index()]),
                   expected);
        return;
      }
      case Rule::AndIntro: {
        if (expected.kind() != Formula::Kind::And) mismatch("and_intro", expected);
        sub(ctx, hyps, expected.left(), p, 0);
        sub(ctx, hyps, expected.right(), p, 1);
        return;
      }
      case Rule::AndElimL: {
        check_formula(sig, ctx, p.formula());
        sub(ctx, hyps, Formula::conj(expected, p.formula()), p, 0);
        return;
      }
      case Rule::AndElimR: {
        check_formula(sig, ctx, p.formula());
        sub(ctx, hyps, Formula::conj(p.formula(), expected), p, 0);
        return;
      }
      case Rule::OrIntroL: {
        if (expected.kind() != Formula::Kind::Or) mismatch("or_intro_l", expected);
        check_formula(sig, ctx, expected.right());
        sub(ctx, hyps, expected.left(), p, 0);
        return;
      }
      case Rule::OrIntroR: {
        if (expected.kind() != Formula::Kind::Or) mismatch("or_intro_r", expected);
        check_formula(sig, ctx, expected.left());
        sub(ctx, hyps, expected.right(), p, 0);
        return;
      }
      case Rule::OrElim: {
        check_formula(sig, ctx, p.formula());
        check_formula(sig, ctx, p.formula2());
        sub(ctx, hyps, Formula::disj(p.formula(), p.formula2()), p, 0);
        auto withL = hyps;
        withL.push_back(p.formula());
        sub(ctx, withL, expected, p, 1);
        auto withR = hyps;
        withR.push_back(p.formula2());
        sub(ctx, withR, expected, p, 2);
        return;
      }
      case Rule::ImpliesIntro: {
        if (expected.kind() != Formula::Kind::Implies)
          mismatch("implies_intro", expected);
        auto with = hyps;
        with.push_back(expected.left());
        sub(ctx, with, expected.right(), p, 0);
        return;
      }
      case Rule::ImpliesElim: {
        check_formula(sig, ctx, p.formula());
        sub(ctx, hyps, Formula::implies(p.formula(), expected), p, 0);
        sub(ctx, hyps, p.formula(), p, 1);
        return;
      }
      case Rule::TopIntro: {
        if (expected.kind() != Formula::Kind::Top) mismatch("top_intro", expected);
        return;
      }
      case Rule::BotElim: {
        check_formula(sig, ctx, expected);
        sub(ctx, hyps, Formula::bot(), p, 0);
        return;
      }
      case Rule::ForallObjIntro: {
        if (expected.kind() != Formula::Kind::ForallObj)
          mismatch("forall_obj_intro", expected);
        require_fresh(p.eigen(), ctx, hyps, {&expected});
        Context cx = ctx.extended({p.eigen(), std::nullopt});
        sub(cx, hyps, open_obj(expected.body(), ObjectTerm::ref(p.eigen())), p, 0);
        return;
      }
      case Rule::ForallObjElim: {
        const Formula& uni = p.formula();
        check_formula(sig, ctx, uni);
        if (uni.kind() != Formula::Kind::ForallObj)
          mismatch("forall_obj_elim on " + print(uni), expected);
        check_object_term(sig, ctx, p.object_term());
        if (!(open_obj(uni.body(), p.object_term()) == expected))
          mismatch("forall_obj_elim instance mismatch", expected);
        sub(ctx, hyps, uni, p, 0);
        return;
      }
      case Rule::ExistsObjIntro: {
        if (expected.kind() != Formula::Kind::ExistsObj)
          mismatch("exists_obj_intro", expected);
        check_object_term(sig, ctx, p.object_term());
        sub(ctx, hyps, open_obj(expected.body(), p.object_term()), p, 0);
        return;
      }
      case Rule::ExistsObjElim: {
        const Formula& ex = p.formula();
        check_formula(sig, ctx, ex);
        if (ex.kind() != Formula::Kind::ExistsObj)
          mismatch("exists_obj_elim on " + print(ex), expected);
        require_fresh(p.eigen(), ctx, hyps, {&expected, &ex});
        sub(ctx, hyps, ex, p, 0);
        Context cx = ctx.extended({p.eigen(), std::nullopt});
        auto with = hyps;
        with.push_back(open_obj(ex.body(), ObjectTerm::ref(p.eigen())));
        sub(cx, with, expected, p, 1);
        return;
      }
      case Rule::ForallArrIntro: {
        if (expected.kind() != Formula::Kind::ForallArr)
          mismatch("forall_arr_intro", expected);
        require_fresh(p.eigen(), ctx, hyps, {&expected});
        Context cx = ctx.extended({p.eigen(), expected.sort()});
        sub(cx, hyps, open_arr(expected.body(), ArrowTerm::ref(p.eigen())), p, 0);
        return;
      }
      case Rule::ForallArrElim: {
        const Formula& uni = p.formula();
        check_formula(sig, ctx, uni);
        if (uni.kind() != Formula::Kind::ForallArr)
          mismatch("forall_arr_elim on " + print(uni), expected);
        ArrowSort s = infer_sort(sig, ctx, p.arrow_term());
        if (!(s == uni.sort()))
          mismatch("forall_arr_elim instantiation has sort " + print(s), expected);
        if (!(open_arr(uni.body(), p.arrow_term()) == expected))
          mismatch("forall_arr_elim instance mismatch", expected);
        sub(ctx, hyps, uni, p, 0);
        return;
      }
      case Rule::ExistsArrIntro: {
        if (expected.kind() != Formula::Kind::ExistsArr)
          mismatch("exists_arr_intro", expected);
        ArrowSort s = infer_sort(sig, ctx, p.arrow_term());
        if (!(s == expected.sort()))
          mismatch("exists_arr_intro witness has sort " + print(s), expected);
        sub(ctx, hyps, open_arr(expected.body(), p.arrow_term()), p, 0);
        return;
      }
      case Rule::ExistsArrElim: {
        const Formula& ex = p.formula();
        check_formula(sig, ctx, ex);
        if (ex.kind() != Formula::Kind::ExistsArr)
          mismatch("exists_arr_elim on " + print(ex), expected);
        require_fresh(p.eigen(), ctx, hyps, {&expected, &ex});
        sub(ctx, hyps, ex, p, 0);
        Context cx = ctx.extended({p.eigen(), ex.sort()});
        auto with = hyps;
        with.push_back(open_arr(ex.body(), ArrowTerm::ref(p.eigen())));
        sub(cx, with, expected, p, 1);
        return;
      }
      case Rule::EqRefl: {
        if (expected.kind() != Formula::Kind::Eq || !(expected.lhs() == expected.rhs()))
          mismatch("eq_refl", expected);
        check_formula(sig, ctx, expected);
        return;
      }
      case Rule::EqSym: {
        if (expected.kind() != Formula::Kind::Eq) mismatch("eq_sym", expected);
        sub(ctx, hyps, Formula::eq(expected.rhs(), expected.lhs()), p, 0);
        return;
      }
      case Rule::EqTrans: {
        if (expected.kind() != Formula::Kind::Eq) mismatch("eq_trans", expected);
        Formula first = Formula::eq(expected.lhs(), p.arrow_term());
        Formula second = Formula::eq(p.arrow_term(), expected.rhs());
        check_formula(sig, ctx, first);
        sub(ctx, hyps, first, p, 0);
        sub(ctx, hyps, second, p, 1);
        return;
      }
      case Rule::EqCongComp: {
        if (expected.kind() != Formula::Kind::Eq ||
            expected.lhs().kind() != ArrowTerm::Kind::Comp ||
            expected.rhs().kind() != ArrowTerm::Kind::Comp)
          mismatch("eq_cong_comp needs a composition on both sides", expected);
        Formula inner = Formula::eq(expected.lhs().inner(), expected.rhs().inner());
        Formula outer = Formula::eq(expected.lhs().outer(), expected.rhs().outer());
        check_formula(sig, ctx, inner);
        check_formula(sig, ctx, outer);
        sub(ctx, hyps, inner, p, 0);
        sub(ctx, hyps, outer, p, 1);
        return;
      }
    }
    throw Error(ErrorKind::Internal, "check: bad rule");
  }

  void sub(const Context& ctx, const std::vector<Formula>& hyps,
           const Formula& expected, const Proof& p, int i) {
    path.push_back(i);
    check(ctx, hyps, expected, p.premises()[i]);
    path.pop_back();
  }
};

}  // namespace

void check_proof(const Judgement& j, const Proof& p) {
  check_context(j.theory.signature, j.context);
  for (const Formula& h : j.hypotheses) check_formula(j.theory.signature, j.context, h);
  check_formula(j.theory.signature, j.context, j.conclusion);
  CheckState st{j.theory, {}};
  st.check(j.context, j.hypotheses, j.conclusion, p);
}

// ---------------------------------------------------------------------------
// Structural transforms

Proof shift_hypotheses(const Proof& p, std::size_t from, std::size_t by) {
  std::vector<Proof> prem;
  prem.reserve(p.premises().size());
  for (const Proof& q : p.premises()) prem.push_back(shift_hypotheses(q, from, by));
  switch (p.rule()) {
    case Rule::Hypothesis:
      return Proof::hypothesis(p.index() >= from ? p.index() + by : p.index());
    case Rule::Axiom:
      return p;
    case Rule::AndIntro: return Proof::and_intro(prem[0], prem[1]);
    case Rule::AndElimL: return Proof::and_elim_l(prem[0], p.formula());
    case Rule::AndElimR: return Proof::and_elim_r(prem[0], p.formula());
    case Rule::OrIntroL: return Proof::or_intro_l(prem[0]);
    case Rule::OrIntroR: return Proof::or_intro_r(prem[0]);
    case Rule::OrElim:
      return Proof::or_elim(prem[0], prem[1], prem[2], p.formula(), p.formula2());
    case Rule::ImpliesIntro: return Proof::implies_intro(prem[0]);
    case Rule::ImpliesElim: return Proof::implies_elim(prem[0], prem[1], p.formula());
    case Rule::TopIntro: return p;
    case Rule::BotElim: return Proof::bot_elim(prem[0]);
    case Rule::ForallObjIntro: return Proof::forall_obj_intro(p.eigen(), prem[0]);
    case Rule::ForallObjElim:
      return Proof::forall_obj_elim(prem[0], p.formula(), p.object_term());
    case Rule::ExistsObjIntro: return Proof::exists_obj_intro(p.object_term(), prem[0]);
    case Rule::ExistsObjElim:
      return Proof::exists_obj_elim(prem[0], prem[1], p.formula(), p.eigen());
    case Rule::ForallArrIntro: return Proof::forall_arr_intro(p.eigen(), prem[0]);
    case Rule::ForallArrElim:
      return Proof::forall_arr_elim(prem[0], p.formula(), p.arrow_term());
    case Rule::ExistsArrIntro: return Proof::exists_arr_intro(p.arrow_term(), prem[0]);
    case Rule::ExistsArrElim:
      return Proof::exists_arr_elim(prem[0], prem[1], p.formula(), p.eigen());
    case Rule::EqRefl: return p;
    case Rule::EqSym: return Proof::eq_sym(prem[0]);
    case Rule::EqTrans: return Proof::eq_trans(prem[0], prem[1], p.arrow_term());
    case Rule::EqCongComp: return Proof::eq_cong_comp(prem[0], prem[1]);
  }
  throw Error(ErrorKind::Internal, "shift_hypotheses: bad rule");
}

Proof substitute(const Proof& p, const Subst& s) {
  // Eigenvariables shadow: drop their bindings in the subtree they scope.
  Subst local = s;
  if (!p.eigen().empty()) {
    local.objects.erase(p.eigen());
    local.arrows.erase(p.eigen());
  }
  std::vector<Proof> prem;
  prem.reserve(p.premises().size());
  for (const Proof& q : p.premises()) prem.push_back(substitute(q, local));
  switch (p.rule()) {
    case Rule::Hypothesis:
    case Rule::Axiom:
    case Rule::TopIntro:
    case Rule::EqRefl:
      return p;
    case Rule::AndIntro: return Proof::and_intro(prem[0], prem[1]);
    case Rule::AndElimL: return Proof::and_elim_l(prem[0], substitute(p.formula(), local));
    case Rule::AndElimR: return Proof::and_elim_r(prem[0], substitute(p.formula(), local));
    case Rule::OrIntroL: return Proof::or_intro_l(prem[0]);
    case Rule::OrIntroR: return Proof::or_intro_r(prem[0]);
    case Rule::OrElim:
      return Proof::or_elim(prem[0], prem[1], prem[2],
                            substitute(p.formula(), local),
                            substitute(p.formula2(), local));
    case Rule::ImpliesIntro: return Proof::implies_intro(prem[0]);
    case Rule::ImpliesElim:
      return Proof::implies_elim(prem[0], prem[1], substitute(p.formula(), local));
    case Rule::BotElim: return Proof::bot_elim(prem[0]);
    case Rule::ForallObjIntro: return Proof::forall_obj_intro(p.eigen(), prem[0]);
    case Rule::ForallObjElim:
      return Proof::forall_obj_elim(prem[0], substitute(p.formula(), local),
                                    substitute(p.object_term(), local));
    case Rule::ExistsObjIntro:
      return Proof::exists_obj_intro(substitute(p.object_term(), local), prem[0]);
    case Rule::ExistsObjElim:
      return Proof::exists_obj_elim(prem[0], prem[1],
                                    substitute(p.formula(), local), p.eigen());
    case Rule::ForallArrIntro: return Proof::forall_arr_intro(p.eigen(), prem[0]);
    case Rule::ForallArrElim:
      return Proof::forall_arr_elim(prem[0], substitute(p.formula(), local),
                                    substitute(p.arrow_term(), local));
    case Rule::ExistsArrIntro:
      return Proof::exists_arr_intro(substitute(p.arrow_term(), local), prem[0]);
    case Rule::ExistsArrElim:
      return Proof::exists_arr_elim(prem[0], prem[1],
                                    substitute(p.formula(), local), p.eigen());
    case Rule::EqSym: return Proof::eq_sym(prem[0]);
    case Rule::EqTrans:
      return Proof::eq_trans(prem[0], prem[1], substitute(p.arrow_term(), local));
    case Rule::EqCongComp: return Proof::eq_cong_comp(prem[0], prem[1]);
  }
  throw Error(ErrorKind::Internal, "substitute(proof): bad rule");
}

// ---------------------------------------------------------------------------
// Equality and category axioms

std::vector<Formula> equality_axioms(const Signature& sig) {
  (void)sig;  // the closures quantify over all sorts, so nothing is per-constant
  static const std::vector<Formula> axioms = {
      parse_formula("forall A . forall B . forall f : A -> B . f = f"),
      parse_formula("forall A . forall B . forall f : A -> B . forall g : A -> B . "
                    "f = g => g = f"),
      parse_formula("forall A . forall B . forall f : A -> B . forall g : A -> B . "
                    "forall h : A -> B . f = g => (g = h => f = h)"),
      parse_formula("forall A . forall B . forall C . "
                    "forall f1 : A -> B . forall f2 : A -> B . "
                    "forall g1 : B -> C . forall g2 : B -> C . "
                    "f1 = f2 /\\ g1 = g2 => comp g1 f1 = comp g2 f2"),
      parse_formula("forall A . forall B . forall C . forall D . "
                    "forall f : A -> B . forall g : B -> C . forall h : C -> D . "
                    "comp h (comp g f) = comp (comp h g) f"),
      parse_formula("forall A . forall B . forall f : A -> B . "
                    "f = comp (id B) f /\\ f = comp f (id A)"),
  };
  return axioms;
}

// ---------------------------------------------------------------------------
// derive_substitution

namespace {

struct SubstitutionProver {
  const std::string& x;
  NameSupply names;
  std::size_t eqIdx = 0;  // absolute index of the hypothesis f = g

  // Proof of a = b where (a, b) is (f, g) when `ab`, else (g, f).
  Proof prove_eq(bool ab) const {
    Proof h = Proof::hypothesis(eqIdx);
    return ab ? std::move(h) : Proof::eq_sym(std::move(h));
  }

  ArrowTerm at(const ArrowTerm& t, const ArrowTerm& v) const {
    Subst s;
    s.arrows[x] = v;
    return substitute(t, s);
  }
  Formula at(const Formula& f, const ArrowTerm& v) const {
    Subst s;
    s.arrows[x] = v;
    return substitute(f, s);
  }

  // Proof of t[a/x] = t[b/x] given the equality hypothesis.
  Proof term_eq(const ArrowTerm& t, const ArrowTerm& a, const ArrowTerm& b,
                bool ab) const {
    if (at(t, a) == at(t, b)) return Proof::eq_refl();
    switch (t.kind()) {
      case ArrowTerm::Kind::Ref:
        return prove_eq(ab);  // must be x itself, else the terms were equal
      case ArrowTerm::Kind::Comp:
        return Proof::eq_cong_comp(term_eq(t.inner(), a, b, ab),
                                   term_eq(t.outer(), a, b, ab));
      default:
        throw Error(ErrorKind::Internal, "term_eq: x-free term differs");
    }
  }

  // Proof of P[a/x] => P[b/x] from the ambient equality hypothesis; the
  // implication's own hypothesis lands at index `hypCount`.
  Proof build(const Formula& P, const ArrowTerm& a, const ArrowTerm& b, bool ab,
              std::size_t hypCount) {
    const std::size_t h0 = hypCount;
    using K = Formula::Kind;
    switch (P.kind()) {
      case K::Top:
        return Proof::implies_intro(Proof::top_intro());
      case K::Bot:
        return Proof::implies_intro(Proof::hypothesis(h0));
      case K::Eq: {
        const ArrowTerm& t1 = P.lhs();
        const ArrowTerm& t2 = P.rhs();
        // t1[b] = t1[a] = t2[a] = t2[b]
        Proof s1 = Proof::eq_sym(term_eq(t1, a, b, ab));
        Proof s2 = Proof::hypothesis(h0);
        Proof s3 = term_eq(t2, a, b, ab);
        Proof t12 = Proof::eq_trans(std::move(s1), std::move(s2), at(t1, a));
        Proof whole = Proof::eq_trans(std::move(t12), std::move(s3), at(t2, a));
        return Proof::implies_intro(std::move(whole));
      }
      case K::And: {
        const Formula& Q = P.left();
        const Formula& R = P.right();
        Proof pq = Proof::implies_elim(build(Q, a, b, ab, h0 + 1),
                                       Proof::and_elim_l(Proof::hypothesis(h0), at(R, a)),
                                       at(Q, a));
        Proof pr = Proof::implies_elim(build(R, a, b, ab, h0 + 1),
                                       Proof::and_elim_r(Proof::hypothesis(h0), at(Q, a)),
                                       at(R, a));
        return Proof::implies_intro(Proof::and_intro(std::move(pq), std::move(pr)));
      }
      case K::Or: {
        const Formula& Q = P.left();
        const Formula& R = P.right();
        Proof caseL = Proof::or_intro_l(
            Proof::implies_elim(build(Q, a, b, ab, h0 + 2),
                                Proof::hypothesis(h0 + 1), at(Q, a)));
        Proof caseR = Proof::or_intro_r(
            Proof::implies_elim(build(R, a, b, ab, h0 + 2),
                                Proof::hypothesis(h0 + 1), at(R, a)));
        Proof body = Proof::or_elim(Proof::hypothesis(h0), std::move(caseL),
                                    std::move(caseR), at(Q, a), at(R, a));
        return Proof::implies_intro(std::move(body));
      }
      case K::Implies: {
        const Formula& Q = P.left();
        const Formula& R = P.right();
        // hyp h0: Q[a] => R[a]; hyp h0+1: Q[b]. Derive R[b].
        Proof qa = Proof::implies_elim(build(Q, b, a, !ab, h0 + 2),
                                       Proof::hypothesis(h0 + 1), at(Q, b));
        Proof ra = Proof::implies_elim(Proof::hypothesis(h0), std::move(qa), at(Q, a));
        Proof rb = Proof::implies_elim(build(R, a, b, ab, h0 + 2), std::move(ra),
                                       at(R, a));
        return Proof::implies_intro(Proof::implies_intro(std::move(rb)));
      }
      case K::ForallObj: {
        std::string w = names.fresh(P.binder());
        Formula Q = open_obj(P.body(), ObjectTerm::ref(w));
        Proof inst = Proof::forall_obj_elim(Proof::hypothesis(h0), at(P, a),
                                            ObjectTerm::ref(w));
        Proof body = Proof::implies_elim(build(Q, a, b, ab, h0 + 1),
                                         std::move(inst), at(Q, a));
        return Proof::implies_intro(Proof::forall_obj_intro(w, std::move(body)));
      }
      case K::ForallArr: {
        std::string w = names.fresh(P.binder());
        Formula Q = open_arr(P.body(), ArrowTerm::ref(w));
        Proof inst = Proof::forall_arr_elim(Proof::hypothesis(h0), at(P, a),
                                            ArrowTerm::ref(w));
        Proof body = Proof::implies_elim(build(Q, a, b, ab, h0 + 1),
                                         std::move(inst), at(Q, a));
        return Proof::implies_intro(Proof::forall_arr_intro(w, std::move(body)));
      }
      case K::ExistsObj: {
        std::string w = names.fresh(P.binder());
        Formula Q = open_obj(P.body(), ObjectTerm::ref(w));
        Proof witness = Proof::exists_obj_intro(
            ObjectTerm::ref(w),
            Proof::implies_elim(build(Q, a, b, ab, h0 + 2),
                                Proof::hypothesis(h0 + 1), at(Q, a)));
        Proof body = Proof::exists_obj_elim(Proof::hypothesis(h0), std::move(witness),
                                            at(P, a), w);
        return Proof::implies_intro(std::move(body));
      }
      case K::ExistsArr: {
        std::string w = names.fresh(P.binder());
        Formula Q = open_arr(P.body(), ArrowTerm::ref(w));
        Proof witness = Proof::exists_arr_intro(
            ArrowTerm::ref(w),
            Proof::implies_elim(build(Q, a, b, ab, h0 + 2),
                                Proof::hypothesis(h0 + 1), at(Q, a)));
        Proof body = Proof::exists_arr_elim(Proof::hypothesis(h0), std::move(witness),
                                            at(P, a), w);
        return Proof::implies_intro(std::move(body));
      }
    }
    throw Error(ErrorKind::Internal, "build: bad kind");
  }
};

}  // namespace

Proof derive_substitution(const Signature& sig, const Context& ctx,
                          const Formula& P, const std::string& x,
                          const ArrowTerm& f, const ArrowTerm& g) {
  const ContextDecl* xd = ctx.find(x);
  if (!xd || xd->is_object())
    throw Error(ErrorKind::UnboundName, x + " is not an arrow variable in context");
  ArrowSort sf = infer_sort(sig, ctx, f);
  ArrowSort sg = infer_sort(sig, ctx, g);
  if (!(sf == *xd->sort) || !(sg == *xd->sort))
    throw Error(ErrorKind::SortMismatch,
                "terms of sort " + print(sf) + " / " + print(sg) +
                    " for variable of sort " + print(*xd->sort));
  SubstitutionProver pr{x, {}, 0};
  for (const auto& d : ctx.decls) pr.names.taken.insert(d.name);
  for (const auto& o : sig.objects) pr.names.taken.insert(o);
  for (const auto& [n, _] : sig.arrows) pr.names.taken.insert(n);
  FreeNames fn = free_names(P);
  pr.names.taken.insert(fn.objects.begin(), fn.objects.end());
  pr.names.taken.insert(fn.arrows.begin(), fn.arrows.end());
  return Proof::implies_intro(pr.build(P, f, g, true, 1));
}

// ---------------------------------------------------------------------------
// Bounded search

namespace {

// Closed arrow subterms of a formula, as instantiation candidates.
void collect_arrow_subterms(const ArrowTerm& t, std::set<ArrowTerm>& out) {
  FreeNames fn = free_names(t);
  bool closed = true;
  // terms containing bound variables cannot be used as instantiations
  struct HasBound {
    bool operator()(const ArrowTerm& a) const {
      switch (a.kind()) {
        case ArrowTerm::Kind::Bound: return true;
        case ArrowTerm::Kind::Id:
          return a.obj().kind() == ObjectTerm::Kind::Bound;
        case ArrowTerm::Kind::Comp:
          return (*this)(a.outer()) || (*this)(a.inner());
        default: return false;
      }
    }
  };
  (void)fn;
  if (HasBound{}(t)) closed = false;
  if (closed) out.insert(t);
  if (t.kind() == ArrowTerm::Kind::Comp) {
    collect_arrow_subterms(t.outer(), out);
    collect_arrow_subterms(t.inner(), out);
  }
}

void collect_object_subterms(const ArrowTerm& t, std::set<ObjectTerm>& out) {
  switch (t.kind()) {
    case ArrowTerm::Kind::Id:
      if (t.obj().kind() == ObjectTerm::Kind::Ref) out.insert(t.obj());
      return;
    case ArrowTerm::Kind::Comp:
      collect_object_subterms(t.outer(), out);
      collect_object_subterms(t.inner(), out);
      return;
    default:
      return;
  }
}

void collect_from_formula(const Formula& f, std::set<ArrowTerm>& arrows,
                          std::set<ObjectTerm>& objects) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Eq:
      collect_arrow_subterms(f.lhs(), arrows);
      collect_arrow_subterms(f.rhs(), arrows);
      collect_object_subterms(f.lhs(), objects);
      collect_object_subterms(f.rhs(), objects);
      return;
    case K::And: case K::Or: case K::Implies:
      collect_from_formula(f.left(), arrows, objects);
      collect_from_formula(f.right(), arrows, objects);
      return;
    case K::Top: case K::Bot:
      return;
    case K::ForallObj: case K::ExistsObj:
      collect_from_formula(f.body(), arrows, objects);
      return;
    case K::ForallArr: case K::ExistsArr:
      if (f.sort().dom.kind() == ObjectTerm::Kind::Ref) objects.insert(f.sort().dom);
      if (f.sort().cod.kind() == ObjectTerm::Kind::Ref) objects.insert(f.sort().cod);
      collect_from_formula(f.body(), arrows, objects);
      return;
  }
}

struct Searcher {
  const TheoryView& theory;
  Context ctx;
  std::vector<Formula> hyps;

  std::vector<ObjectTerm> object_candidates(const Formula& goal) const {
    std::set<ObjectTerm> pool;
    for (const auto& d : ctx.decls)
      if (d.is_object()) pool.insert(ObjectTerm::ref(d.name));
    for (const auto& o : theory.signature.objects) pool.insert(ObjectTerm::ref(o));
    std::set<ArrowTerm> dummy;
    collect_from_formula(goal, dummy, pool);
    for (const Formula& h : hyps) collect_from_formula(h, dummy, pool);
    std::vector<ObjectTerm> out(pool.begin(), pool.end());
    std::sort(out.begin(), out.end(), [](const ObjectTerm& a, const ObjectTerm& b) {
      std::string pa = print(a), pb = print(b);
      return std::tie(pa) < std::tie(pb);
    });
    return out;
  }

  std::vector<ArrowTerm> arrow_candidates(const Formula& goal, const ArrowSort& s) const {
    std::set<ArrowTerm> pool;
    for (const auto& d : ctx.decls)
      if (!d.is_object()) pool.insert(ArrowTerm::ref(d.name));
    for (const auto& [n, _] : theory.signature.arrows) pool.insert(ArrowTerm::ref(n));
    std::set<ObjectTerm> dummy;
    collect_from_formula(goal, pool, dummy);
    for (const Formula& h : hyps) collect_from_formula(h, pool, dummy);
    if (s.dom == s.cod) pool.insert(ArrowTerm::id(s.dom));
    std::vector<ArrowTerm> out;
    for (const ArrowTerm& t : pool) {
      try {
        if (infer_sort(theory.signature, ctx, t) == s) out.push_back(t);
      } catch (const Error&) {
        // candidate not typable in this context
      }
    }
    std::sort(out.begin(), out.end(), [](const ArrowTerm& a, const ArrowTerm& b) {
      std::string pa = print(a), pb = print(b);
      if (pa.size() != pb.size()) return pa.size() < pb.size();
      return pa < pb;
    });
    return out;
  }

  std::string fresh_eigen(const std::string& base, const Formula& goal) const {
    std::set<std::string> taken;
    for (const auto& d : ctx.decls) taken.insert(d.name);
    for (const auto& o : theory.signature.objects) taken.insert(o);
    for (const auto& [n, _] : theory.signature.arrows) taken.insert(n);
    for (const Formula& h : hyps) {
      FreeNames fn = free_names(h);
      taken.insert(fn.objects.begin(), fn.objects.end());
      taken.insert(fn.arrows.begin(), fn.arrows.end());
    }
    FreeNames fn = free_names(goal);
    taken.insert(fn.objects.begin(), fn.objects.end());
    taken.insert(fn.arrows.begin(), fn.arrows.end());
    return fresh_name(base.empty() ? "w" : base, taken);
  }

  std::optional<Proof> prove(const Formula& goal, int budget) {
    if (budget <= 0) return std::nullopt;
    for (std::size_t i = 0; i < hyps.size(); ++i)
      if (hyps[i] == goal) return Proof::hypothesis(i);

    using K = Formula::Kind;
    switch (goal.kind()) {
      case K::Top:
        return Proof::top_intro();
      case K::Eq:
        if (goal.lhs() == goal.rhs()) return Proof::eq_refl();
        break;
      case K::And: {
        if (auto l = prove(goal.left(), budget - 1)) {
          int rest = budget - 1 - static_cast<int>(l->size());
          if (auto r = prove(goal.right(), rest))
            return Proof::and_intro(*l, *r);
        }
        break;
      }
      case K::Implies: {
        hyps.push_back(goal.left());
        auto p = prove(goal.right(), budget - 1);
        hyps.pop_back();
        if (p) return Proof::implies_intro(*p);
        break;
      }
      case K::Or: {
        if (auto l = prove(goal.left(), budget - 1)) return Proof::or_intro_l(*l);
        if (auto r = prove(goal.right(), budget - 1)) return Proof::or_intro_r(*r);
        break;
      }
      case K::ForallObj: {
        std::string w = fresh_eigen(goal.binder(), goal);
        Context saved = ctx;
        ctx = ctx.extended({w, std::nullopt});
        auto p = prove(open_obj(goal.body(), ObjectTerm::ref(w)), budget - 1);
        ctx = saved;
        if (p) return Proof::forall_obj_intro(w, *p);
        break;
      }
      case K::ForallArr: {
        std::string w = fresh_eigen(goal.binder(), goal);
        Context saved = ctx;
        ctx = ctx.extended({w, goal.sort()});
        auto p = prove(open_arr(goal.body(), ArrowTerm::ref(w)), budget - 1);
        ctx = saved;
        if (p) return Proof::forall_arr_intro(w, *p);
        break;
      }
      case K::ExistsObj: {
        for (const ObjectTerm& t : object_candidates(goal)) {
          if (auto p = prove(open_obj(goal.body(), t), budget - 1))
            return Proof::exists_obj_intro(t, *p);
        }
        break;
      }
      case K::ExistsArr: {
        for (const ArrowTerm& t : arrow_candidates(goal, goal.sort())) {
          if (auto p = prove(open_arr(goal.body(), t), budget - 1))
            return Proof::exists_arr_intro(t, *p);
        }
        break;
      }
      case K::Bot:
        break;
    }

    for (std::size_t i = 0; i < hyps.size(); ++i) {
      if (auto p = focus(hyps[i], Proof::hypothesis(i), goal, budget - 1)) return p;
    }
    for (std::size_t id = 0; id < theory.axioms.size(); ++id) {
      if (auto p = focus(theory.axioms[id], Proof::axiom(id), goal, budget - 1))
        return p;
    }
    return std::nullopt;
  }

  // Derive `goal` by eliminating from formula `f` (whose proof is `pf`).
  std::optional<Proof> focus(const Formula& f, Proof pf, const Formula& goal,
                             int budget) {
    if (f == goal) return pf;
    if (budget <= 0) return std::nullopt;
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::Bot:
        return Proof::bot_elim(std::move(pf));
      case K::And: {
        if (auto p = focus(f.left(), Proof::and_elim_l(pf, f.right()), goal, budget - 1))
          return p;
        return focus(f.right(), Proof::and_elim_r(pf, f.left()), goal, budget - 1);
      }
      case K::Implies: {
        if (auto arg = prove(f.left(), budget - 1)) {
          Proof step = Proof::implies_elim(std::move(pf), *arg, f.left());
          return focus(f.right(), std::move(step), goal,
                       budget - 1 - static_cast<int>(arg->size()));
        }
        return std::nullopt;
      }
      case K::ForallObj: {
        for (const ObjectTerm& t : object_candidates(goal)) {
          Proof step = Proof::forall_obj_elim(pf, f, t);
          if (auto p = focus(open_obj(f.body(), t), std::move(step), goal, budget - 1))
            return p;
        }
        return std::nullopt;
      }
      case K::ForallArr: {
        for (const ArrowTerm& t : arrow_candidates(goal, f.sort())) {
          Proof step = Proof::forall_arr_elim(pf, f, t);
          if (auto p = focus(open_arr(f.body(), t), std::move(step), goal, budget - 1))
            return p;
        }
        return std::nullopt;
      }
      case K::Eq: {
        if (goal.kind() == K::Eq && goal.lhs() == f.rhs() && goal.rhs() == f.lhs())
          return Proof::eq_sym(std::move(pf));
        return std::nullopt;
      }
      default:
        return std::nullopt;
    }
  }
};

}  // namespace

std::optional<Proof> bounded_search(const Judgement& j, std::size_t depth) {
  check_context(j.theory.signature, j.context);
  for (const Formula& h : j.hypotheses) check_formula(j.theory.signature, j.context, h);
  check_formula(j.theory.signature, j.context, j.conclusion);
  Searcher s{j.theory, j.context, j.hypotheses};
  auto p = s.prove(j.conclusion, static_cast<int>(depth));
  if (p && p->size() > depth) return std::nullopt;
  if (p) check_proof(j, *p);
  return p;
}

// ---------------------------------------------------------------------------
// Certificates

namespace {

struct RuleInfo {
  Rule rule;
  const char* name;
  int premises;
  const char* payload;  // n: number, F/G: formula, O: object term, A: arrow term, e: name
};

const RuleInfo kRuleTable[] = {
    {Rule::Hypothesis, "hyp", 0, "n"},
    {Rule::Axiom, "axiom", 0, "n"},
    {Rule::AndIntro, "and_intro", 2, ""},
    {Rule::AndElimL, "and_elim_l", 1, "F"},
    {Rule::AndElimR, "and_elim_r", 1, "F"},
    {Rule::OrIntroL, "or_intro_l", 1, ""},
    {Rule::OrIntroR, "or_intro_r", 1, ""},
    {Rule::OrElim, "or_elim", 3, "FG"},
    {Rule::ImpliesIntro, "implies_intro", 1, ""},
    {Rule::ImpliesElim, "implies_elim", 2, "F"},
    {Rule::TopIntro, "top_intro", 0, ""},
    {Rule::BotElim, "bot_elim", 1, ""},
    {Rule::ForallObjIntro, "forall_obj_intro", 1, "e"},
    {Rule::ForallObjElim, "forall_obj_elim", 1, "FO"},
    {Rule::ExistsObjIntro, "exists_obj_intro", 1, "O"},
    {Rule::ExistsObjElim, "exists_obj_elim", 2, "Fe"},
    {Rule::ForallArrIntro, "forall_arr_intro", 1, "e"},
    {Rule::ForallArrElim, "forall_arr_elim", 1, "FA"},
    {Rule::ExistsArrIntro, "exists_arr_intro", 1, "A"},
    {Rule::ExistsArrElim, "exists_arr_elim", 2, "Fe"},
    {Rule::EqRefl, "eq_refl", 0, ""},
    {Rule::EqSym, "eq_sym", 1, ""},
    {Rule::EqTrans, "eq_trans", 2, "A"},
    {Rule::EqCongComp, "eq_cong_comp", 2, ""},
};

const RuleInfo& rule_info(Rule r) {
  for (const RuleInfo& ri : kRuleTable)
    if (ri.rule == r) return ri;
  throw Error(ErrorKind::Internal, "unknown rule");
}

const RuleInfo* rule_info(const std::string& name) {
  for (const RuleInfo& ri : kRuleTable)
    if (name == ri.name) return &ri;
  return nullptr;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

const char* rule_name(Rule r) { return rule_info(r).name; }

std::string print_certificate(const Proof& p) {
  std::ostringstream out;
  std::size_t next = 0;
  struct Emit {
    std::ostringstream& out;
    std::size_t& next;
    std::size_t operator()(const Proof& p) {
      std::vector<std::size_t> prem;
      for (const Proof& q : p.premises()) prem.push_back((*this)(q));
      std::size_t id = next++;
      const RuleInfo& ri = rule_info(p.rule());
      out << id << " " << ri.name;
      for (std::size_t q : prem) out << " " << q;
      for (const char* c = ri.payload; *c; ++c) {
        out << " ; ";
        switch (*c) {
          case 'n': out << p.index(); break;
          case 'F': out << print(p.formula()); break;
          case 'G': out << print(p.formula2()); break;
          case 'O': out << print(p.object_term()); break;
          case 'A': out << print(p.arrow_term()); break;
          case 'e': out << p.eigen(); break;
        }
      }
      out << "\n";
      return id;
    }
  };
  Emit{out, next}(p);
  return out.str();
}

Proof parse_certificate(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::map<std::size_t, Proof> nodes;
  std::optional<std::size_t> last;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (auto h = line.find('#'); h != std::string::npos) line = line.substr(0, h);
    if (trim(line).empty()) continue;
    // split payload segments on ';'
    std::vector<std::string> segs;
    std::size_t start = 0;
    while (true) {
      std::size_t semi = line.find(';', start);
      if (semi == std::string::npos) {
        segs.push_back(line.substr(start));
        break;
      }
      segs.push_back(line.substr(start, semi - start));
      start = semi + 1;
    }
    std::istringstream head(segs[0]);
    std::size_t id;
    std::string rname;
    if (!(head >> id >> rname))
      throw ParseError("bad certificate line", lineNo, 1);
    const RuleInfo* ri = rule_info(rname);
    if (!ri) throw ParseError("unknown rule " + rname, lineNo, 1);
    std::vector<Proof> prem;
    for (int i = 0; i < ri->premises; ++i) {
      std::size_t pid;
      if (!(head >> pid)) throw ParseError("missing premise id", lineNo, 1);
      auto it = nodes.find(pid);
      if (it == nodes.end())
        throw ParseError("premise " + std::to_string(pid) + " not yet defined",
                         lineNo, 1);
      prem.push_back(it->second);
    }
    std::size_t nPayloads = std::string(ri->payload).size();
    if (segs.size() != 1 + nPayloads)
      throw ParseError("expected " + std::to_string(nPayloads) + " payload fields",
                       lineNo, 1);
    std::size_t num = 0;
    Formula fA, fB;
    ObjectTerm ot = ObjectTerm::ref("_");
    ArrowTerm at = ArrowTerm::ref("_");
    std::string eig;
    for (std::size_t i = 0; i < nPayloads; ++i) {
      std::string seg = trim(segs[1 + i]);
      switch (ri->payload[i]) {
        case 'n': num = std::stoull(seg); break;
        case 'F': fA = parse_formula(seg); break;
        case 'G': fB = parse_formula(seg); break;
        case 'O': ot = parse_object_term(seg); break;
        case 'A': at = parse_arrow_term(seg); break;
        case 'e': eig = seg; break;
      }
    }
    Proof built;
    switch (ri->rule) {
      case Rule::Hypothesis: built = Proof::hypothesis(num); break;
      case Rule::Axiom: built = Proof::axiom(num); break;
      case Rule::AndIntro: built = Proof::and_intro(prem[0], prem[1]); break;
      case Rule::AndElimL: built = Proof::and_elim_l(prem[0], fA); break;
      case Rule::AndElimR: built = Proof::and_elim_r(prem[0], fA); break;
      case Rule::OrIntroL: built = Proof::or_intro_l(prem[0]); break;
      case Rule::OrIntroR: built = Proof::or_intro_r(prem[0]); break;
      case Rule::OrElim:
        built = Proof::or_elim(prem[0], prem[1], prem[2], fA, fB);
        break;
      case Rule::ImpliesIntro: built = Proof::implies_intro(prem[0]); break;
      case Rule::ImpliesElim: built = Proof::implies_elim(prem[0], prem[1], fA); break;
      case Rule::TopIntro: built = Proof::top_intro(); break;
      case Rule::BotElim: built = Proof::bot_elim(prem[0]); break;
      case Rule::ForallObjIntro: built = Proof::forall_obj_intro(eig, prem[0]); break;
      case Rule::ForallObjElim: built = Proof::forall_obj_elim(prem[0], fA, ot); break;
      case Rule::ExistsObjIntro: built = Proof::exists_obj_intro(ot, prem[0]); break;
      case Rule::ExistsObjElim:
        built = Proof::exists_obj_elim(prem[0], prem[1], fA, eig);
        break;
      case Rule::ForallArrIntro: built = Proof::forall_arr_intro(eig, prem[0]); break;
      case Rule::ForallArrElim: built = Proof::forall_arr_elim(prem[0], fA, at); break;
      case Rule::ExistsArrIntro: built = Proof::exists_arr_intro(at, prem[0]); break;
      case Rule::ExistsArrElim:
        built = Proof::exists_arr_elim(prem[0], prem[1], fA, eig);
        break;
      case Rule::EqRefl: built = Proof::eq_refl(); break;
      case Rule::EqSym: built = Proof::eq_sym(prem[0]); break;
      case Rule::EqTrans: built = Proof::eq_trans(prem[0], prem[1], at); break;
      case Rule::EqCongComp: built = Proof::eq_cong_comp(prem[0], prem[1]); break;
    }
    nodes[id] = built;
    last = id;
  }
  if (!last) throw ParseError("empty certificate", 1, 1);
  return nodes[*last];
}

}  // namespace catlog
