#pragma once

// Builders for equational proof steps: instances of the identity and
// associativity axioms, congruence steps, and transitivity chains.
// Assumes the owning theory lists equality_axioms() first, so the axiom
// ids kAxiomIdentity / kAxiomAssoc are valid.

#include "catlog/kernel.hpp"

namespace catlog {

struct EqReasoner {
  const Signature& sig;
  const Context& ctx;

  ArrowSort sort_of(const ArrowTerm& t) const { return infer_sort(sig, ctx, t); }

  // A fully applied instance of a closed axiom: forall-eliminations for
  // `objects` then `arrows`, in prefix order.
  static Proof instantiate_axiom(std::size_t axiomId, const Formula& axiom,
                                 const std::vector<ObjectTerm>& objects,
                                 const std::vector<ArrowTerm>& arrows);

  Proof identity_left(const ArrowTerm& t) const;   // t = comp (id cod) t
  Proof identity_right(const ArrowTerm& t) const;  // t = comp t (id dom)
  // comp h (comp g f) = comp (comp h g) f
  Proof assoc(const ArrowTerm& f, const ArrowTerm& g, const ArrowTerm& h) const;

  static Proof sym(Proof p) { return Proof::eq_sym(std::move(p)); }
  // From g1 = g2 conclude comp g1 f = comp g2 f.
  static Proof cong_left(Proof outerEq) {
    return Proof::eq_cong_comp(Proof::eq_refl(), std::move(outerEq));
  }
  // From f1 = f2 conclude comp g f1 = comp g f2.
  static Proof cong_right(Proof innerEq) {
    return Proof::eq_cong_comp(std::move(innerEq), Proof::eq_refl());
  }
};

// A left-to-right chain of rewrites; `proof()` derives start = current.
class EqChain {
public:
  explicit EqChain(ArrowTerm start)
      : start_(start), current_(std::move(start)) {}

  const ArrowTerm& current() const { return current_; }

  // Append a step justified by a proof of current = next.
  EqChain& to(ArrowTerm next, Proof justification);

  // Proof of start = current (eq_refl when no steps were taken).
  Proof proof() const;

private:
  ArrowTerm start_, current_;
  std::optional<Proof> proof_;
};

}  // namespace catlog
