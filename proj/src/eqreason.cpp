#include "catlog/eqreason.hpp"

namespace catlog {

Proof EqReasoner::instantiate_axiom(std::size_t axiomId, const Formula& axiom,
                                    const std::vector<ObjectTerm>& objects,
                                    const std::vector<ArrowTerm>& arrows) {
  Proof p = Proof::axiom(axiomId);
  Formula cur = axiom;
  for (const ObjectTerm& t : objects) {
    if (cur.kind() != Formula::Kind::ForallObj)
      throw Error(ErrorKind::Internal, "instantiate_axiom: not an object prefix");
    p = Proof::forall_obj_elim(std::move(p), cur, t);
    cur = open_obj(cur.body(), t);
  }
  for (const ArrowTerm& t : arrows) {
    if (cur.kind() != Formula::Kind::ForallArr)
      throw Error(ErrorKind::Internal, "instantiate_axiom: not an arrow prefix");
    p = Proof::forall_arr_elim(std::move(p), cur, t);
    cur = open_arr(cur.body(), t);
  }
  return p;
}

Proof EqReasoner::identity_left(const ArrowTerm& t) const {
  ArrowSort s = sort_of(t);
  Formula ax = equality_axioms(sig)[kAxiomIdentity];
  Proof inst = instantiate_axiom(kAxiomIdentity, ax, {s.dom, s.cod}, {t});
  // instance: t = comp (id cod) t /\ t = comp t (id dom)
  Formula other = Formula::eq(t, ArrowTerm::comp(t, ArrowTerm::id(s.dom)));
  return Proof::and_elim_l(std::move(inst), std::move(other));
}

Proof EqReasoner::identity_right(const ArrowTerm& t) const {
  ArrowSort s = sort_of(t);
  Formula ax = equality_axioms(sig)[kAxiomIdentity];
  Proof inst = instantiate_axiom(kAxiomIdentity, ax, {s.dom, s.cod}, {t});
  Formula other = Formula::eq(t, ArrowTerm::comp(ArrowTerm::id(s.cod), t));
  return Proof::and_elim_r(std::move(inst), std::move(other));
}

Proof EqReasoner::assoc(const ArrowTerm& f, const ArrowTerm& g,
                        const ArrowTerm& h) const {
  ArrowSort sf = sort_of(f);
  ArrowSort sg = sort_of(g);
  ArrowSort sh = sort_of(h);
  Formula ax = equality_axioms(sig)[kAxiomAssoc];
  return instantiate_axiom(kAxiomAssoc, ax,
                           {sf.dom, sg.dom, sh.dom, sh.cod}, {f, g, h});
}

EqChain& EqChain::to(ArrowTerm next, Proof justification) {
  if (!proof_) {
    proof_ = std::move(justification);
  } else {
    proof_ = Proof::eq_trans(std::move(*proof_), std::move(justification), current_);
  }
  current_ = std::move(next);
  return *this;
}

Proof EqChain::proof() const {
  if (!proof_) return Proof::eq_refl();
  return *proof_;
}

}  // namespace catlog
