#pragma once

// Context renaming, context isomorphisms, expansion of "there exists a
// unique up to unique isomorphism Delta such that P", and a generator for
// kernel-checked transport proofs: truth is invariant under context
// isomorphism, and the proof of that fact is built by induction on P.

#include "catlog/eqreason.hpp"

namespace catlog {

struct RenamedContext {
  Context context;
  Subst renaming;  // original variable -> renamed variable
};

// Fresh copy of delta with `tag` appended to each variable name (collisions
// against `avoid` are resolved with numeric suffixes); sorts are carried
// through the renaming.
RenamedContext rename_context(const Context& delta, const std::string& tag,
                              std::set<std::string> avoid = {});

// The data of a context isomorphism between two renamed copies of delta.
struct ContextIso {
  Context delta1, delta2;
  Subst to1, to2;
  // (object variable of delta, component arrow variable name), in
  // declaration order
  std::vector<std::pair<std::string, std::string>> components;
  Context tauContext;  // gamma, delta1, delta2, components
  Formula condition;   // squares then invertibility clauses, one conjunction
  std::vector<Formula> clauses;
  std::size_t squareCount = 0;  // clauses[0..squareCount) are squares
};

ContextIso iso_formula(const Signature& sig, const Context& gamma,
                       const Context& delta);

// exists delta (P)  /\  forall delta1 delta2 (P1 /\ P2 => there is exactly
// one family of component isomorphisms). Componentwise equality of two
// isomorphism families compares object-variable components only.
Formula expand_unique_exists(const Signature& sig, const Context& gamma,
                             const Context& delta, const Formula& P);

struct TransportResult {
  Formula statement;  // forall delta1 delta2 tau (cond => (P1=>P2) /\ (P2=>P1))
  Proof proof;
};

// Kernel-checked proof of isomorphism invariance for P over delta, built by
// induction on P: the atomic case rewrites along transport squares, the
// quantifier cases extend the isomorphism by an identity or a conjugated
// component. The proof assumes the ambient judgement has no hypotheses and
// that the theory's axiom list begins with equality_axioms().
TransportResult transport_proof(const Signature& sig, const Context& gamma,
                                const Context& delta, const Formula& P);

// Right-folded conjunction of clauses (Top when empty); decompose inverts it.
Formula fold_conj(const std::vector<Formula>& clauses);
std::vector<Formula> decompose_conj(const Formula& f, std::size_t count);

// Universal/existential closure over a context, innermost declaration last.
Formula bind_forall_context(const Context& ctx, const Formula& body);
Formula bind_exists_context(const Context& ctx, const Formula& body);

}  // namespace catlog
