#pragma once

// Theories over the language of categories, provability oracles, term
// categories (syntactic almost-categories), assignments, and extensions:
// constant-adding definitional extensions and the three-stage
// term-complete extension with its arrow-constant quotient.

#include "catlog/ctxiso.hpp"

#include <filesystem>
#include <memory>

namespace catlog {

struct TheoryData {
  std::string name;
  Signature signature;
  std::vector<Formula> explicitAxioms;  // closed, checked at construction
  std::vector<Formula> allAxioms;       // equality_axioms() then explicit
};

struct OracleAnswer {
  bool yes = false;
  std::optional<Proof> certificate;  // when present, checks against the theory

  static OracleAnswer no() { return {}; }
  static OracleAnswer plain_yes() { return {true, std::nullopt}; }
};

class Oracle {
public:
  virtual ~Oracle() = default;
  // The sentence must be closed and well-formed over the owning theory.
  virtual OracleAnswer query(const Formula& sentence) const = 0;
  // A complete oracle's non-yes answer may be read as refutation.
  virtual bool complete() const = 0;
  virtual std::string describe() const = 0;
  virtual std::shared_ptr<const Oracle> rebind(
      std::shared_ptr<const TheoryData> data) const = 0;
};

class Theory {
public:
  Theory() = default;
  Theory(std::shared_ptr<const TheoryData> data, std::shared_ptr<const Oracle> oracle)
      : data_(std::move(data)), oracle_(std::move(oracle)) {}

  bool valid() const { return data_ != nullptr; }
  const std::string& name() const { return data_->name; }
  const Signature& signature() const { return data_->signature; }
  const std::vector<Formula>& axioms() const { return data_->allAxioms; }
  const std::vector<Formula>& explicit_axioms() const { return data_->explicitAxioms; }
  const std::shared_ptr<const TheoryData>& data() const { return data_; }
  const Oracle& oracle() const { return *oracle_; }
  const std::shared_ptr<const Oracle>& oracle_ptr() const { return oracle_; }

  TheoryView view() const { return {data_->signature, data_->allAxioms}; }
  Theory with_oracle(std::shared_ptr<const Oracle> o) const { return {data_, std::move(o)}; }

private:
  std::shared_ptr<const TheoryData> data_;
  std::shared_ptr<const Oracle> oracle_;
};

// Validates the signature and axioms (closed, well-formed); prepends the
// equality and category axioms.
std::shared_ptr<const TheoryData> make_theory_data(std::string name, Signature sig,
                                                   std::vector<Formula> axioms);

// Oracle realizations.
//
// The congruence oracle decides the ground equational fragment by closure
// over composition words up to `maxWordLength`, instantiating universally
// quantified (conditional) equations over the signature's constants; its
// yes answers on in-budget equations carry kernel proofs. Non-equational
// sentences are evaluated in the finite term model whose elements are the
// word classes and whose quantifiers range over the signature's constants.
std::shared_ptr<const Oracle> make_congruence_oracle(
    std::shared_ptr<const TheoryData> data, std::size_t maxWordLength = 4);
std::shared_ptr<const Oracle> make_search_oracle(
    std::shared_ptr<const TheoryData> data, std::size_t depth);
// A directory of proof certificates keyed by digest(print(sentence)).
std::shared_ptr<const Oracle> make_certificate_oracle(
    std::shared_ptr<const TheoryData> data, std::filesystem::path dir);

Theory make_congruence_theory(std::string name, Signature sig,
                              std::vector<Formula> axioms,
                              std::size_t maxWordLength = 4);

// ---------------------------------------------------------------------------
// Term categories

// The almost-category of terms of a theory in a context: objects are the
// object terms, arrows the syntactic arrow terms up to a depth bound.
// Identity and composition are term formation, so 1_A and 1_A . 1_A are
// distinct arrows.
struct TermCategory {
  Theory theory;
  Context context;
  std::size_t depthBound = 0;

  std::vector<ObjectTerm> objects() const;
  // complete and duplicate-free for the bound, sorted
  std::vector<ArrowTerm> hom(const ObjectTerm& a, const ObjectTerm& b) const;
};

TermCategory term_category(const Theory& t, const Context& ctx, std::size_t depthBound);

// ---------------------------------------------------------------------------
// Assignments

// A variable assignment: a sort-correct map of constants and context
// variables to terms of a target scope, extended homomorphically (and on
// the nose through id and comp) to all terms and formulas.
struct Assignment {
  Subst map;

  static Assignment identity(const Signature& sig, const Context& ctx);
};

// Applying requires every free name to be mapped (MissingBinding otherwise).
ObjectTerm apply_assignment(const Assignment& a, const ObjectTerm& t);
ArrowTerm apply_assignment(const Assignment& a, const ArrowTerm& t);
Formula apply_assignment(const Assignment& a, const Formula& f);

Assignment compose(const Assignment& outer, const Assignment& inner);

// Sort-correctness of `a` from (srcSig, srcCtx) into (tgtSig, tgtCtx).
void check_assignment(const Signature& srcSig, const Context& srcCtx,
                      const Signature& tgtSig, const Context& tgtCtx,
                      const Assignment& a);

// ---------------------------------------------------------------------------
// Extensions

struct Extension {
  Theory source;
  Theory target;
  Assignment translation;  // source constants into the target's terms

  Formula translate(const Formula& f) const { return apply_assignment(translation, f); }
  ArrowTerm translate(const ArrowTerm& t) const { return apply_assignment(translation, t); }

  // Lazy invariant: every translated source axiom is target-provable.
  void verify_axioms() const;
};

Extension identity_extension(const Theory& t);
Extension compose(const Extension& second, const Extension& first);

// Adds, for each entry (delta, P) with oracle-certified "exists a unique
// delta with P", one constant per delta variable (with translated
// dependent sorts) and the axiom P at those constants.
Extension extend_by_constants(const Theory& t,
                              const std::vector<std::pair<Context, Formula>>& entries);

struct TermCompleteExtension {
  Extension extension;
  std::size_t entryBudget = 0;
  bool stage1Exhausted = false;  // candidate enumeration truncated by budget
  bool stage2Exhausted = false;
  // arrow constants merged by the stage-3 quotient: original -> canonical
  std::map<std::string, std::string> merged;
};

// Three stages: certified object-level entries, certified unique arrows
// between constants, then the quotient of arrow constants by provable
// equality (keeping the lexicographically least constant of each class).
TermCompleteExtension term_complete_extension(const Theory& t, std::size_t entryBudget);

// The unique arrow constant of the extension's target provably equal to t;
// throws OutOfBudget when no constant of t's sort is provably equal to it.
std::string canonical_constant(const TermCompleteExtension& e, const ArrowTerm& t);

// ---------------------------------------------------------------------------
// Theory files:  theory <name> { object A ... arrow f : A -> B ... axiom ... }

struct ParsedTheory {
  std::string name;
  Signature signature;
  std::vector<Formula> axioms;
};

ParsedTheory parse_theory(const std::string& text);
std::string print_theory(const std::string& name, const Signature& sig,
                         const std::vector<Formula>& axioms);

}  // namespace catlog
