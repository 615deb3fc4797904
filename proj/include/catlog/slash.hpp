#pragma once

// Models (positive diagrams of provable equations between arrow constants)
// and the slash predicate FP: atomic truth is class membership in the
// model, implication and universal quantification carry a provability side
// condition, existentials are witnessed by canonical constants.

#include "catlog/theoria.hpp"

#include "json.hpp"

namespace catlog {

// A per-hom-sort partition of the theory's arrow constants, plus the
// canonicalization tables that let composite closed terms be folded into a
// class representative: comp maps pairs of representatives to the
// representative of their composite's class, ident maps each object
// constant to the class of its identity arrow.
struct Model {
  Theory theory;
  std::vector<std::vector<std::string>> classes;  // sorted members, sorted lists
  std::map<std::string, std::string> rep;         // constant -> representative
  std::map<std::pair<std::string, std::string>, std::string> compTable;
  std::map<std::string, std::string> identTable;

  const std::string& rep_of(const std::string& constant) const;
  // Representative of a closed arrow term's class; OutOfBudget when the
  // tables cannot fold it.
  std::string canon(const ArrowTerm& t) const;
  bool atom_true(const ArrowTerm& lhs, const ArrowTerm& rhs) const;
  // Sorted class representatives of the given (closed) hom-sort.
  std::vector<std::string> reps_of_sort(const ArrowSort& s) const;
};

// Builds the partition from explicit classes (unlisted constants are
// singletons) and fills the tables by oracle canonicalization, picking the
// lexicographically least provably-equal constant per composite.
Model make_model(const Theory& t, const std::vector<std::vector<std::string>>& classes);

// Invariants: (1) merged pairs and table entries are provable, (2) the
// partition is a well-formed per-sort equivalence, (3) composition is
// congruent across classes. Throws NotProvable / NotEquivalence /
// NotCongruent.
void validate_model(const Theory& t, const Model& m);

// Least model containing the seed identifications: closed under
// equivalence and composition-congruence over the constant set. Seeds must
// be provable.
Model congruence_close(const Theory& t,
                       const std::vector<std::pair<std::string, std::string>>& seeds);

// model { class f g ; class h }
std::vector<std::vector<std::string>> parse_model_classes(const std::string& text);
std::string print_model_classes(const std::vector<std::vector<std::string>>& classes);

// ---------------------------------------------------------------------------
// FP evaluation

struct FpCertificate {
  Formula formula;
  bool verdict = false;
  std::vector<FpCertificate> subs;
  std::optional<int> chosenSide;           // Or: 0 = left, 1 = right
  std::optional<std::string> witness;      // Exists: the witnessing instantiation
  std::vector<std::string> probes;         // quantifiers: instantiations, parallel to subs
  std::optional<bool> oracleYes;           // Implies / Forall side condition
  std::optional<std::string> canonLeft, canonRight;  // atoms
};

// Evaluates the slash clauses over a closed sentence. Object quantifiers
// range over the signature's object constants, arrow quantifiers over the
// model's class representatives of the instantiated sort. Throws
// OracleIncomplete when a required provability side query comes back
// unknown from an incomplete oracle.
FpCertificate fp_eval(const Theory& t, const Model& m, const Formula& sentence);

nlohmann::json certificate_json(const FpCertificate& c);
// Re-evaluates the certificate's formula and compares the serialized
// traces; true when they agree byte for byte.
bool replay_certificate(const Theory& t, const Model& m, const FpCertificate& c);

// FP soundness spot check: fp_eval true must imply oracle-yes. Returns the
// sentence itself as a counterexample when violated (never, if sound).
std::optional<Formula> check_fp_implies_provable(const Theory& t, const Model& m,
                                                 const Formula& sentence);

// fp-certify every axiom of the theory; returns the certificates indexed
// by axiom id, or the id of the first axiom whose FP verdict is false.
struct AxiomCertification {
  std::map<std::size_t, FpCertificate> certificates;
  std::optional<std::size_t> failedAxiom;
};
AxiomCertification certify_axioms(const Theory& t, const Model& m);

}  // namespace catlog
