#pragma once

// The constructive content of slash soundness: a structural recursion over
// a checked derivation that turns FP certificates of the axioms into an FP
// certificate of the conclusion. Disjunction elimination follows the
// disjunct the major premise's certificate chose; existential elimination
// binds the eigenvariable to the certificate's witness. The payload of a
// closed existential or disjunctive conclusion is therefore an explicit
// witness assignment or a chosen side.

#include "catlog/slash.hpp"

namespace catlog {

struct ExtractionResult {
  enum class Payload { Witness, Disjunct, Plain };

  Formula conclusion;
  Payload payloadKind = Payload::Plain;
  // leading existential prefix: (binder name, canonical constant)
  std::vector<std::pair<std::string, std::string>> witnesses;
  std::optional<int> disjunct;  // 0 = left, 1 = right
  Formula instantiated;         // conclusion with the payload applied
  FpCertificate certificate;    // fp_eval(instantiated); verdict is true
};

// Requires: check_proof accepts (j, p); j has an empty context and no
// hypotheses; every axiom p uses appears in axiomCerts with a true
// verdict (AxiomNotCertified otherwise).
ExtractionResult extract(const Theory& t, const Model& m,
                         const std::map<std::size_t, FpCertificate>& axiomCerts,
                         const Judgement& j, const Proof& p);

struct GoalOutcome {
  Formula goal;
  std::string goalDigest;
  ExtractionResult result;
};

struct CriterionReport {
  std::vector<GoalOutcome> goals;
  bool consistencyOk = true;
};

// Batch extraction. A checked proof of bot among the goals is an
// InconsistencyWitness (impossible over certified axioms); unchecked
// proofs are rejected by the kernel before extraction.
CriterionReport run_criterion(const Theory& t, const Model& m,
                              const std::map<std::size_t, FpCertificate>& axiomCerts,
                              const std::vector<std::pair<Proof, Formula>>& goals);

}  // namespace catlog
