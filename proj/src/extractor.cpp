#include "catlog/extractor.hpp"

#include <algorithm>

namespace catlog {

namespace {

struct ExtractState {
  const Theory& theory;
  const Model& model;
  const std::map<std::size_t, FpCertificate>& axiomCerts;
  std::map<std::string, FpCertificate> memo;

  // memoized canonical evaluation of a closed instance
  const FpCertificate& fp(const Formula& instance) {
    std::string key = print(instance);
    auto it = memo.find(key);
    if (it == memo.end())
      it = memo.emplace(key, fp_eval(theory, model, instance)).first;
    return it->second;
  }

  void ensure(bool cond, const std::string& what) const {
    if (!cond)
      throw Error(ErrorKind::Internal, "extraction soundness broke: " + what);
  }

  bool side_condition(const Formula& instance) const {
    OracleAnswer a = theory.oracle().query(instance);
    if (a.yes) return true;
    if (!theory.oracle().complete())
      throw Error(ErrorKind::OracleIncomplete, print(instance));
    return false;
  }

  // `expected` is the node's conclusion with eigenvariables still free;
  // `assign` maps them (and nothing else) to canonical constants.
  FpCertificate go(const Proof& p, const Formula& expected, const Subst& assign,
                   const std::vector<FpCertificate>& hyps) {
    Formula instance = substitute(expected, assign);
    switch (p.rule()) {
      case Rule::Hypothesis:
        return hyps[p.index()];
      case Rule::Axiom: {
        auto it = axiomCerts.find(p.index());
        if (it == axiomCerts.end() || !it->second.verdict)
          throw Error(ErrorKind::AxiomNotCertified, std::to_string(p.index()));
        return it->second;
      }
      case Rule::AndIntro: {
        FpCertificate c;
        c.formula = instance;
        c.subs.push_back(go(p.premises()[0], expected.left(), assign, hyps));
        c.subs.push_back(go(p.premises()[1], expected.right(), assign, hyps));
        c.verdict = c.subs[0].verdict && c.subs[1].verdict;
        ensure(c.verdict, "and_intro");
        return c;
      }
      case Rule::AndElimL: {
        FpCertificate c =
            go(p.premises()[0], Formula::conj(expected, p.formula()), assign, hyps);
        ensure(c.subs.size() == 2, "and shape");
        return c.subs[0];
      }
      case Rule::AndElimR: {
        FpCertificate c =
            go(p.premises()[0], Formula::conj(p.formula(), expected), assign, hyps);
        ensure(c.subs.size() == 2, "and shape");
        return c.subs[1];
      }
      case Rule::OrIntroL: {
        FpCertificate c;
        c.formula = instance;
        c.subs.push_back(go(p.premises()[0], expected.left(), assign, hyps));
        c.subs.push_back(fp(substitute(expected.right(), assign)));
        ensure(c.subs[0].verdict, "or_intro_l");
        c.verdict = true;
        c.chosenSide = 0;
        return c;
      }
      case Rule::OrIntroR: {
        FpCertificate c;
        c.formula = instance;
        c.subs.push_back(fp(substitute(expected.left(), assign)));
        c.subs.push_back(go(p.premises()[0], expected.right(), assign, hyps));
        ensure(c.subs[1].verdict, "or_intro_r");
        c.verdict = true;
        c.chosenSide = c.subs[0].verdict ? 0 : 1;
        return c;
      }
      case Rule::OrElim: {
        Formula dis = Formula::disj(p.formula(), p.formula2());
        FpCertificate d = go(p.premises()[0], dis, assign, hyps);
        ensure(d.verdict && d.chosenSide.has_value(), "or_elim major premise");
        int side = *d.chosenSide;
        auto withBranch = hyps;
        withBranch.push_back(d.subs[side]);
        const Proof& branch = p.premises()[side == 0 ? 1 : 2];
        return go(branch, expected, assign, withBranch);
      }
      case Rule::ImpliesIntro: {
        FpCertificate c;
        c.formula = instance;
        FpCertificate ante = fp(substitute(expected.left(), assign));
        bool functional = true;
        c.subs.push_back(ante);
        if (ante.verdict) {
          auto with = hyps;
          with.push_back(ante);
          c.subs.push_back(go(p.premises()[0], expected.right(), assign, with));
          functional = c.subs[1].verdict;
        }
        ensure(functional, "implies_intro body");
        c.oracleYes = side_condition(instance);
        ensure(*c.oracleYes, "implies_intro provability");
        c.verdict = true;
        return c;
      }
      case Rule::ImpliesElim: {
        FpCertificate imp = go(p.premises()[0],
                               Formula::implies(p.formula(), expected), assign, hyps);
        FpCertificate arg = go(p.premises()[1], p.formula(), assign, hyps);
        ensure(imp.verdict && arg.verdict, "implies_elim premises");
        ensure(imp.subs.size() == 2, "implies_elim: consequent not probed");
        return imp.subs[1];
      }
      case Rule::TopIntro: {
        FpCertificate c;
        c.formula = Formula::top();
        c.verdict = true;
        return c;
      }
      case Rule::BotElim: {
        FpCertificate sub = go(p.premises()[0], Formula::bot(), assign, hyps);
        (void)sub;
        throw Error(ErrorKind::InconsistencyWitness,
                    "a certified derivation reached bot");
      }
      case Rule::ForallObjIntro: {
        FpCertificate c;
        c.formula = instance;
        Formula opened = open_obj(expected.body(), ObjectTerm::ref(p.eigen()));
        bool all = true;
        for (const auto& o : theory.signature().objects) {
          Subst a2 = assign;
          a2.objects[p.eigen()] = ObjectTerm::ref(o);
          c.probes.push_back(o);
          c.subs.push_back(go(p.premises()[0], opened, a2, hyps));
          all = all && c.subs.back().verdict;
        }
        ensure(all, "forall_obj_intro probes");
        c.oracleYes = side_condition(instance);
        ensure(*c.oracleYes, "forall_obj_intro provability");
        c.verdict = true;
        return c;
      }
      case Rule::ForallObjElim: {
        FpCertificate u = go(p.premises()[0], p.formula(), assign, hyps);
        ensure(u.verdict, "forall_obj_elim premise");
        ObjectTerm at = substitute(p.object_term(), assign);
        auto it = std::find(u.probes.begin(), u.probes.end(), at.name());
        ensure(it != u.probes.end(), "forall_obj_elim instance probed");
        return u.subs[static_cast<std::size_t>(it - u.probes.begin())];
      }
      case Rule::ExistsObjIntro: {
        FpCertificate c;
        c.formula = instance;
        ObjectTerm at = substitute(p.object_term(), assign);
        FpCertificate sub =
            go(p.premises()[0], open_obj(expected.body(), p.object_term()), assign, hyps);
        ensure(sub.verdict, "exists_obj_intro premise");
        c.witness = at.name();
        c.probes.push_back(at.name());
        c.subs.push_back(std::move(sub));
        c.verdict = true;
        return c;
      }
      case Rule::ExistsObjElim: {
        FpCertificate ex = go(p.premises()[0], p.formula(), assign, hyps);
        ensure(ex.verdict && ex.witness.has_value(), "exists_obj_elim major premise");
        Subst a2 = assign;
        a2.objects[p.eigen()] = ObjectTerm::ref(*ex.witness);
        auto with = hyps;
        with.push_back(ex.subs.back());
        return go(p.premises()[1], expected, a2, with);
      }
      case Rule::ForallArrIntro: {
        FpCertificate c;
        c.formula = instance;
        Formula opened = open_arr(expected.body(), ArrowTerm::ref(p.eigen()));
        ArrowSort s = substitute(expected.sort(), assign);
        bool all = true;
        for (const std::string& r : model.reps_of_sort(s)) {
          Subst a2 = assign;
          a2.arrows[p.eigen()] = ArrowTerm::ref(r);
          c.probes.push_back(r);
          c.subs.push_back(go(p.premises()[0], opened, a2, hyps));
          all = all && c.subs.back().verdict;
        }
        ensure(all, "forall_arr_intro probes");
        c.oracleYes = side_condition(instance);
        ensure(*c.oracleYes, "forall_arr_intro provability");
        c.verdict = true;
        return c;
      }
      case Rule::ForallArrElim: {
        FpCertificate u = go(p.premises()[0], p.formula(), assign, hyps);
        ensure(u.verdict, "forall_arr_elim premise");
        std::string r = model.canon(substitute(p.arrow_term(), assign));
        auto it = std::find(u.probes.begin(), u.probes.end(), r);
        ensure(it != u.probes.end(), "forall_arr_elim instance probed");
        return u.subs[static_cast<std::size_t>(it - u.probes.begin())];
      }
      case Rule::ExistsArrIntro: {
        FpCertificate c;
        c.formula = instance;
        FpCertificate raw =
            go(p.premises()[0], open_arr(expected.body(), p.arrow_term()), assign, hyps);
        ensure(raw.verdict, "exists_arr_intro premise");
        std::string r = model.canon(substitute(p.arrow_term(), assign));
        const FpCertificate& sub = fp(open_arr(instance.body(), ArrowTerm::ref(r)));
        ensure(sub.verdict, "exists_arr_intro canonical witness");
        c.witness = r;
        c.probes.push_back(r);
        c.subs.push_back(sub);
        c.verdict = true;
        return c;
      }
      case Rule::ExistsArrElim: {
        FpCertificate ex = go(p.premises()[0], p.formula(), assign, hyps);
        ensure(ex.verdict && ex.witness.has_value(), "exists_arr_elim major premise");
        Subst a2 = assign;
        a2.arrows[p.eigen()] = ArrowTerm::ref(*ex.witness);
        auto with = hyps;
        with.push_back(ex.subs.back());
        return go(p.premises()[1], expected, a2, with);
      }
      case Rule::EqRefl:
      case Rule::EqSym:
      case Rule::EqTrans:
      case Rule::EqCongComp: {
        // walk the premises to keep the certificate flow honest, then read
        // the conclusion atom off the model
        switch (p.rule()) {
          case Rule::EqSym:
            go(p.premises()[0], Formula::eq(expected.rhs(), expected.lhs()), assign, hyps);
            break;
          case Rule::EqTrans:
            go(p.premises()[0], Formula::eq(expected.lhs(), p.arrow_term()), assign, hyps);
            go(p.premises()[1], Formula::eq(p.arrow_term(), expected.rhs()), assign, hyps);
            break;
          case Rule::EqCongComp:
            go(p.premises()[0],
               Formula::eq(expected.lhs().inner(), expected.rhs().inner()), assign, hyps);
            go(p.premises()[1],
               Formula::eq(expected.lhs().outer(), expected.rhs().outer()), assign, hyps);
            break;
          default:
            break;
        }
        const FpCertificate& c = fp(instance);
        ensure(c.verdict, std::string(rule_name(p.rule())) + " conclusion");
        return c;
      }
    }
    throw Error(ErrorKind::Internal, "extract: bad rule");
  }
};

}  // namespace

ExtractionResult extract(const Theory& t, const Model& m,
                         const std::map<std::size_t, FpCertificate>& axiomCerts,
                         const Judgement& j, const Proof& p) {
  if (!j.context.empty() || !j.hypotheses.empty())
    throw Error(ErrorKind::InvalidInput,
                "extraction works on closed judgements without hypotheses");
  check_proof(j, p);

  ExtractState st{t, m, axiomCerts, {}};
  FpCertificate top = st.go(p, j.conclusion, {}, {});
  st.ensure(top.verdict, "conclusion certificate");

  ExtractionResult out;
  out.conclusion = j.conclusion;

  // payload: leading existential prefix, or the chosen disjunct
  const FpCertificate* cur = &top;
  if (cur->formula.is_quantifier() && cur->witness.has_value()) {
    Formula f = cur->formula;
    while ((f.kind() == Formula::Kind::ExistsObj || f.kind() == Formula::Kind::ExistsArr) &&
           cur->witness.has_value()) {
      out.witnesses.emplace_back(f.binder().empty() ? "_" : f.binder(), *cur->witness);
      cur = &cur->subs.back();
      f = cur->formula;
    }
    out.payloadKind = ExtractionResult::Payload::Witness;
  } else if (cur->formula.kind() == Formula::Kind::Or && cur->chosenSide.has_value()) {
    out.payloadKind = ExtractionResult::Payload::Disjunct;
    out.disjunct = *cur->chosenSide;
    cur = &cur->subs[*cur->chosenSide];
  } else {
    out.payloadKind = ExtractionResult::Payload::Plain;
  }
  out.instantiated = cur->formula;
  out.certificate = fp_eval(t, m, out.instantiated);
  st.ensure(out.certificate.verdict, "instantiated conclusion");
  return out;
}

CriterionReport run_criterion(const Theory& t, const Model& m,
                              const std::map<std::size_t, FpCertificate>& axiomCerts,
                              const std::vector<std::pair<Proof, Formula>>& goals) {
  CriterionReport report;
  for (const auto& [proof, goal] : goals) {
    Judgement j{t.view(), {}, {}, goal};
    if (goal.kind() == Formula::Kind::Bot) {
      check_proof(j, proof);  // throws on invalid proofs before extraction
      report.consistencyOk = false;
      throw Error(ErrorKind::InconsistencyWitness,
                  "a checked proof of bot was presented");
    }
    GoalOutcome outcome;
    outcome.goal = goal;
    outcome.goalDigest = digest(print(goal));
    outcome.result = extract(t, m, axiomCerts, j, proof);
    report.goals.push_back(std::move(outcome));
  }
  return report;
}

}  // namespace catlog
