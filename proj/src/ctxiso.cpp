#include "catlog/ctxiso.hpp"

#include <algorithm>

namespace catlog {

Formula fold_conj(const std::vector<Formula>& clauses) {
  if (clauses.empty()) return Formula::top();
  Formula acc = clauses.back();
  for (std::size_t i = clauses.size() - 1; i-- > 0;)
    acc = Formula::conj(clauses[i], acc);
  return acc;
}

std::vector<Formula> decompose_conj(const Formula& f, std::size_t count) {
  std::vector<Formula> out;
  if (count == 0) {
    if (f.kind() != Formula::Kind::Top)
      throw Error(ErrorKind::Internal, "decompose_conj: expected top");
    return out;
  }
  Formula cur = f;
  for (std::size_t i = 0; i + 1 < count; ++i) {
    if (cur.kind() != Formula::Kind::And)
      throw Error(ErrorKind::Internal, "decompose_conj: expected conjunction");
    out.push_back(cur.left());
    cur = cur.right();
  }
  out.push_back(cur);
  return out;
}

Formula bind_forall_context(const Context& ctx, const Formula& body) {
  Formula acc = body;
  for (std::size_t i = ctx.decls.size(); i-- > 0;) {
    const ContextDecl& d = ctx.decls[i];
    acc = d.is_object() ? bind_forall_obj(d.name, acc)
                        : bind_forall_arr(d.name, *d.sort, acc);
  }
  return acc;
}

Formula bind_exists_context(const Context& ctx, const Formula& body) {
  Formula acc = body;
  for (std::size_t i = ctx.decls.size(); i-- > 0;) {
    const ContextDecl& d = ctx.decls[i];
    acc = d.is_object() ? bind_exists_obj(d.name, acc)
                        : bind_exists_arr(d.name, *d.sort, acc);
  }
  return acc;
}

RenamedContext rename_context(const Context& delta, const std::string& tag,
                              std::set<std::string> avoid) {
  for (const auto& d : delta.decls) avoid.insert(d.name);
  FreeNames fn = free_names(delta);
  avoid.insert(fn.objects.begin(), fn.objects.end());
  RenamedContext out;
  for (const auto& d : delta.decls) {
    std::string nn = fresh_name(d.name + tag, avoid);
    avoid.insert(nn);
    ContextDecl nd{nn, d.sort ? std::optional<ArrowSort>(substitute(*d.sort, out.renaming))
                              : std::nullopt};
    out.context.decls.push_back(std::move(nd));
    if (d.is_object())
      out.renaming.objects[d.name] = ObjectTerm::ref(nn);
    else
      out.renaming.arrows[d.name] = ArrowTerm::ref(nn);
  }
  return out;
}

namespace {

Context concat(const Context& a, const Context& b) {
  Context out = a;
  for (const auto& d : b.decls) out.decls.push_back(d);
  return out;
}

RenamedContext rename_with(const Context& delta, const std::string& tag,
                           NameSupply& names) {
  RenamedContext out;
  for (const auto& d : delta.decls) {
    std::string nn = names.fresh(d.name + tag);
    ContextDecl nd{nn, d.sort ? std::optional<ArrowSort>(substitute(*d.sort, out.renaming))
                              : std::nullopt};
    out.context.decls.push_back(std::move(nd));
    if (d.is_object())
      out.renaming.objects[d.name] = ObjectTerm::ref(nn);
    else
      out.renaming.arrows[d.name] = ArrowTerm::ref(nn);
  }
  return out;
}

ContextIso make_iso(const Signature& sig, const Context& gamma,
                    const Context& delta, NameSupply& names) {
  (void)sig;
  ContextIso iso;
  RenamedContext r1 = rename_with(delta, "1", names);
  RenamedContext r2 = rename_with(delta, "2", names);
  iso.delta1 = r1.context;
  iso.delta2 = r2.context;
  iso.to1 = r1.renaming;
  iso.to2 = r2.renaming;

  for (const auto& d : delta.decls)
    if (d.is_object())
      iso.components.emplace_back(d.name, names.fresh("f_" + d.name));

  // tau for an object term of (gamma, delta): the component variable for a
  // delta object variable; the identity for anything ambient.
  auto tau = [&](const ObjectTerm& s) -> ArrowTerm {
    if (s.kind() == ObjectTerm::Kind::Ref) {
      for (const auto& [v, f] : iso.components)
        if (v == s.name()) return ArrowTerm::ref(f);
    }
    return ArrowTerm::id(s);
  };

  for (const auto& d : delta.decls) {
    if (d.is_object()) continue;
    const ArrowSort& s = *d.sort;
    ArrowTerm g1 = iso.to1.arrows.at(d.name);
    ArrowTerm g2 = iso.to2.arrows.at(d.name);
    iso.clauses.push_back(Formula::eq(ArrowTerm::comp(g2, tau(s.dom)),
                                      ArrowTerm::comp(tau(s.cod), g1)));
  }
  iso.squareCount = iso.clauses.size();

  for (const auto& [v, f] : iso.components) {
    ObjectTerm v1 = iso.to1.objects.at(v);
    ObjectTerm v2 = iso.to2.objects.at(v);
    std::string g = names.fresh("g");
    Formula body = Formula::conj(
        Formula::eq(ArrowTerm::comp(ArrowTerm::ref(g), ArrowTerm::ref(f)),
                    ArrowTerm::id(v1)),
        Formula::eq(ArrowTerm::comp(ArrowTerm::ref(f), ArrowTerm::ref(g)),
                    ArrowTerm::id(v2)));
    iso.clauses.push_back(bind_exists_arr(g, {v2, v1}, body));
  }
  iso.condition = fold_conj(iso.clauses);

  iso.tauContext = concat(concat(gamma, iso.delta1), iso.delta2);
  for (const auto& [v, f] : iso.components)
    iso.tauContext.decls.push_back(
        {f, ArrowSort{iso.to1.objects.at(v), iso.to2.objects.at(v)}});
  return iso;
}

}  // namespace

ContextIso iso_formula(const Signature& sig, const Context& gamma,
                       const Context& delta) {
  check_context(sig, concat(gamma, delta));
  NameSupply names;
  names.reserve(sig);
  names.reserve(gamma);
  names.reserve(delta);
  ContextIso iso = make_iso(sig, gamma, delta, names);
  check_context(sig, iso.tauContext);
  check_formula(sig, iso.tauContext, iso.condition);
  return iso;
}

Formula expand_unique_exists(const Signature& sig, const Context& gamma,
                             const Context& delta, const Formula& P) {
  check_formula(sig, concat(gamma, delta), P);
  NameSupply names;
  names.reserve(sig);
  names.reserve(gamma);
  names.reserve(delta);
  names.reserve(free_names(P));
  ContextIso iso = make_iso(sig, gamma, delta, names);

  Formula first = bind_exists_context(delta, P);

  Formula P1 = substitute(P, iso.to1);
  Formula P2 = substitute(P, iso.to2);

  // Uniqueness of the component family: exists f_V (cond /\ forall f'_V
  // (cond' => /\ f_V = f'_V)).
  Subst prime;
  std::vector<std::pair<std::string, ArrowSort>> primed;
  std::vector<Formula> compEqs;
  for (const auto& [v, f] : iso.components) {
    std::string fp = names.fresh(f + "p");
    prime.arrows[f] = ArrowTerm::ref(fp);
    primed.emplace_back(fp, ArrowSort{iso.to1.objects.at(v), iso.to2.objects.at(v)});
    compEqs.push_back(Formula::eq(ArrowTerm::ref(f), ArrowTerm::ref(fp)));
  }
  Formula inner = Formula::implies(substitute(iso.condition, prime),
                                   fold_conj(compEqs));
  for (std::size_t i = primed.size(); i-- > 0;)
    inner = bind_forall_arr(primed[i].first, primed[i].second, inner);
  Formula uniq = Formula::conj(iso.condition, inner);
  for (std::size_t i = iso.components.size(); i-- > 0;) {
    const auto& [v, f] = iso.components[i];
    uniq = bind_exists_arr(f, {iso.to1.objects.at(v), iso.to2.objects.at(v)}, uniq);
  }

  Formula second = bind_forall_context(
      iso.delta1,
      bind_forall_context(iso.delta2,
                          Formula::implies(Formula::conj(P1, P2), uniq)));
  Formula out = Formula::conj(first, second);
  check_formula(sig, gamma, out);
  return out;
}

// ---------------------------------------------------------------------------
// Transport proofs

namespace {

// Proof of each clause of a right-folded conjunction, given a proof of the
// whole conjunction.
std::vector<Proof> peel_conj(const std::vector<Formula>& clauses, const Proof& whole) {
  std::vector<Proof> out;
  Proof cur = whole;
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    if (i + 1 == clauses.size()) {
      out.push_back(cur);
      break;
    }
    std::vector<Formula> rest(clauses.begin() + i + 1, clauses.end());
    out.push_back(Proof::and_elim_l(cur, fold_conj(rest)));
    cur = Proof::and_elim_r(cur, clauses[i]);
  }
  return out;
}

Proof fold_conj_proof(const std::vector<Formula>& clauses,
                      const std::vector<Proof>& proofs) {
  if (clauses.empty()) return Proof::top_intro();
  Proof acc = proofs.back();
  for (std::size_t i = clauses.size() - 1; i-- > 0;)
    acc = Proof::and_intro(proofs[i], acc);
  return acc;
}

struct Inst {
  std::optional<ObjectTerm> obj;
  std::optional<ArrowTerm> arr;
};

// forall-eliminate a closed statement along a prefix of instantiations;
// returns the proof of the instance and the instance itself.
std::pair<Proof, Formula> apply_prefix(Proof p, Formula stmt,
                                       const std::vector<Inst>& terms) {
  for (const Inst& t : terms) {
    if (t.obj) {
      p = Proof::forall_obj_elim(std::move(p), stmt, *t.obj);
      stmt = open_obj(stmt.body(), *t.obj);
    } else {
      p = Proof::forall_arr_elim(std::move(p), stmt, *t.arr);
      stmt = open_arr(stmt.body(), *t.arr);
    }
  }
  return {std::move(p), std::move(stmt)};
}

struct TransportGen;

// One lemma level: the iso data for (gamma, delta) plus the stored proofs
// that the top of the generated derivation makes available (clause proofs
// from the condition hypothesis, inverse components from the unpacked
// invertibility clauses). All stored proofs use absolute hypothesis
// indices, which stay valid as the hypothesis list grows downward.
struct Level {
  TransportGen& gen;
  Context gamma, delta, gammaDelta;
  ContextIso iso;
  std::vector<Proof> clauseProofs;
  struct Component {
    ArrowTerm tau, sigma;
    Proof sigmaTau;  // comp sigma tau = id V1
    Proof tauSigma;  // comp tau sigma = id V2
  };
  std::map<std::string, Component> comps;          // delta object var -> data
  std::map<std::string, std::size_t> squareOf;     // delta arrow var -> clause idx
  std::size_t baseHyps = 0;

  const Subst& srcSubst(bool fwd) const { return fwd ? iso.to1 : iso.to2; }
  const Subst& tgtSubst(bool fwd) const { return fwd ? iso.to2 : iso.to1; }
  Formula src(bool fwd, const Formula& f) const { return substitute(f, srcSubst(fwd)); }
  Formula tgt(bool fwd, const Formula& f) const { return substitute(f, tgtSubst(fwd)); }
  ArrowTerm srcT(bool fwd, const ArrowTerm& t) const { return substitute(t, srcSubst(fwd)); }
  ArrowTerm tgtT(bool fwd, const ArrowTerm& t) const { return substitute(t, tgtSubst(fwd)); }
  ObjectTerm srcO(bool fwd, const ObjectTerm& t) const { return substitute(t, srcSubst(fwd)); }
  ObjectTerm tgtO(bool fwd, const ObjectTerm& t) const { return substitute(t, tgtSubst(fwd)); }

  const Component* component(const ObjectTerm& s) const {
    if (s.kind() != ObjectTerm::Kind::Ref) return nullptr;
    auto it = comps.find(s.name());
    return it == comps.end() ? nullptr : &it->second;
  }

  // Fixed (side 1 -> side 2) component data; identities for ambient objects.
  ArrowTerm ftau(const ObjectTerm& s) const {
    if (const Component* c = component(s)) return c->tau;
    return ArrowTerm::id(s);
  }
  ArrowTerm fsigma(const ObjectTerm& s) const {
    if (const Component* c = component(s)) return c->sigma;
    return ArrowTerm::id(s);
  }
  Proof ambient_unit(const Signature& sig, const Context& cur,
                     const ObjectTerm& s) const {
    // comp (id S) (id S) = id S
    EqReasoner r{sig, cur};
    return EqReasoner::sym(r.identity_left(ArrowTerm::id(s)));
  }
  Proof fSigmaTau(const Signature& sig, const Context& cur, const ObjectTerm& s) const {
    if (const Component* c = component(s)) return c->sigmaTau;
    return ambient_unit(sig, cur, s);
  }
  Proof fTauSigma(const Signature& sig, const Context& cur, const ObjectTerm& s) const {
    if (const Component* c = component(s)) return c->tauSigma;
    return ambient_unit(sig, cur, s);
  }

  // Oriented accessors: the transport direction src -> tgt.
  ArrowTerm otau(bool fwd, const ObjectTerm& s) const { return fwd ? ftau(s) : fsigma(s); }
  ArrowTerm osigma(bool fwd, const ObjectTerm& s) const { return fwd ? fsigma(s) : ftau(s); }
  // comp osigma otau = id S_src
  Proof oSigmaTau(bool fwd, const Signature& sig, const Context& cur,
                  const ObjectTerm& s) const {
    return fwd ? fSigmaTau(sig, cur, s) : fTauSigma(sig, cur, s);
  }
  // comp otau osigma = id S_tgt
  Proof oTauSigma(bool fwd, const Signature& sig, const Context& cur,
                  const ObjectTerm& s) const {
    return fwd ? fTauSigma(sig, cur, s) : fSigmaTau(sig, cur, s);
  }

  Proof square(bool fwd, const ArrowTerm& t, const Context& cur) const;
  Proof flipped_square(const std::string& name, const Context& cur) const;
  Proof direction(const Formula& Q, bool fwd, std::size_t h0, const Context& cur);
};

struct TransportGen {
  const Signature& sig;
  NameSupply names;
  // both directions instantiate the same sub-lemma; build it once
  std::map<std::string, TransportResult> memo;

  TransportResult generate(const Context& gamma, const Context& delta,
                           const Formula& P);
};

// comp sigma_B a2 = comp a1 sigma_A, derived from the stored square
// comp a2 tau_A = comp tau_B a1 and the inverse equations.
Proof Level::flipped_square(const std::string& name, const Context& cur) const {
  const Signature& sig = gen.sig;
  EqReasoner r{sig, cur};
  const ArrowSort& s = *delta.find(name)->sort;
  ArrowTerm a1 = iso.to1.arrows.at(name);
  ArrowTerm a2 = iso.to2.arrows.at(name);
  ObjectTerm A1 = substitute(s.dom, iso.to1), A2 = substitute(s.dom, iso.to2);
  ObjectTerm B1 = substitute(s.cod, iso.to1);
  (void)A1;
  ArrowTerm tA = ftau(s.dom), sA = fsigma(s.dom);
  ArrowTerm tB = ftau(s.cod), sB = fsigma(s.cod);
  Proof stored = clauseProofs[squareOf.at(name)];

  auto C = [](ArrowTerm g, ArrowTerm f) { return ArrowTerm::comp(std::move(g), std::move(f)); };
  EqChain ch(C(sB, a2));
  ch.to(C(sB, C(a2, ArrowTerm::id(A2))),
        EqReasoner::cong_right(r.identity_right(a2)));
  ch.to(C(sB, C(a2, C(tA, sA))),
        EqReasoner::cong_right(EqReasoner::cong_right(
            EqReasoner::sym(fTauSigma(sig, cur, s.dom)))));
  ch.to(C(sB, C(C(a2, tA), sA)),
        EqReasoner::cong_right(r.assoc(sA, tA, a2)));
  ch.to(C(sB, C(C(tB, a1), sA)),
        EqReasoner::cong_right(EqReasoner::cong_left(stored)));
  ch.to(C(C(sB, C(tB, a1)), sA), r.assoc(sA, C(tB, a1), sB));
  ch.to(C(C(C(sB, tB), a1), sA),
        EqReasoner::cong_left(r.assoc(a1, tB, sB)));
  ch.to(C(C(ArrowTerm::id(B1), a1), sA),
        EqReasoner::cong_left(EqReasoner::cong_left(fSigmaTau(sig, cur, s.cod))));
  ch.to(C(a1, sA), EqReasoner::cong_left(EqReasoner::sym(r.identity_left(a1))));
  return ch.proof();
}

// Transport square for a term t : A -> B of (gamma, delta):
//   comp otau(B) t_src = comp t_tgt otau(A)
Proof Level::square(bool fwd, const ArrowTerm& t, const Context& cur) const {
  const Signature& sig = gen.sig;
  EqReasoner r{sig, cur};
  ArrowSort s = infer_sort(sig, gammaDelta, t);
  auto C = [](ArrowTerm g, ArrowTerm f) { return ArrowTerm::comp(std::move(g), std::move(f)); };
  switch (t.kind()) {
    case ArrowTerm::Kind::Ref: {
      if (squareOf.count(t.name())) {
        if (fwd) return EqReasoner::sym(clauseProofs[squareOf.at(t.name())]);
        return flipped_square(t.name(), cur);
      }
      // ambient: t unchanged on both sides, both transports are identities
      EqChain ch(C(ArrowTerm::id(s.cod), t));
      ch.to(t, EqReasoner::sym(r.identity_left(t)));
      ch.to(C(t, ArrowTerm::id(s.dom)), r.identity_right(t));
      return ch.proof();
    }
    case ArrowTerm::Kind::Id: {
      const ObjectTerm& S = t.obj();
      ArrowTerm tS = otau(fwd, S);
      ObjectTerm Ssrc = srcO(fwd, S), Stgt = tgtO(fwd, S);
      EqChain ch(C(tS, ArrowTerm::id(Ssrc)));
      ch.to(tS, EqReasoner::sym(r.identity_right(tS)));
      ch.to(C(ArrowTerm::id(Stgt), tS), r.identity_left(tS));
      return ch.proof();
    }
    case ArrowTerm::Kind::Comp: {
      const ArrowTerm& g = t.outer();
      const ArrowTerm& f = t.inner();
      ArrowSort sf = infer_sort(sig, gammaDelta, f);
      ArrowTerm fs = srcT(fwd, f), ft = tgtT(fwd, f);
      ArrowTerm gs = srcT(fwd, g), gt = tgtT(fwd, g);
      ArrowTerm tA = otau(fwd, sf.dom), tC = otau(fwd, sf.cod), tB = otau(fwd, s.cod);
      EqChain ch(C(tB, C(gs, fs)));
      ch.to(C(C(tB, gs), fs), r.assoc(fs, gs, tB));
      ch.to(C(C(gt, tC), fs), EqReasoner::cong_left(square(fwd, g, cur)));
      ch.to(C(gt, C(tC, fs)), EqReasoner::sym(r.assoc(fs, tC, gt)));
      ch.to(C(gt, C(ft, tA)), EqReasoner::cong_right(square(fwd, f, cur)));
      ch.to(C(C(gt, ft), tA), r.assoc(tA, ft, gt));
      return ch.proof();
    }
    case ArrowTerm::Kind::Bound:
      break;
  }
  throw Error(ErrorKind::Internal, "square: unexpected term");
}

Proof Level::direction(const Formula& Q, bool fwd, std::size_t h0, const Context& cur) {
  const Signature& sig = gen.sig;
  auto C = [](ArrowTerm g, ArrowTerm f) { return ArrowTerm::comp(std::move(g), std::move(f)); };
  using K = Formula::Kind;
  switch (Q.kind()) {
    case K::Top:
      return Proof::implies_intro(Proof::top_intro());
    case K::Bot:
      return Proof::implies_intro(Proof::hypothesis(h0));
    case K::Eq: {
      EqReasoner r{sig, cur};
      const ArrowTerm& t1 = Q.lhs();
      const ArrowTerm& t2 = Q.rhs();
      ArrowSort s = infer_sort(sig, gammaDelta, t1);
      ArrowTerm t1s = srcT(fwd, t1), t1t = tgtT(fwd, t1);
      ArrowTerm t2s = srcT(fwd, t2), t2t = tgtT(fwd, t2);
      ObjectTerm At = tgtO(fwd, s.dom);
      ArrowTerm tA = otau(fwd, s.dom), sA = osigma(fwd, s.dom);
      ArrowTerm tB = otau(fwd, s.cod);
      EqChain ch(t1t);
      ch.to(C(t1t, ArrowTerm::id(At)), r.identity_right(t1t));
      ch.to(C(t1t, C(tA, sA)),
            EqReasoner::cong_right(EqReasoner::sym(oTauSigma(fwd, sig, cur, s.dom))));
      ch.to(C(C(t1t, tA), sA), r.assoc(sA, tA, t1t));
      ch.to(C(C(tB, t1s), sA),
            EqReasoner::cong_left(EqReasoner::sym(square(fwd, t1, cur))));
      ch.to(C(C(tB, t2s), sA),
            EqReasoner::cong_left(EqReasoner::cong_right(Proof::hypothesis(h0))));
      ch.to(C(C(t2t, tA), sA), EqReasoner::cong_left(square(fwd, t2, cur)));
      ch.to(C(t2t, C(tA, sA)), EqReasoner::sym(r.assoc(sA, tA, t2t)));
      ch.to(C(t2t, ArrowTerm::id(At)),
            EqReasoner::cong_right(oTauSigma(fwd, sig, cur, s.dom)));
      ch.to(t2t, EqReasoner::sym(r.identity_right(t2t)));
      return Proof::implies_intro(ch.proof());
    }
    case K::And: {
      const Formula& L = Q.left();
      const Formula& R = Q.right();
      Proof pl = Proof::implies_elim(
          direction(L, fwd, h0 + 1, cur),
          Proof::and_elim_l(Proof::hypothesis(h0), src(fwd, R)), src(fwd, L));
      Proof pr = Proof::implies_elim(
          direction(R, fwd, h0 + 1, cur),
          Proof::and_elim_r(Proof::hypothesis(h0), src(fwd, L)), src(fwd, R));
      return Proof::implies_intro(Proof::and_intro(std::move(pl), std::move(pr)));
    }
    case K::Or: {
      const Formula& L = Q.left();
      const Formula& R = Q.right();
      Proof caseL = Proof::or_intro_l(Proof::implies_elim(
          direction(L, fwd, h0 + 2, cur), Proof::hypothesis(h0 + 1), src(fwd, L)));
      Proof caseR = Proof::or_intro_r(Proof::implies_elim(
          direction(R, fwd, h0 + 2, cur), Proof::hypothesis(h0 + 1), src(fwd, R)));
      Proof body = Proof::or_elim(Proof::hypothesis(h0), std::move(caseL),
                                  std::move(caseR), src(fwd, L), src(fwd, R));
      return Proof::implies_intro(std::move(body));
    }
    case K::Implies: {
      const Formula& L = Q.left();
      const Formula& R = Q.right();
      Proof la = Proof::implies_elim(direction(L, !fwd, h0 + 2, cur),
                                     Proof::hypothesis(h0 + 1), tgt(fwd, L));
      Proof ra = Proof::implies_elim(Proof::hypothesis(h0), std::move(la), src(fwd, L));
      Proof rb = Proof::implies_elim(direction(R, fwd, h0 + 2, cur), std::move(ra),
                                     src(fwd, R));
      return Proof::implies_intro(Proof::implies_intro(std::move(rb)));
    }
    case K::ForallObj:
    case K::ExistsObj:
    case K::ForallArr:
    case K::ExistsArr:
      break;
  }

  // Quantifier cases: build the transport lemma for the extended context
  // and instantiate it, extending the isomorphism by an identity component
  // (object case) or conjugating the bound arrow (arrow case).
  const bool isObj = Q.is_object_quantifier();
  const bool isForall =
      Q.kind() == K::ForallObj || Q.kind() == K::ForallArr;
  std::string vName = gen.names.fresh(Q.binder().empty() ? "V" : Q.binder());
  Formula Qo = isObj ? open_obj(Q.body(), ObjectTerm::ref(vName))
                     : open_arr(Q.body(), ArrowTerm::ref(vName));
  Context deltaExt = delta.extended(
      isObj ? ContextDecl{vName, std::nullopt} : ContextDecl{vName, Q.sort()});
  TransportResult lemma = gen.generate(gamma, deltaExt, Qo);

  std::string w = gen.names.fresh(Q.binder().empty() ? "w" : Q.binder());
  ArrowSort srcSort, tgtSort;
  if (!isObj) {
    srcSort = substitute(Q.sort(), srcSubst(fwd));
    tgtSort = substitute(Q.sort(), tgtSubst(fwd));
  }
  // For forall: the eigen w lives on the target side. For exists: on the
  // source side (it comes out of the eliminated existential).
  Context cur2 = cur.extended(
      isObj ? ContextDecl{w, std::nullopt}
            : ContextDecl{w, isForall ? tgtSort : srcSort});
  const Signature& sigr = sig;
  EqReasoner r2{sigr, cur2};
  auto C2 = C;

  // The instantiation of the bound variable on each side.
  ObjectTerm wObj = ObjectTerm::ref(w);
  ArrowTerm wArr = ArrowTerm::ref(w);
  ArrowTerm vSrcArr, vTgtArr;
  if (!isObj) {
    ArrowTerm tA = otau(fwd, Q.sort().dom), sA = osigma(fwd, Q.sort().dom);
    ArrowTerm tB = otau(fwd, Q.sort().cod), sB = osigma(fwd, Q.sort().cod);
    if (isForall) {
      vSrcArr = C2(sB, C2(wArr, tA));  // conjugate the target-side eigen back
      vTgtArr = wArr;
    } else {
      vSrcArr = wArr;
      vTgtArr = C2(tB, C2(wArr, sA));  // push the source-side eigen forward
    }
  }

  // Instantiate the lemma: delta1ext at our source side, delta2ext at our
  // target side, components oriented, the new component as the identity.
  std::vector<Inst> insts;
  auto push_side = [&](const Subst& subst, bool srcSide) {
    for (const auto& d : delta.decls) {
      if (d.is_object())
        insts.push_back({subst.objects.at(d.name), std::nullopt});
      else
        insts.push_back({std::nullopt, subst.arrows.at(d.name)});
    }
    if (isObj) {
      insts.push_back({wObj, std::nullopt});
    } else {
      insts.push_back({std::nullopt, srcSide ? vSrcArr : vTgtArr});
    }
  };
  push_side(srcSubst(fwd), true);
  push_side(tgtSubst(fwd), false);
  for (const auto& [v, f] : iso.components) {
    (void)f;
    insts.push_back({std::nullopt, otau(fwd, ObjectTerm::ref(v))});
  }
  if (isObj) insts.push_back({std::nullopt, ArrowTerm::id(wObj)});

  // The lemma proof is closed; at this point the ambient hypothesis list
  // has h0+1 entries (h0+2 inside an existential elimination), so its
  // internal hypothesis indices shift by that amount.
  Proof lemmaProof =
      shift_hypotheses(lemma.proof, 0, isForall ? h0 + 1 : h0 + 2);
  auto [instP, instF] = apply_prefix(std::move(lemmaProof), lemma.statement, insts);
  Formula condInst = instF.left();
  Formula dirsInst = instF.right();

  std::size_t arrowCount = iso.squareCount + (isObj ? 0 : 1);
  std::size_t objCount = iso.components.size() + (isObj ? 1 : 0);
  std::vector<Formula> clausesInst = decompose_conj(condInst, arrowCount + objCount);

  std::vector<Proof> clausePs;
  std::size_t idx = 0;
  for (const auto& d : delta.decls) {
    if (d.is_object()) continue;
    if (fwd) {
      clausePs.push_back(clauseProofs[squareOf.at(d.name)]);
    } else {
      clausePs.push_back(EqReasoner::sym(flipped_square(d.name, cur2)));
    }
    ++idx;
  }
  if (!isObj) {
    // square for the new arrow variable
    ArrowTerm tA = otau(fwd, Q.sort().dom);
    ArrowTerm tB = otau(fwd, Q.sort().cod);
    ObjectTerm Atgt = substitute(Q.sort().dom, tgtSubst(fwd));
    ObjectTerm Asrc = substitute(Q.sort().dom, srcSubst(fwd));
    ObjectTerm Btgt = substitute(Q.sort().cod, tgtSubst(fwd));
    if (isForall) {
      ArrowTerm sB = osigma(fwd, Q.sort().cod);
      EqChain ch(C2(tB, vSrcArr));
      ch.to(C2(C2(tB, sB), C2(wArr, tA)), r2.assoc(C2(wArr, tA), sB, tB));
      ch.to(C2(ArrowTerm::id(Btgt), C2(wArr, tA)),
            EqReasoner::cong_left(oTauSigma(fwd, sigr, cur2, Q.sort().cod)));
      ch.to(C2(wArr, tA), EqReasoner::sym(r2.identity_left(C2(wArr, tA))));
      clausePs.push_back(EqReasoner::sym(ch.proof()));
    } else {
      ArrowTerm sA = osigma(fwd, Q.sort().dom);
      EqChain ch(C2(vTgtArr, tA));
      ch.to(C2(tB, C2(C2(wArr, sA), tA)),
            EqReasoner::sym(r2.assoc(tA, C2(wArr, sA), tB)));
      ch.to(C2(tB, C2(wArr, C2(sA, tA))),
            EqReasoner::cong_right(EqReasoner::sym(r2.assoc(tA, sA, wArr))));
      ch.to(C2(tB, C2(wArr, ArrowTerm::id(Asrc))),
            EqReasoner::cong_right(EqReasoner::cong_right(
                oSigmaTau(fwd, sigr, cur2, Q.sort().dom))));
      ch.to(C2(tB, wArr),
            EqReasoner::cong_right(EqReasoner::sym(r2.identity_right(wArr))));
      clausePs.push_back(ch.proof());
    }
    (void)Atgt;
  }
  for (std::size_t i = 0; i < iso.components.size(); ++i) {
    if (fwd) {
      clausePs.push_back(clauseProofs[iso.squareCount + i]);
    } else {
      // exists g : V1 -> V2 (comp g sigma = id V2 /\ comp sigma g = id V1);
      // witnessed by tau with the stored unit equations.
      const auto& [v, f] = iso.components[i];
      (void)f;
      ObjectTerm vo = ObjectTerm::ref(v);
      Proof body = Proof::and_intro(fTauSigma(sigr, cur2, vo),
                                    fSigmaTau(sigr, cur2, vo));
      clausePs.push_back(Proof::exists_arr_intro(ftau(vo), std::move(body)));
    }
  }
  if (isObj) {
    // invertibility of the identity component on the new object variable
    EqReasoner ri{sigr, cur2};
    Proof unit = EqReasoner::sym(ri.identity_left(ArrowTerm::id(wObj)));
    Proof unit2 = EqReasoner::sym(ri.identity_left(ArrowTerm::id(wObj)));
    clausePs.push_back(Proof::exists_arr_intro(
        ArrowTerm::id(wObj), Proof::and_intro(std::move(unit), std::move(unit2))));
  }

  Proof condP = fold_conj_proof(clausesInst, clausePs);
  Proof dirsP = Proof::implies_elim(std::move(instP), std::move(condP), condInst);
  Formula d1 = dirsInst.left(), d2 = dirsInst.right();
  Proof forwardP = Proof::and_elim_l(std::move(dirsP), d2);

  if (isForall) {
    Proof qs = isObj ? Proof::forall_obj_elim(Proof::hypothesis(h0), src(fwd, Q), wObj)
                     : Proof::forall_arr_elim(Proof::hypothesis(h0), src(fwd, Q), vSrcArr);
    Proof qt = Proof::implies_elim(std::move(forwardP), std::move(qs), d1.left());
    Proof intro = isObj ? Proof::forall_obj_intro(w, std::move(qt))
                        : Proof::forall_arr_intro(w, std::move(qt));
    return Proof::implies_intro(std::move(intro));
  }

  // exists: eliminate the source existential, transport the opened body,
  // introduce the conjugated witness on the target side.
  Proof qt = Proof::implies_elim(std::move(forwardP), Proof::hypothesis(h0 + 1),
                                 d1.left());
  Proof witness = isObj ? Proof::exists_obj_intro(wObj, std::move(qt))
                        : Proof::exists_arr_intro(vTgtArr, std::move(qt));
  Proof body = isObj
                   ? Proof::exists_obj_elim(Proof::hypothesis(h0), std::move(witness),
                                            src(fwd, Q), w)
                   : Proof::exists_arr_elim(Proof::hypothesis(h0), std::move(witness),
                                            src(fwd, Q), w);
  return Proof::implies_intro(std::move(body));
}

TransportResult TransportGen::generate(const Context& gamma, const Context& delta,
                                       const Formula& P) {
  std::string key = print(delta) + " | " + print(P);
  if (auto it = memo.find(key); it != memo.end()) return it->second;

  Context gammaDelta = concat(gamma, delta);
  check_formula(sig, gammaDelta, P);

  Level lv{*this, gamma, delta, gammaDelta, make_iso(sig, gamma, delta, names),
           {}, {}, {}, 0};
  const ContextIso& iso = lv.iso;

  Formula P1 = substitute(P, iso.to1);
  Formula P2 = substitute(P, iso.to2);
  Formula dirs = Formula::conj(Formula::implies(P1, P2), Formula::implies(P2, P1));

  Context binderCtx = concat(iso.delta1, iso.delta2);
  for (const auto& [v, f] : iso.components)
    binderCtx.decls.push_back(
        {f, ArrowSort{iso.to1.objects.at(v), iso.to2.objects.at(v)}});
  Formula statement =
      bind_forall_context(binderCtx, Formula::implies(iso.condition, dirs));

  // Proof: intro everything, split the condition, unpack the inverses,
  // then prove both directions.
  lv.clauseProofs = peel_conj(iso.clauses, Proof::hypothesis(0));
  std::size_t arrowIdx = 0;
  for (const auto& d : delta.decls)
    if (!d.is_object()) lv.squareOf[d.name] = arrowIdx++;

  Context cur = concat(gamma, binderCtx);
  std::vector<std::string> sigmaNames;
  std::vector<Formula> invClauses;
  for (std::size_t i = 0; i < iso.components.size(); ++i) {
    const auto& [v, f] = iso.components[i];
    (void)f;
    std::string sname = names.fresh("g_" + v);
    sigmaNames.push_back(sname);
    const Formula& clause = iso.clauses[iso.squareCount + i];
    invClauses.push_back(clause);
    Formula opened = open_arr(clause.body(), ArrowTerm::ref(sname));
    // opened = (comp s f = id V1) /\ (comp f s = id V2), hypothesis 1+i
    Proof hyp = Proof::hypothesis(1 + i);
    Level::Component comp;
    comp.tau = ArrowTerm::ref(iso.components[i].second);
    comp.sigma = ArrowTerm::ref(sname);
    comp.sigmaTau = Proof::and_elim_l(hyp, opened.right());
    comp.tauSigma = Proof::and_elim_r(hyp, opened.left());
    lv.comps[v] = std::move(comp);
    cur.decls.push_back({sname, ArrowSort{iso.to2.objects.at(v), iso.to1.objects.at(v)}});
  }
  lv.baseHyps = 1 + iso.components.size();

  Proof d12 = lv.direction(P, true, lv.baseHyps, cur);
  Proof d21 = lv.direction(P, false, lv.baseHyps, cur);
  Proof core = Proof::and_intro(std::move(d12), std::move(d21));

  for (std::size_t i = iso.components.size(); i-- > 0;) {
    core = Proof::exists_arr_elim(lv.clauseProofs[iso.squareCount + i],
                                  std::move(core), invClauses[i], sigmaNames[i]);
  }
  core = Proof::implies_intro(std::move(core));
  for (std::size_t i = binderCtx.decls.size(); i-- > 0;) {
    const ContextDecl& d = binderCtx.decls[i];
    core = d.is_object() ? Proof::forall_obj_intro(d.name, std::move(core))
                         : Proof::forall_arr_intro(d.name, std::move(core));
  }
  TransportResult result{std::move(statement), std::move(core)};
  memo[key] = result;
  return result;
}

}  // namespace

TransportResult transport_proof(const Signature& sig, const Context& gamma,
                                const Context& delta, const Formula& P) {
  TransportGen gen{sig, {}};
  gen.names.reserve(sig);
  gen.names.reserve(gamma);
  gen.names.reserve(delta);
  gen.names.reserve(free_names(P));
  return gen.generate(gamma, delta, P);
}

}  // namespace catlog
