#include "catlog/theoria.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace catlog {

// ---------------------------------------------------------------------------
// Theory data

std::shared_ptr<const TheoryData> make_theory_data(std::string name, Signature sig,
                                                   std::vector<Formula> axioms) {
  for (const auto& [n, s] : sig.arrows) {
    for (const ObjectTerm* e : {&s.dom, &s.cod}) {
      if (e->kind() != ObjectTerm::Kind::Ref || !sig.has_object(e->name()))
        throw Error(ErrorKind::InvalidInput,
                    "arrow constant " + n + " has undeclared endpoint");
    }
  }
  auto data = std::make_shared<TheoryData>();
  data->name = std::move(name);
  data->signature = std::move(sig);
  data->allAxioms = equality_axioms(data->signature);
  for (Formula& ax : axioms) {
    check_formula(data->signature, {}, ax);
    data->explicitAxioms.push_back(ax);
    data->allAxioms.push_back(std::move(ax));
  }
  return data;
}

// ---------------------------------------------------------------------------
// Composition words
//
// Every closed arrow term flattens to a word: the sequence of constants it
// composes, first-applied first (identities vanish). Two terms with the
// same word are provably equal using only associativity and identity, and
// the normalization proof below witnesses that. The ground equational
// theory then lives on words.

namespace {

struct Word {
  std::string dom, cod;           // object constant names
  std::vector<std::string> seq;   // empty: the identity word at dom == cod

  auto operator<=>(const Word&) const = default;
  std::size_t length() const { return seq.size(); }
};

std::optional<Word> word_of(const Signature& sig, const ArrowTerm& t) {
  switch (t.kind()) {
    case ArrowTerm::Kind::Ref: {
      const ArrowSort* s = sig.arrow_sort(t.name());
      if (!s) return std::nullopt;
      return Word{s->dom.name(), s->cod.name(), {t.name()}};
    }
    case ArrowTerm::Kind::Id: {
      if (t.obj().kind() != ObjectTerm::Kind::Ref || !sig.has_object(t.obj().name()))
        return std::nullopt;
      return Word{t.obj().name(), t.obj().name(), {}};
    }
    case ArrowTerm::Kind::Comp: {
      auto wf = word_of(sig, t.inner());
      auto wg = word_of(sig, t.outer());
      if (!wf || !wg || wf->cod != wg->dom) return std::nullopt;
      Word w{wf->dom, wg->cod, wf->seq};
      w.seq.insert(w.seq.end(), wg->seq.begin(), wg->seq.end());
      return w;
    }
    case ArrowTerm::Kind::Bound:
      return std::nullopt;
  }
  return std::nullopt;
}

ArrowTerm norm_term(const Word& w) {
  if (w.seq.empty()) return ArrowTerm::id(ObjectTerm::ref(w.dom));
  ArrowTerm t = ArrowTerm::ref(w.seq.front());
  for (std::size_t i = 1; i < w.seq.size(); ++i)
    t = ArrowTerm::comp(ArrowTerm::ref(w.seq[i]), std::move(t));
  return t;
}

// proof of comp(g, f) = norm_term(word f ++ word g), for g, f already in
// normal form
Proof merge_normals(const EqReasoner& r, const ArrowTerm& g, const ArrowTerm& f) {
  if (g.kind() == ArrowTerm::Kind::Id)
    return EqReasoner::sym(r.identity_left(f));
  if (f.kind() == ArrowTerm::Kind::Id)
    return EqReasoner::sym(r.identity_right(g));
  if (g.kind() == ArrowTerm::Kind::Ref)
    return Proof::eq_refl();
  // g = comp(top, rest)
  const ArrowTerm& top = g.outer();
  const ArrowTerm& rest = g.inner();
  EqChain ch(ArrowTerm::comp(g, f));
  ArrowTerm inner = ArrowTerm::comp(rest, f);
  ch.to(ArrowTerm::comp(top, inner), EqReasoner::sym(r.assoc(f, rest, top)));
  Proof sub = merge_normals(r, rest, f);
  // rebuild the target by normalizing the inner composite
  const Signature& sig = r.sig;
  Word wi = *word_of(sig, inner);
  ch.to(ArrowTerm::comp(top, norm_term(wi)), EqReasoner::cong_right(std::move(sub)));
  return ch.proof();
}

// proof of t = norm_term(word_of(t))
Proof normalize_proof(const EqReasoner& r, const ArrowTerm& t) {
  switch (t.kind()) {
    case ArrowTerm::Kind::Ref:
    case ArrowTerm::Kind::Id:
      return Proof::eq_refl();
    case ArrowTerm::Kind::Comp: {
      const Signature& sig = r.sig;
      Proof pf = normalize_proof(r, t.inner());
      Proof pg = normalize_proof(r, t.outer());
      ArrowTerm nf = norm_term(*word_of(sig, t.inner()));
      ArrowTerm ng = norm_term(*word_of(sig, t.outer()));
      EqChain ch(t);
      ch.to(ArrowTerm::comp(ng, nf), Proof::eq_cong_comp(std::move(pf), std::move(pg)));
      ch.to(norm_term(*word_of(sig, t)), merge_normals(r, ng, nf));
      return ch.proof();
    }
    case ArrowTerm::Kind::Bound:
      break;
  }
  throw Error(ErrorKind::Internal, "normalize_proof: open term");
}

// ---------------------------------------------------------------------------
// Congruence closure over words, with a proof forest

struct WordEngine {
  static constexpr std::size_t kMaxWords = 30000;

  const TheoryData& th;
  std::size_t maxLen;       // requested
  std::size_t effLen = 0;   // realized under the universe cap
  Context emptyCtx;
  EqReasoner reasoner{th.signature, emptyCtx};

  std::vector<Word> words;
  std::map<Word, int> index;
  std::vector<int> uf;
  std::vector<int> pfParent;
  std::vector<std::optional<Proof>> pfProof;  // norm(words[i]) = norm(words[parent])

  struct HornInstance {
    std::vector<Formula> antecedents;  // implication layers, outermost first
    std::vector<std::pair<ArrowTerm, ArrowTerm>> conditions;  // flattened eqs
    ArrowTerm lhs, rhs;
    Proof implicationProof;  // of antecedents[0] => ... => lhs = rhs
    bool done = false;
  };
  std::vector<HornInstance> horn;

  explicit WordEngine(const TheoryData& data, std::size_t maxWordLength)
      : th(data), maxLen(maxWordLength) {
    build_universe();
    build_instances();
    close();
  }

  int find(int i) const {
    while (uf[i] != i) i = uf[i];
    return i;
  }

  std::optional<int> lookup(const Word& w) const {
    auto it = index.find(w);
    return it == index.end() ? std::nullopt : std::optional<int>(it->second);
  }

  void build_universe() {
    // all composable constant sequences up to maxLen, plus identity words
    std::map<std::string, std::vector<std::pair<std::string, std::string>>> outgoing;
    for (const auto& [n, s] : th.signature.arrows)
      outgoing[s.dom.name()].emplace_back(n, s.cod.name());
    auto add = [&](const Word& w) {
      if (index.count(w)) return;
      index[w] = static_cast<int>(words.size());
      words.push_back(w);
    };
    for (const auto& o : th.signature.objects) add(Word{o, o, {}});
    std::vector<Word> frontier;
    for (const auto& o : th.signature.objects) frontier.push_back(Word{o, o, {}});
    for (std::size_t len = 1; len <= maxLen; ++len) {
      std::vector<Word> next;
      for (const Word& w : frontier) {
        for (const auto& [arrow, cod] : outgoing[w.cod]) {
          Word w2{w.dom, cod, w.seq};
          w2.seq.push_back(arrow);
          next.push_back(w2);
        }
      }
      if (words.size() + next.size() > kMaxWords) break;  // budget exhausted
      for (const Word& w : next) add(w);
      effLen = len;
      frontier = std::move(next);
    }
    uf.resize(words.size());
    for (std::size_t i = 0; i < words.size(); ++i) uf[i] = static_cast<int>(i);
    pfParent.assign(words.size(), -1);
    pfProof.assign(words.size(), std::nullopt);
  }

  // Universally quantified (conditional) equations are instantiated over the
  // constants plus identity terms; conclusions whose words exceed the budget
  // are skipped.
  void build_instances() {
    // The equality and category axioms are subsumed by the word
    // representation itself (flattening handles associativity/identity,
    // the union-find and context closure handle the equality rules), so
    // only user axioms contribute instances.
    for (std::size_t id = kEqualityAxiomCount; id < th.allAxioms.size(); ++id)
      instantiate(id, th.allAxioms[id], Proof::axiom(id), {});
  }

  std::vector<ArrowTerm> arrow_candidates(const ArrowSort& s) const {
    std::vector<ArrowTerm> out;
    if (s.dom.kind() != ObjectTerm::Kind::Ref || s.cod.kind() != ObjectTerm::Kind::Ref)
      return out;
    for (const auto& [n, as] : th.signature.arrows)
      if (as == s) out.push_back(ArrowTerm::ref(n));
    if (s.dom == s.cod) out.push_back(ArrowTerm::id(s.dom));
    return out;
  }

  void instantiate(std::size_t axiomId, const Formula& f, Proof p,
                   std::vector<Formula> conditions) {
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::ForallObj: {
        for (const auto& o : th.signature.objects) {
          ObjectTerm t = ObjectTerm::ref(o);
          instantiate(axiomId, open_obj(f.body(), t),
                      Proof::forall_obj_elim(p, f, t), conditions);
        }
        return;
      }
      case K::ForallArr: {
        for (const ArrowTerm& t : arrow_candidates(f.sort()))
          instantiate(axiomId, open_arr(f.body(), t),
                      Proof::forall_arr_elim(p, f, t), conditions);
        return;
      }
      case K::And: {
        instantiate(axiomId, f.left(), Proof::and_elim_l(p, f.right()), conditions);
        instantiate(axiomId, f.right(), Proof::and_elim_r(p, f.left()), conditions);
        return;
      }
      case K::Implies: {
        std::vector<Formula> ante = conditions;
        ante.push_back(f.left());
        instantiate(axiomId, f.right(), std::move(p), std::move(ante));
        return;
      }
      case K::Eq: {
        HornInstance h;
        h.antecedents = conditions;
        h.lhs = f.lhs();
        h.rhs = f.rhs();
        h.implicationProof = std::move(p);
        // flatten every antecedent layer into equational conditions;
        // anything non-equational makes the instance unusable
        std::vector<Formula> todo = conditions;
        while (!todo.empty()) {
          Formula c = todo.back();
          todo.pop_back();
          if (c.kind() == K::And) {
            todo.push_back(c.left());
            todo.push_back(c.right());
          } else if (c.kind() == K::Eq) {
            h.conditions.emplace_back(c.lhs(), c.rhs());
          } else if (c.kind() == K::Top) {
          } else {
            return;
          }
        }
        auto wl = word_of(th.signature, h.lhs);
        auto wr = word_of(th.signature, h.rhs);
        if (!wl || !wr || wl->length() > effLen || wr->length() > effLen) return;
        horn.push_back(std::move(h));
        return;
      }
      default:
        return;  // disjunctions, existentials etc. are not equational rules
    }
  }

  // proof forest: make `a` the root of its tree by reversing the path
  void reroot(int a) {
    int cur = a;
    std::optional<Proof> carry;
    int prev = -1;
    while (cur != -1) {
      int next = pfParent[cur];
      std::optional<Proof> edge = pfProof[cur];
      pfParent[cur] = prev;
      if (prev == -1)
        pfProof[cur] = std::nullopt;
      else
        pfProof[cur] = EqReasoner::sym(*carry);
      carry = edge;
      prev = cur;
      cur = next;
    }
  }

  void merge(int a, int b, Proof proofAB) {
    int ra = find(a), rb = find(b);
    if (ra == rb) return;
    reroot(a);
    pfParent[a] = b;
    pfProof[a] = std::move(proofAB);
    uf[ra] = rb;
  }

  Proof explain(int a, int b) const {
    // chain along the tree path a .. b (same component)
    std::map<int, int> up;  // node -> position on a's root path
    std::vector<int> pathA;
    for (int cur = a; cur != -1; cur = pfParent[cur]) {
      up[cur] = static_cast<int>(pathA.size());
      pathA.push_back(cur);
    }
    std::vector<int> pathB;
    int meet = -1;
    for (int cur = b; cur != -1; cur = pfParent[cur]) {
      pathB.push_back(cur);
      if (up.count(cur)) {
        meet = cur;
        break;
      }
    }
    if (meet == -1) throw Error(ErrorKind::Internal, "explain: not connected");
    EqChain ch(norm_term(words[a]));
    for (int i = 0; pathA[i] != meet; ++i)
      ch.to(norm_term(words[pfParent[pathA[i]]]), *pfProof[pathA[i]]);
    for (std::size_t i = pathB.size() - 1; i-- > 0;)
      ch.to(norm_term(words[pathB[i]]), EqReasoner::sym(*pfProof[pathB[i]]));
    return ch.proof();
  }

  // proof of t1 = t2 for closed terms whose words are merged
  Proof prove_equal(const ArrowTerm& t1, const ArrowTerm& t2) const {
    Word w1 = *word_of(th.signature, t1);
    Word w2 = *word_of(th.signature, t2);
    EqChain ch(t1);
    ch.to(norm_term(w1), normalize_proof(reasoner, t1));
    if (!(w1 == w2)) ch.to(norm_term(w2), explain(*lookup(w1), *lookup(w2)));
    ch.to(t2, EqReasoner::sym(normalize_proof(reasoner, t2)));
    return ch.proof();
  }

  bool same(const Word& a, const Word& b) const {
    auto ia = lookup(a), ib = lookup(b);
    if (!ia || !ib) return false;
    return find(*ia) == find(*ib);
  }

  void close() {
    bool changed = true;
    while (changed) {
      changed = false;
      // conditional equation instances
      for (HornInstance& h : horn) {
        if (h.done) continue;
        Word wl = *word_of(th.signature, h.lhs);
        Word wr = *word_of(th.signature, h.rhs);
        int il = *lookup(wl), ir = *lookup(wr);
        if (find(il) == find(ir)) {
          h.done = true;
          continue;
        }
        bool ready = true;
        for (const auto& [cl, cr] : h.conditions) {
          auto a = word_of(th.signature, cl);
          auto b = word_of(th.signature, cr);
          if (!a || !b || a->length() > effLen || b->length() > effLen ||
              !same(*a, *b)) {
            ready = false;
            break;
          }
        }
        if (!ready) continue;
        Proof p = h.implicationProof;
        for (const Formula& a : h.antecedents)
          p = Proof::implies_elim(std::move(p), prove_formula(a), a);
        EqChain ch(norm_term(wl));
        ch.to(h.lhs, EqReasoner::sym(normalize_proof(reasoner, h.lhs)));
        ch.to(h.rhs, std::move(p));
        ch.to(norm_term(wr), normalize_proof(reasoner, h.rhs));
        merge(il, ir, ch.proof());
        h.done = true;
        changed = true;
      }
      // context closure: replacing a factor by an equal one. Only words
      // sharing a class can act as factors, so group members by root.
      std::map<int, std::vector<int>> classMembers;
      for (std::size_t i = 0; i < words.size(); ++i)
        classMembers[find(static_cast<int>(i))].push_back(static_cast<int>(i));
      for (const auto& [root, members] : classMembers) {
        if (members.size() < 2) continue;
        for (int i : members) {
          for (int j : members) {
            if (i == j) continue;
            const Word& u = words[static_cast<std::size_t>(i)];
            const Word& v = words[static_cast<std::size_t>(j)];
            if (!(u.dom == v.dom) || !(u.cod == v.cod)) continue;
            for (const Word& w : words) {
              if (w.length() < u.length()) continue;
              for (std::size_t pos = 0; pos + u.length() <= w.length(); ++pos) {
                if (!factor_matches(w, pos, u)) continue;
                Word w2 = splice(w, pos, u, v);
                if (w2.length() > effLen) continue;
                auto iw2 = lookup(w2);
                auto iw = lookup(w);
                if (!iw2 || !iw) continue;
                if (find(*iw) == find(*iw2)) continue;
                merge(*iw, *iw2, context_proof(w, pos, u, v, explain(i, j)));
                changed = true;
              }
            }
          }
        }
      }
    }
  }

  // conjunctions of ground equations that currently hold in the closure
  Proof prove_formula(const Formula& f) const {
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::Top:
        return Proof::top_intro();
      case K::And:
        return Proof::and_intro(prove_formula(f.left()), prove_formula(f.right()));
      case K::Eq:
        return prove_equal(f.lhs(), f.rhs());
      default:
        throw Error(ErrorKind::Internal, "prove_formula: not equational");
    }
  }

  bool factor_matches(const Word& w, std::size_t pos, const Word& u) const {
    if (u.length() == 0) return cod_at(w, pos) == u.dom;
    for (std::size_t k = 0; k < u.length(); ++k)
      if (w.seq[pos + k] != u.seq[k]) return false;
    return true;
  }

  Word splice(const Word& w, std::size_t pos, const Word& u, const Word& v) const {
    Word out{w.dom, w.cod, {}};
    out.seq.insert(out.seq.end(), w.seq.begin(), w.seq.begin() + pos);
    out.seq.insert(out.seq.end(), v.seq.begin(), v.seq.end());
    out.seq.insert(out.seq.end(), w.seq.begin() + pos + u.length(), w.seq.end());
    return out;
  }

  // norm(w) = norm(w with the factor u at pos replaced by v), given uv: a
  // proof of norm(u) = norm(v)
  Proof context_proof(const Word& w, std::size_t pos, const Word& u, const Word& v,
                      Proof uv) const {
    Word prefix{w.dom, cod_at(w, pos), {w.seq.begin(), w.seq.begin() + pos}};
    Word suffix{u.cod, w.cod, {w.seq.begin() + pos + u.length(), w.seq.end()}};
    ArrowTerm np = norm_term(prefix), ns = norm_term(suffix);
    ArrowTerm nu = norm_term(u), nv = norm_term(v);
    ArrowTerm tu = ArrowTerm::comp(ns, ArrowTerm::comp(nu, np));
    ArrowTerm tv = ArrowTerm::comp(ns, ArrowTerm::comp(nv, np));
    Word spliced = splice(w, pos, u, v);
    EqChain ch(norm_term(w));
    ch.to(tu, EqReasoner::sym(normalize_proof(reasoner, tu)));
    ch.to(tv, EqReasoner::cong_right(EqReasoner::cong_left(std::move(uv))));
    ch.to(norm_term(spliced), normalize_proof(reasoner, tv));
    return ch.proof();
  }

  std::string cod_at(const Word& w, std::size_t pos) const {
    if (pos == 0) return w.dom;
    return th.signature.arrows.at(w.seq[pos - 1]).cod.name();
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// Congruence oracle

namespace {

class CongruenceOracle : public Oracle {
public:
  CongruenceOracle(std::shared_ptr<const TheoryData> data, std::size_t maxWordLength)
      : data_(std::move(data)), maxLen_(maxWordLength), engine_(*data_, maxWordLength) {}

  OracleAnswer query(const Formula& sentence) const override {
    if (sentence.kind() == Formula::Kind::Eq) {
      auto w1 = word_of(data_->signature, sentence.lhs());
      auto w2 = word_of(data_->signature, sentence.rhs());
      if (!w1 || !w2 || w1->length() > engine_.effLen || w2->length() > engine_.effLen)
        return OracleAnswer::no();
      if (!engine_.same(*w1, *w2)) return OracleAnswer::no();
      return {true, engine_.prove_equal(sentence.lhs(), sentence.rhs())};
    }
    auto v = eval(sentence);
    if (v && *v) return OracleAnswer::plain_yes();
    return OracleAnswer::no();
  }

  bool complete() const override { return true; }
  std::string describe() const override {
    return "congruence:" + std::to_string(maxLen_);
  }
  std::shared_ptr<const Oracle> rebind(
      std::shared_ptr<const TheoryData> data) const override {
    return std::make_shared<CongruenceOracle>(std::move(data), maxLen_);
  }

  // Truth in the finite word model; quantifiers range over the signature's
  // constants (plus identities for endo-sorts). nullopt: out of budget.
  std::optional<bool> eval(const Formula& f) const {
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::Top: return true;
      case K::Bot: return false;
      case K::Eq: {
        auto w1 = word_of(data_->signature, f.lhs());
        auto w2 = word_of(data_->signature, f.rhs());
        if (!w1 || !w2 || w1->length() > engine_.effLen || w2->length() > engine_.effLen)
          return std::nullopt;
        return engine_.same(*w1, *w2);
      }
      case K::And: {
        auto a = eval(f.left()), b = eval(f.right());
        if ((a && !*a) || (b && !*b)) return false;
        if (!a || !b) return std::nullopt;
        return true;
      }
      case K::Or: {
        auto a = eval(f.left()), b = eval(f.right());
        if ((a && *a) || (b && *b)) return true;
        if (!a || !b) return std::nullopt;
        return false;
      }
      case K::Implies: {
        auto a = eval(f.left());
        if (a && !*a) return true;
        auto b = eval(f.right());
        if (b && *b) return true;
        if (!a || !b) return std::nullopt;
        return false;  // a true, b false
      }
      case K::ForallObj:
      case K::ExistsObj: {
        bool universal = f.kind() == K::ForallObj;
        bool sawUnknown = false;
        for (const auto& o : data_->signature.objects) {
          auto v = eval(open_obj(f.body(), ObjectTerm::ref(o)));
          if (!v) { sawUnknown = true; continue; }
          if (universal && !*v) return false;
          if (!universal && *v) return true;
        }
        if (sawUnknown) return std::nullopt;
        return universal;
      }
      case K::ForallArr:
      case K::ExistsArr: {
        bool universal = f.kind() == K::ForallArr;
        bool sawUnknown = false;
        std::vector<ArrowTerm> domain;
        for (const auto& [n, s] : data_->signature.arrows)
          if (s == f.sort()) domain.push_back(ArrowTerm::ref(n));
        if (f.sort().dom == f.sort().cod) domain.push_back(ArrowTerm::id(f.sort().dom));
        for (const ArrowTerm& t : domain) {
          auto v = eval(open_arr(f.body(), t));
          if (!v) { sawUnknown = true; continue; }
          if (universal && !*v) return false;
          if (!universal && *v) return true;
        }
        if (sawUnknown) return std::nullopt;
        return universal;
      }
    }
    return std::nullopt;
  }

private:
  std::shared_ptr<const TheoryData> data_;
  std::size_t maxLen_;
  WordEngine engine_;
};

class SearchOracle : public Oracle {
public:
  SearchOracle(std::shared_ptr<const TheoryData> data, std::size_t depth)
      : data_(std::move(data)), depth_(depth) {}

  OracleAnswer query(const Formula& sentence) const override {
    Judgement j{{data_->signature, data_->allAxioms}, {}, {}, sentence};
    if (auto p = bounded_search(j, depth_)) return {true, *p};
    return OracleAnswer::no();
  }
  bool complete() const override { return false; }
  std::string describe() const override { return "search:" + std::to_string(depth_); }
  std::shared_ptr<const Oracle> rebind(
      std::shared_ptr<const TheoryData> data) const override {
    return std::make_shared<SearchOracle>(std::move(data), depth_);
  }

private:
  std::shared_ptr<const TheoryData> data_;
  std::size_t depth_;
};

class CertificateOracle : public Oracle {
public:
  CertificateOracle(std::shared_ptr<const TheoryData> data, std::filesystem::path dir)
      : data_(std::move(data)), dir_(std::move(dir)) {}

  OracleAnswer query(const Formula& sentence) const override {
    std::filesystem::path file = dir_ / (digest(print(sentence)) + ".prf");
    std::ifstream in(file);
    if (!in) return OracleAnswer::no();
    std::stringstream buf;
    buf << in.rdbuf();
    Proof p = parse_certificate(buf.str());
    Judgement j{{data_->signature, data_->allAxioms}, {}, {}, sentence};
    check_proof(j, p);  // a corrupt certificate store is an error, not a no
    return {true, std::move(p)};
  }
  bool complete() const override { return false; }
  std::string describe() const override { return "certs:" + dir_.string(); }
  std::shared_ptr<const Oracle> rebind(
      std::shared_ptr<const TheoryData> data) const override {
    return std::make_shared<CertificateOracle>(std::move(data), dir_);
  }

private:
  std::shared_ptr<const TheoryData> data_;
  std::filesystem::path dir_;
};

}  // namespace

std::shared_ptr<const Oracle> make_congruence_oracle(
    std::shared_ptr<const TheoryData> data, std::size_t maxWordLength) {
  return std::make_shared<CongruenceOracle>(std::move(data), maxWordLength);
}

std::shared_ptr<const Oracle> make_search_oracle(
    std::shared_ptr<const TheoryData> data, std::size_t depth) {
  return std::make_shared<SearchOracle>(std::move(data), depth);
}

std::shared_ptr<const Oracle> make_certificate_oracle(
    std::shared_ptr<const TheoryData> data, std::filesystem::path dir) {
  return std::make_shared<CertificateOracle>(std::move(data), std::move(dir));
}

Theory make_congruence_theory(std::string name, Signature sig,
                              std::vector<Formula> axioms,
                              std::size_t maxWordLength) {
  auto data = make_theory_data(std::move(name), std::move(sig), std::move(axioms));
  auto oracle = make_congruence_oracle(data, maxWordLength);
  return Theory{std::move(data), std::move(oracle)};
}

// ---------------------------------------------------------------------------
// Term categories

std::vector<ObjectTerm> TermCategory::objects() const {
  std::set<ObjectTerm> out;
  for (const auto& o : theory.signature().objects) out.insert(ObjectTerm::ref(o));
  for (const auto& d : context.decls)
    if (d.is_object()) out.insert(ObjectTerm::ref(d.name));
  return {out.begin(), out.end()};
}

std::vector<ArrowTerm> TermCategory::hom(const ObjectTerm& a, const ObjectTerm& b) const {
  std::map<std::pair<ObjectTerm, ObjectTerm>, std::vector<std::set<ArrowTerm>>> memo;
  std::vector<ObjectTerm> objs = objects();

  // terms of depth <= k, cumulative
  std::function<const std::set<ArrowTerm>&(const ObjectTerm&, const ObjectTerm&, std::size_t)>
      upTo = [&](const ObjectTerm& x, const ObjectTerm& y,
                 std::size_t k) -> const std::set<ArrowTerm>& {
    auto key = std::make_pair(x, y);
    auto& levels = memo[key];
    if (levels.empty()) {
      std::set<ArrowTerm> base;
      for (const auto& [n, s] : theory.signature().arrows)
        if (s.dom == x && s.cod == y) base.insert(ArrowTerm::ref(n));
      for (const auto& d : context.decls)
        if (!d.is_object() && d.sort->dom == x && d.sort->cod == y)
          base.insert(ArrowTerm::ref(d.name));
      if (x == y) base.insert(ArrowTerm::id(x));
      levels.push_back(std::move(base));
    }
    while (levels.size() <= k) {
      std::size_t lvl = levels.size();
      std::set<ArrowTerm> cur = levels.back();
      for (const ObjectTerm& m : objs) {
        const auto& fs = upTo(x, m, lvl - 1);
        const auto& gs = upTo(m, y, lvl - 1);
        for (const ArrowTerm& f : fs)
          for (const ArrowTerm& g : gs) cur.insert(ArrowTerm::comp(g, f));
      }
      // memo may have been resized by the recursive calls
      auto& lv2 = memo[key];
      if (lv2.size() <= lvl) lv2.push_back(std::move(cur));
    }
    return memo[key][k];
  };

  const auto& all = upTo(a, b, depthBound);
  return {all.begin(), all.end()};
}

TermCategory term_category(const Theory& t, const Context& ctx, std::size_t depthBound) {
  check_context(t.signature(), ctx);
  return TermCategory{t, ctx, depthBound};
}

// ---------------------------------------------------------------------------
// Assignments

Assignment Assignment::identity(const Signature& sig, const Context& ctx) {
  Assignment a;
  for (const auto& o : sig.objects) a.map.objects[o] = ObjectTerm::ref(o);
  for (const auto& [n, _] : sig.arrows) a.map.arrows[n] = ArrowTerm::ref(n);
  for (const auto& d : ctx.decls) {
    if (d.is_object())
      a.map.objects[d.name] = ObjectTerm::ref(d.name);
    else
      a.map.arrows[d.name] = ArrowTerm::ref(d.name);
  }
  return a;
}

ObjectTerm apply_assignment(const Assignment& a, const ObjectTerm& t) {
  return substitute(t, a.map, /*total=*/true);
}
ArrowTerm apply_assignment(const Assignment& a, const ArrowTerm& t) {
  return substitute(t, a.map, /*total=*/true);
}
Formula apply_assignment(const Assignment& a, const Formula& f) {
  return substitute(f, a.map, /*total=*/true);
}

Assignment compose(const Assignment& outer, const Assignment& inner) {
  Assignment out;
  for (const auto& [k, v] : inner.map.objects)
    out.map.objects[k] = substitute(v, outer.map, /*total=*/true);
  for (const auto& [k, v] : inner.map.arrows)
    out.map.arrows[k] = substitute(v, outer.map, /*total=*/true);
  return out;
}

void check_assignment(const Signature& srcSig, const Context& srcCtx,
                      const Signature& tgtSig, const Context& tgtCtx,
                      const Assignment& a) {
  auto objImage = [&](const std::string& n) -> const ObjectTerm& {
    auto it = a.map.objects.find(n);
    if (it == a.map.objects.end()) throw Error(ErrorKind::MissingBinding, n);
    return it->second;
  };
  auto checkArrow = [&](const std::string& n, const ArrowSort& s) {
    auto it = a.map.arrows.find(n);
    if (it == a.map.arrows.end()) throw Error(ErrorKind::MissingBinding, n);
    ArrowSort got = infer_sort(tgtSig, tgtCtx, it->second);
    ArrowSort want{substitute(s.dom, a.map, true), substitute(s.cod, a.map, true)};
    if (!(got == want))
      throw Error(ErrorKind::SortMismatch,
                  n + " maps to sort " + print(got) + ", wanted " + print(want));
  };
  for (const auto& o : srcSig.objects) check_object_term(tgtSig, tgtCtx, objImage(o));
  for (const auto& [n, s] : srcSig.arrows) checkArrow(n, s);
  for (const auto& d : srcCtx.decls) {
    if (d.is_object())
      check_object_term(tgtSig, tgtCtx, objImage(d.name));
    else
      checkArrow(d.name, *d.sort);
  }
}

// ---------------------------------------------------------------------------
// Extensions

void Extension::verify_axioms() const {
  for (const Formula& ax : source.explicit_axioms()) {
    Formula tr = translate(ax);
    if (!target.oracle().query(tr).yes)
      throw Error(ErrorKind::NotProvable,
                  "translated axiom not provable in target: " + print(tr));
  }
}

Extension identity_extension(const Theory& t) {
  return {t, t, Assignment::identity(t.signature(), {})};
}

Extension compose(const Extension& second, const Extension& first) {
  return {first.source, second.target, compose(second.translation, first.translation)};
}

Extension extend_by_constants(const Theory& t,
                              const std::vector<std::pair<Context, Formula>>& entries) {
  NameSupply names;
  names.reserve(t.signature());
  Signature sig = t.signature();
  std::vector<Formula> axioms = t.explicit_axioms();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& [delta, P] = entries[i];
    Formula uui = expand_unique_exists(t.signature(), {}, delta, P);
    if (!t.oracle().query(uui).yes)
      throw Error(ErrorKind::NotProvablyUnique, std::to_string(i));
    Subst toConsts;
    for (const auto& d : delta.decls) {
      std::string c = names.fresh("c_" + d.name);
      if (d.is_object()) {
        sig.objects.insert(c);
        toConsts.objects[d.name] = ObjectTerm::ref(c);
      } else {
        sig.arrows[c] = substitute(*d.sort, toConsts);
        toConsts.arrows[d.name] = ArrowTerm::ref(c);
      }
    }
    axioms.push_back(substitute(P, toConsts));
  }
  auto data = make_theory_data(t.name() + "_ext", std::move(sig), std::move(axioms));
  Theory target{data, t.oracle().rebind(data)};
  return {t, target, Assignment::identity(t.signature(), {})};
}

// ---------------------------------------------------------------------------
// The term-complete extension

namespace {

// Candidate descriptions for stages 1 and 2: pairs (delta, P) ordered
// length-lexicographically by printed form.
std::vector<std::pair<Context, Formula>> stage_candidates(const Theory& t,
                                                          const Context& delta) {
  std::vector<std::pair<Context, Formula>> out;
  TermCategory cat = term_category(t, delta, 1);
  std::vector<Formula> ps{Formula::top()};
  std::vector<ObjectTerm> objs = cat.objects();
  for (const ObjectTerm& a : objs) {
    for (const ObjectTerm& b : objs) {
      std::vector<ArrowTerm> ts = cat.hom(a, b);
      for (const ArrowTerm& t1 : ts)
        for (const ArrowTerm& t2 : ts)
          if (!(t1 == t2)) ps.push_back(Formula::eq(t1, t2));
    }
  }
  for (Formula& p : ps) out.emplace_back(delta, std::move(p));
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    std::string px = print(x.first) + " | " + print(x.second);
    std::string py = print(y.first) + " | " + print(y.second);
    if (px.size() != py.size()) return px.size() < py.size();
    return px < py;
  });
  return out;
}

}  // namespace

TermCompleteExtension term_complete_extension(const Theory& t, std::size_t entryBudget) {
  TermCompleteExtension out;
  out.entryBudget = entryBudget;
  NameSupply names;
  names.reserve(t.signature());

  // stage 1: object-level certified descriptions
  std::vector<std::pair<Context, Formula>> accepted1;
  {
    Context dx;
    dx.decls.push_back({names.fresh("X"), std::nullopt});
    auto cands = stage_candidates(t, dx);
    std::size_t examined = 0;
    for (const auto& cand : cands) {
      if (examined >= entryBudget) {
        out.stage1Exhausted = cands.size() > entryBudget;
        break;
      }
      ++examined;
      Formula uui = expand_unique_exists(t.signature(), {}, cand.first, cand.second);
      if (t.oracle().query(uui).yes) accepted1.push_back(cand);
    }
  }
  Extension e1 = extend_by_constants(t, accepted1);

  // stage 2: unique arrows between object constants
  std::vector<std::pair<Context, Formula>> accepted2;
  {
    const Theory& t1 = e1.target;
    NameSupply names1;
    names1.reserve(t1.signature());
    std::string fv = names1.fresh("f");
    std::vector<std::pair<Context, Formula>> cands;
    for (const auto& c1 : t1.signature().objects) {
      for (const auto& c2 : t1.signature().objects) {
        Context df;
        df.decls.push_back({fv, ArrowSort{ObjectTerm::ref(c1), ObjectTerm::ref(c2)}});
        auto cs = stage_candidates(t1, df);
        cands.insert(cands.end(), cs.begin(), cs.end());
      }
    }
    std::sort(cands.begin(), cands.end(), [](const auto& x, const auto& y) {
      std::string px = print(x.first) + " | " + print(x.second);
      std::string py = print(y.first) + " | " + print(y.second);
      if (px.size() != py.size()) return px.size() < py.size();
      return px < py;
    });
    std::size_t examined = 0;
    for (const auto& cand : cands) {
      if (examined >= entryBudget) {
        out.stage2Exhausted = cands.size() > entryBudget;
        break;
      }
      ++examined;
      Formula uui = expand_unique_exists(e1.target.signature(), {}, cand.first, cand.second);
      if (e1.target.oracle().query(uui).yes) accepted2.push_back(cand);
    }
  }
  Extension e2 = extend_by_constants(e1.target, accepted2);

  // stage 3: quotient arrow constants by provable equality; the canonical
  // representative is the lexicographically least constant of each class
  const Theory& t2 = e2.target;
  std::map<std::string, std::string> canon;
  for (const auto& [n, _] : t2.signature().arrows) canon[n] = n;
  std::vector<std::string> arrowNames;
  for (const auto& [n, _] : t2.signature().arrows) arrowNames.push_back(n);
  std::function<std::string(const std::string&)> findc =
      [&](const std::string& n) -> std::string {
    if (canon[n] == n) return n;
    return canon[n] = findc(canon[n]);
  };
  for (std::size_t i = 0; i < arrowNames.size(); ++i) {
    for (std::size_t j = i + 1; j < arrowNames.size(); ++j) {
      const std::string& a = arrowNames[i];
      const std::string& b = arrowNames[j];
      if (!(t2.signature().arrows.at(a) == t2.signature().arrows.at(b))) continue;
      if (findc(a) == findc(b)) continue;
      if (t2.oracle().query(Formula::eq(ArrowTerm::ref(a), ArrowTerm::ref(b))).yes) {
        std::string ra = findc(a), rb = findc(b);
        if (rb < ra) std::swap(ra, rb);
        canon[rb] = ra;  // keep the lex-least representative
      }
    }
  }

  Subst quotient;
  Signature sig3;
  sig3.objects = t2.signature().objects;
  for (const auto& [n, s] : t2.signature().arrows) {
    std::string r = findc(n);
    quotient.arrows[n] = ArrowTerm::ref(r);
    if (r == n) sig3.arrows[n] = s;
    if (r != n) out.merged[n] = r;
  }
  std::vector<Formula> ax3;
  std::set<std::string> seen;
  for (const Formula& ax : t2.explicit_axioms()) {
    Formula q = substitute(ax, quotient);
    std::string key = print(q);
    if (seen.insert(key).second) ax3.push_back(std::move(q));
  }
  auto data3 = make_theory_data(t.name() + "_comp", std::move(sig3), std::move(ax3));
  Theory t3{data3, t.oracle().rebind(data3)};
  Assignment quotientAssign;
  quotientAssign.map = quotient;
  for (const auto& o : t2.signature().objects)
    quotientAssign.map.objects[o] = ObjectTerm::ref(o);
  Extension e3{t2, t3, quotientAssign};

  out.extension = compose(e3, compose(e2, e1));
  return out;
}

std::string canonical_constant(const TermCompleteExtension& e, const ArrowTerm& t) {
  const Theory& tgt = e.extension.target;
  ArrowSort s = infer_sort(tgt.signature(), {}, t);
  for (const auto& [n, ns] : tgt.signature().arrows) {
    if (!(ns == s)) continue;
    if (tgt.oracle().query(Formula::eq(t, ArrowTerm::ref(n))).yes) return n;
  }
  throw Error(ErrorKind::OutOfBudget, print(t));
}

// ---------------------------------------------------------------------------
// Theory files

namespace {

std::string trim_copy(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

ParsedTheory parse_theory(const std::string& text) {
  ParsedTheory out;
  std::istringstream in(text);
  std::string line;
  bool inBody = false, closed = false;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (auto h = line.find('#'); h != std::string::npos) line = line.substr(0, h);
    line = trim_copy(line);
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    if (!inBody) {
      if (kw != "theory") throw ParseError("expected 'theory <name> {'", lineNo, 1);
      std::string name, brace;
      ls >> name >> brace;
      if (name.empty() || brace != "{")
        throw ParseError("expected 'theory <name> {'", lineNo, 1);
      out.name = name;
      inBody = true;
      continue;
    }
    if (kw == "}") {
      closed = true;
      continue;
    }
    if (kw == "object") {
      std::string n;
      ls >> n;
      if (n.empty()) throw ParseError("object needs a name", lineNo, 1);
      out.signature.objects.insert(n);
      continue;
    }
    if (kw == "arrow") {
      std::string rest;
      std::getline(ls, rest);
      Context c = parse_context(rest);
      if (c.decls.size() != 1 || c.decls[0].is_object())
        throw ParseError("expected 'arrow f : A -> B'", lineNo, 1);
      out.signature.arrows[c.decls[0].name] = *c.decls[0].sort;
      continue;
    }
    if (kw == "axiom") {
      std::string rest;
      std::getline(ls, rest);
      out.axioms.push_back(parse_formula(rest));
      continue;
    }
    throw ParseError("unknown theory item '" + kw + "'", lineNo, 1);
  }
  if (!inBody || !closed) throw ParseError("unterminated theory block", lineNo, 1);
  return out;
}

std::string print_theory(const std::string& name, const Signature& sig,
                         const std::vector<Formula>& axioms) {
  std::ostringstream out;
  out << "theory " << name << " {\n";
  for (const auto& o : sig.objects) out << "  object " << o << "\n";
  for (const auto& [n, s] : sig.arrows)
    out << "  arrow " << n << " : " << print(s) << "\n";
  for (const Formula& ax : axioms) out << "  axiom " << print(ax) << "\n";
  out << "}\n";
  return out.str();
}

}  // namespace catlog
