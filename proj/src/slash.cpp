#include "catlog/slash.hpp"

#include <algorithm>
#include <sstream>

namespace catlog {

// ---------------------------------------------------------------------------
// Model

const std::string& Model::rep_of(const std::string& constant) const {
  auto it = rep.find(constant);
  if (it == rep.end())
    throw Error(ErrorKind::UnboundName, "no class for constant " + constant);
  return it->second;
}

std::string Model::canon(const ArrowTerm& t) const {
  switch (t.kind()) {
    case ArrowTerm::Kind::Ref:
      return rep_of(t.name());
    case ArrowTerm::Kind::Id: {
      auto it = identTable.find(t.obj().name());
      if (it == identTable.end())
        throw Error(ErrorKind::OutOfBudget,
                    "no constant represents " + print(t));
      return it->second;
    }
    case ArrowTerm::Kind::Comp: {
      std::string g = canon(t.outer());
      std::string f = canon(t.inner());
      auto it = compTable.find({g, f});
      if (it == compTable.end())
        throw Error(ErrorKind::OutOfBudget,
                    "no constant represents " + print(t));
      return it->second;
    }
    case ArrowTerm::Kind::Bound:
      break;
  }
  throw Error(ErrorKind::Internal, "canon: open term");
}

bool Model::atom_true(const ArrowTerm& lhs, const ArrowTerm& rhs) const {
  return canon(lhs) == canon(rhs);
}

std::vector<std::string> Model::reps_of_sort(const ArrowSort& s) const {
  std::set<std::string> out;
  for (const auto& [n, srt] : theory.signature().arrows)
    if (srt == s) out.insert(rep_of(n));
  return {out.begin(), out.end()};
}

namespace {

// partition from explicit classes; unlisted constants are singletons
std::map<std::string, std::string> build_rep(const Theory& t,
                                             std::vector<std::vector<std::string>>& classes) {
  std::map<std::string, std::string> rep;
  std::set<std::string> seen;
  for (auto& cls : classes) {
    std::sort(cls.begin(), cls.end());
    if (cls.empty()) throw Error(ErrorKind::NotEquivalence, "empty class");
    const ArrowSort* sort = nullptr;
    for (const std::string& m : cls) {
      const ArrowSort* s = t.signature().arrow_sort(m);
      if (!s) throw Error(ErrorKind::UnboundName, m);
      if (!seen.insert(m).second)
        throw Error(ErrorKind::NotEquivalence, m + " appears in two classes");
      if (sort && !(*sort == *s))
        throw Error(ErrorKind::NotEquivalence,
                    "class mixes sorts: " + m + " : " + print(*s));
      sort = s;
      rep[m] = cls.front();
    }
  }
  for (const auto& [n, _] : t.signature().arrows) {
    if (!seen.count(n)) {
      classes.push_back({n});
      rep[n] = n;
    }
  }
  std::sort(classes.begin(), classes.end());
  return rep;
}

bool composable(const Signature& sig, const std::string& g, const std::string& f) {
  return sig.arrows.at(f).cod == sig.arrows.at(g).dom;
}

}  // namespace

Model make_model(const Theory& t, const std::vector<std::vector<std::string>>& classes) {
  Model m;
  m.theory = t;
  m.classes = classes;
  m.rep = build_rep(t, m.classes);

  // identity table: the lex-least constant provably equal to id X
  for (const auto& o : t.signature().objects) {
    for (const auto& [n, s] : t.signature().arrows) {
      if (!(s.dom == ObjectTerm::ref(o)) || !(s.cod == ObjectTerm::ref(o))) continue;
      if (t.oracle().query(Formula::eq(ArrowTerm::ref(n), ArrowTerm::id(ObjectTerm::ref(o)))).yes) {
        m.identTable[o] = m.rep.at(n);
        break;  // arrows map iterates lex order
      }
    }
  }
  // composite table: the lex-least constant provably equal to g . f
  for (const auto& [g, sg] : t.signature().arrows) {
    for (const auto& [f, sf] : t.signature().arrows) {
      if (!(sf.cod == sg.dom)) continue;
      ArrowTerm comp = ArrowTerm::comp(ArrowTerm::ref(g), ArrowTerm::ref(f));
      auto key = std::make_pair(m.rep.at(g), m.rep.at(f));
      if (m.compTable.count(key)) continue;
      for (const auto& [c, sc] : t.signature().arrows) {
        if (!(sc.dom == sf.dom) || !(sc.cod == sg.cod)) continue;
        if (t.oracle().query(Formula::eq(ArrowTerm::ref(c), comp)).yes) {
          m.compTable[key] = m.rep.at(c);
          break;
        }
      }
    }
  }
  return m;
}

void validate_model(const Theory& t, const Model& m) {
  const Signature& sig = t.signature();
  // (2) well-formed per-sort equivalence
  std::set<std::string> seen;
  for (const auto& cls : m.classes) {
    const ArrowSort* sort = nullptr;
    for (const std::string& c : cls) {
      const ArrowSort* s = sig.arrow_sort(c);
      if (!s) throw Error(ErrorKind::UnboundName, c);
      if (!seen.insert(c).second)
        throw Error(ErrorKind::NotEquivalence, c + " appears twice");
      if (sort && !(*sort == *s))
        throw Error(ErrorKind::NotEquivalence, "class mixes sorts at " + c);
      sort = s;
      if (m.rep_of(c) != cls.front())
        throw Error(ErrorKind::NotEquivalence, "representative mismatch at " + c);
    }
  }
  for (const auto& [n, _] : sig.arrows)
    if (!seen.count(n))
      throw Error(ErrorKind::NotEquivalence, "constant " + n + " not in any class");

  // (1) merged pairs are provable
  for (const auto& cls : m.classes) {
    for (std::size_t i = 0; i + 1 < cls.size(); ++i) {
      for (std::size_t j = i + 1; j < cls.size(); ++j) {
        if (!t.oracle().query(Formula::eq(ArrowTerm::ref(cls[i]), ArrowTerm::ref(cls[j]))).yes)
          throw Error(ErrorKind::NotProvable, cls[i] + ", " + cls[j]);
      }
    }
  }
  // (1) table entries are provable
  for (const auto& [o, c] : m.identTable) {
    if (!t.oracle().query(Formula::eq(ArrowTerm::ref(c), ArrowTerm::id(ObjectTerm::ref(o)))).yes)
      throw Error(ErrorKind::NotProvable, c + " = id " + o);
  }
  for (const auto& [gf, c] : m.compTable) {
    // any members of the classes compose to the entry's class
    ArrowTerm comp = ArrowTerm::comp(ArrowTerm::ref(gf.first), ArrowTerm::ref(gf.second));
    if (!t.oracle().query(Formula::eq(ArrowTerm::ref(c), comp)).yes)
      throw Error(ErrorKind::NotProvable, c + " = " + print(comp));
  }

  // (3) congruence: when two genuinely merged pairs compose, every
  // constant the oracle certifies as either composite must land in one
  // class. (Identical pairs are exempt: a theory may carry several
  // provably equal constants without the model identifying them.)
  auto provable_composites = [&](const std::string& g, const std::string& f) {
    std::vector<std::string> out;
    ArrowTerm comp = ArrowTerm::comp(ArrowTerm::ref(g), ArrowTerm::ref(f));
    const ArrowSort& sf = sig.arrows.at(f);
    const ArrowSort& sg = sig.arrows.at(g);
    for (const auto& [c, sc] : sig.arrows) {
      if (!(sc.dom == sf.dom) || !(sc.cod == sg.cod)) continue;
      if (t.oracle().query(Formula::eq(ArrowTerm::ref(c), comp)).yes) out.push_back(c);
    }
    return out;
  };
  for (const auto& [g1, sg1] : sig.arrows) {
    for (const auto& [f1, sf1] : sig.arrows) {
      if (!composable(sig, g1, f1)) continue;
      for (const auto& [g2, sg2] : sig.arrows) {
        if (m.rep_of(g1) != m.rep_of(g2)) continue;
        for (const auto& [f2, sf2] : sig.arrows) {
          if (m.rep_of(f1) != m.rep_of(f2)) continue;
          if (!composable(sig, g2, f2)) continue;
          if (g1 == g2 && f1 == f2) continue;
          std::set<std::string> reps;
          for (const std::string& c : provable_composites(g1, f1)) reps.insert(m.rep_of(c));
          for (const std::string& c : provable_composites(g2, f2)) reps.insert(m.rep_of(c));
          if (reps.size() > 1)
            throw Error(ErrorKind::NotCongruent, f1 + "~" + f2 + ", " + g1 + "~" + g2);
        }
      }
    }
  }

  // the tables must cover every composite some constant represents
  for (const auto& [g, sg] : sig.arrows) {
    for (const auto& [f, sf] : sig.arrows) {
      if (!composable(sig, g, f)) continue;
      if (provable_composites(g, f).empty()) continue;
      if (!m.compTable.count({m.rep_of(g), m.rep_of(f)}))
        throw Error(ErrorKind::NotCongruent,
                    "missing composite entry for " + g + " . " + f);
    }
  }
}

Model congruence_close(const Theory& t,
                       const std::vector<std::pair<std::string, std::string>>& seeds) {
  const Signature& sig = t.signature();
  std::map<std::string, std::string> parent;
  for (const auto& [n, _] : sig.arrows) parent[n] = n;
  std::function<std::string(const std::string&)> find = [&](const std::string& x) {
    if (parent.at(x) == x) return x;
    return parent[x] = find(parent.at(x));
  };
  auto unite = [&](const std::string& a, const std::string& b) {
    std::string ra = find(a), rb = find(b);
    if (ra == rb) return false;
    if (rb < ra) std::swap(ra, rb);
    parent[rb] = ra;
    return true;
  };
  for (const auto& [a, b] : seeds) {
    if (!sig.arrow_sort(a) || !sig.arrow_sort(b))
      throw Error(ErrorKind::UnboundName, a + ", " + b);
    if (!t.oracle().query(Formula::eq(ArrowTerm::ref(a), ArrowTerm::ref(b))).yes)
      throw Error(ErrorKind::NotProvable, a + ", " + b);
    unite(a, b);
  }
  // composition-congruence over the constant set: genuinely merged pairs
  // force every constant representing either composite into one class
  auto provable_composites = [&](const std::string& g, const std::string& f) {
    std::vector<std::string> out;
    ArrowTerm comp = ArrowTerm::comp(ArrowTerm::ref(g), ArrowTerm::ref(f));
    const ArrowSort& sf = sig.arrows.at(f);
    const ArrowSort& sg = sig.arrows.at(g);
    for (const auto& [c, sc] : sig.arrows) {
      if (!(sc.dom == sf.dom) || !(sc.cod == sg.cod)) continue;
      if (t.oracle().query(Formula::eq(ArrowTerm::ref(c), comp)).yes) out.push_back(c);
    }
    return out;
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [g1, _sg1] : sig.arrows) {
      for (const auto& [g2, _sg2] : sig.arrows) {
        if (find(g1) != find(g2)) continue;
        for (const auto& [f1, _sf1] : sig.arrows) {
          if (!composable(sig, g1, f1)) continue;
          for (const auto& [f2, _sf2] : sig.arrows) {
            if (find(f1) != find(f2)) continue;
            if (!composable(sig, g2, f2)) continue;
            if (g1 == g2 && f1 == f2) continue;
            std::vector<std::string> all = provable_composites(g1, f1);
            for (const std::string& c : provable_composites(g2, f2)) all.push_back(c);
            for (std::size_t i = 1; i < all.size(); ++i) {
              if (find(all[0]) != find(all[i])) {
                unite(all[0], all[i]);
                changed = true;
              }
            }
          }
        }
      }
    }
  }
  std::map<std::string, std::vector<std::string>> byRep;
  for (const auto& [n, _] : sig.arrows) byRep[find(n)].push_back(n);
  std::vector<std::vector<std::string>> classes;
  for (auto& [r, members] : byRep) classes.push_back(std::move(members));
  return make_model(t, classes);
}

std::vector<std::vector<std::string>> parse_model_classes(const std::string& text) {
  std::istringstream in(text);
  std::string tok;
  std::vector<std::string> tokens;
  while (in >> tok) {
    // comments
    if (tok[0] == '#') {
      std::string rest;
      std::getline(in, rest);
      continue;
    }
    tokens.push_back(tok);
  }
  std::size_t i = 0;
  auto expect = [&](const std::string& s) {
    if (i >= tokens.size() || tokens[i] != s)
      throw ParseError("expected '" + s + "' in model file", 1, 1);
    ++i;
  };
  expect("model");
  expect("{");
  std::vector<std::vector<std::string>> classes;
  while (i < tokens.size() && tokens[i] != "}") {
    expect("class");
    std::vector<std::string> cls;
    while (i < tokens.size() && tokens[i] != ";" && tokens[i] != "}")
      cls.push_back(tokens[i++]);
    if (i < tokens.size() && tokens[i] == ";") ++i;
    classes.push_back(std::move(cls));
  }
  expect("}");
  return classes;
}

std::string print_model_classes(const std::vector<std::vector<std::string>>& classes) {
  std::ostringstream out;
  out << "model {\n";
  for (const auto& cls : classes) {
    out << "  class";
    for (const auto& c : cls) out << " " << c;
    out << " ;\n";
  }
  out << "}\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// FP

namespace {

struct FpEvaluator {
  const Theory& theory;
  const Model& model;

  FpCertificate eval(const Formula& f) const {
    using K = Formula::Kind;
    FpCertificate c;
    c.formula = f;
    switch (f.kind()) {
      case K::Top:
        c.verdict = true;
        return c;
      case K::Bot:
        c.verdict = false;
        return c;
      case K::Eq: {
        c.canonLeft = model.canon(f.lhs());
        c.canonRight = model.canon(f.rhs());
        c.verdict = *c.canonLeft == *c.canonRight;
        return c;
      }
      case K::And: {
        c.subs.push_back(eval(f.left()));
        c.subs.push_back(eval(f.right()));
        c.verdict = c.subs[0].verdict && c.subs[1].verdict;
        return c;
      }
      case K::Or: {
        c.subs.push_back(eval(f.left()));
        c.subs.push_back(eval(f.right()));
        c.verdict = c.subs[0].verdict || c.subs[1].verdict;
        if (c.subs[0].verdict)
          c.chosenSide = 0;
        else if (c.subs[1].verdict)
          c.chosenSide = 1;
        return c;
      }
      case K::Implies: {
        c.subs.push_back(eval(f.left()));
        bool functional = true;
        if (c.subs[0].verdict) {
          c.subs.push_back(eval(f.right()));
          functional = c.subs[1].verdict;
        }
        if (!functional) {
          c.verdict = false;  // provability query not required
          return c;
        }
        c.oracleYes = side_condition(f);
        c.verdict = *c.oracleYes;
        return c;
      }
      case K::ForallObj: {
        bool all = true;
        for (const auto& o : theory.signature().objects) {
          c.probes.push_back(o);
          c.subs.push_back(eval(open_obj(f.body(), ObjectTerm::ref(o))));
          all = all && c.subs.back().verdict;
        }
        if (!all) {
          c.verdict = false;
          return c;
        }
        c.oracleYes = side_condition(f);
        c.verdict = *c.oracleYes;
        return c;
      }
      case K::ForallArr: {
        bool all = true;
        for (const std::string& r : model.reps_of_sort(f.sort())) {
          c.probes.push_back(r);
          c.subs.push_back(eval(open_arr(f.body(), ArrowTerm::ref(r))));
          all = all && c.subs.back().verdict;
        }
        if (!all) {
          c.verdict = false;
          return c;
        }
        c.oracleYes = side_condition(f);
        c.verdict = *c.oracleYes;
        return c;
      }
      case K::ExistsObj: {
        for (const auto& o : theory.signature().objects) {
          c.probes.push_back(o);
          c.subs.push_back(eval(open_obj(f.body(), ObjectTerm::ref(o))));
          if (c.subs.back().verdict) {
            c.witness = o;
            c.verdict = true;
            return c;
          }
        }
        c.verdict = false;
        return c;
      }
      case K::ExistsArr: {
        for (const std::string& r : model.reps_of_sort(f.sort())) {
          c.probes.push_back(r);
          c.subs.push_back(eval(open_arr(f.body(), ArrowTerm::ref(r))));
          if (c.subs.back().verdict) {
            c.witness = r;
            c.verdict = true;
            return c;
          }
        }
        c.verdict = false;
        return c;
      }
    }
    throw Error(ErrorKind::Internal, "fp_eval: bad kind");
  }

  bool side_condition(const Formula& f) const {
    OracleAnswer a = theory.oracle().query(f);
    if (a.yes) return true;
    if (!theory.oracle().complete())
      throw Error(ErrorKind::OracleIncomplete, print(f));
    return false;
  }
};

}  // namespace

FpCertificate fp_eval(const Theory& t, const Model& m, const Formula& sentence) {
  check_formula(t.signature(), {}, sentence);
  return FpEvaluator{t, m}.eval(sentence);
}

nlohmann::json certificate_json(const FpCertificate& c) {
  nlohmann::json j;
  j["formula"] = print(c.formula);
  j["verdict"] = c.verdict;
  if (!c.subs.empty()) {
    nlohmann::json subs = nlohmann::json::array();
    for (const FpCertificate& s : c.subs) subs.push_back(certificate_json(s));
    j["subs"] = std::move(subs);
  }
  if (c.chosenSide) j["side"] = *c.chosenSide == 0 ? "left" : "right";
  if (c.witness) j["witness"] = *c.witness;
  if (!c.probes.empty()) j["probes"] = c.probes;
  if (c.oracleYes) j["oracle"] = *c.oracleYes;
  if (c.canonLeft) j["canon"] = {*c.canonLeft, *c.canonRight};
  return j;
}

bool replay_certificate(const Theory& t, const Model& m, const FpCertificate& c) {
  FpCertificate again = fp_eval(t, m, c.formula);
  return certificate_json(again).dump() == certificate_json(c).dump();
}

std::optional<Formula> check_fp_implies_provable(const Theory& t, const Model& m,
                                                 const Formula& sentence) {
  FpCertificate c = fp_eval(t, m, sentence);
  if (!c.verdict) return std::nullopt;
  if (t.oracle().query(sentence).yes) return std::nullopt;
  return sentence;
}

AxiomCertification certify_axioms(const Theory& t, const Model& m) {
  AxiomCertification out;
  for (std::size_t id = 0; id < t.axioms().size(); ++id) {
    FpCertificate c = fp_eval(t, m, t.axioms()[id]);
    if (!c.verdict) {
      out.failedAxiom = id;
      return out;
    }
    out.certificates[id] = std::move(c);
  }
  return out;
}

}  // namespace catlog
