#include "catlog/freyd.hpp"

#include <algorithm>
#include <sstream>

namespace catlog {

// ---------------------------------------------------------------------------
// FiniteCategory

const FiniteCategory::Arrow& FiniteCategory::arrow(const std::string& n) const {
  for (const Arrow& a : arrows)
    if (a.name == n) return a;
  throw Error(ErrorKind::UnboundName, "no arrow " + n);
}

bool FiniteCategory::composable(const std::string& g, const std::string& f) const {
  return arrow(f).cod == arrow(g).dom;
}

const std::string& FiniteCategory::compose(const std::string& g, const std::string& f) const {
  auto it = comp.find({g, f});
  if (it == comp.end())
    throw Error(ErrorKind::InvalidInput, "missing composition row " + g + " . " + f);
  return it->second;
}

std::vector<std::string> FiniteCategory::hom(const std::string& a, const std::string& b) const {
  std::vector<std::string> out;
  for (const Arrow& ar : arrows)
    if (ar.dom == a && ar.cod == b) out.push_back(ar.name);
  std::sort(out.begin(), out.end());
  return out;
}

void FiniteCategory::validate() {
  std::set<std::string> objs(objects.begin(), objects.end());
  if (objs.size() != objects.size())
    throw Error(ErrorKind::InvalidInput, "duplicate object");
  std::set<std::string> names;
  for (const Arrow& a : arrows) {
    if (!names.insert(a.name).second)
      throw Error(ErrorKind::InvalidInput, "duplicate arrow " + a.name);
    if (!objs.count(a.dom) || !objs.count(a.cod))
      throw Error(ErrorKind::InvalidInput, "arrow " + a.name + " has unknown endpoint");
  }
  // composition total on composable pairs, endpoints correct
  for (const Arrow& g : arrows) {
    for (const Arrow& f : arrows) {
      if (f.cod != g.dom) continue;
      const std::string& k = compose(g.name, f.name);
      const Arrow& ka = arrow(k);
      if (ka.dom != f.dom || ka.cod != g.cod)
        throw Error(ErrorKind::InvalidInput,
                    "composition " + g.name + " . " + f.name + " has wrong endpoints");
    }
  }
  for (const auto& [gf, k] : comp) {
    if (!names.count(gf.first) || !names.count(gf.second) || !names.count(k))
      throw Error(ErrorKind::InvalidInput, "composition row mentions unknown arrow");
    if (!composable(gf.first, gf.second))
      throw Error(ErrorKind::InvalidInput,
                  "composition row " + gf.first + " . " + gf.second + " not composable");
  }
  // identities: the unique two-sided units
  if (identity.empty()) {
    for (const std::string& x : objects) {
      std::optional<std::string> unit;
      for (const std::string& e : hom(x, x)) {
        bool isUnit = true;
        for (const Arrow& f : arrows) {
          if (f.dom == x && compose(f.name, e) != f.name) isUnit = false;
          if (f.cod == x && compose(e, f.name) != f.name) isUnit = false;
        }
        if (isUnit) {
          if (unit) throw Error(ErrorKind::InvalidInput, "two units at " + x);
          unit = e;
        }
      }
      if (!unit) throw Error(ErrorKind::InvalidInput, "no identity at " + x);
      identity[x] = *unit;
    }
  }
  for (const std::string& x : objects) {
    const std::string& e = identity.at(x);
    for (const Arrow& f : arrows) {
      if (f.dom == x && compose(f.name, e) != f.name)
        throw Error(ErrorKind::InvalidInput, "identity law fails at " + f.name);
      if (f.cod == x && compose(e, f.name) != f.name)
        throw Error(ErrorKind::InvalidInput, "identity law fails at " + f.name);
    }
  }
  // associativity over all composable triples
  for (const Arrow& f : arrows) {
    for (const Arrow& g : arrows) {
      if (g.dom != f.cod) continue;
      for (const Arrow& h : arrows) {
        if (h.dom != g.cod) continue;
        if (compose(h.name, compose(g.name, f.name)) !=
            compose(compose(h.name, g.name), f.name))
          throw Error(ErrorKind::InvalidInput,
                      "associativity fails at " + h.name + ", " + g.name + ", " + f.name);
      }
    }
  }
}

std::optional<std::string> FiniteCategory::terminal() const {
  for (const std::string& t : objects) {
    bool ok = true;
    for (const std::string& x : objects)
      if (hom(x, t).size() != 1) ok = false;
    if (ok) return t;
  }
  return std::nullopt;
}

std::vector<std::string> FiniteCategory::elements(const std::string& x) const {
  auto t = terminal();
  if (!t) throw Error(ErrorKind::InvalidInput, "category has no terminal object");
  return hom(*t, x);
}

FiniteCategory parse_category(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  FiniteCategory c;
  bool inBody = false, closed = false;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (auto h = line.find('#'); h != std::string::npos) line = line.substr(0, h);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    std::string t;
    while (ls >> t) tok.push_back(t);
    if (tok.empty()) continue;
    if (!inBody) {
      if (tok.size() != 3 || tok[0] != "category" || tok[2] != "{")
        throw ParseError("expected 'category <name> {'", lineNo, 1);
      c.name = tok[1];
      inBody = true;
      continue;
    }
    if (tok[0] == "}") {
      closed = true;
      continue;
    }
    if (tok[0] == "object" && tok.size() == 2) {
      c.objects.push_back(tok[1]);
      continue;
    }
    if (tok[0] == "arrow" && tok.size() == 5 && tok[2] == ":" && tok[3].find("->") == std::string::npos) {
      // arrow f : A -> B  tokenizes as [arrow f : A -> B] (6 tokens); fall through
    }
    if (tok[0] == "arrow") {
      if (tok.size() != 6 || tok[2] != ":" || tok[4] != "->")
        throw ParseError("expected 'arrow f : A -> B'", lineNo, 1);
      c.arrows.push_back({tok[1], tok[3], tok[5]});
      continue;
    }
    // composition row: g ∘ f = k
    if (tok.size() == 5 && (tok[1] == "∘" || tok[1] == "o") && tok[3] == "=") {
      c.comp[{tok[0], tok[2]}] = tok[4];
      continue;
    }
    throw ParseError("unrecognized category line", lineNo, 1);
  }
  if (!inBody || !closed) throw ParseError("unterminated category block", lineNo, 1);
  c.validate();
  return c;
}

std::string print_category(const FiniteCategory& c) {
  std::ostringstream out;
  out << "category " << c.name << " {\n";
  for (const std::string& o : c.objects) out << "  object " << o << "\n";
  for (const auto& a : c.arrows)
    out << "  arrow " << a.name << " : " << a.dom << " -> " << a.cod << "\n";
  for (const auto& [gf, k] : c.comp)
    out << "  " << gf.first << " ∘ " << gf.second << " = " << k << "\n";
  out << "}\n";
  return out.str();
}

FiniteCategory functions_category(int maxSize) {
  FiniteCategory c;
  c.name = "sets" + std::to_string(maxSize);
  for (int n = 0; n <= maxSize; ++n) c.objects.push_back("S" + std::to_string(n));

  // a function i -> j is a digit string of length i over 0..j-1
  auto fname = [](int i, int j, const std::vector<int>& map) {
    std::string s = "m" + std::to_string(i) + std::to_string(j) + "_";
    if (map.empty()) return s + "e";
    for (int v : map) s += static_cast<char>('0' + v);
    return s;
  };
  std::map<std::string, std::vector<int>> table;
  std::map<std::string, std::pair<int, int>> sizes;
  for (int i = 0; i <= maxSize; ++i) {
    for (int j = 0; j <= maxSize; ++j) {
      if (i > 0 && j == 0) continue;  // no maps into the empty set
      std::vector<std::vector<int>> maps{{}};
      for (int k = 0; k < i; ++k) {
        std::vector<std::vector<int>> next;
        for (const auto& m : maps) {
          for (int v = 0; v < j; ++v) {
            auto m2 = m;
            m2.push_back(v);
            next.push_back(std::move(m2));
          }
        }
        maps = std::move(next);
      }
      for (const auto& m : maps) {
        std::string n = fname(i, j, m);
        c.arrows.push_back({n, "S" + std::to_string(i), "S" + std::to_string(j)});
        table[n] = m;
        sizes[n] = {i, j};
      }
    }
  }
  for (const auto& g : c.arrows) {
    for (const auto& f : c.arrows) {
      if (f.cod != g.dom) continue;
      const auto& mf = table.at(f.name);
      const auto& mg = table.at(g.name);
      std::vector<int> m;
      for (int v : mf) m.push_back(mg.at(v));
      c.comp[{g.name, f.name}] = fname(sizes.at(f.name).first, sizes.at(g.name).second, m);
    }
  }
  c.validate();
  return c;
}

// ---------------------------------------------------------------------------
// Global sections

const std::vector<std::string>& GlobalSections::of(const std::string& object) const {
  auto it = sections.find(object);
  if (it == sections.end()) throw Error(ErrorKind::UnboundName, object);
  return it->second;
}

const std::string& GlobalSections::apply(const std::string& arrow,
                                         const std::string& section) const {
  auto it = action.find({arrow, section});
  if (it == action.end())
    throw Error(ErrorKind::OutOfBudget, arrow + " . " + section);
  return it->second;
}

GlobalSections global_sections(const TermCompleteExtension& e, const std::string& terminal) {
  const Theory& t = e.extension.target;
  if (!t.signature().has_object(terminal))
    throw Error(ErrorKind::UnboundName, terminal);
  GlobalSections gs;
  gs.terminal = terminal;
  for (const auto& o : t.signature().objects) {
    std::vector<std::string> secs;
    for (const auto& [n, s] : t.signature().arrows)
      if (s.dom == ObjectTerm::ref(terminal) && s.cod == ObjectTerm::ref(o))
        secs.push_back(n);
    std::sort(secs.begin(), secs.end());
    gs.sections[o] = std::move(secs);
  }
  for (const auto& [phi, s] : t.signature().arrows) {
    for (const std::string& sec : gs.sections.at(s.dom.name())) {
      ArrowTerm composite = ArrowTerm::comp(ArrowTerm::ref(phi), ArrowTerm::ref(sec));
      gs.action[{phi, sec}] = canonical_constant(e, composite);
    }
  }
  return gs;
}

// ---------------------------------------------------------------------------
// Gluing

const FreydObject& FreydCategory::object(const std::string& n) const {
  for (const FreydObject& o : objects)
    if (o.name == n) return o;
  throw Error(ErrorKind::UnboundName, "no glued object " + n);
}

const FreydArrow& FreydCategory::arrow(const std::string& n) const {
  for (const FreydArrow& a : arrows)
    if (a.name == n) return a;
  throw Error(ErrorKind::UnboundName, "no glued arrow " + n);
}

std::vector<std::string> FreydCategory::hom(const std::string& a, const std::string& b) const {
  std::vector<std::string> out;
  std::size_t ia = 0, ib = 0;
  for (std::size_t i = 0; i < objects.size(); ++i) {
    if (objects[i].name == a) ia = i;
    if (objects[i].name == b) ib = i;
  }
  for (const FreydArrow& ar : arrows)
    if (ar.src == ia && ar.dst == ib) out.push_back(ar.name);
  std::sort(out.begin(), out.end());
  return out;
}

std::string FreydCategory::terminal_object() const {
  auto t = tiny.terminal();
  if (!t) throw Error(ErrorKind::Internal, "tiny category lost its terminal");
  const std::string& baseTerminal = gs.terminal;
  for (const FreydObject& o : objects) {
    if (o.plus == *t && o.minus == baseTerminal &&
        o.down == tiny.identity.at(tinyOf.at(baseTerminal)))
      return o.name;
  }
  throw Error(ErrorKind::Internal, "no terminal triple in the glued category");
}

FreydCategory comma_glue(const FiniteCategory& tinyIn, const TermCompleteExtension& e,
                         const GlobalSections& gs) {
  FreydCategory F;
  F.tiny = tinyIn;
  F.tiny.validate();
  F.base = e.extension.target;
  F.gs = gs;

  auto tinyTerminal = F.tiny.terminal();
  if (!tinyTerminal)
    throw Error(ErrorKind::GsNotInTiny, "finite category has no terminal object");

  std::map<std::string, std::vector<std::string>> elems;
  for (const std::string& x : F.tiny.objects) elems[x] = F.tiny.elements(x);

  // realize each GS(S) as the lex-least tiny object with that many elements
  for (const auto& o : F.base.signature().objects) {
    std::size_t n = gs.of(o).size();
    std::optional<std::string> found;
    std::vector<std::string> sortedObjs = F.tiny.objects;
    std::sort(sortedObjs.begin(), sortedObjs.end());
    for (const std::string& x : sortedObjs) {
      if (elems[x].size() == n) {
        found = x;
        break;
      }
    }
    if (!found)
      throw Error(ErrorKind::GsNotInTiny, o + " needs an object with " +
                                              std::to_string(n) + " elements");
    F.tinyOf[o] = *found;
  }

  // realize each GS action as the unique tiny arrow with that element map
  for (const auto& [phi, s] : F.base.signature().arrows) {
    const std::string& xs = F.tinyOf.at(s.dom.name());
    const std::string& xr = F.tinyOf.at(s.cod.name());
    const auto& es = elems[xs];
    const auto& er = elems[xr];
    const auto& secS = gs.of(s.dom.name());
    const auto& secR = gs.of(s.cod.name());
    std::vector<std::size_t> want(es.size());
    for (std::size_t i = 0; i < es.size(); ++i) {
      const std::string& img = gs.apply(phi, secS[i]);
      auto it = std::find(secR.begin(), secR.end(), img);
      if (it == secR.end()) throw Error(ErrorKind::Internal, "GS action out of range");
      want[i] = static_cast<std::size_t>(it - secR.begin());
    }
    std::optional<std::string> found;
    for (const std::string& h : F.tiny.hom(xs, xr)) {
      bool match = true;
      for (std::size_t i = 0; i < es.size(); ++i)
        if (F.tiny.compose(h, es[i]) != er[want[i]]) match = false;
      if (match) {
        if (found)
          throw Error(ErrorKind::GsNotInTiny,
                      "two arrows realize the action of " + phi);
        found = h;
      }
    }
    if (!found)
      throw Error(ErrorKind::GsNotInTiny, "no arrow realizes the action of " + phi);
    F.gsArrow[phi] = *found;
  }

  // objects: all triples (X, S, f : X -> tinyOf(S))
  for (const auto& s : F.base.signature().objects) {
    for (const std::string& x : F.tiny.objects) {
      for (const std::string& f : F.tiny.hom(x, F.tinyOf.at(s))) {
        FreydObject o;
        o.plus = x;
        o.minus = s;
        o.down = f;
        o.name = "g" + std::to_string(F.objects.size()) + "_" + x + "_" + s;
        F.objects.push_back(std::move(o));
      }
    }
  }

  // arrows: all commuting pairs
  for (std::size_t i = 0; i < F.objects.size(); ++i) {
    for (std::size_t j = 0; j < F.objects.size(); ++j) {
      const FreydObject& a = F.objects[i];
      const FreydObject& b = F.objects[j];
      for (const auto& [phi, s] : F.base.signature().arrows) {
        if (!(s.dom == ObjectTerm::ref(a.minus)) || !(s.cod == ObjectTerm::ref(b.minus)))
          continue;
        for (const std::string& h : F.tiny.hom(a.plus, b.plus)) {
          if (F.tiny.compose(F.gsArrow.at(phi), a.down) != F.tiny.compose(b.down, h))
            continue;
          FreydArrow ar;
          ar.src = i;
          ar.dst = j;
          ar.plus = h;
          ar.minus = phi;
          ar.name = "k" + std::to_string(F.arrows.size()) + "_" + h + "_" + phi;
          F.arrows.push_back(std::move(ar));
        }
      }
    }
  }

  auto findArrow = [&](std::size_t src, std::size_t dst, const std::string& plus,
                       const std::string& minus) -> const FreydArrow& {
    for (const FreydArrow& ar : F.arrows)
      if (ar.src == src && ar.dst == dst && ar.plus == plus && ar.minus == minus)
        return ar;
    throw Error(ErrorKind::Internal, "gluing is not closed under composition");
  };

  // identities and composition, componentwise
  for (std::size_t i = 0; i < F.objects.size(); ++i) {
    const FreydObject& o = F.objects[i];
    std::string idMinus = canonical_constant(e, ArrowTerm::id(ObjectTerm::ref(o.minus)));
    F.identityOf[o.name] =
        findArrow(i, i, F.tiny.identity.at(o.plus), idMinus).name;
  }
  for (const FreydArrow& g : F.arrows) {
    for (const FreydArrow& f : F.arrows) {
      if (f.dst != g.src) continue;
      std::string plus = F.tiny.compose(g.plus, f.plus);
      std::string minus = canonical_constant(
          e, ArrowTerm::comp(ArrowTerm::ref(g.minus), ArrowTerm::ref(f.minus)));
      F.comp[{g.name, f.name}] = findArrow(f.src, g.dst, plus, minus).name;
    }
  }
  return F;
}

// ---------------------------------------------------------------------------
// The induced theory and model

namespace {

class StarOracle : public Oracle {
public:
  StarOracle(std::shared_ptr<const TheoryData> data, Theory base, Subst minus)
      : data_(std::move(data)), base_(std::move(base)), minus_(std::move(minus)) {}

  OracleAnswer query(const Formula& sentence) const override {
    Formula translated = substitute(sentence, minus_);
    OracleAnswer a = base_.oracle().query(translated);
    // the base certificate proves the translated sentence, not this one
    return a.yes ? OracleAnswer::plain_yes() : OracleAnswer::no();
  }
  bool complete() const override { return base_.oracle().complete(); }
  std::string describe() const override {
    return "glued(" + base_.oracle().describe() + ")";
  }
  std::shared_ptr<const Oracle> rebind(
      std::shared_ptr<const TheoryData> data) const override {
    return std::make_shared<StarOracle>(std::move(data), base_, minus_);
  }

private:
  std::shared_ptr<const TheoryData> data_;
  Theory base_;
  Subst minus_;
};

}  // namespace

Subst star_minus(const FreydCategory& f) {
  Subst minus;
  for (const FreydObject& o : f.objects)
    minus.objects[o.name] = ObjectTerm::ref(o.minus);
  for (const FreydArrow& a : f.arrows)
    minus.arrows[a.name] = ArrowTerm::ref(a.minus);
  return minus;
}

Subst star_section(const FreydCategory& f) {
  Subst section;
  std::map<std::string, std::string> sectionObject;  // base object -> star name
  for (const FreydObject& o : f.objects) {
    if (o.plus == f.tinyOf.at(o.minus) && o.down == f.tiny.identity.at(o.plus)) {
      section.objects[o.minus] = ObjectTerm::ref(o.name);
      sectionObject[o.minus] = o.name;
    }
  }
  for (const FreydArrow& a : f.arrows) {
    const FreydObject& src = f.objects[a.src];
    const FreydObject& dst = f.objects[a.dst];
    if (src.name == sectionObject.at(src.minus) && dst.name == sectionObject.at(dst.minus) &&
        a.plus == f.gsArrow.at(a.minus) && !section.arrows.count(a.minus))
      section.arrows[a.minus] = ArrowTerm::ref(a.name);
  }
  return section;
}

Theory star_theory(const FreydCategory& f) {
  Signature sig;
  for (const FreydObject& o : f.objects) sig.objects.insert(o.name);
  for (const FreydArrow& a : f.arrows)
    sig.arrows[a.name] = ArrowSort{ObjectTerm::ref(f.objects[a.src].name),
                                   ObjectTerm::ref(f.objects[a.dst].name)};

  Subst section = star_section(f);
  std::vector<Formula> axioms;
  for (const Formula& ax : f.base.explicit_axioms())
    axioms.push_back(substitute(ax, section));

  auto data = make_theory_data(f.base.name() + "_star", std::move(sig), std::move(axioms));
  auto oracle = std::make_shared<StarOracle>(data, f.base, star_minus(f));
  return Theory{data, std::move(oracle)};
}

Model freyd_model(const FreydCategory& f, const Theory& star) {
  Model m;
  m.theory = star;
  for (const FreydArrow& a : f.arrows) {
    m.classes.push_back({a.name});
    m.rep[a.name] = a.name;
  }
  std::sort(m.classes.begin(), m.classes.end());
  for (const auto& [o, e] : f.identityOf) m.identTable[o] = e;
  for (const auto& [gf, k] : f.comp) m.compTable[gf] = k;
  return m;
}

}  // namespace catlog
