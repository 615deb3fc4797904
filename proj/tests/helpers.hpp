#pragma once

// Shared fixtures, deterministic fuzz generators, and the independent
// brute-force oracles the property tests compare against.

#include "catlog/extractor.hpp"
#include "catlog/freyd.hpp"
#include "catlog/pipeline.hpp"

#include <random>

namespace catlog::testing {

inline const char* kTwoArrowsSource = R"(
theory two_arrows {
  object One
  object A
  arrow idOne : One -> One
  arrow idA : A -> A
  arrow a1 : One -> A
  arrow a2 : One -> A
  axiom idOne = id One
  axiom idA = id A
}
)";

inline Theory two_arrows(std::size_t words = 4) {
  ParsedTheory pt = parse_theory(kTwoArrowsSource);
  return make_congruence_theory(pt.name, pt.signature, pt.axioms, words);
}

using Rng = std::mt19937;

inline int pick(Rng& rng, int n) {
  return static_cast<int>(rng() % static_cast<unsigned>(n));
}

// ---------------------------------------------------------------------------
// Formula fuzzing: well-formed formulas over a scope, built bottom-up.

struct FormulaGen {
  const Signature& sig;
  Rng& rng;
  int maxTermDepth = 1;
  bool allowQuantifiers = true;

  std::vector<ObjectTerm> object_pool(const Context& ctx) const {
    std::vector<ObjectTerm> out;
    for (const auto& o : sig.objects) out.push_back(ObjectTerm::ref(o));
    for (const auto& d : ctx.decls)
      if (d.is_object()) out.push_back(ObjectTerm::ref(d.name));
    return out;
  }

  std::vector<ArrowTerm> arrow_pool(const Context& ctx, const ArrowSort& s,
                                    int depth) const {
    std::vector<ArrowTerm> out;
    for (const auto& [n, srt] : sig.arrows)
      if (srt == s) out.push_back(ArrowTerm::ref(n));
    for (const auto& d : ctx.decls)
      if (!d.is_object() && *d.sort == s) out.push_back(ArrowTerm::ref(d.name));
    if (s.dom == s.cod) out.push_back(ArrowTerm::id(s.dom));
    if (depth > 0) {
      for (const ObjectTerm& mid : object_pool(ctx)) {
        auto fs = arrow_pool(ctx, {s.dom, mid}, 0);
        auto gs = arrow_pool(ctx, {mid, s.cod}, 0);
        for (const ArrowTerm& f : fs)
          for (const ArrowTerm& g : gs) out.push_back(ArrowTerm::comp(g, f));
      }
    }
    return out;
  }

  std::optional<Formula> atom(const Context& ctx) {
    auto objs = object_pool(ctx);
    if (objs.empty()) return std::nullopt;
    for (int tries = 0; tries < 8; ++tries) {
      ArrowSort s{objs[pick(rng, static_cast<int>(objs.size()))],
                  objs[pick(rng, static_cast<int>(objs.size()))]};
      auto pool = arrow_pool(ctx, s, maxTermDepth);
      if (pool.size() < 1) continue;
      const ArrowTerm& l = pool[pick(rng, static_cast<int>(pool.size()))];
      const ArrowTerm& r = pool[pick(rng, static_cast<int>(pool.size()))];
      return Formula::eq(l, r);
    }
    return std::nullopt;
  }

  Formula gen(const Context& ctx, int depth, int binderCounter = 0) {
    if (depth <= 0) {
      int k = pick(rng, 4);
      if (k == 0) return Formula::top();
      if (k == 1) return Formula::bot();
      if (auto a = atom(ctx)) return *a;
      return Formula::top();
    }
    int k = pick(rng, allowQuantifiers ? 8 : 5);
    switch (k) {
      case 0:
        if (auto a = atom(ctx)) return *a;
        return Formula::top();
      case 1:
        return Formula::conj(gen(ctx, depth - 1, binderCounter),
                             gen(ctx, depth - 1, binderCounter));
      case 2:
        return Formula::disj(gen(ctx, depth - 1, binderCounter),
                             gen(ctx, depth - 1, binderCounter));
      case 3:
        return Formula::implies(gen(ctx, depth - 1, binderCounter),
                                gen(ctx, depth - 1, binderCounter));
      case 4:
        return pick(rng, 2) ? Formula::top() : Formula::bot();
      case 5: {  // object quantifier
        NameSupply names;
        names.reserve(sig);
        names.reserve(ctx);
        std::string v = names.fresh("V" + std::to_string(binderCounter));
        Context cx = ctx.extended({v, std::nullopt});
        Formula body = gen(cx, depth - 1, binderCounter + 1);
        return pick(rng, 2) ? bind_forall_obj(v, body) : bind_exists_obj(v, body);
      }
      default: {  // arrow quantifier
        auto objs = object_pool(ctx);
        if (objs.empty()) return Formula::top();
        ArrowSort s{objs[pick(rng, static_cast<int>(objs.size()))],
                    objs[pick(rng, static_cast<int>(objs.size()))]};
        NameSupply names;
        names.reserve(sig);
        names.reserve(ctx);
        std::string v = names.fresh("w" + std::to_string(binderCounter));
        Context cx = ctx.extended({v, s});
        Formula body = gen(cx, depth - 1, binderCounter + 1);
        return pick(rng, 2) ? bind_forall_arr(v, s, body) : bind_exists_arr(v, s, body);
      }
    }
  }
};

// ---------------------------------------------------------------------------
// Independent restriction predicate: walks with an explicit binder-name
// stack and flags an object binder whose body has a free arrow variable
// mentioning the bound name in its declared sort.

struct NamedBinder {
  bool isObject;
  std::string name;
  std::vector<std::string> sortNames;  // variable names in the declared sort
};

inline std::vector<std::string> endpoint_names(const Context& ctx,
                                               const std::vector<NamedBinder>& stack,
                                               const ObjectTerm& e) {
  std::vector<std::string> out;
  if (e.kind() == ObjectTerm::Kind::Bound) {
    std::size_t k = static_cast<std::size_t>(e.index());
    if (k < stack.size()) out.push_back(stack[stack.size() - 1 - k].name);
  } else if (ctx.find(e.name())) {
    out.push_back(e.name());
  }
  return out;
}

// Straightforward re-implementation used as the ground truth in fuzzing.
inline bool restriction_ok(const Signature& sig, const Context& ctx, const Formula& f) {
  struct Walker {
    const Context& ctx;
    std::vector<NamedBinder> stack;

    bool formula(const Formula& f) {
      using K = Formula::Kind;
      switch (f.kind()) {
        case K::Eq: case K::Top: case K::Bot:
          return true;
        case K::And: case K::Or: case K::Implies:
          return formula(f.left()) && formula(f.right());
        case K::ForallObj: case K::ExistsObj: {
          if (!body_clear(f.body(), f.binder(), 0)) return false;
          stack.push_back({true, f.binder(), {}});
          bool ok = formula(f.body());
          stack.pop_back();
          return ok;
        }
        case K::ForallArr: case K::ExistsArr: {
          NamedBinder b{false, f.binder(), {}};
          for (const ObjectTerm* e : {&f.sort().dom, &f.sort().cod})
            for (const std::string& n : endpoint_names(ctx, stack, *e))
              b.sortNames.push_back(n);
          stack.push_back(std::move(b));
          bool ok = formula(f.body());
          stack.pop_back();
          return ok;
        }
      }
      return true;
    }

    // no free arrow variable of the body may mention `bound` in its sort
    bool body_clear(const Formula& f, const std::string& bound, int extra) {
      using K = Formula::Kind;
      switch (f.kind()) {
        case K::Eq:
          return term_clear(f.lhs(), bound, extra) && term_clear(f.rhs(), bound, extra);
        case K::And: case K::Or: case K::Implies:
          return body_clear(f.left(), bound, extra) &&
                 body_clear(f.right(), bound, extra);
        case K::Top: case K::Bot:
          return true;
        default:
          return body_clear(f.body(), bound, extra + 1);
      }
    }

    bool term_clear(const ArrowTerm& t, const std::string& bound, int extra) {
      switch (t.kind()) {
        case ArrowTerm::Kind::Ref: {
          if (const ContextDecl* d = ctx.find(t.name()); d && d->sort) {
            for (const ObjectTerm* e : {&d->sort->dom, &d->sort->cod})
              for (const std::string& n : endpoint_names(ctx, {}, *e))
                if (n == bound) return false;
          }
          return true;
        }
        case ArrowTerm::Kind::Bound: {
          int j = t.index() - extra - 1;
          if (j < 0 || j >= static_cast<int>(stack.size())) return true;
          const NamedBinder& b = stack[stack.size() - 1 - j];
          if (!b.isObject)
            for (const std::string& n : b.sortNames)
              if (n == bound) return false;
          return true;
        }
        case ArrowTerm::Kind::Id:
          return true;
        case ArrowTerm::Kind::Comp:
          return term_clear(t.outer(), bound, extra) &&
                 term_clear(t.inner(), bound, extra);
      }
      return true;
    }
  };
  (void)sig;
  Walker w{ctx, {}};
  return w.formula(f);
}

// ---------------------------------------------------------------------------
// Direct truth in a model (positive fragment): equality by classes,
// existentials over canonical constants, no oracle anywhere.

inline std::optional<bool> direct_truth_positive(const Theory& t, const Model& m,
                                                 const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Top: return true;
    case K::Bot: return false;
    case K::Eq: return m.atom_true(f.lhs(), f.rhs());
    case K::And: {
      auto a = direct_truth_positive(t, m, f.left());
      auto b = direct_truth_positive(t, m, f.right());
      if (!a || !b) return std::nullopt;
      return *a && *b;
    }
    case K::Or: {
      auto a = direct_truth_positive(t, m, f.left());
      auto b = direct_truth_positive(t, m, f.right());
      if (!a || !b) return std::nullopt;
      return *a || *b;
    }
    case K::ExistsObj: {
      for (const auto& o : t.signature().objects) {
        auto v = direct_truth_positive(t, m, open_obj(f.body(), ObjectTerm::ref(o)));
        if (!v) return std::nullopt;
        if (*v) return true;
      }
      return false;
    }
    case K::ExistsArr: {
      for (const std::string& r : m.reps_of_sort(f.sort())) {
        auto v = direct_truth_positive(t, m, open_arr(f.body(), ArrowTerm::ref(r)));
        if (!v) return std::nullopt;
        if (*v) return true;
      }
      return false;
    }
    default:
      return std::nullopt;  // not in the positive fragment
  }
}

inline bool is_positive_fragment(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Top: case K::Bot: case K::Eq:
      return true;
    case K::And: case K::Or:
      return is_positive_fragment(f.left()) && is_positive_fragment(f.right());
    case K::ExistsObj: case K::ExistsArr:
      return is_positive_fragment(f.body());
    default:
      return false;
  }
}

// ---------------------------------------------------------------------------
// Brute-force term enumeration, the oracle for term_category.

inline void brute_terms(const Signature& sig, const Context& ctx,
                        const ObjectTerm& a, const ObjectTerm& b, int depth,
                        const std::vector<ObjectTerm>& objs, std::set<ArrowTerm>& out) {
  if (depth < 0) return;
  for (const auto& [n, s] : sig.arrows)
    if (s.dom == a && s.cod == b) out.insert(ArrowTerm::ref(n));
  for (const auto& d : ctx.decls)
    if (!d.is_object() && d.sort->dom == a && d.sort->cod == b)
      out.insert(ArrowTerm::ref(d.name));
  if (a == b) out.insert(ArrowTerm::id(a));
  if (depth == 0) return;
  for (const ObjectTerm& m : objs) {
    std::set<ArrowTerm> fs, gs;
    brute_terms(sig, ctx, a, m, depth - 1, objs, fs);
    brute_terms(sig, ctx, m, b, depth - 1, objs, gs);
    for (const ArrowTerm& f : fs)
      for (const ArrowTerm& g : gs) out.insert(ArrowTerm::comp(g, f));
  }
}

}  // namespace catlog::testing
