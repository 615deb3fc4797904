#include "catlog/syntax.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <sstream>

namespace catlog {

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::DuplicateVariable: return "DuplicateVariable";
    case ErrorKind::UndeclaredSortDependency: return "UndeclaredSortDependency";
    case ErrorKind::UnboundName: return "UnboundName";
    case ErrorKind::EndpointMismatch: return "EndpointMismatch";
    case ErrorKind::SortMismatchInEq: return "SortMismatchInEq";
    case ErrorKind::SortMismatch: return "SortMismatch";
    case ErrorKind::IllFormedQuantifier: return "IllFormedQuantifier";
    case ErrorKind::MissingBinding: return "MissingBinding";
    case ErrorKind::RuleMismatch: return "RuleMismatch";
    case ErrorKind::EigenvariableCapture: return "EigenvariableCapture";
    case ErrorKind::UnknownAxiom: return "UnknownAxiom";
    case ErrorKind::NotProvablyUnique: return "NotProvablyUnique";
    case ErrorKind::OutOfBudget: return "OutOfBudget";
    case ErrorKind::NotProvable: return "NotProvable";
    case ErrorKind::NotEquivalence: return "NotEquivalence";
    case ErrorKind::NotCongruent: return "NotCongruent";
    case ErrorKind::OracleIncomplete: return "OracleIncomplete";
    case ErrorKind::AxiomNotCertified: return "AxiomNotCertified";
    case ErrorKind::InconsistencyWitness: return "InconsistencyWitness";
    case ErrorKind::GsNotInTiny: return "GsNotInTiny";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::Internal: return "Internal";
  }
  return "Error";
}

// ---------------------------------------------------------------------------
// ObjectTerm

ObjectTerm ObjectTerm::ref(std::string name) {
  ObjectTerm t;
  t.kind_ = Kind::Ref;
  t.name_ = std::move(name);
  return t;
}

ObjectTerm ObjectTerm::bound(int index, std::string hint) {
  ObjectTerm t;
  t.kind_ = Kind::Bound;
  t.index_ = index;
  t.name_ = std::move(hint);
  return t;
}

std::strong_ordering ObjectTerm::operator<=>(const ObjectTerm& o) const {
  if (auto c = kind_ <=> o.kind_; c != 0) return c;
  if (kind_ == Kind::Ref) return name_ <=> o.name_;
  return index_ <=> o.index_;
}

std::strong_ordering ArrowSort::operator<=>(const ArrowSort& o) const {
  if (auto c = dom <=> o.dom; c != 0) return c;
  return cod <=> o.cod;
}

// ---------------------------------------------------------------------------
// ArrowTerm

struct ArrowTerm::Node {
  Kind kind;
  std::string name;  // Ref; hint for Bound
  int index = 0;     // Bound
  ObjectTerm obj;    // Id
  ArrowTerm outer, inner;  // Comp
  int depth = 0;
};

ArrowTerm ArrowTerm::ref(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Ref;
  n->name = std::move(name);
  ArrowTerm t;
  t.node_ = std::move(n);
  return t;
}

ArrowTerm ArrowTerm::bound(int index, std::string hint) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Bound;
  n->index = index;
  n->name = std::move(hint);
  ArrowTerm t;
  t.node_ = std::move(n);
  return t;
}

ArrowTerm ArrowTerm::id(ObjectTerm obj) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Id;
  n->obj = std::move(obj);
  ArrowTerm t;
  t.node_ = std::move(n);
  return t;
}

ArrowTerm ArrowTerm::comp(ArrowTerm outer, ArrowTerm inner) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Comp;
  n->depth = 1 + std::max(outer.depth(), inner.depth());
  n->outer = std::move(outer);
  n->inner = std::move(inner);
  ArrowTerm t;
  t.node_ = std::move(n);
  return t;
}

ArrowTerm::Kind ArrowTerm::kind() const { return node_->kind; }
const std::string& ArrowTerm::name() const { return node_->name; }
int ArrowTerm::index() const { return node_->index; }
const ObjectTerm& ArrowTerm::obj() const { return node_->obj; }
const ArrowTerm& ArrowTerm::outer() const { return node_->outer; }
const ArrowTerm& ArrowTerm::inner() const { return node_->inner; }
int ArrowTerm::depth() const { return node_ ? node_->depth : 0; }

std::strong_ordering ArrowTerm::compare(const ArrowTerm& o) const {
  if (node_ == o.node_) return std::strong_ordering::equal;
  if (auto c = node_->kind <=> o.node_->kind; c != 0) return c;
  switch (node_->kind) {
    case Kind::Ref: return node_->name <=> o.node_->name;
    case Kind::Bound: return node_->index <=> o.node_->index;
    case Kind::Id: return node_->obj <=> o.node_->obj;
    case Kind::Comp: {
      if (auto c = node_->outer.compare(o.node_->outer); c != 0) return c;
      return node_->inner.compare(o.node_->inner);
    }
  }
  return std::strong_ordering::equal;
}

// ---------------------------------------------------------------------------
// Formula

struct Formula::Node {
  Kind kind;
  ArrowTerm lhs, rhs;
  Formula left, right;
  std::string binder;
  ArrowSort sort;
  Formula body;
  int depth = 0;
};

Formula Formula::eq(ArrowTerm lhs, ArrowTerm rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Eq;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  Formula f;
  f.node_ = std::move(n);
  return f;
}

Formula Formula::conj(Formula l, Formula r) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::And;
  n->depth = 1 + std::max(l.depth(), r.depth());
  n->left = std::move(l);
  n->right = std::move(r);
  Formula f;
  f.node_ = std::move(n);
  return f;
}

Formula Formula::disj(Formula l, Formula r) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Or;
  n->depth = 1 + std::max(l.depth(), r.depth());
  n->left = std::move(l);
  n->right = std::move(r);
  Formula f;
  f.node_ = std::move(n);
  return f;
}

Formula Formula::implies(Formula l, Formula r) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Implies;
  n->depth = 1 + std::max(l.depth(), r.depth());
  n->left = std::move(l);
  n->right = std::move(r);
  Formula f;
  f.node_ = std::move(n);
  return f;
}

Formula Formula::top() {
  static const Formula cached = [] {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Top;
    Formula f;
    f.node_ = std::move(n);
    return f;
  }();
  return cached;
}

Formula Formula::bot() {
  static const Formula cached = [] {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Bot;
    Formula f;
    f.node_ = std::move(n);
    return f;
  }();
  return cached;
}

Formula Formula::forall_obj(std::string hint, Formula body) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::ForallObj;
  n->binder = std::move(hint);
  n->depth = 1 + body.depth();
  n->body = std::move(body);
  Formula f;
  f.node_ = std::move(n);
  return f;
}

Formula Formula::exists_obj(std::string hint, Formula body) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::ExistsObj;
  n->binder = std::move(hint);
  n->depth = 1 + body.depth();
  n->body = std::move(body);
  Formula f;
  f.node_ = std::move(n);
  return f;
}

Formula Formula::forall_arr(std::string hint, ArrowSort sort, Formula body) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::ForallArr;
  n->binder = std::move(hint);
  n->sort = std::move(sort);
  n->depth = 1 + body.depth();
  n->body = std::move(body);
  Formula f;
  f.node_ = std::move(n);
  return f;
}

Formula Formula::exists_arr(std::string hint, ArrowSort sort, Formula body) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::ExistsArr;
  n->binder = std::move(hint);
  n->sort = std::move(sort);
  n->depth = 1 + body.depth();
  n->body = std::move(body);
  Formula f;
  f.node_ = std::move(n);
  return f;
}

Formula::Kind Formula::kind() const { return node_->kind; }
const ArrowTerm& Formula::lhs() const { return node_->lhs; }
const ArrowTerm& Formula::rhs() const { return node_->rhs; }
const Formula& Formula::left() const { return node_->left; }
const Formula& Formula::right() const { return node_->right; }
const std::string& Formula::binder() const { return node_->binder; }
const ArrowSort& Formula::sort() const { return node_->sort; }
const Formula& Formula::body() const { return node_->body; }
int Formula::depth() const { return node_ ? node_->depth : 0; }

bool Formula::is_quantifier() const {
  switch (node_->kind) {
    case Kind::ForallObj: case Kind::ExistsObj:
    case Kind::ForallArr: case Kind::ExistsArr:
      return true;
    default:
      return false;
  }
}

bool Formula::is_object_quantifier() const {
  return node_->kind == Kind::ForallObj || node_->kind == Kind::ExistsObj;
}

std::strong_ordering Formula::compare(const Formula& o) const {
  if (node_ == o.node_) return std::strong_ordering::equal;
  if (auto c = node_->kind <=> o.node_->kind; c != 0) return c;
  switch (node_->kind) {
    case Kind::Eq: {
      if (auto c = node_->lhs.compare(o.node_->lhs); c != 0) return c;
      return node_->rhs.compare(o.node_->rhs);
    }
    case Kind::And: case Kind::Or: case Kind::Implies: {
      if (auto c = node_->left.compare(o.node_->left); c != 0) return c;
      return node_->right.compare(o.node_->right);
    }
    case Kind::Top: case Kind::Bot:
      return std::strong_ordering::equal;
    case Kind::ForallObj: case Kind::ExistsObj:
      return node_->body.compare(o.node_->body);  // binder hints ignored
    case Kind::ForallArr: case Kind::ExistsArr: {
      if (auto c = node_->sort <=> o.node_->sort; c != 0) return c;
      return node_->body.compare(o.node_->body);
    }
  }
  return std::strong_ordering::equal;
}

// ---------------------------------------------------------------------------
// Context / Signature

const ContextDecl* Context::find(const std::string& name) const {
  for (const auto& d : decls)
    if (d.name == name) return &d;
  return nullptr;
}

Context Context::extended(ContextDecl d) const {
  Context c = *this;
  c.decls.push_back(std::move(d));
  return c;
}

const ArrowSort* Signature::arrow_sort(const std::string& n) const {
  auto it = arrows.find(n);
  return it == arrows.end() ? nullptr : &it->second;
}

// ---------------------------------------------------------------------------
// Shifting, opening, closing

ObjectTerm shift_object(const ObjectTerm& t, int by, int cutoff) {
  if (t.kind() == ObjectTerm::Kind::Bound && t.index() >= cutoff)
    return ObjectTerm::bound(t.index() + by, t.name());
  return t;
}

ArrowSort shift_sort(const ArrowSort& s, int by, int cutoff) {
  return {shift_object(s.dom, by, cutoff), shift_object(s.cod, by, cutoff)};
}

ArrowTerm shift_arrow(const ArrowTerm& t, int by, int cutoff) {
  switch (t.kind()) {
    case ArrowTerm::Kind::Ref:
      return t;
    case ArrowTerm::Kind::Bound:
      if (t.index() >= cutoff) return ArrowTerm::bound(t.index() + by, t.name());
      return t;
    case ArrowTerm::Kind::Id:
      return ArrowTerm::id(shift_object(t.obj(), by, cutoff));
    case ArrowTerm::Kind::Comp:
      return ArrowTerm::comp(shift_arrow(t.outer(), by, cutoff),
                             shift_arrow(t.inner(), by, cutoff));
  }
  throw Error(ErrorKind::Internal, "shift_arrow: bad kind");
}

namespace {

// Uniform traversal for open/close/substitution. `onObj`/`onArr` receive
// the current binder depth and may rewrite leaf variables.
template <class FObj, class FArr>
ArrowTerm map_arrow(const ArrowTerm& t, int d, FObj&& onObj, FArr&& onArr) {
  switch (t.kind()) {
    case ArrowTerm::Kind::Ref:
    case ArrowTerm::Kind::Bound:
      return onArr(t, d);
    case ArrowTerm::Kind::Id:
      return ArrowTerm::id(onObj(t.obj(), d));
    case ArrowTerm::Kind::Comp:
      return ArrowTerm::comp(map_arrow(t.outer(), d, onObj, onArr),
                             map_arrow(t.inner(), d, onObj, onArr));
  }
  throw Error(ErrorKind::Internal, "map_arrow: bad kind");
}

template <class FObj, class FArr>
Formula map_formula(const Formula& f, int d, FObj&& onObj, FArr&& onArr) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Eq:
      return Formula::eq(map_arrow(f.lhs(), d, onObj, onArr),
                         map_arrow(f.rhs(), d, onObj, onArr));
    case K::And:
      return Formula::conj(map_formula(f.left(), d, onObj, onArr),
                           map_formula(f.right(), d, onObj, onArr));
    case K::Or:
      return Formula::disj(map_formula(f.left(), d, onObj, onArr),
                           map_formula(f.right(), d, onObj, onArr));
    case K::Implies:
      return Formula::implies(map_formula(f.left(), d, onObj, onArr),
                              map_formula(f.right(), d, onObj, onArr));
    case K::Top: case K::Bot:
      return f;
    case K::ForallObj:
      return Formula::forall_obj(f.binder(), map_formula(f.body(), d + 1, onObj, onArr));
    case K::ExistsObj:
      return Formula::exists_obj(f.binder(), map_formula(f.body(), d + 1, onObj, onArr));
    case K::ForallArr:
      return Formula::forall_arr(f.binder(),
                                 {onObj(f.sort().dom, d), onObj(f.sort().cod, d)},
                                 map_formula(f.body(), d + 1, onObj, onArr));
    case K::ExistsArr:
      return Formula::exists_arr(f.binder(),
                                 {onObj(f.sort().dom, d), onObj(f.sort().cod, d)},
                                 map_formula(f.body(), d + 1, onObj, onArr));
  }
  throw Error(ErrorKind::Internal, "map_formula: bad kind");
}

}  // namespace

Formula close_obj(const Formula& f, const std::string& name) {
  auto onObj = [&](const ObjectTerm& t, int d) {
    if (t.kind() == ObjectTerm::Kind::Ref && t.name() == name)
      return ObjectTerm::bound(d, name);
    return t;
  };
  auto onArr = [&](const ArrowTerm& t, int) { return t; };
  return map_formula(f, 0, onObj, onArr);
}

Formula close_arr(const Formula& f, const std::string& name) {
  auto onObj = [&](const ObjectTerm& t, int) { return t; };
  auto onArr = [&](const ArrowTerm& t, int d) {
    if (t.kind() == ArrowTerm::Kind::Ref && t.name() == name)
      return ArrowTerm::bound(d, name);
    return t;
  };
  return map_formula(f, 0, onObj, onArr);
}

Formula open_obj(const Formula& body, const ObjectTerm& value) {
  auto onObj = [&](const ObjectTerm& t, int d) {
    if (t.kind() != ObjectTerm::Kind::Bound) return t;
    if (t.index() == d) return value;
    if (t.index() > d) return ObjectTerm::bound(t.index() - 1, t.name());
    return t;
  };
  auto onArr = [&](const ArrowTerm& t, int d) {
    if (t.kind() != ArrowTerm::Kind::Bound) return t;
    if (t.index() == d)
      throw Error(ErrorKind::Internal, "open_obj: binder used at arrow position");
    if (t.index() > d) return ArrowTerm::bound(t.index() - 1, t.name());
    return t;
  };
  return map_formula(body, 0, onObj, onArr);
}

Formula open_arr(const Formula& body, const ArrowTerm& value) {
  auto onObj = [&](const ObjectTerm& t, int d) {
    if (t.kind() != ObjectTerm::Kind::Bound) return t;
    if (t.index() == d)
      throw Error(ErrorKind::Internal, "open_arr: binder used at object position");
    if (t.index() > d) return ObjectTerm::bound(t.index() - 1, t.name());
    return t;
  };
  auto onArr = [&](const ArrowTerm& t, int d) {
    if (t.kind() != ArrowTerm::Kind::Bound) return t;
    if (t.index() == d) return value;
    if (t.index() > d) return ArrowTerm::bound(t.index() - 1, t.name());
    return t;
  };
  return map_formula(body, 0, onObj, onArr);
}

Formula bind_forall_obj(const std::string& name, const Formula& body) {
  return Formula::forall_obj(name, close_obj(body, name));
}
Formula bind_exists_obj(const std::string& name, const Formula& body) {
  return Formula::exists_obj(name, close_obj(body, name));
}
Formula bind_forall_arr(const std::string& name, const ArrowSort& sort, const Formula& body) {
  return Formula::forall_arr(name, sort, close_arr(body, name));
}
Formula bind_exists_arr(const std::string& name, const ArrowSort& sort, const Formula& body) {
  return Formula::exists_arr(name, sort, close_arr(body, name));
}

// ---------------------------------------------------------------------------
// Free names

static void collect_object(const ObjectTerm& t, FreeNames& out) {
  if (t.kind() == ObjectTerm::Kind::Ref) out.objects.insert(t.name());
}

static void collect_arrow(const ArrowTerm& t, FreeNames& out) {
  switch (t.kind()) {
    case ArrowTerm::Kind::Ref: out.arrows.insert(t.name()); break;
    case ArrowTerm::Kind::Bound: break;
    case ArrowTerm::Kind::Id: collect_object(t.obj(), out); break;
    case ArrowTerm::Kind::Comp:
      collect_arrow(t.outer(), out);
      collect_arrow(t.inner(), out);
      break;
  }
}

static void collect_formula(const Formula& f, FreeNames& out) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Eq:
      collect_arrow(f.lhs(), out);
      collect_arrow(f.rhs(), out);
      break;
    case K::And: case K::Or: case K::Implies:
      collect_formula(f.left(), out);
      collect_formula(f.right(), out);
      break;
    case K::Top: case K::Bot:
      break;
    case K::ForallObj: case K::ExistsObj:
      collect_formula(f.body(), out);
      break;
    case K::ForallArr: case K::ExistsArr:
      collect_object(f.sort().dom, out);
      collect_object(f.sort().cod, out);
      collect_formula(f.body(), out);
      break;
  }
}

FreeNames free_names(const ObjectTerm& t) {
  FreeNames out;
  collect_object(t, out);
  return out;
}
FreeNames free_names(const ArrowTerm& t) {
  FreeNames out;
  collect_arrow(t, out);
  return out;
}
FreeNames free_names(const Formula& f) {
  FreeNames out;
  collect_formula(f, out);
  return out;
}
FreeNames free_names(const Context& ctx) {
  FreeNames out;
  std::set<std::string> declared;
  for (const auto& d : ctx.decls) {
    if (d.sort) {
      for (const ObjectTerm* e : {&d.sort->dom, &d.sort->cod})
        if (e->kind() == ObjectTerm::Kind::Ref && declared.count(e->name()) == 0)
          out.objects.insert(e->name());
    }
    declared.insert(d.name);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Substitution

ObjectTerm substitute(const ObjectTerm& t, const Subst& s, bool total) {
  if (t.kind() == ObjectTerm::Kind::Ref) {
    auto it = s.objects.find(t.name());
    if (it != s.objects.end()) return it->second;
    if (total) throw Error(ErrorKind::MissingBinding, t.name());
  }
  return t;
}

ArrowSort substitute(const ArrowSort& srt, const Subst& s, bool total) {
  return {substitute(srt.dom, s, total), substitute(srt.cod, s, total)};
}

ArrowTerm substitute(const ArrowTerm& t, const Subst& s, bool total) {
  auto onObj = [&](const ObjectTerm& o, int) { return substitute(o, s, total); };
  auto onArr = [&](const ArrowTerm& a, int) {
    if (a.kind() == ArrowTerm::Kind::Ref) {
      auto it = s.arrows.find(a.name());
      if (it != s.arrows.end()) return it->second;
      if (total) throw Error(ErrorKind::MissingBinding, a.name());
    }
    return a;
  };
  return map_arrow(t, 0, onObj, onArr);
}

Formula substitute(const Formula& f, const Subst& s, bool total) {
  auto onObj = [&](const ObjectTerm& o, int) { return substitute(o, s, total); };
  auto onArr = [&](const ArrowTerm& a, int) {
    if (a.kind() == ArrowTerm::Kind::Ref) {
      auto it = s.arrows.find(a.name());
      if (it != s.arrows.end()) return it->second;
      if (total) throw Error(ErrorKind::MissingBinding, a.name());
    }
    return a;
  };
  return map_formula(f, 0, onObj, onArr);
}

Context substitute(const Context& ctx, const Subst& s) {
  Subst live = s;  // declarations shadow outer names
  Context out;
  for (const auto& d : ctx.decls) {
    ContextDecl nd = d;
    if (nd.sort) nd.sort = substitute(*nd.sort, live);
    live.objects.erase(d.name);
    live.arrows.erase(d.name);
    out.decls.push_back(std::move(nd));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Well-formedness

void check_context(const Signature& sig, const Context& ctx) {
  std::set<std::string> objectVars, arrowVars;
  for (const auto& d : ctx.decls) {
    if (objectVars.count(d.name) || arrowVars.count(d.name))
      throw Error(ErrorKind::DuplicateVariable, d.name);
    if (sig.has_name(d.name))
      throw Error(ErrorKind::DuplicateVariable,
                  d.name + " shadows a signature constant");
    if (d.sort) {
      for (const ObjectTerm* e : {&d.sort->dom, &d.sort->cod}) {
        if (e->kind() != ObjectTerm::Kind::Ref)
          throw Error(ErrorKind::InvalidInput,
                      "context sorts must use named variables");
        const std::string& n = e->name();
        if (!objectVars.count(n) && !sig.has_object(n)) {
          if (arrowVars.count(n))
            throw Error(ErrorKind::UndeclaredSortDependency,
                        d.name + " uses arrow variable " + n + " as an object");
          throw Error(ErrorKind::UndeclaredSortDependency, d.name + ", " + n);
        }
      }
      arrowVars.insert(d.name);
    } else {
      objectVars.insert(d.name);
    }
  }
}

namespace {

// A binder in scope during checking, innermost last.
struct ScopeBinder {
  bool is_object;
  std::string name;
  ArrowSort sort;  // arrow binders only, expressed in the binder's own scope
  // Variable names the sort mentions (outer binder names and context
  // variables; signature constants excluded).
  std::set<std::string> sort_var_names;
};

using Scope = std::vector<ScopeBinder>;

void check_scoped_object(const Signature& sig, const Context& ctx,
                         const Scope& scope, const ObjectTerm& t) {
  if (t.kind() == ObjectTerm::Kind::Bound) {
    int k = t.index();
    if (k < 0 || k >= static_cast<int>(scope.size()))
      throw Error(ErrorKind::UnboundName, "bound index out of range");
    const ScopeBinder& b = scope[scope.size() - 1 - k];
    if (!b.is_object)
      throw Error(ErrorKind::UnboundName,
                  "arrow variable " + b.name + " used as an object");
    return;
  }
  const std::string& n = t.name();
  if (const ContextDecl* d = ctx.find(n)) {
    if (!d->is_object())
      throw Error(ErrorKind::UnboundName, "arrow variable " + n + " used as an object");
    return;
  }
  if (sig.has_object(n)) return;
  if (sig.arrow_sort(n))
    throw Error(ErrorKind::UnboundName, "arrow constant " + n + " used as an object");
  throw Error(ErrorKind::UnboundName, n);
}

ArrowSort infer_scoped_arrow(const Signature& sig, const Context& ctx,
                             const Scope& scope, const ArrowTerm& t) {
  switch (t.kind()) {
    case ArrowTerm::Kind::Bound: {
      int k = t.index();
      if (k < 0 || k >= static_cast<int>(scope.size()))
        throw Error(ErrorKind::UnboundName, "bound index out of range");
      const ScopeBinder& b = scope[scope.size() - 1 - k];
      if (b.is_object)
        throw Error(ErrorKind::UnboundName,
                    "object variable " + b.name + " used as an arrow");
      // The annotation lives outside its binder; move it to this scope.
      return shift_sort(b.sort, k + 1);
    }
    case ArrowTerm::Kind::Ref: {
      const std::string& n = t.name();
      if (const ContextDecl* d = ctx.find(n)) {
        if (d->is_object())
          throw Error(ErrorKind::UnboundName, "object variable " + n + " used as an arrow");
        return *d->sort;
      }
      if (const ArrowSort* s = sig.arrow_sort(n)) return *s;
      if (sig.has_object(n))
        throw Error(ErrorKind::UnboundName, "object constant " + n + " used as an arrow");
      throw Error(ErrorKind::UnboundName, n);
    }
    case ArrowTerm::Kind::Id: {
      check_scoped_object(sig, ctx, scope, t.obj());
      return {t.obj(), t.obj()};
    }
    case ArrowTerm::Kind::Comp: {
      ArrowSort innerSort = infer_scoped_arrow(sig, ctx, scope, t.inner());
      ArrowSort outerSort = infer_scoped_arrow(sig, ctx, scope, t.outer());
      if (!(innerSort.cod == outerSort.dom))
        throw Error(ErrorKind::EndpointMismatch,
                    print(innerSort.cod) + ", " + print(outerSort.dom));
      return {innerSort.dom, outerSort.cod};
    }
  }
  throw Error(ErrorKind::Internal, "infer: bad kind");
}

// Variable names mentioned by a sort endpoint, resolved against the scope
// the sort is expressed in. Constants are not variables and are skipped.
void endpoint_var_names(const Context& ctx, const Scope& scope,
                        const ObjectTerm& e, std::set<std::string>& out) {
  if (e.kind() == ObjectTerm::Kind::Bound) {
    int k = e.index();
    if (k >= 0 && k < static_cast<int>(scope.size()))
      out.insert(scope[scope.size() - 1 - k].name);
    return;
  }
  if (ctx.find(e.name())) out.insert(e.name());
}

// Object quantifiers are restricted: forall X . P is only formed when no
// arrow variable free in P has X in its declared sort. Free here means
// bound outside the quantifier (an outer binder or a context variable).
// `scope` is the stack outside the quantifier, `boundName` the name being
// bound. Throws IllFormedQuantifier on violation.
void check_object_binder_restriction(const Context& ctx, const Scope& scope,
                                     const std::string& boundName,
                                     const Formula& body) {
  // Walk body; `extra` counts binders crossed inside it. An arrow
  // occurrence Bound(extra) refers to the quantifier itself (a kind error
  // reported elsewhere); Bound(extra + 1 + j) refers to scope[size-1-j].
  struct Walker {
    const Context& ctx;
    const Scope& scope;
    const std::string& boundName;

    void term(const ArrowTerm& t, int extra) const {
      switch (t.kind()) {
        case ArrowTerm::Kind::Ref: {
          if (const ContextDecl* d = ctx.find(t.name()); d && d->sort) {
            std::set<std::string> names;
            endpoint_var_names(ctx, {}, d->sort->dom, names);
            endpoint_var_names(ctx, {}, d->sort->cod, names);
            if (names.count(boundName))
              throw Error(ErrorKind::IllFormedQuantifier,
                          boundName + ", " + t.name());
          }
          return;
        }
        case ArrowTerm::Kind::Bound: {
          int j = t.index() - extra - 1;
          if (j < 0) return;  // bound inside the body or the quantifier itself
          if (j >= static_cast<int>(scope.size())) return;
          const ScopeBinder& b = scope[scope.size() - 1 - j];
          if (!b.is_object && b.sort_var_names.count(boundName))
            throw Error(ErrorKind::IllFormedQuantifier,
                        boundName + ", " + b.name);
          return;
        }
        case ArrowTerm::Kind::Id:
          return;
        case ArrowTerm::Kind::Comp:
          term(t.outer(), extra);
          term(t.inner(), extra);
          return;
      }
    }

    void formula(const Formula& f, int extra) const {
      using K = Formula::Kind;
      switch (f.kind()) {
        case K::Eq:
          term(f.lhs(), extra);
          term(f.rhs(), extra);
          return;
        case K::And: case K::Or: case K::Implies:
          formula(f.left(), extra);
          formula(f.right(), extra);
          return;
        case K::Top: case K::Bot:
          return;
        case K::ForallObj: case K::ExistsObj:
          formula(f.body(), extra + 1);
          return;
        case K::ForallArr: case K::ExistsArr:
          formula(f.body(), extra + 1);
          return;
      }
    }
  };
  Walker{ctx, scope, boundName}.formula(body, 0);
}

void check_scoped_formula(const Signature& sig, const Context& ctx,
                          Scope& scope, const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Eq: {
      ArrowSort ls = infer_scoped_arrow(sig, ctx, scope, f.lhs());
      ArrowSort rs = infer_scoped_arrow(sig, ctx, scope, f.rhs());
      if (!(ls == rs))
        throw Error(ErrorKind::SortMismatchInEq,
                    print(f.lhs()) + " : " + print(ls) + " vs " +
                        print(f.rhs()) + " : " + print(rs));
      return;
    }
    case K::And: case K::Or: case K::Implies:
      check_scoped_formula(sig, ctx, scope, f.left());
      check_scoped_formula(sig, ctx, scope, f.right());
      return;
    case K::Top: case K::Bot:
      return;
    case K::ForallObj: case K::ExistsObj: {
      check_object_binder_restriction(ctx, scope, f.binder(), f.body());
      scope.push_back({true, f.binder(), {}, {}});
      check_scoped_formula(sig, ctx, scope, f.body());
      scope.pop_back();
      return;
    }
    case K::ForallArr: case K::ExistsArr: {
      check_scoped_object(sig, ctx, scope, f.sort().dom);
      check_scoped_object(sig, ctx, scope, f.sort().cod);
      ScopeBinder b{false, f.binder(), f.sort(), {}};
      endpoint_var_names(ctx, scope, f.sort().dom, b.sort_var_names);
      endpoint_var_names(ctx, scope, f.sort().cod, b.sort_var_names);
      scope.push_back(std::move(b));
      check_scoped_formula(sig, ctx, scope, f.body());
      scope.pop_back();
      return;
    }
  }
}

}  // namespace

void check_object_term(const Signature& sig, const Context& ctx, const ObjectTerm& t) {
  check_scoped_object(sig, ctx, {}, t);
}

ArrowSort infer_sort(const Signature& sig, const Context& ctx, const ArrowTerm& t) {
  Scope scope;
  return infer_scoped_arrow(sig, ctx, scope, t);
}

void check_formula(const Signature& sig, const Context& ctx, const Formula& f) {
  Scope scope;
  check_scoped_formula(sig, ctx, scope, f);
}

// ---------------------------------------------------------------------------
// Printing

static bool is_reserved(const std::string& s) {
  return s == "id" || s == "comp" || s == "forall" || s == "exists" ||
         s == "top" || s == "bot" || s == "Obj" || s == "theory" ||
         s == "object" || s == "arrow" || s == "axiom" || s == "model" ||
         s == "class" || s == "category" || s == "context";
}

std::string fresh_name(const std::string& base, const std::set<std::string>& taken) {
  std::string b = base.empty() ? "v" : base;
  if (is_reserved(b)) b += "v";
  if (!taken.count(b)) return b;
  for (int i = 1;; ++i) {
    std::string cand = b + std::to_string(i);
    if (!taken.count(cand)) return cand;
  }
}

namespace {

struct Printer {
  std::vector<std::string> boundNames;  // innermost last

  std::string obj(const ObjectTerm& t) const {
    if (t.kind() == ObjectTerm::Kind::Ref) return t.name();
    int k = t.index();
    if (k >= 0 && k < static_cast<int>(boundNames.size()))
      return boundNames[boundNames.size() - 1 - k];
    return "?" + std::to_string(k);
  }

  std::string arr(const ArrowTerm& t, bool atom) const {
    switch (t.kind()) {
      case ArrowTerm::Kind::Ref:
        return t.name();
      case ArrowTerm::Kind::Bound: {
        int k = t.index();
        if (k >= 0 && k < static_cast<int>(boundNames.size()))
          return boundNames[boundNames.size() - 1 - k];
        return "?" + std::to_string(k);
      }
      case ArrowTerm::Kind::Id:
        return "id " + obj(t.obj());
      case ArrowTerm::Kind::Comp: {
        std::string s = "comp " + arr(t.outer(), true) + " " + arr(t.inner(), true);
        return atom ? "(" + s + ")" : s;
      }
    }
    return "?";
  }

  std::string pick_binder_name(const std::string& hint, const Formula& body) const {
    std::set<std::string> taken(boundNames.begin(), boundNames.end());
    FreeNames fn = free_names(body);
    taken.insert(fn.objects.begin(), fn.objects.end());
    taken.insert(fn.arrows.begin(), fn.arrows.end());
    return fresh_name(hint, taken);
  }

  // Precedences: implies 1 (right assoc), or 2, and 3, atoms 4.
  // Quantifiers print bare only in body/top position (minPrec 0).
  std::string formula(const Formula& f, int minPrec) {
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::Top: return "top";
      case K::Bot: return "bot";
      case K::Eq:
        return arr(f.lhs(), false) + " = " + arr(f.rhs(), false);
      case K::Implies: {
        std::string s = formula(f.left(), 2) + " => " + formula(f.right(), 1);
        return minPrec > 1 ? "(" + s + ")" : s;
      }
      case K::Or: {
        std::string s = formula(f.left(), 2) + " \\/ " + formula(f.right(), 3);
        return minPrec > 2 ? "(" + s + ")" : s;
      }
      case K::And: {
        std::string s = formula(f.left(), 3) + " /\\ " + formula(f.right(), 4);
        return minPrec > 3 ? "(" + s + ")" : s;
      }
      case K::ForallObj: case K::ExistsObj: {
        std::string n = pick_binder_name(f.binder(), f.body());
        boundNames.push_back(n);
        std::string b = formula(f.body(), 0);
        boundNames.pop_back();
        std::string s = (f.kind() == K::ForallObj ? "forall " : "exists ") + n + " . " + b;
        return minPrec > 0 ? "(" + s + ")" : s;
      }
      case K::ForallArr: case K::ExistsArr: {
        std::string srt = obj(f.sort().dom) + " -> " + obj(f.sort().cod);
        std::string n = pick_binder_name(f.binder(), f.body());
        boundNames.push_back(n);
        std::string b = formula(f.body(), 0);
        boundNames.pop_back();
        std::string s = (f.kind() == K::ForallArr ? "forall " : "exists ") + n +
                        " : " + srt + " . " + b;
        return minPrec > 0 ? "(" + s + ")" : s;
      }
    }
    return "?";
  }
};

}  // namespace

std::string print(const ObjectTerm& t) { return Printer{}.obj(t); }
std::string print(const ArrowTerm& t) { return Printer{}.arr(t, false); }
std::string print(const ArrowSort& s) {
  Printer p;
  return p.obj(s.dom) + " -> " + p.obj(s.cod);
}
std::string print(const Formula& f) {
  Printer p;
  return p.formula(f, 0);
}
std::string print(const Context& ctx) {
  std::string out;
  for (std::size_t i = 0; i < ctx.decls.size(); ++i) {
    if (i) out += ", ";
    const auto& d = ctx.decls[i];
    out += d.name + " : ";
    out += d.sort ? print(*d.sort) : std::string("Obj");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Token {
  enum class Type { Ident, Symbol, End };
  Type type;
  std::string text;
  int line, column;
};

class Lexer {
public:
  explicit Lexer(const std::string& src) : src_(&src) { advance(); }

  const Token& peek() const { return tok_; }
  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

private:
  void advance() {
    skip_space();
    tok_.line = line_;
    tok_.column = col_;
    if (pos_ >= src_->size()) {
      tok_ = {Token::Type::End, "", line_, col_};
      return;
    }
    char c = (*src_)[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string s;
      while (pos_ < src_->size()) {
        char d = (*src_)[pos_];
        if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '\'') {
          s += d;
          take();
        } else {
          break;
        }
      }
      tok_ = {Token::Type::Ident, s, tok_.line, tok_.column};
      return;
    }
    // multi-char symbols first
    static const char* twos[] = {"->", "=>", "/\\", "\\/"};
    for (const char* s : twos) {
      if (src_->compare(pos_, 2, s) == 0) {
        take();
        take();
        tok_ = {Token::Type::Symbol, s, tok_.line, tok_.column};
        return;
      }
    }
    std::string one(1, c);
    take();
    tok_ = {Token::Type::Symbol, one, tok_.line, tok_.column};
  }

  void skip_space() {
    while (pos_ < src_->size()) {
      char c = (*src_)[pos_];
      if (c == '#') {
        while (pos_ < src_->size() && (*src_)[pos_] != '\n') take();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        take();
      } else {
        break;
      }
    }
  }

  void take() {
    if ((*src_)[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string* src_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

class FormulaParser {
public:
  explicit FormulaParser(const std::string& src) : lex_(src) {}

  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(msg, lex_.peek().line, lex_.peek().column);
  }

  void expect_symbol(const std::string& s) {
    Token t = lex_.next();
    if (t.type != Token::Type::Symbol || t.text != s)
      throw ParseError("expected '" + s + "', found '" + t.text + "'", t.line, t.column);
  }

  bool at_symbol(const std::string& s) const {
    return lex_.peek().type == Token::Type::Symbol && lex_.peek().text == s;
  }

  bool at_ident(const std::string& s) const {
    return lex_.peek().type == Token::Type::Ident && lex_.peek().text == s;
  }

  std::string expect_ident() {
    Token t = lex_.next();
    if (t.type != Token::Type::Ident)
      throw ParseError("expected identifier, found '" + t.text + "'", t.line, t.column);
    if (is_reserved(t.text))
      throw ParseError("reserved word '" + t.text + "' used as identifier", t.line, t.column);
    return t.text;
  }

  void expect_end() {
    if (lex_.peek().type != Token::Type::End) fail("trailing input");
  }

  ObjectTerm object_atom() {
    std::string n = expect_ident();
    for (std::size_t i = binders_.size(); i-- > 0;) {
      if (binders_[i] == n)
        return ObjectTerm::bound(static_cast<int>(binders_.size() - 1 - i), n);
    }
    return ObjectTerm::ref(n);
  }

  ArrowTerm arrow_atom() {
    if (at_ident("id")) {
      lex_.next();
      return ArrowTerm::id(object_atom());
    }
    if (at_symbol("(")) {
      lex_.next();
      ArrowTerm t = arrow_term();
      expect_symbol(")");
      return t;
    }
    std::string n = expect_ident();
    for (std::size_t i = binders_.size(); i-- > 0;) {
      if (binders_[i] == n)
        return ArrowTerm::bound(static_cast<int>(binders_.size() - 1 - i), n);
    }
    return ArrowTerm::ref(n);
  }

  ArrowTerm arrow_term() {
    if (at_ident("comp")) {
      lex_.next();
      ArrowTerm outer = arrow_atom();
      ArrowTerm inner = arrow_atom();
      return ArrowTerm::comp(std::move(outer), std::move(inner));
    }
    return arrow_atom();
  }

  ArrowSort sort() {
    ObjectTerm d = object_atom();
    expect_symbol("->");
    ObjectTerm c = object_atom();
    return {std::move(d), std::move(c)};
  }

  Formula formula() { return implies_formula(); }

  Formula implies_formula() {
    Formula l = or_formula();
    if (at_symbol("=>")) {
      lex_.next();
      return Formula::implies(std::move(l), implies_formula());
    }
    return l;
  }

  Formula or_formula() {
    Formula l = and_formula();
    while (at_symbol("\\/")) {
      lex_.next();
      l = Formula::disj(std::move(l), and_formula());
    }
    return l;
  }

  Formula and_formula() {
    Formula l = atom_formula();
    while (at_symbol("/\\")) {
      lex_.next();
      l = Formula::conj(std::move(l), atom_formula());
    }
    return l;
  }

  Formula atom_formula() {
    if (at_ident("top")) {
      lex_.next();
      return Formula::top();
    }
    if (at_ident("bot")) {
      lex_.next();
      return Formula::bot();
    }
    if (at_ident("forall") || at_ident("exists")) {
      bool universal = lex_.next().text == "forall";
      std::string name = expect_ident();
      std::optional<ArrowSort> srt;
      if (at_symbol(":")) {
        lex_.next();
        srt = sort();
      }
      expect_symbol(".");
      binders_.push_back(name);
      Formula body = formula();
      binders_.pop_back();
      if (srt) {
        return universal ? Formula::forall_arr(name, *srt, std::move(body))
                         : Formula::exists_arr(name, *srt, std::move(body));
      }
      return universal ? Formula::forall_obj(name, std::move(body))
                       : Formula::exists_obj(name, std::move(body));
    }
    if (at_symbol("(")) {
      // Either a parenthesized formula or an equation whose left side is a
      // parenthesized term; disambiguated below without backtracking the lexer
      // by re-parsing from a saved source slice would be clumsy, so peek: a
      // term-parenthesis always continues with '=' after the ')'.
      // We parse a formula first and fall back to equation parsing on failure.
      // Since both grammars are LL on the remainder, a simple save/restore of
      // the full parser state suffices here.
      FormulaParser save = *this;
      try {
        lex_.next();
        Formula f = formula();
        expect_symbol(")");
        if (at_symbol("=")) throw ParseError("equation", 0, 0);  // retry as term
        return f;
      } catch (const ParseError&) {
        *this = save;
      }
    }
    ArrowTerm l = arrow_term();
    expect_symbol("=");
    ArrowTerm r = arrow_term();
    return Formula::eq(std::move(l), std::move(r));
  }

  Context context() {
    Context ctx;
    if (lex_.peek().type == Token::Type::End) return ctx;
    while (true) {
      std::string name = expect_ident();
      expect_symbol(":");
      if (at_ident("Obj")) {
        lex_.next();
        ctx.decls.push_back({name, std::nullopt});
      } else {
        ctx.decls.push_back({name, sort()});
      }
      if (!at_symbol(",")) break;
      lex_.next();
    }
    return ctx;
  }

private:
  Lexer lex_;
  std::vector<std::string> binders_;
};

}  // namespace

ObjectTerm parse_object_term(const std::string& text) {
  FormulaParser p(text);
  ObjectTerm t = p.object_atom();
  p.expect_end();
  return t;
}

ArrowTerm parse_arrow_term(const std::string& text) {
  FormulaParser p(text);
  ArrowTerm t = p.arrow_term();
  p.expect_end();
  return t;
}

Formula parse_formula(const std::string& text) {
  FormulaParser p(text);
  Formula f = p.formula();
  p.expect_end();
  return f;
}

Context parse_context(const std::string& text) {
  FormulaParser p(text);
  Context c = p.context();
  p.expect_end();
  return c;
}

std::string digest(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = hex[h & 0xF];
    h >>= 4;
  }
  return out;
}

}  // namespace catlog
