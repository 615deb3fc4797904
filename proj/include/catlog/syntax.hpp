#pragma once

// Syntax of the dependently sorted language of categories: object terms,
// arrow terms over dependent arrow sorts X -> Y, formulas with restricted
// quantifiers, contexts, and signatures of object/arrow constants.
//
// Variables are locally nameless: bound occurrences are de Bruijn indices
// (one shared index space for object and arrow binders), free occurrences
// are named references resolved against a context and then a signature.
// Binders keep a printable name hint; structural equality ignores hints,
// so alpha-equivalence is plain equality.

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace catlog {

// ---------------------------------------------------------------------------
// Errors

enum class ErrorKind {
  Parse,
  DuplicateVariable,
  UndeclaredSortDependency,
  UnboundName,
  EndpointMismatch,
  SortMismatchInEq,
  SortMismatch,
  IllFormedQuantifier,
  MissingBinding,
  RuleMismatch,
  EigenvariableCapture,
  UnknownAxiom,
  NotProvablyUnique,
  OutOfBudget,
  NotProvable,
  NotEquivalence,
  NotCongruent,
  OracleIncomplete,
  AxiomNotCertified,
  InconsistencyWitness,
  GsNotInTiny,
  InvalidInput,
  Internal,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

// Position-tagged syntax error.
class ParseError : public Error {
public:
  ParseError(std::string message, int line, int column)
      : Error(ErrorKind::Parse,
              message + " at " + std::to_string(line) + ":" + std::to_string(column)),
        line_(line), column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_;
  int column_;
};

// ---------------------------------------------------------------------------
// Terms

// An object term is a named reference (constant or context variable,
// resolved by lookup) or a bound variable.
class ObjectTerm {
public:
  enum class Kind { Ref, Bound };

  static ObjectTerm ref(std::string name);
  static ObjectTerm bound(int index, std::string hint = "");

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }  // Ref; hint for Bound
  int index() const { return index_; }               // Bound

  bool operator==(const ObjectTerm& o) const {
    if (kind_ != o.kind_) return false;
    return kind_ == Kind::Ref ? name_ == o.name_ : index_ == o.index_;
  }
  std::strong_ordering operator<=>(const ObjectTerm& o) const;

private:
  Kind kind_ = Kind::Ref;
  std::string name_;
  int index_ = 0;
};

struct ArrowSort {
  ObjectTerm dom;
  ObjectTerm cod;

  bool operator==(const ArrowSort& o) const { return dom == o.dom && cod == o.cod; }
  std::strong_ordering operator<=>(const ArrowSort& o) const;
};

// Arrow terms: named references, bound variables, identities, compositions.
class ArrowTerm {
public:
  enum class Kind { Ref, Bound, Id, Comp };

  static ArrowTerm ref(std::string name);
  static ArrowTerm bound(int index, std::string hint = "");
  static ArrowTerm id(ObjectTerm obj);
  static ArrowTerm comp(ArrowTerm outer, ArrowTerm inner);  // outer after inner

  Kind kind() const;
  const std::string& name() const;    // Ref; hint for Bound
  int index() const;                  // Bound
  const ObjectTerm& obj() const;      // Id
  const ArrowTerm& outer() const;     // Comp
  const ArrowTerm& inner() const;     // Comp

  int depth() const;  // Ref/Bound/Id are 0; Comp is 1 + max of parts

  bool operator==(const ArrowTerm& o) const { return compare(o) == 0; }
  std::strong_ordering operator<=>(const ArrowTerm& o) const { return compare(o); }
  std::strong_ordering compare(const ArrowTerm& o) const;

private:
  struct Node;
  std::shared_ptr<const Node> node_;
};

// ---------------------------------------------------------------------------
// Formulas

class Formula {
public:
  enum class Kind {
    Eq, And, Or, Implies, Top, Bot,
    ForallObj, ExistsObj, ForallArr, ExistsArr,
  };

  Formula() = default;  // null; only for default construction, not a value

  static Formula eq(ArrowTerm lhs, ArrowTerm rhs);
  static Formula conj(Formula l, Formula r);
  static Formula disj(Formula l, Formula r);
  static Formula implies(Formula l, Formula r);
  static Formula top();
  static Formula bot();
  // Negation is notation: phi => bot.
  static Formula neg(Formula f) { return implies(std::move(f), bot()); }
  // Raw binder constructors; body uses Bound(0) for the new variable.
  static Formula forall_obj(std::string hint, Formula body);
  static Formula exists_obj(std::string hint, Formula body);
  static Formula forall_arr(std::string hint, ArrowSort sort, Formula body);
  static Formula exists_arr(std::string hint, ArrowSort sort, Formula body);

  bool valid() const { return node_ != nullptr; }
  Kind kind() const;
  const ArrowTerm& lhs() const;      // Eq
  const ArrowTerm& rhs() const;      // Eq
  const Formula& left() const;       // And/Or/Implies
  const Formula& right() const;      // And/Or/Implies
  const std::string& binder() const; // quantifiers: name hint
  const ArrowSort& sort() const;     // arrow quantifiers
  const Formula& body() const;       // quantifiers

  bool is_quantifier() const;
  bool is_object_quantifier() const;

  int depth() const;  // connective/quantifier nesting depth; atoms are 0

  bool operator==(const Formula& o) const { return compare(o) == 0; }
  std::strong_ordering operator<=>(const Formula& o) const { return compare(o); }
  std::strong_ordering compare(const Formula& o) const;

private:
  struct Node;
  std::shared_ptr<const Node> node_;
};

// ---------------------------------------------------------------------------
// Contexts and signatures

struct ContextDecl {
  std::string name;
  std::optional<ArrowSort> sort;  // nullopt: object declaration

  bool is_object() const { return !sort.has_value(); }
};

struct Context {
  std::vector<ContextDecl> decls;

  bool empty() const { return decls.empty(); }
  std::size_t size() const { return decls.size(); }
  const ContextDecl* find(const std::string& name) const;
  Context extended(ContextDecl d) const;
};

struct Signature {
  std::set<std::string> objects;
  std::map<std::string, ArrowSort> arrows;  // endpoints are object constants

  bool has_object(const std::string& n) const { return objects.count(n) > 0; }
  const ArrowSort* arrow_sort(const std::string& n) const;
  bool has_name(const std::string& n) const {
    return has_object(n) || arrows.count(n) > 0;
  }
};

// ---------------------------------------------------------------------------
// de Bruijn plumbing: all public values are locally closed (every Bound
// index points to a binder within the value). `close` abstracts a free
// name into Bound(0) ready to be wrapped by a binder; `open` instantiates
// a binder body with a locally closed term.

ObjectTerm shift_object(const ObjectTerm& t, int by, int cutoff = 0);
ArrowSort shift_sort(const ArrowSort& s, int by, int cutoff = 0);
ArrowTerm shift_arrow(const ArrowTerm& t, int by, int cutoff = 0);

Formula close_obj(const Formula& f, const std::string& name);
Formula close_arr(const Formula& f, const std::string& name);
Formula open_obj(const Formula& body, const ObjectTerm& value);
Formula open_arr(const Formula& body, const ArrowTerm& value);

// Convenience binder builders taking named bodies.
Formula bind_forall_obj(const std::string& name, const Formula& body);
Formula bind_exists_obj(const std::string& name, const Formula& body);
Formula bind_forall_arr(const std::string& name, const ArrowSort& sort, const Formula& body);
Formula bind_exists_arr(const std::string& name, const ArrowSort& sort, const Formula& body);

// Free names (Ref occurrences) of a value, split by the position they
// occur in. A name can appear in both sets only in ill-formed values.
struct FreeNames {
  std::set<std::string> objects;
  std::set<std::string> arrows;

  bool contains(const std::string& n) const {
    return objects.count(n) > 0 || arrows.count(n) > 0;
  }
};

FreeNames free_names(const ObjectTerm& t);
FreeNames free_names(const ArrowTerm& t);
FreeNames free_names(const Formula& f);
FreeNames free_names(const Context& ctx);  // names the declarations depend on

// ---------------------------------------------------------------------------
// Substitution

// A substitution maps free names to terms. Object names may only map to
// object terms and arrow names to arrow terms; apply throws MissingBinding
// when a free name of the value has no image and `total` is requested.
struct Subst {
  std::map<std::string, ObjectTerm> objects;
  std::map<std::string, ArrowTerm> arrows;

  static Subst identity() { return {}; }
  bool has(const std::string& n) const {
    return objects.count(n) > 0 || arrows.count(n) > 0;
  }
};

ObjectTerm substitute(const ObjectTerm& t, const Subst& s, bool total = false);
ArrowSort substitute(const ArrowSort& srt, const Subst& s, bool total = false);
ArrowTerm substitute(const ArrowTerm& t, const Subst& s, bool total = false);
Formula substitute(const Formula& f, const Subst& s, bool total = false);
Context substitute(const Context& ctx, const Subst& s);

// ---------------------------------------------------------------------------
// Well-formedness
//
// The object-quantifier restriction (no arrow variable free in the body
// may mention the bound variable in its declared sort) is a condition on
// the named presentation: it is checked against the attached binder
// names, since in the index representation a sort can never reach past
// its own binder. Printing freshens names, so a printed-and-reparsed
// formula may be accepted where the original presentation is not.

void check_context(const Signature& sig, const Context& ctx);

// Sort of a term in a well-formed context. Object terms yield nothing
// beyond existence, so only the arrow version returns a sort.
void check_object_term(const Signature& sig, const Context& ctx, const ObjectTerm& t);
ArrowSort infer_sort(const Signature& sig, const Context& ctx, const ArrowTerm& t);

void check_formula(const Signature& sig, const Context& ctx, const Formula& f);

// ---------------------------------------------------------------------------
// Parsing and printing

std::string print(const ObjectTerm& t);
std::string print(const ArrowTerm& t);
std::string print(const ArrowSort& s);
std::string print(const Formula& f);
std::string print(const Context& ctx);

ObjectTerm parse_object_term(const std::string& text);
ArrowTerm parse_arrow_term(const std::string& text);
Formula parse_formula(const std::string& text);
Context parse_context(const std::string& text);

// FNV-1a digest of a string, printed as 16 hex digits; used to key
// certificate stores and report rows by a formula's printed form.
std::string digest(const std::string& text);

// Fresh-name supply: base, base1, base2, ... first not in `taken`.
std::string fresh_name(const std::string& base, const std::set<std::string>& taken);

// A stateful supply that never hands out the same name twice.
struct NameSupply {
  std::set<std::string> taken;

  void reserve(const std::string& n) { taken.insert(n); }
  void reserve(const FreeNames& fn) {
    taken.insert(fn.objects.begin(), fn.objects.end());
    taken.insert(fn.arrows.begin(), fn.arrows.end());
  }
  void reserve(const Context& ctx) {
    for (const auto& d : ctx.decls) taken.insert(d.name);
    reserve(free_names(ctx));
  }
  void reserve(const Signature& sig) {
    taken.insert(sig.objects.begin(), sig.objects.end());
    for (const auto& [n, _] : sig.arrows) taken.insert(n);
  }
  std::string fresh(const std::string& base) {
    std::string n = fresh_name(base, taken);
    taken.insert(n);
    return n;
  }
};

}  // namespace catlog
