#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rwl/theory.hpp"

namespace rwl::model {

using Elem = int;
inline constexpr int kMaxCarrier = 24;  // cones are bitmasks
inline constexpr int kDefaultHardCap = 4;

// A subset of a finite carrier. Whether it is downward closed depends on the algebra.
class Cone {
 public:
  Cone() = default;
  explicit Cone(std::uint32_t bits) : bits_(bits) {}
  static Cone of(std::initializer_list<Elem> xs);

  bool contains(Elem e) const { return (bits_ >> e) & 1u; }
  void insert(Elem e) { bits_ |= 1u << e; }
  bool subset_of(Cone o) const { return (bits_ & ~o.bits_) == 0; }
  bool empty() const { return bits_ == 0; }
  int size() const;
  std::vector<Elem> elements() const;
  std::uint32_t bits() const { return bits_; }

  Cone operator|(Cone o) const { return Cone(bits_ | o.bits_); }
  Cone operator&(Cone o) const { return Cone(bits_ & o.bits_); }
  friend bool operator==(Cone a, Cone b) { return a.bits_ == b.bits_; }
  friend bool operator<(Cone a, Cone b) { return a.bits_ < b.bits_; }

 private:
  std::uint32_t bits_ = 0;
};

// Values indexed by argument tuples, first argument most significant.
struct OpTable {
  int arity = 0;
  std::vector<Cone> values;
  friend bool operator==(const OpTable&, const OpTable&) = default;
};

struct FiniteCrwlAlgebra {
  std::string name;
  CrwlSignature sig;
  std::vector<std::string> elems;   // element names; ids are positions
  Elem bottom = 0;
  std::vector<std::uint32_t> down;  // down[x] = {y | y below x}, reflexive
  std::map<std::string, OpTable> tables;

  int size() const { return static_cast<int>(elems.size()); }
  bool leq(Elem x, Elem y) const { return (down[y] >> x) & 1u; }
  Cone principal(Elem x) const { return Cone(down[x]); }
  Cone carrier() const;
  Cone defined() const;  // maximal elements
  bool is_cone(Cone c) const;
  std::optional<Elem> generator(Cone c) const;  // v with c = <v>
  std::optional<Elem> find(const std::string& elem) const;

  std::size_t index(const std::vector<Elem>& args) const;
  Cone op(const std::string& h, const std::vector<Elem>& args) const;
  // Hat extension: union of h over all tuples drawn from the argument cones.
  Cone apply(const std::string& h, const std::vector<Cone>& args) const;

  std::string show(Elem e) const { return elems.at(e); }
  std::string show(Cone c) const;
};

using AlgebraRef = std::shared_ptr<const FiniteCrwlAlgebra>;

struct Report {
  std::vector<std::string> problems;
  bool ok() const { return problems.empty(); }
};

Report validate_algebra(const FiniteCrwlAlgebra& a);

// Builds `down` as the reflexive-transitive closure of the given pairs (x below y).
std::vector<std::uint32_t> order_closure(int n, const std::vector<std::pair<Elem, Elem>>& below);

struct Valuation {
  std::map<std::string, Elem> mapping;
  bool total = false;  // every image totally defined
};

Valuation make_valuation(const FiniteCrwlAlgebra& a, std::map<std::string, Elem> m);

// Throws TheoryError on an unbound variable or unknown symbol.
Cone eval_expr(const FiniteCrwlAlgebra& a, const Term& e, const Valuation& v);
bool satisfies_statement(const FiniteCrwlAlgebra& a, const Valuation& v, const Statement& s);

// Visits every valuation of `vars` (only totally defined ones if asked); stops when f returns false.
bool for_each_valuation(const FiniteCrwlAlgebra& a, const VarSet& vars, bool total_only,
                        const std::function<bool(const Valuation&)>& f);

// Statement holds under every valuation of its variables.
bool satisfies_everywhere(const FiniteCrwlAlgebra& a, const Statement& s, bool total_only);
bool satisfies_rule(const FiniteCrwlAlgebra& a, const CrwlRule& r);
bool is_model(const FiniteCrwlAlgebra& a, const CrwlTheory& T);

struct CrwlHom {
  std::string name;
  AlgebraRef source, target;
  std::vector<Cone> table;  // source element to target cone

  Cone apply(Cone c) const;  // hat extension
  friend bool operator==(const CrwlHom& a, const CrwlHom& b) { return a.table == b.table; }
};

Report check_homomorphism(const CrwlHom& h);
// h2 after h1.
CrwlHom compose_homomorphisms(const CrwlHom& h1, const CrwlHom& h2);
CrwlHom identity_hom(const AlgebraRef& a);
// Every homomorphism a -> b.
std::vector<CrwlHom> enumerate_homs(const AlgebraRef& a, const AlgebraRef& b);

// Same poset, tables pulled back along the morphism.
FiniteCrwlAlgebra reduct(const SignatureMorphism& m, const FiniteCrwlAlgebra& a);

using AlgebraPredicate = std::function<bool(const FiniteCrwlAlgebra&)>;

// All valid algebras over sig with carrier size <= max_size, one per isomorphism class,
// filtered by pred. sink returns false to stop. Returns the number passed to sink.
std::size_t enumerate_algebras(const CrwlSignature& sig, int max_size, const AlgebraPredicate& pred,
                               const std::function<bool(const FiniteCrwlAlgebra&)>& sink,
                               int hard_cap = kDefaultHardCap);
std::vector<AlgebraRef> all_algebras(const CrwlSignature& sig, int max_size, const AlgebraPredicate& pred = {},
                                     int hard_cap = kDefaultHardCap);

struct EqualizerCandidate {
  AlgebraRef object;
  CrwlHom arrow;
};

// Every (E, e: E -> source) with F.e = G.e, E ranging over models of `theory` when given.
std::vector<EqualizerCandidate> equalizing_candidates(const CrwlHom& F, const CrwlHom& G, int max_size,
                                                      const CrwlTheory* theory, int hard_cap = kDefaultHardCap);

// Universal property against every test object of size <= max_size (models of `theory` when given).
bool is_equalizer(const CrwlHom& F, const CrwlHom& G, const EqualizerCandidate& c, int max_size,
                  const CrwlTheory* theory, std::string* why = nullptr, int hard_cap = kDefaultHardCap);

struct EqualizerSearch {
  std::optional<EqualizerCandidate> found;
  std::size_t candidates = 0;
  int max_size = 0;
  std::string describe() const;
};

EqualizerSearch search_equalizer(const CrwlHom& F, const CrwlHom& G, int max_size, const CrwlTheory* theory,
                                 int hard_cap = kDefaultHardCap);

// Refutes a candidate equalizer of F, G: A -> B following the counterexample argument.
// H: A -> A equalizes F and G; a1 is the middle element of A and b1 the top of B.
struct Replay {
  bool refuted = false;
  std::string message;
  std::optional<CrwlHom> mediator;  // M with e.M = H
  Elem e1 = -1, e2 = -1;
  std::optional<CrwlHom> m1, m2;  // B -> E, distinct, e.M1 = e.M2
};

Replay replay_no_equalizer(const CrwlHom& F, const CrwlHom& G, const CrwlHom& H, const EqualizerCandidate& c,
                           const std::string& a1 = "a1", const std::string& b1 = "b1");

// Carrier {bot, a, b1..bk}; constructors give <a>, defined functions the whole carrier.
AlgebraRef automorphism_algebra(const CrwlSignature& sig, int k);
// F_i: bot -> <bot>, a -> <a>, every b_j -> <b_i>.
std::vector<CrwlHom> automorphism_family(const AlgebraRef& a, int k);

// Finite preorder models of RL theories.
struct PreorderRlModel {
  std::string name;
  RlSignature sig;  // operators and equations
  std::vector<std::string> elems;
  std::vector<std::uint32_t> down;  // down[x] = {y | y <= x}
  std::map<std::string, std::vector<Elem>> ops;  // argument tuple index to element
  // At most one arrow between two objects, so a labeled rule has nothing to record beyond its label.
  std::map<std::string, bool> rule_witnesses;

  int size() const { return static_cast<int>(elems.size()); }
  bool leq(Elem x, Elem y) const { return (down[y] >> x) & 1u; }
  std::size_t index(const std::vector<Elem>& args) const;
  Elem op(const std::string& f, const std::vector<Elem>& args) const;
  Elem eval(const Term& t, const std::map<std::string, Elem>& v) const;
  std::optional<Elem> find(const std::string& elem) const;
};

using PreorderRef = std::shared_ptr<const PreorderRlModel>;

// Preorder laws, monotone operations, equations as pointwise equalities.
Report validate_preorder_model(const PreorderRlModel& m);
bool preorder_satisfies(const PreorderRlModel& m, const RlRule& r);
bool is_preorder_model(const PreorderRlModel& m, const RlTheory& T);
// Records a witness for every labeled rule of T.
void attach_witnesses(PreorderRlModel& m, const RlTheory& T);

std::size_t enumerate_preorder_models(const RlTheory& T, int max_size,
                                      const std::function<bool(const PreorderRlModel&)>& sink,
                                      int hard_cap = kDefaultHardCap);
std::vector<PreorderRef> all_preorder_models(const RlTheory& T, int max_size, int hard_cap = kDefaultHardCap);

struct PreorderHom {
  std::string name;
  PreorderRef source, target;
  std::vector<Elem> map;
  friend bool operator==(const PreorderHom& a, const PreorderHom& b) { return a.map == b.map; }
};

Report check_preorder_hom(const PreorderHom& h);
std::vector<PreorderHom> enumerate_preorder_homs(const PreorderRef& a, const PreorderRef& b);

struct PreorderEqualizer {
  PreorderRef object;
  PreorderHom inclusion;
  bool closed = false;     // carrier closed under the operations
  bool is_model = false;
  bool universal = false;  // bounded universal property
  std::string message;
  bool ok() const { return closed && is_model && universal; }
};

// The sub-preorder where F and G agree, checked against test models of size <= check_size.
PreorderEqualizer preorder_equalizer(const PreorderHom& F, const PreorderHom& G, const RlTheory& T, int check_size);

}  // namespace rwl::model
