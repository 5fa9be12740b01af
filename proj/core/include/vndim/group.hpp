#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vndim/errors.hpp"
#include "vndim/rational.hpp"

namespace vndim {

enum class GroupFamily {
  FreeAbelian,        // Z^d, standard generators +-e_1..+-e_d
  FiniteQuotient,     // Z^d / (m_1 Z x ... x m_d Z); modulus 0 keeps a Z factor
  Heisenberg,         // integer triples (a,b,c), (a,b,c)(a',b',c') = (a+a', b+b', c+c'+a b')
  HeisenbergQuotient  // same multiplication with all coordinates mod q
};

/// Group elements are plain coordinate vectors; all arithmetic lives on GroupContext.
struct GroupElement {
  std::vector<std::int64_t> coords;

  friend bool operator==(const GroupElement&, const GroupElement&) = default;
  friend auto operator<=>(const GroupElement&, const GroupElement&) = default;
};

struct GroupElementHash {
  std::size_t operator()(const GroupElement& g) const noexcept {
    std::size_t h = 0x9e3779b97f4a7c15ull;
    for (auto c : g.coords) h = (h ^ static_cast<std::size_t>(c)) * 0x100000001b3ull;
    return h;
  }
};

/// A concrete finitely generated group with a fixed symmetric generator list.
/// Immutable value; safe to share across threads.
class GroupContext {
 public:
  static GroupContext free_abelian(int d);
  static GroupContext finite_quotient(int d, std::vector<std::int64_t> moduli);
  static GroupContext heisenberg();
  static GroupContext heisenberg_quotient(std::int64_t q);

  /// Grammar: "Z" | "Z^<d>" | "Z/<m>" | "Z^<d>/(m_1,...,m_d)" | "H3" | "H3/<q>".
  /// A modulus of 0 keeps that coordinate infinite, e.g. "Z^2/(6,0)" is Z/6 x Z.
  static GroupContext parse(const std::string& spec);
  std::string spec_string() const;

  GroupFamily family() const { return family_; }
  int coord_arity() const { return arity_; }
  const std::vector<std::int64_t>& moduli() const { return moduli_; }
  bool is_finite() const;
  std::int64_t word_length_cap() const { return word_length_cap_; }
  void set_word_length_cap(std::int64_t cap) { word_length_cap_ = cap; }

  /// Symmetric generator list. Index i pairs with inverse_index(i). For quotients the
  /// list keeps the parent arity so edge-color indices line up across the family;
  /// duplicate elements may appear (e.g. +-e under modulus 2).
  const std::vector<GroupElement>& generators() const { return generators_; }
  int inverse_index(int gen) const { return inverse_index_[gen]; }
  int n_generators() const { return static_cast<int>(generators_.size()); }

  GroupElement identity() const;
  bool is_identity(const GroupElement& g) const;
  GroupElement compose(const GroupElement& g, const GroupElement& h) const;
  GroupElement inverse(const GroupElement& g) const;
  GroupElement apply_generator(int gen, const GroupElement& g) const;  // generators_[gen] * g

  /// Throws Error(ContextMismatch) when g does not belong to this group.
  void check_element(const GroupElement& g) const;

  /// Shortest generator word length. Closed form for the abelian families,
  /// breadth-first search otherwise; exceeding the cap throws Error(CapExceeded).
  std::int64_t word_length(const GroupElement& g) const;

  /// All g with word_length(g) <= k, in BFS layer order (lexicographic inside a layer).
  std::vector<GroupElement> ball_elements(std::int64_t k) const;
  /// Same, grouped by word length; layers[j] is the sphere of radius j.
  std::vector<std::vector<GroupElement>> ball_layers(std::int64_t k) const;

  std::string format_element(const GroupElement& g) const;
  GroupElement parse_element(const std::string& s) const;

  friend bool operator==(const GroupContext& a, const GroupContext& b) {
    return a.family_ == b.family_ && a.arity_ == b.arity_ && a.moduli_ == b.moduli_;
  }

 private:
  GroupContext() = default;
  void build_generators();
  std::int64_t reduce_coord(std::int64_t v, std::int64_t m) const;

  GroupFamily family_ = GroupFamily::FreeAbelian;
  int arity_ = 1;
  std::vector<std::int64_t> moduli_;  // per coordinate; FreeAbelian/Heisenberg: empty
  std::vector<GroupElement> generators_;
  std::vector<int> inverse_index_;
  std::int64_t word_length_cap_ = 64;
};

}  // namespace vndim
