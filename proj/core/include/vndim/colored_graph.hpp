#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "vndim/group.hpp"

namespace vndim {

using VertexId = std::int64_t;

/// Finite directed graph with generator-colored edges. Invariants (checked by
/// validate / on load): the edge (x->y) colored s exists iff (y->x) colored
/// s^-1 exists, no vertex has two outgoing edges of the same color, and every
/// degree is at most |S|. Vertices carry stable external ids that survive
/// induced-subgraph deletion, plus an optional group-element label.
class ColoredGraph {
 public:
  ColoredGraph(GroupContext ctx, std::vector<VertexId> ids,
               std::vector<GroupElement> labels = {});

  /// Induced subgraph of the Cayley graph on F: edge (x -> y) colored s iff y = s x.
  /// Vertices are F sorted lexicographically, ids 0..|F|-1, labeled by their elements.
  static ColoredGraph cayley_subgraph(const GroupContext& ctx, std::span<const GroupElement> F);

  /// Subgraph induced on a subset of vertex ids; ids and labels are preserved.
  ColoredGraph induced(std::span<const VertexId> keep) const;

  const GroupContext& context() const { return ctx_; }
  std::int64_t n_vertices() const { return static_cast<std::int64_t>(ids_.size()); }
  int n_colors() const { return ctx_.n_generators(); }
  const std::vector<VertexId>& vertex_ids() const { return ids_; }
  VertexId id_at(std::int64_t pos) const { return ids_[pos]; }
  std::int64_t pos_of(VertexId id) const;  // -1 when absent
  bool has_label(std::int64_t pos) const { return !labels_.empty(); }
  const GroupElement& label_at(std::int64_t pos) const { return labels_[pos]; }

  /// Target position of the edge colored `color` leaving `pos`, or -1.
  std::int64_t out_edge(std::int64_t pos, int color) const {
    return adj_[static_cast<std::size_t>(pos) * n_colors_ + color];
  }
  int degree(std::int64_t pos) const;
  std::int64_t n_edges() const;  // directed edge count

  void add_edge(std::int64_t src_pos, std::int64_t dst_pos, int color);
  void validate() const;  // throws Error(MalformedCollection) on invariant violation

  /// Line format: "g <group-spec>", then "v <id> [label]", then "e <src> <dst> <color>".
  void save(std::ostream& os) const;
  static ColoredGraph load(std::istream& is);

 private:
  GroupContext ctx_;
  int n_colors_ = 0;
  std::vector<VertexId> ids_;
  std::vector<GroupElement> labels_;
  std::vector<std::int64_t> adj_;  // pos * n_colors + color -> pos or -1
  std::unordered_map<VertexId, std::int64_t> pos_;
};

/// Finite subset of a group, kept sorted and deduplicated.
struct FolnerSet {
  GroupContext ctx;
  std::vector<GroupElement> elements;

  static FolnerSet of(const GroupContext& ctx, std::vector<GroupElement> elems);
  std::int64_t size() const { return static_cast<std::int64_t>(elements.size()); }
  bool contains(const GroupElement& g) const;
  bool contains_identity() const;
  /// max word length over the set (0 for {1})
  std::int64_t radius() const;
};

/// B_k(F): the k-neighborhood of F in the word metric.
std::vector<GroupElement> k_neighborhood(const GroupContext& ctx,
                                         std::span<const GroupElement> F, std::int64_t k);
/// Omega_k(F): elements of F at distance > k from the complement.
std::vector<GroupElement> k_interior(const GroupContext& ctx, std::span<const GroupElement> F,
                                     std::int64_t k);
/// Boundary: elements of F with a neighbor outside F.
std::vector<GroupElement> boundary(const GroupContext& ctx, std::span<const GroupElement> F);
/// i(F) = |boundary| / |F| as an exact rational; empty F throws Error(EmptySet).
Rat iso_ratio(const GroupContext& ctx, std::span<const GroupElement> F);

/// The unique color-guided map from the radius-k ball of the identity onto the
/// radius-k ball of `center`, when the two balls are color-isomorphic.
struct BallIsomorphism {
  VertexId center = 0;
  std::int64_t radius = 0;
  std::vector<GroupElement> domain;  // ball elements, BFS layer order
  std::vector<VertexId> image;       // image[i] = phi(domain[i])

  VertexId map(const GroupContext& ctx, const GroupElement& g) const;
};

/// Repeated per-vertex ball matching against one graph, with the lazily grown
/// Cayley ball shared across calls. Not thread-safe; create one per thread.
class BallMatcher {
 public:
  BallMatcher(const ColoredGraph& B, const GroupContext& ctx);
  ~BallMatcher();
  BallMatcher(const BallMatcher&) = delete;
  BallMatcher& operator=(const BallMatcher&) = delete;

  /// Largest k <= cap at which the vertex is k-similar to the identity.
  std::int64_t radius_at(std::int64_t pos, std::int64_t cap);

  /// Positions of phi^pos_k applied to `subset`, or nullopt when the vertex is
  /// not k-similar. Subset elements must lie in the radius-k ball.
  std::optional<std::vector<std::int64_t>> image(std::int64_t pos, std::int64_t k,
                                                 std::span<const GroupElement> subset);

 private:
  friend std::optional<BallIsomorphism> ball_isomorphism_at(const ColoredGraph&,
                                                            const GroupContext&, std::int64_t,
                                                            std::int64_t);
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// For every vertex, the largest k <= cap whose k-ball around the vertex is
/// edge-colored isomorphic to the k-ball of the identity in the Cayley graph.
/// Indexed by vertex position.
std::vector<std::int64_t> similarity_radii(const ColoredGraph& B, const GroupContext& ctx,
                                           std::int64_t cap);

/// The ball isomorphism phi^x_k at one vertex, or nullopt when x is not k-similar.
std::optional<BallIsomorphism> ball_isomorphism_at(const ColoredGraph& B, const GroupContext& ctx,
                                                   std::int64_t pos, std::int64_t k);

/// Q^B_k with the color-guided isomorphism for each member, keyed by vertex id.
std::map<VertexId, BallIsomorphism> k_similar_vertices(const ColoredGraph& B,
                                                       const GroupContext& ctx, std::int64_t k);

/// |Q^{B_n}_k| / |V(B_n)| for each graph of the sequence.
std::vector<Rat> convergence_profile(std::span<const ColoredGraph> seq, const GroupContext& ctx,
                                     std::int64_t k);

}  // namespace vndim
