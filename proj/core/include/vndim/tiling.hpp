#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vndim/colored_graph.hpp"

namespace vndim {

/// A tile: the image of a Folner shape under the color-guided ball isomorphism
/// at its center. Vertex ids are sorted.
struct Tile {
  VertexId center = 0;
  int shape_index = 0;
  std::vector<VertexId> vertices;
};

/// Per-tile subsets witnessing eps-disjointness: kept[i] is a subset of
/// tiles[i].vertices with |kept[i]| >= (1-eps)|tile|, pairwise disjoint.
struct DisjointnessWitness {
  std::vector<std::vector<VertexId>> kept;
};

/// Greedy witness search in input order: kept[i] = vertices not claimed by an
/// earlier tile. Sound, not complete: absence means "not verified", never a
/// proof that no witness exists.
std::optional<DisjointnessWitness> is_epsilon_disjoint(const ColoredGraph& g,
                                                       std::span<const Tile> tiles,
                                                       const Rat& eps);

/// Exact validation of a supplied witness.
bool check_disjointness_witness(const ColoredGraph& g, std::span<const Tile> tiles,
                                const Rat& eps, const DisjointnessWitness& w);

/// |V intersect union of tiles| / |V|.
Rat cover_fraction(const ColoredGraph& g, std::span<const Tile> tiles);

/// Least multiplicity bound M with total tile mass >= (1-delta) M |V|, i.e. the
/// max vertex multiplicity when that works, nullopt otherwise.
std::optional<std::int64_t> is_even_cover(const ColoredGraph& g, std::span<const Tile> tiles,
                                          const Rat& delta);

/// Greedy selection in decreasing size order (ties: shape_index desc, center
/// asc, input index asc): a tile is accepted iff its overlap with the accepted
/// union is at most eps * |tile|. Returns indices into `tiles`. The two
/// conclusions (eps-disjoint witness, cover >= eps(1-delta)) are re-verified
/// exactly; violation throws Error(PostconditionViolation).
std::vector<std::size_t> select_epsilon_disjoint(const ColoredGraph& g,
                                                 std::span<const Tile> tiles, const Rat& eps,
                                                 const Rat& delta);

/// |B_K(H)| / |H| < 1 + alpha, exactly.
bool type_check(const GroupContext& ctx, const FolnerSet& H, std::int64_t K, const Rat& alpha);

struct InductionalReport {
  std::vector<Tile> selected;
  ColoredGraph residual;
  Rat beta1{0};
  bool meets_paper_ratios = false;  // H inside B_{L/100}(1) and K < L/10
  std::int64_t even_cover_multiplicity = 0;
  Rat cover{0};
  bool residual_check_triggered = false;  // |V(residual)| > (eps/2)|V(B)|
  bool residual_check_holds = true;       // |Q^{B1}_K| >= (1-beta1)|V(B1)| when triggered
  std::int64_t residual_similar_count = 0;
};

/// One scale of the quasi-tiling descent: tile every L-similar center with the
/// shape H, verify the family is a beta-even cover with multiplicity bound |H|,
/// select an eps1-disjoint subfamily covering at least eps1(1-beta), and return
/// the graph induced on the uncovered vertices together with the
/// beta1 = alpha (1-eps1)^-1 (2/eps) residual-similarity report.
InductionalReport inductional_step(const ColoredGraph& B, const GroupContext& ctx,
                                   const FolnerSet& H, std::int64_t K, const Rat& alpha,
                                   std::int64_t L, const Rat& beta, const Rat& eps,
                                   const Rat& eps1);

/// Indices (0-based, into `exhaustion`) of a nested subsequence with
/// 1 in F_{n_1} inside B_{s_1}(1), B_{s_i}(1) inside F_{n_{i+1}}, and each
/// F_{n_{i+1}} of type (100 s_i, alpha_i). Throws Error(ExhaustionExhausted)
/// naming the first unsatisfiable constraint.
std::vector<std::size_t> good_subsequence(const GroupContext& ctx,
                                          std::span<const FolnerSet> exhaustion,
                                          std::span<const Rat> alpha, std::span<const Rat> s);

struct TilingParams {
  Rat epsilon{0};
  Rat epsilon1{0};          // largest power of 1/2 strictly below epsilon/100
  std::int64_t m_bound = 0; // minimal M with (1 - eps1/2)^M < eps/100
  Rat beta{0};              // eps / (200 M)
  std::vector<Rat> alpha;   // uniform beta*eps*(1-eps1)/4 per realized scale
  std::vector<Rat> s;       // realized shape radii, s_{k+1} >= 10 s_k
  std::vector<std::int64_t> similarity_radii;  // realized L per scale
  std::vector<std::size_t> subsequence;        // exhaustion indices per scale
};

/// Exact parameter arithmetic.
Rat epsilon1_for(const Rat& eps);
std::int64_t step_bound_for(const Rat& eps, const Rat& eps1);

struct ScaleTrace {
  std::size_t exhaustion_index = 0;
  std::int64_t L = 0;
  std::int64_t K = 0;
  Rat alpha_measured{0};
  Rat beta_measured{0};
  std::int64_t tiles_accepted = 0;
  std::int64_t covered_after = 0;
  bool residual_check_triggered = false;
  bool residual_check_holds = true;
};

struct Tiling {
  TilingParams params;
  std::string group_spec;
  std::vector<FolnerSet> shapes;  // shapes[i] belongs to scale i (ascending radius)
  std::vector<Tile> tiles;        // emitted largest scale first, centers ascending
  std::vector<ScaleTrace> trace;
};

/// Multi-scale quasi-tiling driver. Walks the realized shape chain from the
/// largest usable scale down, running one inductional step per scale on the
/// current residual and stopping as soon as the uncovered part is at most
/// eps |V(B)|. The emitted tiling is re-verified: an eps-disjointness witness
/// must exist and the cover fraction must reach 1 - eps, otherwise
/// Error(PostconditionViolation) is thrown.
Tiling quasi_tile(const ColoredGraph& B, const GroupContext& ctx,
                  std::span<const FolnerSet> exhaustion, const Rat& eps);

struct TilingVerification {
  bool disjoint = false;
  Rat cover{0};
  bool params_ok = false;  // the emitted params satisfy the three inequalities
};

TilingVerification verify_tiling(const ColoredGraph& B, const Tiling& t);

std::string tiling_to_json(const Tiling& t);
Tiling tiling_from_json(const std::string& text);

}  // namespace vndim
