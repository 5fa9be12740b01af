#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

#include "vndim/colored_graph.hpp"
#include "vndim/exact_linalg.hpp"
#include "vndim/group.hpp"

namespace vndim {

/// A d x d matrix over the group ring: finitely supported map from group
/// elements to d x d blocks of Gaussian rationals. Acts on finitely supported
/// functions by left convolution.
class GroupRingMatrix {
 public:
  GroupRingMatrix(GroupContext ctx, int d);

  const GroupContext& context() const { return ctx_; }
  int block_dim() const { return d_; }
  const std::map<GroupElement, std::vector<GQ>>& support() const { return support_; }
  bool is_zero() const { return support_.empty(); }

  void set_entry(const GroupElement& g, int i, int j, GQ v);
  GQ entry(const GroupElement& g, int i, int j) const;
  /// Block A_g, zero block when g is outside the support.
  std::vector<GQ> block(const GroupElement& g) const;

  /// Header "group <spec> d <d>", then one line per support element:
  /// "<coords> ; e11 e12 ... (row-major complex entries)".
  void save(std::ostream& os) const;
  static GroupRingMatrix load(std::istream& is);

 private:
  GroupContext ctx_;
  int d_;
  std::map<GroupElement, std::vector<GQ>> support_;
};

/// Finitely supported function into C^d over the group.
struct FiniteVector {
  GroupContext ctx;
  int d = 1;
  std::map<GroupElement, std::vector<GQ>> values;

  void set(const GroupElement& g, std::vector<GQ> v);
  std::vector<GroupElement> support() const;
};

/// Max word length over the support. Throws Error(PreconditionViolation) for A == 0.
std::int64_t propagation(const GroupRingMatrix& A);

/// Transformation kernel: the block A_{gamma delta^-1}.
std::vector<GQ> transformation_kernel(const GroupRingMatrix& A, const GroupElement& gamma,
                                      const GroupElement& delta);

/// Exact left convolution A(f).
FiniteVector apply(const GroupRingMatrix& A, const FiniteVector& f);

/// The (d|F|) x (d|F|) matrix of P_F A P_F^* in the basis indexed by F (sorted order).
SparseExactMatrix compress(const GroupRingMatrix& A, const FolnerSet& F);

struct SubspaceDims {
  std::int64_t z = 0;  // supp f in B_w(F), A(f)|_F = 0
  std::int64_t w = 0;  // supp f in Omega_w(F), A(f) = 0
  std::int64_t v = 0;  // ker of the compression
};
SubspaceDims subspace_dims(const GroupRingMatrix& A, const FolnerSet& F);

enum class ColumnRule { Similar, NotSimilar };

/// The approximating operator on a finite colored graph: column blocks are
/// transplanted from A along ball isomorphisms at w(A)-similar vertices and
/// vanish elsewhere.
struct ApproxOperator {
  SparseExactMatrix matrix;
  int d = 1;
  std::vector<ColumnRule> column_rule;  // per vertex position

  ApproxOperator(std::int64_t n, int dd) : matrix(n * dd, n * dd), d(dd) {}
};

ApproxOperator build_Tn(const ColoredGraph& B, const GroupContext& ctx, const GroupRingMatrix& A);

/// The d|G| x d|G| matrix of the image of A in a finite quotient group
/// (vertices ordered lexicographically, matching cayley_subgraph on the full
/// quotient). Independent route used to cross-check build_Tn.
SparseExactMatrix quotient_operator_matrix(const GroupRingMatrix& A, const GroupContext& quotient);

enum class Verdict { Proven, Supported, Refuted };

struct PropertyReport {
  Verdict verdict = Verdict::Proven;
  bool exhaustive = false;
  std::int64_t checked = 0;
  std::optional<std::vector<GroupElement>> refuting_subset;
};

/// For subsets K of F with |K| > (1-eps)|F|, checks the kernel dimension of
/// {f : supp f in Omega_w(K), A(f) = 0} against the reference value for the
/// normalized kernel dimension of A. `normalized` compares dim/|F| with
/// (1-delta)*target; otherwise dim is compared with (1-delta)*target directly.
/// Exhaustive for |F| <= 20, sampled (`trials`, seeded) otherwise.
PropertyReport property_minus_check(const GroupRingMatrix& A, const FolnerSet& F, const Rat& eps,
                                    const Rat& delta, const Rat& target, std::int64_t trials,
                                    std::uint64_t seed, bool normalized = true);

/// Checks the dimension of the restriction to F of {f : supp f in B_w(F),
/// A(f)|_F = 0}: normalized compares dim/|F| <= target + delta, otherwise
/// dim <= target + delta.
PropertyReport property_plus_check(const GroupRingMatrix& A, const FolnerSet& F, const Rat& delta,
                                   const Rat& target, bool normalized = true);

}  // namespace vndim
