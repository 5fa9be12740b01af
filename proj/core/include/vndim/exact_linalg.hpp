#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <vector>

#include "vndim/errors.hpp"
#include "vndim/gaussian.hpp"

namespace vndim {

/// Sparse matrix over the Gaussian rationals. No explicit zeros are stored.
class SparseExactMatrix {
 public:
  SparseExactMatrix(std::int64_t nrows, std::int64_t ncols);
  static SparseExactMatrix identity(std::int64_t n);

  std::int64_t nrows() const { return nrows_; }
  std::int64_t ncols() const { return ncols_; }
  std::int64_t nnz() const;

  void set(std::int64_t r, std::int64_t c, GQ v);
  void add(std::int64_t r, std::int64_t c, const GQ& v);
  GQ get(std::int64_t r, std::int64_t c) const;
  const std::map<std::int64_t, GQ>& row(std::int64_t r) const { return rows_[r]; }

  /// Matrix with the given columns removed (variables deleted, width shrinks).
  SparseExactMatrix drop_columns(const std::vector<std::int64_t>& cols) const;

  friend bool operator==(const SparseExactMatrix&, const SparseExactMatrix&);

  /// Header "rows cols nnz", then one "r c re im" line per entry, rationals as "p/q".
  void save(std::ostream& os) const;
  static SparseExactMatrix load(std::istream& is);

 private:
  std::int64_t nrows_, ncols_;
  std::vector<std::map<std::int64_t, GQ>> rows_;
};

/// Rank over Q(i) by fraction Gaussian elimination with Markowitz pivoting.
/// Ties break by (fill estimate, row index, column index); fully deterministic.
std::int64_t exact_rank(const SparseExactMatrix& m);

/// ncols - rank.
std::int64_t kernel_dimension(const SparseExactMatrix& m);

/// Dimension of the coordinate projection of ker(m) onto the columns S:
/// kernel_dimension(m) minus the kernel dimension with the S-variables deleted.
std::int64_t restriction_dimension(const SparseExactMatrix& m,
                                   const std::vector<std::int64_t>& S);

/// Rank of the cleared-denominator image over GF(p) (p = 1 mod 4, i -> sqrt(-1))
/// or GF(p^2) (p = 3 mod 4). Always <= exact_rank. Throws Error(BadPrime) when a
/// denominator vanishes mod p or p == 2.
std::int64_t modular_rank_probe(const SparseExactMatrix& m, std::uint64_t p);

}  // namespace vndim
