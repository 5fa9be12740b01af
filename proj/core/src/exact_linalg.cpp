#include "vndim/exact_linalg.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include "vndim/errors.hpp"

namespace vndim {

SparseExactMatrix::SparseExactMatrix(std::int64_t nrows, std::int64_t ncols)
    : nrows_(nrows), ncols_(ncols), rows_(static_cast<std::size_t>(nrows)) {
  require(nrows >= 0 && ncols >= 0, ErrorKind::PreconditionViolation, "negative matrix shape");
}

SparseExactMatrix SparseExactMatrix::identity(std::int64_t n) {
  SparseExactMatrix m(n, n);
  for (std::int64_t i = 0; i < n; ++i) m.set(i, i, GQ(rat(1)));
  return m;
}

std::int64_t SparseExactMatrix::nnz() const {
  std::int64_t n = 0;
  for (const auto& r : rows_) n += static_cast<std::int64_t>(r.size());
  return n;
}

void SparseExactMatrix::set(std::int64_t r, std::int64_t c, GQ v) {
  require(r >= 0 && r < nrows_ && c >= 0 && c < ncols_, ErrorKind::PreconditionViolation,
          "matrix index out of range");
  if (v.is_zero())
    rows_[r].erase(c);
  else
    rows_[r][c] = std::move(v);
}

void SparseExactMatrix::add(std::int64_t r, std::int64_t c, const GQ& v) {
  if (v.is_zero()) return;
  set(r, c, get(r, c) + v);
}

GQ SparseExactMatrix::get(std::int64_t r, std::int64_t c) const {
  require(r >= 0 && r < nrows_ && c >= 0 && c < ncols_, ErrorKind::PreconditionViolation,
          "matrix index out of range");
  auto it = rows_[r].find(c);
  return it == rows_[r].end() ? GQ() : it->second;
}

SparseExactMatrix SparseExactMatrix::drop_columns(const std::vector<std::int64_t>& cols) const {
  std::vector<char> dropped(static_cast<std::size_t>(ncols_), 0);
  for (auto c : cols) {
    require(c >= 0 && c < ncols_, ErrorKind::PreconditionViolation, "dropped column out of range");
    dropped[c] = 1;
  }
  std::vector<std::int64_t> newcol(static_cast<std::size_t>(ncols_), -1);
  std::int64_t w = 0;
  for (std::int64_t c = 0; c < ncols_; ++c)
    if (!dropped[c]) newcol[c] = w++;
  SparseExactMatrix out(nrows_, w);
  for (std::int64_t r = 0; r < nrows_; ++r)
    for (const auto& [c, v] : rows_[r])
      if (newcol[c] != -1) out.set(r, newcol[c], v);
  return out;
}

bool operator==(const SparseExactMatrix& a, const SparseExactMatrix& b) {
  return a.nrows_ == b.nrows_ && a.ncols_ == b.ncols_ && a.rows_ == b.rows_;
}

void SparseExactMatrix::save(std::ostream& os) const {
  os << nrows_ << " " << ncols_ << " " << nnz() << "\n";
  for (std::int64_t r = 0; r < nrows_; ++r)
    for (const auto& [c, v] : rows_[r])
      os << r << " " << c << " " << rat_str(v.re) << " " << rat_str(v.im) << "\n";
}

SparseExactMatrix SparseExactMatrix::load(std::istream& is) {
  std::int64_t nrows, ncols, nnz;
  is >> nrows >> ncols >> nnz;
  require(!is.fail(), ErrorKind::ParseError, "matrix file: bad header");
  SparseExactMatrix m(nrows, ncols);
  for (std::int64_t k = 0; k < nnz; ++k) {
    std::int64_t r, c;
    std::string re, im;
    is >> r >> c >> re >> im;
    require(!is.fail(), ErrorKind::ParseError, "matrix file: truncated entry list");
    m.set(r, c, GQ(rat_parse(re), rat_parse(im)));
  }
  return m;
}

namespace {

/// One elimination pass; shared by rank and the kernel helpers.
std::int64_t eliminate_rank(std::vector<std::map<std::int64_t, GQ>> rows, std::int64_t ncols) {
  std::int64_t nrows = static_cast<std::int64_t>(rows.size());
  std::vector<char> row_done(static_cast<std::size_t>(nrows), 0);
  std::vector<std::int64_t> col_count(static_cast<std::size_t>(ncols), 0);
  for (const auto& r : rows)
    for (const auto& [c, v] : r) ++col_count[c];

  std::int64_t rank = 0;
  for (;;) {
    // Markowitz pivot: minimize (nnz(row)-1)*(nnz(col)-1), ties by row then column.
    std::int64_t best_r = -1, best_c = -1;
    std::int64_t best_cost = -1;
    for (std::int64_t r = 0; r < nrows; ++r) {
      if (row_done[r] || rows[r].empty()) continue;
      std::int64_t rn = static_cast<std::int64_t>(rows[r].size()) - 1;
      for (const auto& [c, v] : rows[r]) {
        std::int64_t cost = rn * (col_count[c] - 1);
        if (best_cost == -1 || cost < best_cost) {
          best_cost = cost;
          best_r = r;
          best_c = c;
        }
      }
    }
    if (best_r == -1) break;
    ++rank;
    row_done[best_r] = 1;
    auto pivot_row = std::move(rows[best_r]);
    rows[best_r].clear();
    for (const auto& [c, v] : pivot_row) --col_count[c];
    GQ pivot = pivot_row.at(best_c);
    for (std::int64_t r = 0; r < nrows; ++r) {
      if (row_done[r]) continue;
      auto it = rows[r].find(best_c);
      if (it == rows[r].end()) continue;
      GQ factor = it->second / pivot;
      for (const auto& [c, v] : pivot_row) {
        auto jt = rows[r].find(c);
        if (jt == rows[r].end()) {
          GQ nv = -(factor * v);
          if (!nv.is_zero()) {
            rows[r].emplace(c, std::move(nv));
            ++col_count[c];
          }
        } else {
          jt->second -= factor * v;
          if (jt->second.is_zero()) {
            rows[r].erase(jt);
            --col_count[c];
          }
        }
      }
    }
  }
  return rank;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t acc = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) acc = mulmod(acc, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return acc;
}

std::uint64_t invmod(std::uint64_t a, std::uint64_t p) { return powmod(a, p - 2, p); }

/// GF(p^2) element x + y*i with i^2 = -1; collapses to GF(p) when p = 1 mod 4
/// by mapping i to a square root of -1 beforehand.
struct Fp2 {
  std::uint64_t x = 0, y = 0;
  bool is_zero() const { return x == 0 && y == 0; }
};

Fp2 fp2_mul(const Fp2& a, const Fp2& b, std::uint64_t p) {
  std::uint64_t xx = mulmod(a.x, b.x, p), yy = mulmod(a.y, b.y, p);
  std::uint64_t xy = mulmod(a.x, b.y, p), yx = mulmod(a.y, b.x, p);
  return {(xx + p - yy) % p, (xy + yx) % p};
}

Fp2 fp2_sub(const Fp2& a, const Fp2& b, std::uint64_t p) {
  return {(a.x + p - b.x) % p, (a.y + p - b.y) % p};
}

Fp2 fp2_inv(const Fp2& a, std::uint64_t p) {
  // (x + yi)^-1 = (x - yi) / (x^2 + y^2)
  std::uint64_t n = (mulmod(a.x, a.x, p) + mulmod(a.y, a.y, p)) % p;
  std::uint64_t ni = invmod(n, p);
  return {mulmod(a.x, ni, p), mulmod((p - a.y) % p, ni, p)};
}

std::uint64_t reduce_rat(const Rat& r, std::uint64_t p) {
  Int num = r.get_num(), den = r.get_den();
  std::uint64_t d = mpz_fdiv_ui(den.get_mpz_t(), p);
  if (d == 0) fail(ErrorKind::BadPrime, "denominator vanishes mod " + std::to_string(p));
  std::uint64_t n = mpz_fdiv_ui(num.get_mpz_t(), p);
  return mulmod(n, invmod(d, p), p);
}

std::uint64_t find_sqrt_minus_one(std::uint64_t p) {
  for (std::uint64_t a = 2; a < p; ++a) {
    std::uint64_t r = powmod(a, (p - 1) / 4, p);
    if (mulmod(r, r, p) == p - 1) return r;
  }
  fail(ErrorKind::BadPrime, "no square root of -1 mod " + std::to_string(p));
}

}  // namespace

std::int64_t exact_rank(const SparseExactMatrix& m) {
  std::vector<std::map<std::int64_t, GQ>> rows;
  rows.reserve(static_cast<std::size_t>(m.nrows()));
  for (std::int64_t r = 0; r < m.nrows(); ++r) rows.push_back(m.row(r));
  return eliminate_rank(std::move(rows), m.ncols());
}

std::int64_t kernel_dimension(const SparseExactMatrix& m) { return m.ncols() - exact_rank(m); }

std::int64_t restriction_dimension(const SparseExactMatrix& m,
                                   const std::vector<std::int64_t>& S) {
  if (S.empty()) return 0;
  return kernel_dimension(m) - kernel_dimension(m.drop_columns(S));
}

std::int64_t modular_rank_probe(const SparseExactMatrix& m, std::uint64_t p) {
  if (p < 3) fail(ErrorKind::BadPrime, "prime must be odd and > 2");
  bool split = (p % 4) == 1;
  std::uint64_t root = split ? find_sqrt_minus_one(p) : 0;

  std::vector<std::map<std::int64_t, Fp2>> rows(static_cast<std::size_t>(m.nrows()));
  for (std::int64_t r = 0; r < m.nrows(); ++r) {
    for (const auto& [c, v] : m.row(r)) {
      std::uint64_t re = reduce_rat(v.re, p), im = reduce_rat(v.im, p);
      Fp2 e = split ? Fp2{(re + mulmod(root, im, p)) % p, 0} : Fp2{re, im};
      if (!e.is_zero()) rows[r][c] = e;
    }
  }
  // plain elimination; no pivot strategy needed over a finite field
  std::int64_t rank = 0;
  std::vector<char> row_done(rows.size(), 0);
  for (std::int64_t c = 0; c < m.ncols(); ++c) {
    std::int64_t pr = -1;
    for (std::int64_t r = 0; r < m.nrows(); ++r) {
      if (!row_done[r] && rows[r].count(c)) {
        pr = r;
        break;
      }
    }
    if (pr == -1) continue;
    ++rank;
    row_done[pr] = 1;
    Fp2 inv = fp2_inv(rows[pr].at(c), p);
    auto pivot_row = std::move(rows[pr]);
    rows[pr].clear();
    for (std::int64_t r = 0; r < m.nrows(); ++r) {
      if (row_done[r]) continue;
      auto it = rows[r].find(c);
      if (it == rows[r].end()) continue;
      Fp2 f = fp2_mul(it->second, inv, p);
      for (const auto& [cc, vv] : pivot_row) {
        Fp2 delta = fp2_mul(f, vv, p);
        auto jt = rows[r].find(cc);
        if (jt == rows[r].end()) {
          Fp2 nv = fp2_sub(Fp2{}, delta, p);
          if (!nv.is_zero()) rows[r][cc] = nv;
        } else {
          jt->second = fp2_sub(jt->second, delta, p);
          if (jt->second.is_zero()) rows[r].erase(jt);
        }
      }
    }
  }
  return rank;
}

}  // namespace vndim
