#include "vndim/group_operator.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace vndim {

GroupRingMatrix::GroupRingMatrix(GroupContext ctx, int d) : ctx_(std::move(ctx)), d_(d) {
  require(d >= 1, ErrorKind::PreconditionViolation, "block dimension must be >= 1");
}

void GroupRingMatrix::set_entry(const GroupElement& g, int i, int j, GQ v) {
  ctx_.check_element(g);
  require(i >= 0 && i < d_ && j >= 0 && j < d_, ErrorKind::PreconditionViolation,
          "block entry out of range");
  auto it = support_.find(g);
  if (it == support_.end()) {
    if (v.is_zero()) return;
    it = support_.emplace(g, std::vector<GQ>(static_cast<std::size_t>(d_) * d_)).first;
  }
  it->second[static_cast<std::size_t>(i) * d_ + j] = std::move(v);
  bool all_zero = std::all_of(it->second.begin(), it->second.end(),
                              [](const GQ& e) { return e.is_zero(); });
  if (all_zero) support_.erase(it);
}

GQ GroupRingMatrix::entry(const GroupElement& g, int i, int j) const {
  auto it = support_.find(g);
  if (it == support_.end()) return GQ();
  return it->second[static_cast<std::size_t>(i) * d_ + j];
}

std::vector<GQ> GroupRingMatrix::block(const GroupElement& g) const {
  auto it = support_.find(g);
  if (it != support_.end()) return it->second;
  return std::vector<GQ>(static_cast<std::size_t>(d_) * d_);
}

void GroupRingMatrix::save(std::ostream& os) const {
  os << "group " << ctx_.spec_string() << " d " << d_ << "\n";
  for (const auto& [g, blk] : support_) {
    os << ctx_.format_element(g) << " ;";
    for (const auto& e : blk) os << " " << gq_str(e);
    os << "\n";
  }
}

GroupRingMatrix GroupRingMatrix::load(std::istream& is) {
  std::string line;
  std::optional<GroupRingMatrix> out;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    if (!out) {
      std::string kw1, spec, kw2;
      int d = 0;
      ss >> kw1 >> spec >> kw2 >> d;
      require(kw1 == "group" && kw2 == "d" && d >= 1 && !ss.fail(), ErrorKind::ParseError,
              "operator file: bad header");
      out.emplace(GroupContext::parse(spec), d);
      continue;
    }
    std::string coords, sep;
    ss >> coords >> sep;
    require(sep == ";", ErrorKind::ParseError, "operator file: expected ';' after coordinates");
    GroupElement g = out->context().parse_element(coords);
    int d = out->block_dim();
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        std::string tok;
        ss >> tok;
        require(!ss.fail(), ErrorKind::ParseError, "operator file: missing block entries");
        out->set_entry(g, i, j, gq_parse(tok));
      }
  }
  require(out.has_value(), ErrorKind::ParseError, "operator file: missing header");
  return *out;
}

void FiniteVector::set(const GroupElement& g, std::vector<GQ> v) {
  ctx.check_element(g);
  require(static_cast<int>(v.size()) == d, ErrorKind::PreconditionViolation,
          "vector block has wrong dimension");
  bool all_zero = std::all_of(v.begin(), v.end(), [](const GQ& e) { return e.is_zero(); });
  if (all_zero)
    values.erase(g);
  else
    values[g] = std::move(v);
}

std::vector<GroupElement> FiniteVector::support() const {
  std::vector<GroupElement> s;
  s.reserve(values.size());
  for (const auto& [g, v] : values) s.push_back(g);
  return s;
}

std::int64_t propagation(const GroupRingMatrix& A) {
  require(!A.is_zero(), ErrorKind::PreconditionViolation,
          "propagation of the zero matrix is undefined");
  std::int64_t w = 0;
  for (const auto& [g, blk] : A.support()) w = std::max(w, A.context().word_length(g));
  return w;
}

namespace {

std::int64_t propagation_or_zero(const GroupRingMatrix& A) {
  return A.is_zero() ? 0 : propagation(A);
}

void block_mul_accumulate(std::vector<GQ>& acc, const std::vector<GQ>& blk,
                          const std::vector<GQ>& vec, int d) {
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const GQ& m = blk[static_cast<std::size_t>(i) * d + j];
      if (!m.is_zero() && !vec[j].is_zero()) acc[i] += m * vec[j];
    }
}

}  // namespace

std::vector<GQ> transformation_kernel(const GroupRingMatrix& A, const GroupElement& gamma,
                                      const GroupElement& delta) {
  const auto& ctx = A.context();
  return A.block(ctx.compose(gamma, ctx.inverse(delta)));
}

FiniteVector apply(const GroupRingMatrix& A, const FiniteVector& f) {
  const auto& ctx = A.context();
  require(ctx == f.ctx, ErrorKind::ContextMismatch, "operator and vector live on different groups");
  require(A.block_dim() == f.d, ErrorKind::ContextMismatch, "block dimensions disagree");
  int d = f.d;
  std::map<GroupElement, std::vector<GQ>> acc;
  for (const auto& [gamma, vec] : f.values) {
    for (const auto& [g, blk] : A.support()) {
      GroupElement delta = ctx.compose(g, gamma);
      auto it = acc.find(delta);
      if (it == acc.end()) it = acc.emplace(delta, std::vector<GQ>(d)).first;
      block_mul_accumulate(it->second, blk, vec, d);
    }
  }
  FiniteVector out{ctx, d, {}};
  for (auto& [g, v] : acc) out.set(g, std::move(v));
  return out;
}

namespace {

/// The matrix of the constraint system "A(f)(delta) = 0 for delta in rows",
/// over variables f(gamma), gamma in cols. Entry block at (delta, gamma) is
/// A_{delta gamma^-1}.
SparseExactMatrix convolution_system(const GroupRingMatrix& A,
                                     std::span<const GroupElement> rows,
                                     std::span<const GroupElement> cols) {
  const auto& ctx = A.context();
  int d = A.block_dim();
  std::unordered_map<GroupElement, std::int64_t, GroupElementHash> row_index;
  for (std::size_t i = 0; i < rows.size(); ++i) row_index.emplace(rows[i], i);
  SparseExactMatrix m(static_cast<std::int64_t>(rows.size()) * d,
                      static_cast<std::int64_t>(cols.size()) * d);
  for (std::size_t jc = 0; jc < cols.size(); ++jc) {
    for (const auto& [g, blk] : A.support()) {
      GroupElement delta = ctx.compose(g, cols[jc]);
      auto it = row_index.find(delta);
      if (it == row_index.end()) continue;
      std::int64_t ir = it->second;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          const GQ& v = blk[static_cast<std::size_t>(i) * d + j];
          if (!v.is_zero())
            m.add(ir * d + i, static_cast<std::int64_t>(jc) * d + j, v);
        }
    }
  }
  return m;
}

}  // namespace

SparseExactMatrix compress(const GroupRingMatrix& A, const FolnerSet& F) {
  require(A.context() == F.ctx, ErrorKind::ContextMismatch,
          "operator and set live on different groups");
  return convolution_system(A, F.elements, F.elements);
}

SubspaceDims subspace_dims(const GroupRingMatrix& A, const FolnerSet& F) {
  const auto& ctx = A.context();
  std::int64_t w = propagation_or_zero(A);
  SubspaceDims dims;
  dims.v = kernel_dimension(compress(A, F));
  auto bw = k_neighborhood(ctx, F.elements, w);
  dims.z = kernel_dimension(convolution_system(A, F.elements, bw));
  auto omega = k_interior(ctx, F.elements, w);
  auto bw_omega = k_neighborhood(ctx, omega, w);
  dims.w = kernel_dimension(convolution_system(A, bw_omega, omega));
  return dims;
}

ApproxOperator build_Tn(const ColoredGraph& B, const GroupContext& ctx, const GroupRingMatrix& A) {
  require(!A.is_zero(), ErrorKind::PreconditionViolation, "build_Tn needs a nonzero operator");
  require(A.context() == ctx, ErrorKind::ContextMismatch, "operator group != similarity group");
  int d = A.block_dim();
  std::int64_t w = propagation(A);
  ApproxOperator T(B.n_vertices(), d);
  T.column_rule.assign(static_cast<std::size_t>(B.n_vertices()), ColumnRule::NotSimilar);
  std::vector<GroupElement> supp_keys;
  supp_keys.reserve(A.support().size());
  for (const auto& [g, blk] : A.support()) supp_keys.push_back(g);
  BallMatcher matcher(B, ctx);
  for (std::int64_t x = 0; x < B.n_vertices(); ++x) {
    auto img = matcher.image(x, w, supp_keys);
    if (!img) continue;
    T.column_rule[x] = ColumnRule::Similar;
    std::size_t gi = 0;
    for (const auto& [g, blk] : A.support()) {
      std::int64_t y = (*img)[gi++];
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          const GQ& v = blk[static_cast<std::size_t>(i) * d + j];
          if (!v.is_zero()) T.matrix.set(y * d + i, x * d + j, v);
        }
    }
  }
  return T;
}

SparseExactMatrix quotient_operator_matrix(const GroupRingMatrix& A,
                                           const GroupContext& quotient) {
  require(quotient.is_finite(), ErrorKind::PreconditionViolation,
          "quotient operator needs a finite group");
  const auto& ctx = A.context();
  int d = A.block_dim();
  // enumerate the full quotient, sorted to match cayley_subgraph vertex order
  std::vector<GroupElement> elems = quotient.ball_elements(
      std::numeric_limits<std::int64_t>::max() / 4);
  std::sort(elems.begin(), elems.end());
  std::unordered_map<GroupElement, std::int64_t, GroupElementHash> index;
  for (std::size_t i = 0; i < elems.size(); ++i) index.emplace(elems[i], i);
  auto project = [&](const GroupElement& g) {
    GroupElement h = g;
    const auto& moduli = quotient.moduli();
    for (std::size_t i = 0; i < h.coords.size(); ++i) {
      std::int64_t m = moduli[i];
      if (m != 0) {
        h.coords[i] %= m;
        if (h.coords[i] < 0) h.coords[i] += m;
      }
    }
    return h;
  };
  SparseExactMatrix M(static_cast<std::int64_t>(elems.size()) * d,
                      static_cast<std::int64_t>(elems.size()) * d);
  for (std::size_t jc = 0; jc < elems.size(); ++jc) {
    for (const auto& [g, blk] : A.support()) {
      ctx.check_element(g);
      GroupElement delta = quotient.compose(project(g), elems[jc]);
      std::int64_t ir = index.at(delta);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          const GQ& v = blk[static_cast<std::size_t>(i) * d + j];
          if (!v.is_zero()) M.add(ir * d + i, static_cast<std::int64_t>(jc) * d + j, v);
        }
    }
  }
  return M;
}

namespace {

std::int64_t minus_system_dim(const GroupRingMatrix& A, const GroupContext& ctx, std::int64_t w,
                              std::span<const GroupElement> K) {
  auto omega = k_interior(ctx, K, w);
  if (omega.empty()) return 0;
  auto rows = k_neighborhood(ctx, omega, w);
  return kernel_dimension(convolution_system(A, rows, omega));
}

bool minus_holds(std::int64_t dim, std::int64_t f_size, const Rat& delta, const Rat& target,
                 bool normalized) {
  Rat lhs = normalized ? rat(dim, f_size) : rat(dim);
  return lhs >= (1 - delta) * target;
}

}  // namespace

PropertyReport property_minus_check(const GroupRingMatrix& A, const FolnerSet& F, const Rat& eps,
                                    const Rat& delta, const Rat& target, std::int64_t trials,
                                    std::uint64_t seed, bool normalized) {
  require(trials >= 1, ErrorKind::PreconditionViolation, "trials must be >= 1");
  require(eps > 0 && eps < 1, ErrorKind::PreconditionViolation, "eps must lie in (0,1)");
  const auto& ctx = A.context();
  std::int64_t w = propagation_or_zero(A);
  std::int64_t n = F.size();
  require(n >= 1, ErrorKind::EmptySet, "property check needs a nonempty set");
  // |K| > (1-eps)|F|
  std::int64_t min_size = static_cast<std::int64_t>(rat_floor((1 - eps) * rat(n)).get_si()) + 1;
  PropertyReport rep;
  if (n <= 20) {
    rep.exhaustive = true;
    std::vector<GroupElement> K;
    // iterate all subsets of each admissible size via combination masks
    for (std::int64_t size = min_size; size <= n; ++size) {
      std::vector<std::int64_t> idx(static_cast<std::size_t>(size));
      for (std::int64_t i = 0; i < size; ++i) idx[i] = i;
      for (;;) {
        K.clear();
        for (auto i : idx) K.push_back(F.elements[i]);
        ++rep.checked;
        std::int64_t dim = minus_system_dim(A, ctx, w, K);
        if (!minus_holds(dim, n, delta, target, normalized)) {
          rep.verdict = Verdict::Refuted;
          rep.refuting_subset = K;
          return rep;
        }
        // next combination
        std::int64_t i = size - 1;
        while (i >= 0 && idx[i] == n - size + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (std::int64_t j = i + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
      }
    }
    rep.verdict = Verdict::Proven;
    return rep;
  }
  std::mt19937_64 rng(seed);
  std::vector<std::int64_t> perm(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) perm[i] = i;
  for (std::int64_t t = 0; t < trials; ++t) {
    std::uniform_int_distribution<std::int64_t> size_dist(min_size, n);
    std::int64_t size = size_dist(rng);
    // partial Fisher-Yates for a uniform subset of the chosen size
    for (std::int64_t i = 0; i < size; ++i) {
      std::uniform_int_distribution<std::int64_t> pick(i, n - 1);
      std::swap(perm[i], perm[pick(rng)]);
    }
    std::vector<GroupElement> K;
    K.reserve(static_cast<std::size_t>(size));
    for (std::int64_t i = 0; i < size; ++i) K.push_back(F.elements[perm[i]]);
    ++rep.checked;
    std::int64_t dim = minus_system_dim(A, ctx, w, K);
    if (!minus_holds(dim, n, delta, target, normalized)) {
      rep.verdict = Verdict::Refuted;
      std::sort(K.begin(), K.end());
      rep.refuting_subset = std::move(K);
      return rep;
    }
  }
  rep.verdict = Verdict::Supported;
  return rep;
}

PropertyReport property_plus_check(const GroupRingMatrix& A, const FolnerSet& F, const Rat& delta,
                                   const Rat& target, bool normalized) {
  const auto& ctx = A.context();
  std::int64_t w = propagation_or_zero(A);
  std::int64_t n = F.size();
  require(n >= 1, ErrorKind::EmptySet, "property check needs a nonempty set");
  auto bw = k_neighborhood(ctx, F.elements, w);
  SparseExactMatrix zf = convolution_system(A, F.elements, bw);
  // columns of the F block inside B_w(F)
  std::unordered_set<GroupElement, GroupElementHash> inF(F.elements.begin(), F.elements.end());
  std::vector<std::int64_t> cols;
  int d = A.block_dim();
  for (std::size_t i = 0; i < bw.size(); ++i) {
    if (inF.count(bw[i]))
      for (int j = 0; j < d; ++j) cols.push_back(static_cast<std::int64_t>(i) * d + j);
  }
  std::int64_t dim = restriction_dimension(zf, cols);
  PropertyReport rep;
  rep.exhaustive = true;
  rep.checked = 1;
  Rat lhs = normalized ? rat(dim, n) : rat(dim);
  rep.verdict = (lhs <= target + delta) ? Verdict::Proven : Verdict::Refuted;
  return rep;
}

}  // namespace vndim
