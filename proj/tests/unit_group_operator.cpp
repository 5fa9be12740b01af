#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>
#include <sstream>

#include "vndim/group_operator.hpp"

using namespace vndim;

namespace {

GroupElement el(std::vector<std::int64_t> c) { return GroupElement{std::move(c)}; }

/// 1 - g over Z (d = 1).
GroupRingMatrix one_minus_shift() {
  auto z = GroupContext::free_abelian(1);
  GroupRingMatrix A(z, 1);
  A.set_entry(el({0}), 0, 0, GQ(rat(1)));
  A.set_entry(el({1}), 0, 0, GQ(rat(-1)));
  return A;
}

/// [[1-g, 1-g], [0, 0]] over Z (d = 2).
GroupRingMatrix e2_operator() {
  auto z = GroupContext::free_abelian(1);
  GroupRingMatrix A(z, 2);
  A.set_entry(el({0}), 0, 0, GQ(rat(1)));
  A.set_entry(el({0}), 0, 1, GQ(rat(1)));
  A.set_entry(el({1}), 0, 0, GQ(rat(-1)));
  A.set_entry(el({1}), 0, 1, GQ(rat(-1)));
  return A;
}

FolnerSet interval_set(const GroupContext& z, std::int64_t n) {
  std::vector<GroupElement> v;
  for (std::int64_t i = -n; i <= n; ++i) v.push_back(el({i}));
  return FolnerSet::of(z, std::move(v));
}

GroupRingMatrix random_operator(const GroupContext& ctx, std::mt19937_64& rng, int d,
                                int nterms = 3) {
  GroupRingMatrix A(ctx, d);
  std::uniform_int_distribution<int> steps(0, 2);
  std::uniform_int_distribution<std::int64_t> num(-3, 3);
  std::uniform_int_distribution<int> pick(0, ctx.n_generators() - 1);
  for (int k = 0; k < nterms; ++k) {
    GroupElement g = ctx.identity();
    int len = steps(rng);
    for (int i = 0; i < len; ++i) g = ctx.apply_generator(pick(rng), g);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        if (num(rng) > 0) A.set_entry(g, i, j, GQ(rat(num(rng), 2)));
  }
  return A;
}

}  // namespace

TEST_CASE("propagation") {
  auto A = one_minus_shift();
  CHECK(propagation(A) == 1);
  auto z = GroupContext::free_abelian(1);
  GroupRingMatrix id(z, 1);
  id.set_entry(el({0}), 0, 0, GQ(rat(1)));
  CHECK(propagation(id) == 0);
  auto z2 = GroupContext::free_abelian(2);
  GroupRingMatrix B(z2, 1);
  B.set_entry(el({2, 1}), 0, 0, GQ(rat(1)));
  CHECK(propagation(B) == 3);
  GroupRingMatrix Z(z, 1);
  CHECK_THROWS_AS(propagation(Z), Error);
}

TEST_CASE("transformation kernel identities") {
  auto A = one_minus_shift();
  auto z = A.context();
  // diagonal blocks equal the identity coefficient
  for (std::int64_t g : {-3, 0, 4})
    CHECK(transformation_kernel(A, el({g}), el({g})) == A.block(el({0})));
  CHECK(transformation_kernel(A, el({5}), el({4}))[0] == GQ(rat(-1)));
  // right invariance on random translates
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::int64_t> v(-20, 20);
  for (int t = 0; t < 50; ++t) {
    auto gamma = el({v(rng)});
    auto delta = el({v(rng)});
    auto h = el({v(rng)});
    CHECK(transformation_kernel(A, z.compose(gamma, h), z.compose(delta, h)) ==
          transformation_kernel(A, gamma, delta));
  }
}

TEST_CASE("apply: identity, hand convolution, zero") {
  auto z = GroupContext::free_abelian(1);
  GroupRingMatrix id(z, 1);
  id.set_entry(el({0}), 0, 0, GQ(rat(1)));
  FiniteVector f{z, 1, {}};
  f.set(el({2}), {GQ(rat(3))});
  f.set(el({5}), {GQ(rat(1), rat(1))});
  auto g = apply(id, f);
  CHECK(g.values == f.values);

  auto A = one_minus_shift();
  FiniteVector delta0{z, 1, {}};
  delta0.set(el({0}), {GQ(rat(1))});
  auto out = apply(A, delta0);
  CHECK(out.values.size() == 2);
  CHECK(out.values.at(el({0}))[0] == GQ(rat(1)));
  CHECK(out.values.at(el({1}))[0] == GQ(rat(-1)));

  FiniteVector zero{z, 1, {}};
  CHECK(apply(A, zero).values.empty());
}

TEST_CASE("convolution support bounds on random operator/vector pairs") {
  std::mt19937_64 rng(41);
  auto z2 = GroupContext::free_abelian(2);
  std::uniform_int_distribution<std::int64_t> coord(-3, 3);
  int checked = 0;
  for (int t = 0; t < 400 && checked < 200; ++t) {
    auto A = random_operator(z2, rng, 1);
    if (A.is_zero()) continue;
    ++checked;
    std::int64_t w = propagation(A);
    FiniteVector f{z2, 1, {}};
    for (int i = 0; i < 4; ++i) f.set(el({coord(rng), coord(rng)}), {GQ(rat(1, 3))});
    if (f.values.empty()) continue;
    auto out = apply(A, f);
    auto supp = f.support();
    auto bw = k_neighborhood(z2, supp, w);
    std::set<GroupElement> bws(bw.begin(), bw.end());
    for (const auto& [g, v] : out.values) CHECK(bws.count(g) == 1);
    // supp f inside Omega_w(U) forces supp A(f) inside U, with U = B_w(supp f)
    auto U = k_neighborhood(z2, supp, w);
    auto omega = k_interior(z2, U, w);
    std::set<GroupElement> om(omega.begin(), omega.end());
    bool inside = true;
    for (const auto& s : supp)
      if (!om.count(s)) inside = false;
    if (inside) {
      std::set<GroupElement> us(U.begin(), U.end());
      for (const auto& [g, v] : out.values) CHECK(us.count(g) == 1);
    }
  }
  CHECK(checked == 200);
}

TEST_CASE("compress: bidiagonal interval matrix, identity, singleton") {
  auto A = one_minus_shift();
  auto z = A.context();
  auto F = interval_set(z, 3);
  auto m = compress(A, F);
  CHECK(m.nrows() == 7);
  CHECK(m.ncols() == 7);
  for (std::int64_t i = 0; i < 7; ++i) {
    CHECK(m.get(i, i) == GQ(rat(1)));
    if (i > 0) CHECK(m.get(i, i - 1) == GQ(rat(-1)));
  }
  CHECK(m.nnz() == 13);

  GroupRingMatrix id(z, 1);
  id.set_entry(el({0}), 0, 0, GQ(rat(1)));
  CHECK(compress(id, F) == SparseExactMatrix::identity(7));

  FolnerSet single = FolnerSet::of(z, {el({0})});
  auto sm = compress(A, single);
  CHECK(sm.get(0, 0) == A.block(el({0}))[0]);
}

TEST_CASE("compress coherence with apply on basis vectors") {
  std::mt19937_64 rng(43);
  auto z2 = GroupContext::free_abelian(2);
  std::vector<GroupElement> box;
  for (std::int64_t x = -2; x <= 2; ++x)
    for (std::int64_t y = -2; y <= 2; ++y) box.push_back(el({x, y}));
  auto F = FolnerSet::of(z2, box);
  for (int t = 0; t < 10; ++t) {
    auto A = random_operator(z2, rng, 2);
    auto m = compress(A, F);
    for (std::size_t j = 0; j < F.elements.size(); ++j) {
      for (int jb = 0; jb < 2; ++jb) {
        FiniteVector basis{z2, 2, {}};
        std::vector<GQ> unit(2);
        unit[jb] = GQ(rat(1));
        basis.set(F.elements[j], unit);
        auto out = apply(A, basis);
        for (std::size_t i = 0; i < F.elements.size(); ++i) {
          for (int ib = 0; ib < 2; ++ib) {
            GQ expect;
            auto it = out.values.find(F.elements[i]);
            if (it != out.values.end()) expect = it->second[ib];
            CHECK(m.get(static_cast<std::int64_t>(i) * 2 + ib,
                        static_cast<std::int64_t>(j) * 2 + jb) == expect);
          }
        }
      }
    }
  }
}

TEST_CASE("subspace dims: telescoping interval for 1 - g") {
  auto A = one_minus_shift();
  auto z = A.context();
  for (std::int64_t n : {1, 2, 5, 10}) {
    auto dims = subspace_dims(A, interval_set(z, n));
    CHECK(dims.z == 2);
    CHECK(dims.w == 0);
    CHECK(dims.v == 0);
  }
}

TEST_CASE("subspace dims: E2 closed forms") {
  // Z: pairs with f1+f2 constant on [-n-1,n] and free at n+1, f1 free on B_1(F);
  // W: f1+f2 = 0 on the interior, f1 free there; V: the truncated row at -n
  // forces f1+f2 = 0 on F, f1 stays free
  auto A = e2_operator();
  auto z = A.context();
  for (std::int64_t n : {2, 4, 8}) {
    auto dims = subspace_dims(A, interval_set(z, n));
    CHECK(dims.z == 2 * n + 5);
    CHECK(dims.w == 2 * n - 1);
    CHECK(dims.v == 2 * n + 1);
    CHECK(dims.w <= dims.v);
    CHECK(dims.w <= dims.z);
  }
}

TEST_CASE("subspace dims: zero and identity operators") {
  auto z = GroupContext::free_abelian(1);
  auto F = interval_set(z, 4);
  GroupRingMatrix zero(z, 1);
  auto dz = subspace_dims(zero, F);
  CHECK(dz.v == F.size());
  CHECK(dz.z == F.size());  // variables on B_0(F) = F, no constraints bind
  GroupRingMatrix id(z, 1);
  id.set_entry(el({0}), 0, 0, GQ(rat(1)));
  auto di = subspace_dims(id, F);
  CHECK(di.z == 0);
  CHECK(di.w == 0);
  CHECK(di.v == 0);
}

TEST_CASE("sandwich property on random operators") {
  std::mt19937_64 rng(47);
  auto z = GroupContext::free_abelian(1);
  auto F = interval_set(z, 4);
  for (int t = 0; t < 20; ++t) {
    auto A = random_operator(z, rng, 2);
    auto dims = subspace_dims(A, F);
    CHECK(dims.w <= dims.v);
    CHECK(dims.w <= dims.z);
  }
}

TEST_CASE("build_Tn on a long cycle equals the quotient operator") {
  auto A = one_minus_shift();
  auto z = A.context();
  for (std::int64_t m : {6, 9, 16}) {
    auto q = GroupContext::finite_quotient(1, {m});
    std::vector<GroupElement> all;
    for (std::int64_t i = 0; i < m; ++i) all.push_back(el({i}));
    auto B = ColoredGraph::cayley_subgraph(q, all);
    auto T = build_Tn(B, z, A);
    auto Q = quotient_operator_matrix(A, q);
    CHECK(T.matrix == Q);
    CHECK(kernel_dimension(T.matrix) == 1);
  }
}

TEST_CASE("build_Tn interior columns match the compression") {
  auto z2 = GroupContext::free_abelian(2);
  GroupRingMatrix A(z2, 1);
  A.set_entry(el({0, 0}), 0, 0, GQ(rat(1)));
  A.set_entry(el({1, 0}), 0, 0, GQ(rat(-1, 2)));
  A.set_entry(el({0, 1}), 0, 0, GQ(rat(-1, 2)));
  std::vector<GroupElement> box;
  for (std::int64_t x = -3; x <= 3; ++x)
    for (std::int64_t y = -3; y <= 3; ++y) box.push_back(el({x, y}));
  auto F = FolnerSet::of(z2, box);
  auto B = ColoredGraph::cayley_subgraph(z2, F.elements);
  auto T = build_Tn(B, z2, A);
  auto C = compress(A, F);
  auto omega = k_interior(z2, F.elements, 1);
  std::set<GroupElement> om(omega.begin(), omega.end());
  for (std::int64_t x = 0; x < B.n_vertices(); ++x) {
    if (!om.count(B.label_at(x))) continue;
    for (std::int64_t r = 0; r < T.matrix.nrows(); ++r) CHECK(T.matrix.get(r, x) == C.get(r, x));
  }
}

TEST_CASE("T column blocks vanish off similar vertices and beyond the propagation") {
  auto A = one_minus_shift();
  auto z = A.context();
  std::vector<GroupElement> seg;
  for (std::int64_t i = 0; i <= 6; ++i) seg.push_back(el({i}));
  auto B = ColoredGraph::cayley_subgraph(z, seg);
  auto T = build_Tn(B, z, A);
  // endpoint columns are zero
  for (std::int64_t r = 0; r < 7; ++r) {
    CHECK(T.matrix.get(r, B.pos_of(0)).is_zero());
    CHECK(T.matrix.get(r, B.pos_of(6)).is_zero());
  }
  CHECK(T.column_rule[0] == ColumnRule::NotSimilar);
  CHECK(T.column_rule[3] == ColumnRule::Similar);
  // locality: T(y,x) = 0 when d(y,x) > w(A)
  for (std::int64_t x = 0; x < 7; ++x)
    for (std::int64_t y = 0; y < 7; ++y)
      if (std::llabs(x - y) > 1) CHECK(T.matrix.get(y, x).is_zero());
  // kernel of T on the segment: the two non-similar endpoint columns
  CHECK(kernel_dimension(T.matrix) == 2);
}

TEST_CASE("build_Tn with empty similarity set is the zero operator") {
  auto z = GroupContext::free_abelian(1);
  ColoredGraph lone(z, {0});
  auto A = one_minus_shift();
  auto T = build_Tn(lone, z, A);
  CHECK(T.matrix.nnz() == 0);
}

TEST_CASE("operator text format round-trips") {
  auto A = e2_operator();
  std::stringstream ss;
  A.save(ss);
  auto B = GroupRingMatrix::load(ss);
  CHECK(B.block_dim() == 2);
  CHECK(B.support() == A.support());
  // complex entries too
  auto z = GroupContext::free_abelian(1);
  GroupRingMatrix C(z, 1);
  C.set_entry(el({2}), 0, 0, GQ(rat(-1, 2), rat(3, 4)));
  C.set_entry(el({0}), 0, 0, GQ(rat(0), rat(-1)));
  std::stringstream s2;
  C.save(s2);
  auto D = GroupRingMatrix::load(s2);
  CHECK(D.support() == C.support());
}

TEST_CASE("property minus: zero operator, identity, 1-g with target 0") {
  auto z = GroupContext::free_abelian(1);
  auto F = interval_set(z, 4);  // |F| = 9 <= 20: exhaustive
  GroupRingMatrix zero(z, 1);
  // kernel is everything, dim R = |K|; normalized the property needs eps <= delta
  auto repz = property_minus_check(zero, F, rat(1, 20), rat(1, 10), rat(1), 5, 1);
  CHECK(repz.verdict == Verdict::Proven);
  auto repz_wide = property_minus_check(zero, F, rat(1, 4), rat(1, 10), rat(1), 5, 1);
  CHECK(repz_wide.verdict == Verdict::Refuted);  // |K|/|F| may fall to 7/9 < 9/10

  GroupRingMatrix id(z, 1);
  id.set_entry(el({0}), 0, 0, GQ(rat(1)));
  auto repi = property_minus_check(id, F, rat(1, 4), rat(1, 10), rat(0), 5, 1);
  CHECK(repi.verdict == Verdict::Proven);  // target 0 holds trivially
  auto repi_bad = property_minus_check(id, F, rat(1, 4), rat(1, 10), rat(1), 5, 1,
                                       /*normalized=*/false);
  CHECK(repi_bad.verdict == Verdict::Refuted);  // dim R = 0 < (1-delta)*1

  auto A = one_minus_shift();
  auto rep = property_minus_check(A, F, rat(1, 4), rat(1, 10), rat(0), 5, 1);
  CHECK(rep.verdict == Verdict::Proven);
  CHECK(rep.exhaustive);
}

TEST_CASE("property minus sampling path on larger sets") {
  auto z = GroupContext::free_abelian(1);
  auto F = interval_set(z, 15);  // |F| = 31 > 20: sampled
  auto A = one_minus_shift();
  auto rep = property_minus_check(A, F, rat(1, 4), rat(1, 10), rat(0), 10, 7);
  CHECK(rep.verdict == Verdict::Supported);
  CHECK(rep.checked == 10);
}

TEST_CASE("normalized minus reading is refutable where the literal one holds") {
  // for [[1-g,1-g],[0,0]] the kernel restricted to Omega_1(K) has dimension
  // |Omega_1(K)|; sparse K makes dim/|F| fall below (1-delta)*1 while the
  // unnormalized comparison dim >= (1-delta)*1 still passes
  auto A = e2_operator();
  auto F = interval_set(A.context(), 9);  // |F| = 19: exhaustive
  auto lit = property_minus_check(A, F, rat(1, 4), rat(1, 10), rat(1), 5, 1,
                                  /*normalized=*/false);
  CHECK(lit.verdict == Verdict::Proven);
  auto norm = property_minus_check(A, F, rat(1, 4), rat(1, 10), rat(1), 5, 1,
                                   /*normalized=*/true);
  CHECK(norm.verdict == Verdict::Refuted);
  CHECK(norm.refuting_subset.has_value());
}

TEST_CASE("property plus: identity, 1-g, zero operator") {
  auto z = GroupContext::free_abelian(1);
  GroupRingMatrix id(z, 1);
  id.set_entry(el({0}), 0, 0, GQ(rat(1)));
  auto F = interval_set(z, 10);
  CHECK(property_plus_check(id, F, rat(1, 10), rat(0)).verdict == Verdict::Proven);

  auto A = one_minus_shift();
  // restriction of Z_F to F is the constants: dim 1 <= (0 + 1/10)*21
  CHECK(property_plus_check(A, F, rat(1, 10), rat(0)).verdict == Verdict::Proven);
  // and with delta too small it refutes
  CHECK(property_plus_check(A, F, rat(1, 50), rat(0)).verdict == Verdict::Refuted);

  GroupRingMatrix zero(z, 1);
  CHECK(property_plus_check(zero, F, rat(1, 10), rat(1)).verdict == Verdict::Proven);
}

TEST_CASE("build_Tn on a Heisenberg quotient equals the quotient operator") {
  // nonabelian Corollary route: full Cayley graph of H3/q with q >= 2w+2
  auto h3 = GroupContext::heisenberg();
  GroupRingMatrix A(h3, 1);
  A.set_entry(el({0, 0, 0}), 0, 0, GQ(rat(1)));
  A.set_entry(el({1, 0, 0}), 0, 0, GQ(rat(-1)));  // 1 - x
  for (std::int64_t q : {5, 6}) {
    auto hq = GroupContext::heisenberg_quotient(q);
    auto all = hq.ball_elements(1000);
    auto B = ColoredGraph::cayley_subgraph(hq, all);
    auto T = build_Tn(B, h3, A);
    auto Q = quotient_operator_matrix(A, hq);
    CHECK(T.matrix == Q);
    // kernel of 1 - x on the quotient: functions constant on left x-orbits
    CHECK(kernel_dimension(T.matrix) == q * q);
  }
}
