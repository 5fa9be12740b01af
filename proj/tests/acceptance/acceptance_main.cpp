// Acceptance suite: one verdict line per criterion, exact checks throughout.
// Exit status is the number of failed criteria.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "vndim/harness.hpp"

using namespace vndim;

namespace {

struct Failure {
  std::string what;
};

void expect(bool cond, const std::string& msg) {
  if (!cond) throw Failure{msg};
}

GroupElement el(std::vector<std::int64_t> c) { return GroupElement{std::move(c)}; }

GroupRingMatrix one_minus_shift() {
  auto z = GroupContext::free_abelian(1);
  GroupRingMatrix A(z, 1);
  A.set_entry(el({0}), 0, 0, GQ(rat(1)));
  A.set_entry(el({1}), 0, 0, GQ(rat(-1)));
  return A;
}

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

ColoredGraph cycle_graph(std::int64_t m) {
  auto q = GroupContext::finite_quotient(1, {m});
  std::vector<GroupElement> all;
  for (std::int64_t i = 0; i < m; ++i) all.push_back(el({i}));
  return ColoredGraph::cayley_subgraph(q, all);
}

std::vector<FolnerSet> interval_exhaustion(const GroupContext& z, std::int64_t lo,
                                           std::int64_t hi) {
  std::vector<FolnerSet> out;
  for (std::int64_t n = lo; n <= hi; ++n) out.push_back(interval_set(z, n));
  return out;
}

std::vector<FolnerSet> box_exhaustion(const GroupContext& z2, std::int64_t lo, std::int64_t hi) {
  std::vector<FolnerSet> out;
  for (std::int64_t t = lo; t <= hi; ++t) out.push_back(folner_shape(z2, t));
  return out;
}

// --- criteria ---------------------------------------------------------------

void criterion_quotient_identity() {
  auto z = GroupContext::free_abelian(1);
  auto A = one_minus_shift();
  for (std::int64_t m : {6, 12, 24, 48}) {
    auto q = GroupContext::finite_quotient(1, {m});
    auto B = cycle_graph(m);
    auto T = build_Tn(B, z, A);
    auto Q = quotient_operator_matrix(A, q);
    expect(T.matrix == Q, "T_n differs from the quotient matrix at m=" + std::to_string(m));
    std::int64_t kd = kernel_dimension(T.matrix);
    expect(kd == 1, "kernel dim != 1 at m=" + std::to_string(m));
    expect(rat(kd, m) == rat(1, m), "normalized dim != 1/m at m=" + std::to_string(m));
  }
}

void criterion_e1_convergence() {
  auto z = GroupContext::free_abelian(1);
  auto A = one_minus_shift();
  Rat oracle = torus_oracle(A, 1);
  expect(oracle == rat(0), "oracle for 1-g must be 0");
  for (std::int64_t n : {10, 50, 200}) {
    auto graphs = folner_sequence(z, std::vector<std::int64_t>{n});
    auto T = build_Tn(graphs[0], z, A);
    Rat normalized = rat(kernel_dimension(T.matrix), graphs[0].n_vertices());
    expect(normalized <= rat(2, 2 * n + 1),
           "normalized dim exceeds 2/(2n+1) at n=" + std::to_string(n));
    if (n == 200) expect(normalized <= rat(1, 100), "not within 0.01 of the oracle at n=200");
  }
}

void criterion_e2_convergence() {
  auto A = e2_operator();
  expect(torus_oracle(A, 1) == rat(1), "oracle for the E2 operator must be 1");
  auto z = GroupContext::free_abelian(1);
  for (std::int64_t m : {10, 50, 100}) {
    auto B = cycle_graph(m);
    auto T = build_Tn(B, z, A);
    std::int64_t kd = kernel_dimension(T.matrix);
    expect(kd == m + 1, "kernel dim != m+1 at m=" + std::to_string(m));
    Rat normalized = rat(kd, m);
    expect(normalized == rat(m + 1, m), "normalized dim != (m+1)/m at m=" + std::to_string(m));
    if (m == 50)
      expect(normalized - 1 <= rat(1, 50), "not within 0.02 of the oracle at m=50");
  }
}

void criterion_z2_convergence() {
  auto z2 = GroupContext::free_abelian(2);
  GroupRingMatrix A(z2, 1);
  A.set_entry(el({0, 0}), 0, 0, GQ(rat(1)));
  A.set_entry(el({1, 0}), 0, 0, GQ(rat(-1, 2)));
  A.set_entry(el({0, 1}), 0, 0, GQ(rat(-1, 2)));
  expect(torus_oracle(A, 1) == rat(0), "oracle for 1 - (g1+g2)/2 must be 0");
  for (std::int64_t m : {6, 10, 16}) {
    auto graphs = quotient_sequence(z2, std::vector<std::int64_t>{m});
    auto T = build_Tn(graphs[0], z2, A);
    Rat normalized = rat(kernel_dimension(T.matrix), m * m);
    expect(normalized <= rat(1, m * m),
           "normalized dim exceeds 1/m^2 at m=" + std::to_string(m));
  }
}

void criterion_sandwich() {
  auto z = GroupContext::free_abelian(1);
  auto E1 = one_minus_shift();
  auto E2 = e2_operator();
  for (std::int64_t n : {5, 10, 25}) {
    auto F = interval_set(z, n);
    auto d1 = subspace_dims(E1, F);
    expect(d1.z == 2 && d1.w == 0 && d1.v == 0,
           "E1 dims differ from (2,0,0) at n=" + std::to_string(n));
    auto d2 = subspace_dims(E2, F);
    expect(d2.z == 2 * n + 5 && d2.w == 2 * n - 1 && d2.v == 2 * n + 1,
           "E2 dims differ from (2n+5, 2n-1, 2n+1) at n=" + std::to_string(n));
    for (const auto& d : {d1, d2}) {
      expect(d.w <= d.v && d.w <= d.z, "sandwich dimW <= dimV, dimZ violated");
      expect(std::llabs(d.z - d.v) <= 4, "|dimZ - dimV| exceeds 4");
    }
  }
}

void criterion_quasi_tiling() {
  auto z2 = GroupContext::free_abelian(2);
  std::vector<GroupElement> big;
  for (std::int64_t x = -100; x <= 100; ++x)
    for (std::int64_t y = -100; y <= 100; ++y) big.push_back(el({x, y}));
  auto box = ColoredGraph::cayley_subgraph(z2, big);
  auto tiling = quasi_tile(box, z2, box_exhaustion(z2, 1, 10), rat(1, 4));
  auto verif = verify_tiling(box, tiling);
  expect(verif.disjoint, "box tiling has no verified disjointness witness");
  expect(verif.cover >= rat(3, 4), "box tiling covers " + rat_str(verif.cover) + " < 3/4");
  expect(verif.params_ok, "box tiling parameters violate the three inequalities");

  auto z = GroupContext::free_abelian(1);
  auto cyc = cycle_graph(4096);
  auto ct = quasi_tile(cyc, z, interval_exhaustion(z, 1, 100), rat(1, 4));
  auto cv = verify_tiling(cyc, ct);
  expect(cv.disjoint, "cycle tiling has no verified disjointness witness");
  expect(cv.cover >= rat(3, 4), "cycle tiling covers " + rat_str(cv.cover) + " < 3/4");
  expect(cv.params_ok, "cycle tiling parameters violate the three inequalities");
}

void criterion_selection_suite() {
  const std::uint64_t seed_base = 20260809;
  std::cout << "  [selection suite: 200 instances, seed base " << seed_base << "]\n";
  auto z = GroupContext::free_abelian(1);
  auto z2 = GroupContext::free_abelian(2);
  std::int64_t silent = 0, loud = 0;
  for (int t = 0; t < 200; ++t) {
    std::mt19937_64 rng(seed_base + static_cast<std::uint64_t>(t));
    Rat delta = std::vector<Rat>{rat(0), rat(1, 10), rat(3, 10)}[t % 3];
    Rat eps = std::vector<Rat>{rat(1, 10), rat(1, 4), rat(1, 2)}[(t / 3) % 3];
    std::vector<Tile> tiles;
    ColoredGraph g(z, {});
    if (t % 2 == 0) {
      // interval instance: layered partitions into random segments
      std::int64_t n = 60 + static_cast<std::int64_t>(rng() % 150);
      std::vector<GroupElement> v;
      for (std::int64_t i = 0; i < n; ++i) v.push_back(el({i}));
      g = ColoredGraph::cayley_subgraph(z, v);
      int layers = 2 + static_cast<int>(rng() % 4);
      for (int l = 0; l < layers; ++l) {
        std::int64_t at = 0;
        while (at < n) {
          std::int64_t len = 3 + static_cast<std::int64_t>(rng() % 10);
          std::int64_t hi = std::min(n - 1, at + len - 1);
          Tile tile;
          tile.center = at;
          tile.shape_index = l;
          for (std::int64_t i = at; i <= hi; ++i) tile.vertices.push_back(i);
          tiles.push_back(std::move(tile));
          at = hi + 1;
        }
      }
    } else {
      // box instance: layered partitions into random rectangles
      std::int64_t w = 8 + static_cast<std::int64_t>(rng() % 9);
      std::int64_t h = 8 + static_cast<std::int64_t>(rng() % 9);
      std::vector<GroupElement> v;
      for (std::int64_t x = 0; x < w; ++x)
        for (std::int64_t y = 0; y < h; ++y) v.push_back(el({x, y}));
      g = ColoredGraph::cayley_subgraph(z2, v);
      auto id_of = [&](std::int64_t x, std::int64_t y) { return x * h + y; };
      int layers = 2 + static_cast<int>(rng() % 3);
      for (int l = 0; l < layers; ++l) {
        auto cuts = [&](std::int64_t len) {
          std::vector<std::int64_t> c{0};
          while (c.back() < len) c.push_back(std::min(len, c.back() + 2 + static_cast<std::int64_t>(rng() % 4)));
          return c;
        };
        auto cx = cuts(w), cy = cuts(h);
        for (std::size_t i = 0; i + 1 < cx.size(); ++i)
          for (std::size_t j = 0; j + 1 < cy.size(); ++j) {
            Tile tile;
            tile.center = id_of(cx[i], cy[j]);
            tile.shape_index = l;
            for (std::int64_t x = cx[i]; x < cx[i + 1]; ++x)
              for (std::int64_t y = cy[j]; y < cy[j + 1]; ++y)
                tile.vertices.push_back(id_of(x, y));
            std::sort(tile.vertices.begin(), tile.vertices.end());
            tiles.push_back(std::move(tile));
          }
      }
    }
    // random deletions, rolled back when they break the delta-even cover
    for (int d = 0; d < 6; ++d) {
      std::size_t victim = rng() % tiles.size();
      Tile saved = tiles[victim];
      tiles.erase(tiles.begin() + static_cast<std::ptrdiff_t>(victim));
      if (!is_even_cover(g, tiles, delta).has_value())
        tiles.insert(tiles.begin() + static_cast<std::ptrdiff_t>(victim), saved);
    }
    expect(is_even_cover(g, tiles, delta).has_value(), "generator failed to keep an even cover");
    try {
      auto sel = select_epsilon_disjoint(g, tiles, eps, delta);
      std::vector<Tile> chosen;
      for (auto i : sel) chosen.push_back(tiles[i]);
      // the witness greedy must replay the selection order (largest first)
      std::stable_sort(chosen.begin(), chosen.end(), [](const Tile& a, const Tile& b) {
        if (a.vertices.size() != b.vertices.size()) return a.vertices.size() > b.vertices.size();
        if (a.shape_index != b.shape_index) return a.shape_index > b.shape_index;
        return a.center < b.center;
      });
      bool cover_ok = cover_fraction(g, chosen) >= eps * (1 - delta);
      bool disj_ok = is_epsilon_disjoint(g, chosen, eps).has_value();
      if (!cover_ok || !disj_ok) ++silent;
    } catch (const Error&) {
      ++loud;
    }
  }
  expect(silent == 0, "silent selection failures: " + std::to_string(silent));
  expect(loud == 0, "loud selection failures: " + std::to_string(loud));
}

void criterion_inductional_bound() {
  auto z = GroupContext::free_abelian(1);
  auto B = cycle_graph(2000);
  auto H = interval_set(z, 5);
  // paper-ratio call: H inside B_{L/100}(1), K < L/10
  auto rep = inductional_step(B, z, H, 49, rat(9), 500, rat(1, 2), rat(1, 4), rat(1, 512));
  expect(rep.meets_paper_ratios, "2000-cycle call must satisfy the paper ratios");
  expect(!rep.residual_check_triggered || rep.residual_check_holds,
         "e21 residual bound failed on the 2000-cycle");
  std::cout << "  [2000-cycle: residual " << rep.residual.n_vertices() << ", trigger "
            << (rep.residual_check_triggered ? "yes" : "no (vacuous)") << "]\n";
  // a configuration with a large residual exercises the bound non-vacuously
  auto Bi = ColoredGraph::cayley_subgraph(z, interval_set(z, 4000).elements);
  auto Hi = interval_set(z, 20);
  auto rep2 = inductional_step(Bi, z, Hi, 1, rat(5, 82), 2000, rat(51, 100), rat(1, 4),
                               rat(1, 512));
  expect(rep2.meets_paper_ratios, "interval call must satisfy the paper ratios");
  expect(rep2.residual_check_triggered, "interval residual must exceed (eps/2)|V|");
  expect(rep2.residual_check_holds, "e21 residual bound failed on the interval");
}

void criterion_section7_bounds() {
  auto z = GroupContext::free_abelian(1);
  Rat eps = rat(1, 4), delta = rat(1, 10);
  {
    auto A = one_minus_shift();
    Rat target = torus_oracle(A, 1);
    auto B = ColoredGraph::cayley_subgraph(z, interval_set(z, 50).elements);
    auto tiling = quasi_tile(B, z, interval_exhaustion(z, 5, 10), eps);
    auto rep = bound_check(z, A, B, tiling, eps, delta, target, 11);
    expect(rep.lower.holds, "E1 lower bound failed");
    expect(rep.upper.holds, "E1 upper bound failed");
  }
  {
    auto A = e2_operator();
    Rat target = torus_oracle(A, 1);
    auto B = cycle_graph(50);
    auto tiling = quasi_tile(B, z, interval_exhaustion(z, 5, 10), eps);
    auto rep = bound_check(z, A, B, tiling, eps, delta, target, 13);
    expect(rep.lower.holds, "E2 lower bound failed");
    expect(rep.upper.holds, "E2 upper bound failed");
  }
}

void criterion_linalg_suite() {
  const std::uint64_t seed = 424243;
  std::cout << "  [linalg suite: 500 matrices, seed " << seed << "]\n";
  std::mt19937_64 rng(seed);
  const std::uint64_t primes[3] = {1000000007ull, 998244353ull, 1000000009ull};
  SparseExactMatrix prev(0, 0);
  bool have_prev = false;
  for (int t = 0; t < 500; ++t) {
    std::int64_t rows = 10 + static_cast<std::int64_t>(rng() % 71);
    std::int64_t cols = 10 + static_cast<std::int64_t>(rng() % 71);
    SparseExactMatrix m(rows, cols);
    std::uniform_int_distribution<std::int64_t> col(0, cols - 1);
    std::uniform_int_distribution<std::int64_t> num(-5, 5);
    std::uniform_int_distribution<std::int64_t> den(1, 4);
    int per_row = 2 + static_cast<int>(rng() % 2);
    for (std::int64_t r = 0; r < rows; ++r)
      for (int k = 0; k < per_row; ++k) {
        Rat re = rat(num(rng), den(rng));
        Rat im = (num(rng) % 2 == 0) ? rat(0) : rat(num(rng), den(rng));
        m.set(r, col(rng), GQ(re, im));
      }
    std::int64_t r0 = exact_rank(m);
    expect(r0 + kernel_dimension(m) == cols, "rank + nullity != ncols");
    // permutation invariance
    std::vector<std::int64_t> rp(rows), cp(cols);
    for (std::int64_t i = 0; i < rows; ++i) rp[i] = i;
    for (std::int64_t i = 0; i < cols; ++i) cp[i] = i;
    std::shuffle(rp.begin(), rp.end(), rng);
    std::shuffle(cp.begin(), cp.end(), rng);
    SparseExactMatrix pm(rows, cols);
    for (std::int64_t r = 0; r < rows; ++r)
      for (const auto& [c, v] : m.row(r)) pm.set(rp[r], cp[c], v);
    expect(exact_rank(pm) == r0, "rank changed under permutation");
    // scaling invariance
    SparseExactMatrix sm = m;
    std::int64_t which = static_cast<std::int64_t>(rng() % rows);
    for (const auto& [c, v] : m.row(which)) sm.set(which, c, v * GQ(rat(2, 3), rat(1, 5)));
    expect(exact_rank(sm) == r0, "rank changed under row scaling");
    // block additivity against the previous instance
    if (have_prev) {
      SparseExactMatrix blk(prev.nrows() + rows, prev.ncols() + cols);
      for (std::int64_t r = 0; r < prev.nrows(); ++r)
        for (const auto& [c, v] : prev.row(r)) blk.set(r, c, v);
      for (std::int64_t r = 0; r < rows; ++r)
        for (const auto& [c, v] : m.row(r)) blk.set(prev.nrows() + r, prev.ncols() + c, v);
      expect(exact_rank(blk) == exact_rank(prev) + r0, "block diagonal rank not additive");
      have_prev = false;
    } else if (t % 10 == 0) {
      prev = m;
      have_prev = true;
    }
    for (auto p : primes) {
      std::int64_t mr = modular_rank_probe(m, p);
      expect(mr <= r0, "modular probe exceeded the exact rank");
      expect(mr == r0, "modular probe disagreed at p=" + std::to_string(p));
    }
  }
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<void()> run;
};

}  // namespace

int main() {
  std::vector<Criterion> criteria{
      {1, "quotient identity: T_n equals the quotient matrix on cycles", 5.0,
       criterion_quotient_identity},
      {2, "convergence on Folner intervals for 1 - g", 10.0, criterion_e1_convergence},
      {3, "convergence on quotients with a nontrivial kernel", 30.0, criterion_e2_convergence},
      {4, "convergence on Z^2 torus quotients", 60.0, criterion_z2_convergence},
      {5, "Z/W/V dimension sandwich on intervals", 600.0, criterion_sandwich},
      {6, "quasi-tiling of the 201x201 box and the 4096-cycle", 120.0, criterion_quasi_tiling},
      {7, "greedy selection on 200 random even covers", 600.0, criterion_selection_suite},
      {8, "inductional-step residual similarity bound", 600.0, criterion_inductional_bound},
      {9, "two-sided kernel dimension bounds", 600.0, criterion_section7_bounds},
      {10, "exact linear algebra axioms and modular probes", 600.0, criterion_linalg_suite},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    std::string verdict = "PASS";
    std::string detail;
    try {
      c.run();
    } catch (const Failure& f) {
      verdict = "FAIL";
      detail = f.what;
    } catch (const std::exception& e) {
      verdict = "FAIL";
      detail = e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (verdict == "PASS" && secs > c.limit_seconds) {
      verdict = "FAIL";
      detail = "exceeded the runtime limit";
    }
    if (verdict == "FAIL") ++failures;
    std::printf("[%s] %2d %s (%.2fs, limit %.0fs)%s%s\n", verdict.c_str(), c.id, c.name, secs,
                c.limit_seconds, detail.empty() ? "" : ": ", detail.c_str());
  }
  if (failures == 0)
    std::printf("ACCEPTANCE: all %zu criteria passed\n", criteria.size());
  else
    std::printf("ACCEPTANCE: %d of %zu criteria FAILED\n", failures, criteria.size());
  return failures;
}
