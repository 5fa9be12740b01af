#include "vndim/tiling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace vndim {

namespace {

void check_tiles_inside(const ColoredGraph& g, std::span<const Tile> tiles) {
  for (const auto& t : tiles)
    for (auto v : t.vertices)
      require(g.pos_of(v) != -1, ErrorKind::MalformedCollection,
              "tile vertex " + std::to_string(v) + " is not in the ground graph");
}

}  // namespace

std::optional<DisjointnessWitness> is_epsilon_disjoint(const ColoredGraph& g,
                                                       std::span<const Tile> tiles,
                                                       const Rat& eps) {
  require(eps > 0 && eps < 1, ErrorKind::PreconditionViolation, "eps must lie in (0,1)");
  check_tiles_inside(g, tiles);
  std::unordered_set<VertexId> claimed;
  DisjointnessWitness w;
  w.kept.reserve(tiles.size());
  for (const auto& t : tiles) {
    std::vector<VertexId> kept;
    kept.reserve(t.vertices.size());
    for (auto v : t.vertices)
      if (!claimed.count(v)) kept.push_back(v);
    if (rat(static_cast<std::int64_t>(kept.size())) <
        (1 - eps) * rat(static_cast<std::int64_t>(t.vertices.size())))
      return std::nullopt;
    for (auto v : kept) claimed.insert(v);
    w.kept.push_back(std::move(kept));
  }
  return w;
}

bool check_disjointness_witness(const ColoredGraph& g, std::span<const Tile> tiles,
                                const Rat& eps, const DisjointnessWitness& w) {
  check_tiles_inside(g, tiles);
  if (w.kept.size() != tiles.size()) return false;
  std::unordered_set<VertexId> seen;
  for (std::size_t i = 0; i < tiles.size(); ++i) {
    std::unordered_set<VertexId> tile_set(tiles[i].vertices.begin(), tiles[i].vertices.end());
    for (auto v : w.kept[i]) {
      if (!tile_set.count(v)) return false;         // kept outside its tile
      if (!seen.insert(v).second) return false;     // overlap between kept sets
    }
    if (rat(static_cast<std::int64_t>(w.kept[i].size())) <
        (1 - eps) * rat(static_cast<std::int64_t>(tiles[i].vertices.size())))
      return false;
  }
  return true;
}

Rat cover_fraction(const ColoredGraph& g, std::span<const Tile> tiles) {
  require(g.n_vertices() > 0, ErrorKind::EmptySet, "cover fraction of an empty graph");
  check_tiles_inside(g, tiles);
  std::unordered_set<VertexId> covered;
  for (const auto& t : tiles) covered.insert(t.vertices.begin(), t.vertices.end());
  return rat(static_cast<std::int64_t>(covered.size()), g.n_vertices());
}

std::optional<std::int64_t> is_even_cover(const ColoredGraph& g, std::span<const Tile> tiles,
                                          const Rat& delta) {
  require(delta >= 0 && delta < 1, ErrorKind::PreconditionViolation, "delta must lie in [0,1)");
  check_tiles_inside(g, tiles);
  std::unordered_map<VertexId, std::int64_t> mult;
  std::int64_t total = 0;
  for (const auto& t : tiles) {
    total += static_cast<std::int64_t>(t.vertices.size());
    for (auto v : t.vertices) ++mult[v];
  }
  std::int64_t m = 0;
  for (const auto& [v, c] : mult) m = std::max(m, c);
  if (m == 0) return std::nullopt;
  // total is fixed, so the max multiplicity is the only M worth testing
  if (rat(total) >= (1 - delta) * rat(m) * rat(g.n_vertices())) return m;
  return std::nullopt;
}

namespace {

std::vector<std::size_t> greedy_order(std::span<const Tile> tiles) {
  std::vector<std::size_t> order(tiles.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (tiles[a].vertices.size() != tiles[b].vertices.size())
      return tiles[a].vertices.size() > tiles[b].vertices.size();
    if (tiles[a].shape_index != tiles[b].shape_index)
      return tiles[a].shape_index > tiles[b].shape_index;
    if (tiles[a].center != tiles[b].center) return tiles[a].center < tiles[b].center;
    return a < b;
  });
  return order;
}

}  // namespace

std::vector<std::size_t> select_epsilon_disjoint(const ColoredGraph& g,
                                                 std::span<const Tile> tiles, const Rat& eps,
                                                 const Rat& delta) {
  require(eps > 0 && eps < 1, ErrorKind::PreconditionViolation, "eps must lie in (0,1)");
  check_tiles_inside(g, tiles);
  std::unordered_set<VertexId> covered;
  std::vector<std::size_t> accepted;
  for (std::size_t i : greedy_order(tiles)) {
    const auto& t = tiles[i];
    std::int64_t overlap = 0;
    for (auto v : t.vertices) overlap += covered.count(v) ? 1 : 0;
    if (rat(overlap) <= eps * rat(static_cast<std::int64_t>(t.vertices.size()))) {
      accepted.push_back(i);
      covered.insert(t.vertices.begin(), t.vertices.end());
    }
  }
  std::sort(accepted.begin(), accepted.end());
  // verify both conclusions on the selected subfamily
  std::vector<Tile> sel;
  sel.reserve(accepted.size());
  for (auto i : accepted) sel.push_back(tiles[i]);
  // witness greedy must run in acceptance order for soundness of the bound
  std::vector<Tile> sel_in_order;
  for (std::size_t i : greedy_order(tiles))
    if (std::binary_search(accepted.begin(), accepted.end(), i)) sel_in_order.push_back(tiles[i]);
  if (!is_epsilon_disjoint(g, sel_in_order, eps).has_value())
    fail(ErrorKind::PostconditionViolation,
         "selected subcollection is not verifiably eps-disjoint");
  if (cover_fraction(g, sel) < eps * (1 - delta))
    fail(ErrorKind::PostconditionViolation,
         "selected subcollection covers less than eps(1-delta); "
         "the input was likely not a delta-even cover");
  return accepted;
}

bool type_check(const GroupContext& ctx, const FolnerSet& H, std::int64_t K, const Rat& alpha) {
  require(H.size() >= 1, ErrorKind::EmptySet, "type check needs a nonempty set");
  auto bk = k_neighborhood(ctx, H.elements, K);
  return rat(static_cast<std::int64_t>(bk.size()), H.size()) < 1 + alpha;
}

namespace {

}  // namespace

InductionalReport inductional_step(const ColoredGraph& B, const GroupContext& ctx,
                                   const FolnerSet& H, std::int64_t K, const Rat& alpha,
                                   std::int64_t L, const Rat& beta, const Rat& eps,
                                   const Rat& eps1) {
  require(H.size() >= 1, ErrorKind::PreconditionViolation, "shape H must be nonempty");
  require(eps > 0 && eps < 1, ErrorKind::PreconditionViolation, "eps must lie in (0,1)");
  require(eps1 * 100 < eps, ErrorKind::PreconditionViolation, "need eps1 < eps/100");
  require(beta > 0 && beta < 1, ErrorKind::PreconditionViolation, "beta must lie in (0,1)");
  std::int64_t h_radius = H.radius();
  require(h_radius <= L, ErrorKind::PreconditionViolation,
          "shape H does not fit inside the similarity ball B_L(1)");
  require(type_check(ctx, H, K, alpha), ErrorKind::PreconditionViolation,
          "H is not of type (K, alpha)");

  BallMatcher matcher(B, ctx);
  std::vector<std::int64_t> centers;
  for (std::int64_t p = 0; p < B.n_vertices(); ++p)
    if (matcher.radius_at(p, L) >= L) centers.push_back(p);
  require(!centers.empty(), ErrorKind::PreconditionViolation,
          "no L-similar vertex: Q^B_L is empty");
  require(rat(static_cast<std::int64_t>(centers.size())) > (1 - beta) * rat(B.n_vertices()),
          ErrorKind::PreconditionViolation, "|Q^B_L| <= (1-beta)|V(B)|");

  InductionalReport rep{.selected = {}, .residual = B, .beta1 = Rat(0)};
  rep.meets_paper_ratios = (h_radius * 100 <= L) && (K * 10 < L);

  // even-cover verification with the multiplicity bound |H|; tiles are cheap
  // to rebuild, so two streaming passes instead of caching |Q| x |H| ids
  std::vector<std::int64_t> mult(static_cast<std::size_t>(B.n_vertices()), 0);
  std::int64_t total_mass = 0;
  for (auto c : centers) {
    auto verts = matcher.image(c, h_radius, H.elements);
    require(verts.has_value(), ErrorKind::InternalInvariant,
            "L-similar center has no radius(H) ball isomorphism");
    for (auto p : *verts) ++mult[p];
    total_mass += static_cast<std::int64_t>(verts->size());
  }
  std::int64_t max_mult = *std::max_element(mult.begin(), mult.end());
  require(max_mult <= H.size(), ErrorKind::InternalInvariant,
          "tile multiplicity exceeds |H|");
  require(rat(total_mass) >= (1 - beta) * rat(H.size()) * rat(B.n_vertices()),
          ErrorKind::InternalInvariant, "tile family is not a beta-even cover");
  rep.even_cover_multiplicity = max_mult;

  // greedy eps1-disjoint selection, centers in ascending vertex order
  std::vector<char> covered(static_cast<std::size_t>(B.n_vertices()), 0);
  std::int64_t covered_count = 0;
  for (auto c : centers) {
    auto verts = matcher.image(c, h_radius, H.elements);
    require(verts.has_value(), ErrorKind::InternalInvariant, "tile vanished between passes");
    std::int64_t overlap = 0;
    for (auto p : *verts) overlap += covered[p];
    if (rat(overlap) <= eps1 * rat(static_cast<std::int64_t>(verts->size()))) {
      Tile t;
      t.center = B.id_at(c);
      t.shape_index = 0;
      t.vertices.reserve(verts->size());
      for (auto p : *verts) t.vertices.push_back(B.id_at(p));
      std::sort(t.vertices.begin(), t.vertices.end());
      rep.selected.push_back(std::move(t));
      for (auto p : *verts)
        if (!covered[p]) { covered[p] = 1; ++covered_count; }
    }
  }

  // verified conclusions of the selection
  if (!is_epsilon_disjoint(B, rep.selected, eps1).has_value())
    fail(ErrorKind::PostconditionViolation, "selection is not verifiably eps1-disjoint");
  rep.cover = rat(covered_count, B.n_vertices());
  if (rep.cover < eps1 * (1 - beta))
    fail(ErrorKind::PostconditionViolation, "selection covers less than eps1(1-beta)");

  std::vector<VertexId> uncovered;
  for (std::int64_t p = 0; p < B.n_vertices(); ++p)
    if (!covered[p]) uncovered.push_back(B.id_at(p));
  rep.residual = B.induced(uncovered);

  rep.beta1 = alpha * (2 / eps) / (1 - eps1);
  rep.residual_check_triggered =
      rat(rep.residual.n_vertices()) * 2 > eps * rat(B.n_vertices());
  if (rep.residual_check_triggered && rep.residual.n_vertices() > 0) {
    auto rradii = similarity_radii(rep.residual, ctx, K);
    rep.residual_similar_count =
        std::count_if(rradii.begin(), rradii.end(), [&](std::int64_t r) { return r >= K; });
    rep.residual_check_holds =
        rat(rep.residual_similar_count) >= (1 - rep.beta1) * rat(rep.residual.n_vertices());
  }
  return rep;
}

std::vector<std::size_t> good_subsequence(const GroupContext& ctx,
                                          std::span<const FolnerSet> exhaustion,
                                          std::span<const Rat> alpha, std::span<const Rat> s) {
  if (s.empty()) return {};
  require(alpha.size() + 1 >= s.size(), ErrorKind::PreconditionViolation,
          "need at least |s|-1 alpha values");
  for (std::size_t i = 0; i < s.size(); ++i) {
    require(s[i] >= 1, ErrorKind::PreconditionViolation, "s values must be >= 1");
    if (i + 1 < s.size())
      require(s[i + 1] >= 10 * s[i], ErrorKind::PreconditionViolation,
              "s must grow at least tenfold");
  }
  auto ball_radius = [&](const Rat& r) { return rat_floor(r).get_si(); };
  std::vector<std::size_t> picked;
  // first index: 1 in F and F inside B_{s_1}(1)
  std::size_t start = 0;
  for (; start < exhaustion.size(); ++start) {
    const auto& F = exhaustion[start];
    if (!F.contains_identity()) continue;
    if (F.radius() <= ball_radius(s[0])) break;
  }
  if (start == exhaustion.size())
    fail(ErrorKind::ExhaustionExhausted, "no exhaustion member with 1 in F and F inside B_s1(1)");
  picked.push_back(start);
  for (std::size_t i = 1; i < s.size(); ++i) {
    auto ball = ctx.ball_elements(ball_radius(s[i - 1]));
    std::size_t j = picked.back() + 1;
    for (; j < exhaustion.size(); ++j) {
      const auto& F = exhaustion[j];
      bool contains_ball = std::all_of(ball.begin(), ball.end(),
                                       [&](const GroupElement& b) { return F.contains(b); });
      if (!contains_ball) continue;
      if (!type_check(ctx, F, 100 * ball_radius(s[i - 1]), alpha[i - 1])) continue;
      break;
    }
    if (j == exhaustion.size())
      fail(ErrorKind::ExhaustionExhausted,
           "no exhaustion member contains B_s" + std::to_string(i) + "(1) with type (100 s" +
               std::to_string(i) + ", alpha" + std::to_string(i) + ")");
    picked.push_back(j);
  }
  return picked;
}

Rat epsilon1_for(const Rat& eps) {
  require(eps > 0 && eps < 1, ErrorKind::PreconditionViolation, "eps must lie in (0,1)");
  Rat bound = eps / 100;
  Rat e1 = rat(1, 2);
  while (e1 >= bound) e1 /= 2;
  return e1;
}

std::int64_t step_bound_for(const Rat& eps, const Rat& eps1) {
  Rat base = 1 - eps1 / 2;
  Rat bound = eps / 100;
  // float estimate, then exact adjustment
  double lb = std::log(bound.get_d()) / std::log(base.get_d());
  std::int64_t m = static_cast<std::int64_t>(lb) + 1;
  if (m < 1) m = 1;
  while (rat_pow(base, static_cast<std::uint64_t>(m)) >= bound) ++m;
  while (m > 1 && rat_pow(base, static_cast<std::uint64_t>(m - 1)) < bound) --m;
  return m;
}

namespace {

struct ScalePlan {
  std::size_t exhaustion_index;
  std::int64_t radius;  // realized s value
};

/// Realized shape chain: nested exhaustion members whose word radii grow at
/// least tenfold, each containing the ball of the previous radius.
std::vector<ScalePlan> realized_chain(const GroupContext& ctx,
                                      std::span<const FolnerSet> exhaustion) {
  std::vector<ScalePlan> chain;
  for (std::size_t j = 0; j < exhaustion.size(); ++j) {
    const auto& F = exhaustion[j];
    if (!F.contains_identity()) continue;
    std::int64_t r = F.radius();
    if (r < 1) continue;
    if (chain.empty()) {
      chain.push_back({j, r});
      continue;
    }
    if (r < 10 * chain.back().radius) continue;
    auto ball = ctx.ball_elements(chain.back().radius);
    bool contains_ball = std::all_of(ball.begin(), ball.end(),
                                     [&](const GroupElement& b) { return F.contains(b); });
    if (contains_ball) chain.push_back({j, r});
  }
  return chain;
}

}  // namespace

Tiling quasi_tile(const ColoredGraph& B, const GroupContext& ctx,
                  std::span<const FolnerSet> exhaustion, const Rat& eps) {
  require(eps > 0 && eps < 1, ErrorKind::PreconditionViolation, "eps must lie in (0,1)");
  require(B.n_vertices() > 0, ErrorKind::EmptySet, "cannot tile an empty graph");
  require(!exhaustion.empty(), ErrorKind::PreconditionViolation, "empty exhaustion");

  Tiling out;
  out.group_spec = ctx.spec_string();
  out.params.epsilon = eps;
  out.params.epsilon1 = epsilon1_for(eps);
  out.params.m_bound = step_bound_for(eps, out.params.epsilon1);
  out.params.beta = eps / (200 * rat(out.params.m_bound));
  const Rat alpha_uniform = out.params.beta * eps * (1 - out.params.epsilon1) / 4;

  auto chain = realized_chain(ctx, exhaustion);
  require(!chain.empty(), ErrorKind::PreconditionViolation,
          "exhaustion has no usable shape (need 1 in F and radius >= 1)");

  for (const auto& sc : chain) {
    out.shapes.push_back(exhaustion[sc.exhaustion_index]);
    out.params.alpha.push_back(alpha_uniform);
    out.params.s.push_back(rat(sc.radius));
    out.params.subsequence.push_back(sc.exhaustion_index);
  }
  out.params.similarity_radii.assign(chain.size(), 0);

  ColoredGraph residual = B;
  std::vector<char> scale_used(chain.size(), 0);
  bool any_scale_ran = false;
  std::int64_t covered_total = 0;
  for (std::size_t jj = chain.size(); jj-- > 0;) {
    if (residual.n_vertices() == 0) break;
    std::int64_t s_j = chain[jj].radius;
    // L = s maximizes the center set Q^B_L; the multiplicity bound and every
    // selection conclusion are verified by the step itself, so the larger
    // similarity slack the existence proof uses is not needed here
    std::int64_t L = s_j;
    std::int64_t q = 0;
    {
      BallMatcher matcher(residual, ctx);
      for (std::int64_t p = 0; p < residual.n_vertices(); ++p)
        if (matcher.radius_at(p, L) >= L) ++q;
    }
    if (q == 0) continue;  // this scale places no tile on the residual

    std::int64_t K = jj > 0 ? chain[jj - 1].radius : 1;
    const auto& H = out.shapes[jj];
    // measured type tolerance at the realized K
    auto bk = k_neighborhood(ctx, H.elements, K);
    Rat ratio = rat(static_cast<std::int64_t>(bk.size()), H.size());
    Rat alpha_hat = ratio > 1 ? 2 * (ratio - 1) : rat(1, 2 * H.size());
    Rat deficit = 1 - rat(q, residual.n_vertices());
    Rat beta_hat = (1 + deficit) / 2;

    auto rep = inductional_step(residual, ctx, H, K, alpha_hat, L, beta_hat, eps,
                                out.params.epsilon1);
    any_scale_ran = true;
    scale_used[jj] = 1;
    out.params.similarity_radii[jj] = L;
    ScaleTrace tr;
    tr.exhaustion_index = chain[jj].exhaustion_index;
    tr.L = L;
    tr.K = K;
    tr.alpha_measured = alpha_hat;
    tr.beta_measured = beta_hat;
    tr.tiles_accepted = static_cast<std::int64_t>(rep.selected.size());
    tr.residual_check_triggered = rep.residual_check_triggered;
    tr.residual_check_holds = rep.residual_check_holds;
    for (auto& t : rep.selected) {
      t.shape_index = static_cast<int>(jj);
      out.tiles.push_back(std::move(t));
    }
    residual = std::move(rep.residual);
    covered_total = B.n_vertices() - residual.n_vertices();
    tr.covered_after = covered_total;
    out.trace.push_back(tr);
    if (rat(residual.n_vertices()) <= eps * rat(B.n_vertices())) break;
  }
  require(any_scale_ran, ErrorKind::PreconditionViolation,
          "no scale has an L-similar vertex in the graph");

  auto verif = verify_tiling(B, out);
  if (!verif.disjoint)
    fail(ErrorKind::PostconditionViolation, "emitted tiling has no verified disjointness witness");
  if (verif.cover < 1 - eps)
    fail(ErrorKind::PostconditionViolation,
         "emitted tiling covers " + rat_str(verif.cover) + " < 1 - eps");
  return out;
}

TilingVerification verify_tiling(const ColoredGraph& B, const Tiling& t) {
  TilingVerification v;
  // emission order: shape_index descending, center ascending
  std::vector<Tile> ordered = t.tiles;
  std::stable_sort(ordered.begin(), ordered.end(), [](const Tile& a, const Tile& b) {
    if (a.shape_index != b.shape_index) return a.shape_index > b.shape_index;
    return a.center < b.center;
  });
  v.disjoint = is_epsilon_disjoint(B, ordered, t.params.epsilon).has_value();
  v.cover = cover_fraction(B, t.tiles);
  const auto& p = t.params;
  bool ok = p.epsilon1 * 100 < p.epsilon &&
            rat_pow(1 - p.epsilon1 / 2, static_cast<std::uint64_t>(p.m_bound)) < p.epsilon / 100 &&
            p.beta * rat(p.m_bound) < p.epsilon / 100;
  for (const auto& a : p.alpha) ok = ok && a * (2 / p.epsilon) / (1 - p.epsilon1) < p.beta;
  for (std::size_t i = 0; i + 1 < p.s.size(); ++i) ok = ok && p.s[i + 1] >= 10 * p.s[i];
  for (const auto& s : p.s) ok = ok && s >= 1;
  v.params_ok = ok;
  return v;
}

std::string tiling_to_json(const Tiling& t) {
  nlohmann::json j;
  j["group"] = t.group_spec;
  nlohmann::json params;
  params["epsilon"] = rat_str(t.params.epsilon);
  params["epsilon1"] = rat_str(t.params.epsilon1);
  params["M"] = t.params.m_bound;
  params["beta"] = rat_str(t.params.beta);
  params["alpha"] = nlohmann::json::array();
  for (const auto& a : t.params.alpha) params["alpha"].push_back(rat_str(a));
  params["s"] = nlohmann::json::array();
  for (const auto& s : t.params.s) params["s"].push_back(rat_str(s));
  params["similarity_radii"] = t.params.similarity_radii;
  params["subsequence"] = t.params.subsequence;
  GroupContext ctx = GroupContext::parse(t.group_spec);
  params["shapes"] = nlohmann::json::array();
  for (const auto& sh : t.shapes) {
    nlohmann::json elems = nlohmann::json::array();
    for (const auto& e : sh.elements) elems.push_back(ctx.format_element(e));
    params["shapes"].push_back(std::move(elems));
  }
  j["params"] = std::move(params);
  j["tiles"] = nlohmann::json::array();
  for (const auto& t2 : t.tiles) {
    nlohmann::json jt;
    jt["shape_index"] = t2.shape_index;
    jt["center"] = t2.center;
    jt["vertices"] = t2.vertices;
    j["tiles"].push_back(std::move(jt));
  }
  return j.dump(2);
}

Tiling tiling_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    fail(ErrorKind::ParseError, std::string("tiling json: ") + e.what());
  }
  Tiling t;
  t.group_spec = j.at("group").get<std::string>();
  GroupContext ctx = GroupContext::parse(t.group_spec);
  const auto& p = j.at("params");
  t.params.epsilon = rat_parse(p.at("epsilon").get<std::string>());
  t.params.epsilon1 = rat_parse(p.at("epsilon1").get<std::string>());
  t.params.m_bound = p.at("M").get<std::int64_t>();
  t.params.beta = rat_parse(p.at("beta").get<std::string>());
  for (const auto& a : p.at("alpha")) t.params.alpha.push_back(rat_parse(a.get<std::string>()));
  for (const auto& s : p.at("s")) t.params.s.push_back(rat_parse(s.get<std::string>()));
  if (p.contains("similarity_radii"))
    t.params.similarity_radii = p.at("similarity_radii").get<std::vector<std::int64_t>>();
  if (p.contains("subsequence"))
    t.params.subsequence = p.at("subsequence").get<std::vector<std::size_t>>();
  for (const auto& sh : p.at("shapes")) {
    std::vector<GroupElement> elems;
    for (const auto& e : sh) elems.push_back(ctx.parse_element(e.get<std::string>()));
    t.shapes.push_back(FolnerSet::of(ctx, std::move(elems)));
  }
  for (const auto& jt : j.at("tiles")) {
    Tile tile;
    tile.shape_index = jt.at("shape_index").get<int>();
    tile.center = jt.at("center").get<VertexId>();
    tile.vertices = jt.at("vertices").get<std::vector<VertexId>>();
    t.tiles.push_back(std::move(tile));
  }
  return t;
}

}  // namespace vndim
