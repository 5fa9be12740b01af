#include "vndim/colored_graph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace vndim {

ColoredGraph::ColoredGraph(GroupContext ctx, std::vector<VertexId> ids,
                           std::vector<GroupElement> labels)
    : ctx_(std::move(ctx)), n_colors_(ctx_.n_generators()), ids_(std::move(ids)),
      labels_(std::move(labels)) {
  require(labels_.empty() || labels_.size() == ids_.size(), ErrorKind::MalformedCollection,
          "label count must match vertex count");
  adj_.assign(ids_.size() * static_cast<std::size_t>(n_colors_), -1);
  pos_.reserve(ids_.size());
  for (std::size_t p = 0; p < ids_.size(); ++p) {
    auto [it, fresh] = pos_.emplace(ids_[p], static_cast<std::int64_t>(p));
    require(fresh, ErrorKind::MalformedCollection, "duplicate vertex id");
  }
}

std::int64_t ColoredGraph::pos_of(VertexId id) const {
  auto it = pos_.find(id);
  return it == pos_.end() ? -1 : it->second;
}

void ColoredGraph::add_edge(std::int64_t src_pos, std::int64_t dst_pos, int color) {
  require(color >= 0 && color < n_colors_, ErrorKind::MalformedCollection, "bad edge color");
  auto& slot = adj_[static_cast<std::size_t>(src_pos) * n_colors_ + color];
  require(slot == -1 || slot == dst_pos, ErrorKind::MalformedCollection,
          "two outgoing edges with one color");
  slot = dst_pos;
}

int ColoredGraph::degree(std::int64_t pos) const {
  int d = 0;
  for (int c = 0; c < n_colors_; ++c)
    if (out_edge(pos, c) != -1) ++d;
  return d;
}

std::int64_t ColoredGraph::n_edges() const {
  std::int64_t e = 0;
  for (std::int64_t p = 0; p < n_vertices(); ++p) e += degree(p);
  return e;
}

void ColoredGraph::validate() const {
  for (std::int64_t p = 0; p < n_vertices(); ++p) {
    for (int c = 0; c < n_colors_; ++c) {
      std::int64_t q = out_edge(p, c);
      if (q == -1) continue;
      require(q >= 0 && q < n_vertices(), ErrorKind::MalformedCollection, "edge target out of range");
      require(out_edge(q, ctx_.inverse_index(c)) == p, ErrorKind::MalformedCollection,
              "missing inverse-paired edge");
    }
  }
}

ColoredGraph ColoredGraph::cayley_subgraph(const GroupContext& ctx,
                                           std::span<const GroupElement> F) {
  std::vector<GroupElement> elems(F.begin(), F.end());
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  std::vector<VertexId> ids(elems.size());
  for (std::size_t i = 0; i < elems.size(); ++i) ids[i] = static_cast<VertexId>(i);
  ColoredGraph g(ctx, std::move(ids), elems);
  std::unordered_map<GroupElement, std::int64_t, GroupElementHash> index;
  index.reserve(elems.size());
  for (std::size_t i = 0; i < elems.size(); ++i) index.emplace(elems[i], i);
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (int s = 0; s < ctx.n_generators(); ++s) {
      auto it = index.find(ctx.apply_generator(s, elems[i]));
      if (it != index.end()) g.add_edge(static_cast<std::int64_t>(i), it->second, s);
    }
  }
  return g;
}

ColoredGraph ColoredGraph::induced(std::span<const VertexId> keep) const {
  std::vector<VertexId> ids(keep.begin(), keep.end());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::vector<GroupElement> labels;
  std::vector<std::int64_t> old_pos(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    std::int64_t p = pos_of(ids[i]);
    require(p != -1, ErrorKind::MalformedCollection, "induced(): unknown vertex id");
    old_pos[i] = p;
  }
  if (!labels_.empty()) {
    labels.reserve(ids.size());
    for (auto p : old_pos) labels.push_back(labels_[p]);
  }
  ColoredGraph g(ctx_, ids, std::move(labels));
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (int c = 0; c < n_colors_; ++c) {
      std::int64_t q = out_edge(old_pos[i], c);
      if (q == -1) continue;
      std::int64_t nq = g.pos_of(ids_[q]);
      if (nq != -1) g.add_edge(static_cast<std::int64_t>(i), nq, c);
    }
  }
  return g;
}

void ColoredGraph::save(std::ostream& os) const {
  os << "g " << ctx_.spec_string() << "\n";
  for (std::int64_t p = 0; p < n_vertices(); ++p) {
    os << "v " << ids_[p];
    if (!labels_.empty()) os << " " << ctx_.format_element(labels_[p]);
    os << "\n";
  }
  for (std::int64_t p = 0; p < n_vertices(); ++p)
    for (int c = 0; c < n_colors_; ++c)
      if (std::int64_t q = out_edge(p, c); q != -1)
        os << "e " << ids_[p] << " " << ids_[q] << " " << c << "\n";
}

ColoredGraph ColoredGraph::load(std::istream& is) {
  std::string line;
  std::optional<GroupContext> ctx;
  std::vector<VertexId> ids;
  std::vector<GroupElement> labels;
  struct E { VertexId s, d; int c; };
  std::vector<E> edges;
  bool any_label = false, any_plain = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "g") {
      std::string spec;
      ss >> spec;
      ctx = GroupContext::parse(spec);
    } else if (tag == "v") {
      require(ctx.has_value(), ErrorKind::ParseError, "graph file: 'v' before 'g' header");
      VertexId id;
      ss >> id;
      require(!ss.fail(), ErrorKind::ParseError, "graph file: bad vertex line");
      std::string label;
      ss >> label;
      ids.push_back(id);
      if (!label.empty()) {
        any_label = true;
        labels.push_back(ctx->parse_element(label));
      } else {
        any_plain = true;
      }
    } else if (tag == "e") {
      E e;
      ss >> e.s >> e.d >> e.c;
      require(!ss.fail(), ErrorKind::ParseError, "graph file: bad edge line");
      edges.push_back(e);
    } else {
      fail(ErrorKind::ParseError, "graph file: unknown line tag '" + tag + "'");
    }
  }
  require(ctx.has_value(), ErrorKind::ParseError, "graph file: missing 'g' header");
  require(!(any_label && any_plain), ErrorKind::ParseError,
          "graph file: either all or no vertices must carry labels");
  ColoredGraph g(*ctx, ids, any_label ? std::move(labels) : std::vector<GroupElement>{});
  for (const auto& e : edges) {
    std::int64_t s = g.pos_of(e.s), d = g.pos_of(e.d);
    require(s != -1 && d != -1, ErrorKind::ParseError, "graph file: edge endpoint unknown");
    g.add_edge(s, d, e.c);
  }
  g.validate();
  return g;
}

FolnerSet FolnerSet::of(const GroupContext& ctx, std::vector<GroupElement> elems) {
  for (const auto& e : elems) ctx.check_element(e);
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  return FolnerSet{ctx, std::move(elems)};
}

bool FolnerSet::contains(const GroupElement& g) const {
  return std::binary_search(elements.begin(), elements.end(), g);
}

bool FolnerSet::contains_identity() const { return contains(ctx.identity()); }

std::int64_t FolnerSet::radius() const {
  std::int64_t r = 0;
  for (const auto& e : elements) r = std::max(r, ctx.word_length(e));
  return r;
}

namespace {

std::unordered_set<GroupElement, GroupElementHash> to_set(std::span<const GroupElement> F) {
  return {F.begin(), F.end()};
}

}  // namespace

std::vector<GroupElement> k_neighborhood(const GroupContext& ctx,
                                         std::span<const GroupElement> F, std::int64_t k) {
  auto ball = ctx.ball_elements(k);
  std::unordered_set<GroupElement, GroupElementHash> out;
  for (const auto& f : F)
    for (const auto& b : ball) out.insert(ctx.compose(b, f));
  std::vector<GroupElement> v(out.begin(), out.end());
  std::sort(v.begin(), v.end());
  return v;
}

std::vector<GroupElement> k_interior(const GroupContext& ctx, std::span<const GroupElement> F,
                                     std::int64_t k) {
  auto ball = ctx.ball_elements(k);
  auto inF = to_set(F);
  std::vector<GroupElement> v;
  for (const auto& f : F) {
    bool deep = true;
    for (const auto& b : ball) {
      if (!inF.count(ctx.compose(b, f))) {
        deep = false;
        break;
      }
    }
    if (deep) v.push_back(f);
  }
  std::sort(v.begin(), v.end());
  return v;
}

std::vector<GroupElement> boundary(const GroupContext& ctx, std::span<const GroupElement> F) {
  auto inF = to_set(F);
  std::vector<GroupElement> v;
  for (const auto& f : F) {
    for (int s = 0; s < ctx.n_generators(); ++s) {
      if (!inF.count(ctx.apply_generator(s, f))) {
        v.push_back(f);
        break;
      }
    }
  }
  std::sort(v.begin(), v.end());
  return v;
}

Rat iso_ratio(const GroupContext& ctx, std::span<const GroupElement> F) {
  require(!F.empty(), ErrorKind::EmptySet, "i(F) is undefined on the empty set");
  return rat(static_cast<std::int64_t>(boundary(ctx, F).size()),
             static_cast<std::int64_t>(F.size()));
}

VertexId BallIsomorphism::map(const GroupContext& ctx, const GroupElement& g) const {
  auto it = std::find(domain.begin(), domain.end(), g);
  require(it != domain.end(), ErrorKind::PreconditionViolation,
          "element outside the ball isomorphism domain");
  return image[static_cast<std::size_t>(it - domain.begin())];
}

namespace {

/// Lazily grown Cayley ball of the identity: elements indexed in BFS layer
/// order with a dense generator-neighbor table. Shared across all per-vertex
/// similarity scans of one call.
class CayleyAtlas {
 public:
  explicit CayleyAtlas(const GroupContext& ctx) : ctx_(ctx) {
    elements_.push_back(ctx.identity());
    index_.emplace(ctx.identity(), 0);
    layer_of_ = {0};
    layer_start_ = {0, 1};
    nbr_.assign(ctx.n_generators(), -1);
    parent_ = {{-1, -1}};
    grown_ = 0;
  }

  std::int64_t grown_radius() const { return grown_; }
  std::int64_t size() const { return static_cast<std::int64_t>(elements_.size()); }
  std::int64_t layer_begin(std::int64_t j) const { return layer_start_[j]; }
  std::int64_t layer_end(std::int64_t j) const { return layer_start_[j + 1]; }
  const GroupElement& element(std::int64_t i) const { return elements_[i]; }
  std::int64_t neighbor(std::int64_t i, int c) const { return nbr_[i * ctx_.n_generators() + c]; }
  std::pair<std::int64_t, int> parent(std::int64_t i) const { return parent_[i]; }
  std::int64_t index_of(const GroupElement& g) const {
    auto it = index_.find(g);
    return it == index_.end() ? -1 : it->second;
  }

  /// Grows the ball so that all layers <= r exist (a finite group may exhaust early).
  void ensure_radius(std::int64_t r) {
    int S = ctx_.n_generators();
    while (grown_ < r) {
      std::int64_t lo = layer_start_[grown_], hi = layer_start_[grown_ + 1];
      if (lo == hi) { ++grown_; layer_start_.push_back(hi); continue; }
      std::vector<GroupElement> next;
      for (std::int64_t i = lo; i < hi; ++i) {
        for (int s = 0; s < S; ++s) {
          GroupElement f = ctx_.apply_generator(s, elements_[i]);
          if (!index_.count(f)) {
            index_.emplace(f, -1);  // reserve; real index assigned after sort
            next.push_back(std::move(f));
          }
        }
      }
      std::sort(next.begin(), next.end());
      for (auto& f : next) {
        index_[f] = static_cast<std::int64_t>(elements_.size());
        elements_.push_back(std::move(f));
        layer_of_.push_back(grown_ + 1);
        parent_.push_back({-1, -1});
      }
      nbr_.resize(elements_.size() * S, -1);
      // neighbor entries for the previous layer and the new one
      for (std::int64_t i = lo; i < static_cast<std::int64_t>(elements_.size()); ++i) {
        for (int s = 0; s < S; ++s) {
          auto it = index_.find(ctx_.apply_generator(s, elements_[i]));
          std::int64_t t = it == index_.end() ? -1 : it->second;
          nbr_[i * S + s] = t;
          if (t != -1 && layer_of_[t] == grown_ + 1 && parent_[t].first == -1 && i < layer_start_[grown_ + 1])
            parent_[t] = {i, s};
        }
      }
      ++grown_;
      layer_start_.push_back(static_cast<std::int64_t>(elements_.size()));
    }
  }

 private:
  const GroupContext& ctx_;
  std::vector<GroupElement> elements_;
  std::unordered_map<GroupElement, std::int64_t, GroupElementHash> index_;
  std::vector<std::int64_t> layer_of_;
  std::vector<std::int64_t> layer_start_;  // layer j occupies [layer_start_[j], layer_start_[j+1])
  std::vector<std::int64_t> nbr_;
  std::vector<std::pair<std::int64_t, int>> parent_;  // first BFS discovery edge
  std::int64_t grown_ = 0;
};

}  // namespace

/// Layer-synchronized matching of the Cayley ball against the ball around one
/// vertex: shared atlas plus scratch assignment arrays.
struct BallMatcher::Impl {
  const ColoredGraph& B;
  const GroupContext& ctx;
  CayleyAtlas atlas;
  std::vector<std::int64_t> cb_to_v, v_to_cb, touched_cb, touched_v;

  Impl(const ColoredGraph& b, const GroupContext& c)
      : B(b), ctx(c), atlas(c), cb_to_v(1, -1),
        v_to_cb(static_cast<std::size_t>(b.n_vertices()), -1) {}

  /// Largest radius <= cap at which the color-guided map is a bijective
  /// colored isomorphism onto the induced graph ball, optionally recording
  /// the map itself (complete layers only).
  std::int64_t match(std::int64_t start_pos, std::int64_t cap,
                     std::vector<std::int64_t>* image_out);
};

std::int64_t BallMatcher::Impl::match(std::int64_t start_pos, std::int64_t cap,
                                      std::vector<std::int64_t>* image_out) {
  const ColoredGraph& B = this->B;
  const GroupContext& ctx = this->ctx;
  const int S = ctx.n_generators();
  touched_cb.clear();
  touched_v.clear();
  auto assign = [&](std::int64_t cb, std::int64_t v) {
    cb_to_v[cb] = v;
    v_to_cb[v] = cb;
    touched_cb.push_back(cb);
    touched_v.push_back(v);
  };
  auto cleanup = [&]() {
    for (auto cb : touched_cb) cb_to_v[cb] = -1;
    for (auto v : touched_v) v_to_cb[v] = -1;
  };

  atlas.ensure_radius(1);
  if (static_cast<std::size_t>(atlas.size()) > cb_to_v.size()) cb_to_v.resize(atlas.size(), -1);
  assign(0, start_pos);
  std::int64_t reached = 0;
  for (std::int64_t j = 1; j <= cap; ++j) {
    atlas.ensure_radius(j + 1);
    if (static_cast<std::size_t>(atlas.size()) > cb_to_v.size()) cb_to_v.resize(atlas.size(), -1);
    if (atlas.layer_begin(j) == atlas.layer_end(j)) {
      // finite group exhausted below the cap: the whole Cayley graph matched
      reached = cap;
      break;
    }
    bool ok = true;
    std::int64_t assigned_from = static_cast<std::int64_t>(touched_cb.size());
    // extend the map along first-discovery edges
    for (std::int64_t cb = atlas.layer_begin(j); cb < atlas.layer_end(j) && ok; ++cb) {
      auto [pcb, pcol] = atlas.parent(cb);
      std::int64_t pv = cb_to_v[pcb];
      std::int64_t v = B.out_edge(pv, pcol);
      if (v == -1 || cb_to_v[cb] != -1) { ok = false; break; }
      if (v_to_cb[v] != -1) { ok = false; break; }  // collision
      assign(cb, v);
    }
    // every edge incident to a new vertex must match the Cayley picture
    for (std::int64_t t = assigned_from; t < static_cast<std::int64_t>(touched_cb.size()) && ok; ++t) {
      std::int64_t cb = touched_cb[t];
      std::int64_t v = cb_to_v[cb];
      for (int s = 0; s < S && ok; ++s) {
        std::int64_t cb2 = atlas.neighbor(cb, s);
        std::int64_t u = B.out_edge(v, s);
        bool cb2_assigned = cb2 != -1 && cb_to_v[cb2] != -1;
        if (u != -1 && v_to_cb[u] != -1) {
          if (cb2 == -1 || v_to_cb[u] != cb2) ok = false;  // extra or misrouted adjacency
        } else if (cb2_assigned) {
          ok = false;  // edge required by the Cayley ball is missing
        }
      }
    }
    if (!ok) { reached = j - 1; break; }
    reached = j;
  }
  if (image_out) {
    // keep only the complete layers 0..reached; a failed layer may sit beyond
    std::int64_t keep = 1;
    if (reached >= 1) {
      atlas.ensure_radius(reached);
      keep = atlas.layer_end(reached);
    }
    image_out->assign(keep, -1);
    for (std::int64_t cb = 0; cb < keep; ++cb) (*image_out)[cb] = cb_to_v[cb];
  }
  cleanup();
  return reached;
}

BallMatcher::BallMatcher(const ColoredGraph& B, const GroupContext& ctx)
    : impl_(std::make_unique<Impl>(B, ctx)) {}

BallMatcher::~BallMatcher() = default;

std::int64_t BallMatcher::radius_at(std::int64_t pos, std::int64_t cap) {
  require(cap >= 0, ErrorKind::PreconditionViolation, "similarity cap must be >= 0");
  return impl_->match(pos, cap, nullptr);
}

std::optional<std::vector<std::int64_t>> BallMatcher::image(std::int64_t pos, std::int64_t k,
                                                            std::span<const GroupElement> subset) {
  std::vector<std::int64_t> img;
  if (impl_->match(pos, k, &img) < k) return std::nullopt;
  std::vector<std::int64_t> out;
  out.reserve(subset.size());
  for (const auto& g : subset) {
    std::int64_t cb = impl_->atlas.index_of(g);
    require(cb >= 0 && cb < static_cast<std::int64_t>(img.size()) && img[cb] != -1,
            ErrorKind::PreconditionViolation, "subset element outside the matched ball");
    out.push_back(img[cb]);
  }
  return out;
}

std::vector<std::int64_t> similarity_radii(const ColoredGraph& B, const GroupContext& ctx,
                                           std::int64_t cap) {
  require(cap >= 0, ErrorKind::PreconditionViolation, "similarity cap must be >= 0");
  BallMatcher matcher(B, ctx);
  std::vector<std::int64_t> out(B.n_vertices(), 0);
  for (std::int64_t p = 0; p < B.n_vertices(); ++p) out[p] = matcher.radius_at(p, cap);
  return out;
}

std::optional<BallIsomorphism> ball_isomorphism_at(const ColoredGraph& B, const GroupContext& ctx,
                                                   std::int64_t pos, std::int64_t k) {
  BallMatcher matcher(B, ctx);
  std::vector<std::int64_t> image;
  std::int64_t r = matcher.impl_->match(pos, k, &image);
  auto& atlas = matcher.impl_->atlas;
  if (r < k) return std::nullopt;
  BallIsomorphism iso;
  iso.center = B.id_at(pos);
  iso.radius = k;
  for (std::size_t cb = 0; cb < image.size(); ++cb) {
    if (image[cb] == -1) continue;
    iso.domain.push_back(atlas.element(static_cast<std::int64_t>(cb)));
    iso.image.push_back(B.id_at(image[cb]));
  }
  return iso;
}

std::map<VertexId, BallIsomorphism> k_similar_vertices(const ColoredGraph& B,
                                                       const GroupContext& ctx, std::int64_t k) {
  auto radii = similarity_radii(B, ctx, k);
  std::map<VertexId, BallIsomorphism> out;
  for (std::int64_t p = 0; p < B.n_vertices(); ++p) {
    if (radii[p] >= k) {
      auto iso = ball_isomorphism_at(B, ctx, p, k);
      require(iso.has_value(), ErrorKind::InternalInvariant, "similarity scan disagreement");
      out.emplace(B.id_at(p), std::move(*iso));
    }
  }
  return out;
}

std::vector<Rat> convergence_profile(std::span<const ColoredGraph> seq, const GroupContext& ctx,
                                     std::int64_t k) {
  std::vector<Rat> out;
  out.reserve(seq.size());
  for (const auto& B : seq) {
    require(B.n_vertices() > 0, ErrorKind::EmptySet, "convergence profile of an empty graph");
    auto radii = similarity_radii(B, ctx, k);
    std::int64_t q = std::count_if(radii.begin(), radii.end(),
                                   [&](std::int64_t r) { return r >= k; });
    out.push_back(rat(q, B.n_vertices()));
  }
  return out;
}

}  // namespace vndim
