#include "vndim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace vndim {

namespace {

const char* kind_name(SequenceKind k) {
  switch (k) {
    case SequenceKind::Folner: return "folner";
    case SequenceKind::Quotient: return "quotient";
    case SequenceKind::Diagonal: return "diagonal";
  }
  return "?";
}

SequenceKind kind_parse(const std::string& s) {
  if (s == "folner") return SequenceKind::Folner;
  if (s == "quotient") return SequenceKind::Quotient;
  if (s == "diagonal") return SequenceKind::Diagonal;
  fail(ErrorKind::ParseError, "unknown sequence kind '" + s + "'");
}

}  // namespace

ExperimentSpec ExperimentSpec::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    fail(ErrorKind::ParseError, std::string("experiment spec: ") + e.what());
  }
  ExperimentSpec s;
  s.group = j.value("group", "Z");
  s.operator_path = j.value("operator", "");
  s.operator_inline = j.value("operator_inline", "");
  s.kind = kind_parse(j.value("sequence", "folner"));
  if (j.contains("schedule")) s.schedule = j.at("schedule").get<std::vector<std::int64_t>>();
  if (j.contains("subgroups"))
    s.subgroups = j.at("subgroups").get<std::vector<std::vector<std::int64_t>>>();
  if (j.contains("epsilon")) s.epsilon = rat_parse(j.at("epsilon").get<std::string>());
  if (j.contains("delta")) s.delta = rat_parse(j.at("delta").get<std::string>());
  s.csv_path = j.value("csv", "");
  s.json_path = j.value("json", "");
  s.svg_path = j.value("svg", "");
  s.seed = j.value("seed", std::uint64_t{1});
  for (std::size_t i = 0; i + 1 < s.schedule.size(); ++i)
    require(s.schedule[i] < s.schedule[i + 1], ErrorKind::PreconditionViolation,
            "schedule must be strictly increasing");
  require(s.epsilon > 0 && s.epsilon < 1 && s.delta > 0 && s.delta < 1,
          ErrorKind::PreconditionViolation, "epsilon and delta must lie in (0,1)");
  return s;
}

std::string ExperimentSpec::to_json() const {
  nlohmann::json j;
  j["group"] = group;
  if (!operator_path.empty()) j["operator"] = operator_path;
  if (!operator_inline.empty()) j["operator_inline"] = operator_inline;
  j["sequence"] = kind_name(kind);
  j["schedule"] = schedule;
  if (!subgroups.empty()) j["subgroups"] = subgroups;
  j["epsilon"] = rat_str(epsilon);
  j["delta"] = rat_str(delta);
  if (!csv_path.empty()) j["csv"] = csv_path;
  if (!json_path.empty()) j["json"] = json_path;
  if (!svg_path.empty()) j["svg"] = svg_path;
  j["seed"] = seed;
  return j.dump(2);
}

FolnerSet folner_shape(const GroupContext& ctx, std::int64_t n) {
  require(n >= 0, ErrorKind::PreconditionViolation, "shape radius must be >= 0");
  switch (ctx.family()) {
    case GroupFamily::FreeAbelian: {
      int d = ctx.coord_arity();
      std::vector<GroupElement> elems;
      GroupElement cur{std::vector<std::int64_t>(d, -n)};
      for (;;) {
        elems.push_back(cur);
        int i = d - 1;
        while (i >= 0 && cur.coords[i] == n) cur.coords[i--] = -n;
        if (i < 0) break;
        ++cur.coords[i];
      }
      return FolnerSet::of(ctx, std::move(elems));
    }
    case GroupFamily::Heisenberg:
    case GroupFamily::HeisenbergQuotient:
      return FolnerSet::of(ctx, ctx.ball_elements(n));
    case GroupFamily::FiniteQuotient: {
      // box in the infinite coordinates, full residue range in the finite ones
      int d = ctx.coord_arity();
      std::vector<GroupElement> elems;
      std::vector<std::int64_t> lo(d), hi(d);
      for (int i = 0; i < d; ++i) {
        if (ctx.moduli()[i] == 0) {
          lo[i] = -n;
          hi[i] = n;
        } else {
          lo[i] = 0;
          hi[i] = ctx.moduli()[i] - 1;
        }
      }
      GroupElement cur{lo};
      for (;;) {
        elems.push_back(cur);
        int i = d - 1;
        while (i >= 0 && cur.coords[i] == hi[i]) cur.coords[i--] = lo[i];
        if (i < 0) break;
        ++cur.coords[i];
      }
      return FolnerSet::of(ctx, std::move(elems));
    }
  }
  fail(ErrorKind::InternalInvariant, "unhandled group family");
}

std::vector<ColoredGraph> folner_sequence(const GroupContext& ctx,
                                          std::span<const std::int64_t> schedule) {
  require(ctx.family() == GroupFamily::FreeAbelian || ctx.family() == GroupFamily::Heisenberg,
          ErrorKind::PreconditionViolation, "folner sequence needs an infinite family");
  std::vector<ColoredGraph> out;
  out.reserve(schedule.size());
  for (auto n : schedule) {
    auto F = folner_shape(ctx, n);
    out.push_back(ColoredGraph::cayley_subgraph(ctx, F.elements));
  }
  return out;
}

std::vector<ColoredGraph> quotient_sequence(const GroupContext& ctx,
                                            std::span<const std::int64_t> moduli) {
  require(ctx.family() == GroupFamily::FreeAbelian, ErrorKind::PreconditionViolation,
          "quotient sequence is defined for free abelian groups");
  for (std::size_t i = 0; i + 1 < moduli.size(); ++i)
    require(moduli[i] < moduli[i + 1], ErrorKind::PreconditionViolation,
            "moduli must be strictly increasing");
  int d = ctx.coord_arity();
  std::vector<ColoredGraph> out;
  out.reserve(moduli.size());
  for (auto m : moduli) {
    require(m >= 2, ErrorKind::PreconditionViolation, "modulus must be >= 2");
    GroupContext q = GroupContext::finite_quotient(d, std::vector<std::int64_t>(d, m));
    auto all = folner_shape(q, 0);
    out.push_back(ColoredGraph::cayley_subgraph(q, all.elements));
  }
  return out;
}

std::vector<ColoredGraph> diagonal_sequence(int d,
                                            std::span<const std::vector<std::int64_t>> moduli,
                                            std::span<const std::int64_t> folner) {
  require(moduli.size() == folner.size(), ErrorKind::PreconditionViolation,
          "need one Folner radius per subgroup step");
  require(!moduli.empty(), ErrorKind::PreconditionViolation, "empty diagonal schedule");
  for (std::size_t j = 0; j < moduli.size(); ++j) {
    require(static_cast<int>(moduli[j].size()) == d, ErrorKind::PreconditionViolation,
            "each subgroup needs one modulus per coordinate");
    if (j + 1 < moduli.size()) {
      for (int i = 0; i < d; ++i) {
        std::int64_t a = moduli[j][i], b = moduli[j + 1][i];
        bool nested = (a == 0 && b == 0) || (a >= 1 && b == 0) || (a >= 1 && b >= 1 && b % a == 0);
        require(nested, ErrorKind::PreconditionViolation,
                "subgroup chain is not nested (moduli must divide)");
      }
    }
  }
  std::vector<ColoredGraph> out;
  for (std::size_t j = 0; j < moduli.size(); ++j) {
    bool infinite = std::any_of(moduli[j].begin(), moduli[j].end(),
                                [](std::int64_t m) { return m == 0; });
    require(infinite, ErrorKind::PreconditionViolation,
            "diagonal sequence needs infinite quotients (some modulus 0)");
    GroupContext q = GroupContext::finite_quotient(d, moduli[j]);
    auto F = folner_shape(q, folner[j]);
    out.push_back(ColoredGraph::cayley_subgraph(q, F.elements));
  }
  return out;
}

namespace {

GQ gq_pow(const GQ& z, std::int64_t e) {
  GQ acc(rat(1));
  GQ base = e >= 0 ? z : GQ(rat(1)) / z;
  std::uint64_t n = static_cast<std::uint64_t>(e >= 0 ? e : -e);
  while (n) {
    if (n & 1) acc *= base;
    base *= base;
    n >>= 1;
  }
  return acc;
}

std::int64_t symbol_rank_at(const GroupRingMatrix& A, const std::vector<GQ>& point) {
  int d = A.block_dim();
  SparseExactMatrix m(d, d);
  for (const auto& [g, blk] : A.support()) {
    GQ mono(rat(1));
    for (std::size_t i = 0; i < point.size(); ++i) mono *= gq_pow(point[i], g.coords[i]);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        const GQ& v = blk[static_cast<std::size_t>(i) * d + j];
        if (!v.is_zero()) m.add(i, j, v * mono);
      }
  }
  return exact_rank(m);
}

}  // namespace

Rat torus_oracle(const GroupRingMatrix& A, std::uint64_t seed) {
  const auto& ctx = A.context();
  require(ctx.family() == GroupFamily::FreeAbelian, ErrorKind::PreconditionViolation,
          "torus oracle works over Z^d only");
  int d = A.block_dim();
  if (A.is_zero()) return rat(d);
  int dim = ctx.coord_arity();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> num(1, 97);
  auto random_point = [&]() {
    std::vector<GQ> p;
    p.reserve(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) {
      Rat v = rat(num(rng), num(rng));
      if (num(rng) % 2 == 0) v = -v;
      p.push_back(GQ(v));
    }
    return p;
  };
  for (int round = 0; round < 3; ++round) {
    std::int64_t r0 = symbol_rank_at(A, random_point());
    std::int64_t r1 = symbol_rank_at(A, random_point());
    std::int64_t r2 = symbol_rank_at(A, random_point());
    if (r0 == r1 || r0 == r2) return rat(d) - rat(r0);
    if (r1 == r2) return rat(d) - rat(r1);
  }
  fail(ErrorKind::OracleInconclusive, "symbol rank disagreed at three points, three times");
}

int worker_count() {
  if (const char* env = std::getenv("VNDIM_WORKERS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

namespace {

GroupRingMatrix load_operator(const ExperimentSpec& spec) {
  if (!spec.operator_inline.empty()) {
    std::stringstream ss(spec.operator_inline);
    return GroupRingMatrix::load(ss);
  }
  require(!spec.operator_path.empty(), ErrorKind::PreconditionViolation,
          "experiment spec names no operator");
  std::ifstream f(spec.operator_path);
  require(f.good(), ErrorKind::IoError, "cannot open operator file " + spec.operator_path);
  return GroupRingMatrix::load(f);
}

}  // namespace

DimensionReport dimension_sequence(const ExperimentSpec& spec) {
  GroupContext ctx = GroupContext::parse(spec.group);
  GroupRingMatrix A = load_operator(spec);
  require(A.context() == ctx, ErrorKind::ContextMismatch,
          "operator group does not match experiment group");

  std::vector<ColoredGraph> graphs;
  switch (spec.kind) {
    case SequenceKind::Folner:
      graphs = folner_sequence(ctx, spec.schedule);
      break;
    case SequenceKind::Quotient:
      graphs = quotient_sequence(ctx, spec.schedule);
      break;
    case SequenceKind::Diagonal:
      graphs = diagonal_sequence(ctx.coord_arity(), spec.subgroups, spec.schedule);
      break;
  }

  DimensionReport report;
  report.spec = spec;
  report.steps.assign(graphs.size(), StepRecord{});

  std::atomic<std::size_t> next{0};
  auto run_step = [&](std::size_t i) {
    StepRecord& rec = report.steps[i];
    rec.n = spec.schedule[i];
    auto t0 = std::chrono::steady_clock::now();
    try {
      const ColoredGraph& B = graphs[i];
      rec.vertices = B.n_vertices();
      auto T = build_Tn(B, ctx, A);
      rec.dim_ker = kernel_dimension(T.matrix);
      rec.normalized = rat(rec.dim_ker, rec.vertices);
      if (spec.kind == SequenceKind::Diagonal) {
        // the compression route of the quotient operator on the same set
        GroupContext q = GroupContext::finite_quotient(ctx.coord_arity(), spec.subgroups[i]);
        std::vector<GroupElement> elems;
        elems.reserve(B.n_vertices());
        for (std::int64_t p = 0; p < B.n_vertices(); ++p) elems.push_back(B.label_at(p));
        GroupRingMatrix Aq(q, A.block_dim());
        for (const auto& [g, blk] : A.support()) {
          GroupElement h = g;
          for (int c = 0; c < q.coord_arity(); ++c) {
            std::int64_t m = q.moduli()[c];
            if (m != 0) {
              h.coords[c] %= m;
              if (h.coords[c] < 0) h.coords[c] += m;
            }
          }
          for (int bi = 0; bi < A.block_dim(); ++bi)
            for (int bj = 0; bj < A.block_dim(); ++bj) {
              GQ v = blk[static_cast<std::size_t>(bi) * A.block_dim() + bj];
              if (!v.is_zero()) Aq.set_entry(h, bi, bj, Aq.entry(h, bi, bj) + v);
            }
        }
        rec.dim_ker_compressed = kernel_dimension(compress(Aq, FolnerSet::of(q, elems)));
      }
    } catch (const std::exception& e) {
      rec.failed = true;
      rec.error = e.what();
    }
    rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  int workers = std::min<int>(worker_count(), static_cast<int>(graphs.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < graphs.size(); ++i) run_step(i);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&]() {
        for (;;) {
          std::size_t i = next.fetch_add(1);
          if (i >= graphs.size()) return;
          run_step(i);
        }
      });
    for (auto& t : pool) t.join();
  }

  if (ctx.family() == GroupFamily::FreeAbelian) {
    report.oracle = torus_oracle(A, spec.seed);
  } else {
    std::optional<Rat> lo, hi;
    for (std::size_t i = report.steps.size() / 2; i < report.steps.size(); ++i) {
      if (report.steps[i].failed) continue;
      const Rat& v = report.steps[i].normalized;
      if (!lo || v < *lo) lo = v;
      if (!hi || v > *hi) hi = v;
    }
    if (lo && hi) report.tail_gap = *hi - *lo;
  }
  return report;
}

std::string DimensionReport::to_csv() const {
  std::ostringstream os;
  os << "step,n,vertices,dim_ker,normalized,normalized_decimal,dim_ker_compressed,oracle,"
        "oracle_decimal\n";
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto& s = steps[i];
    os << i << "," << s.n << "," << s.vertices << ",";
    if (s.failed) {
      os << ",,,,,\n";
      continue;
    }
    os << s.dim_ker << "," << rat_str(s.normalized) << "," << rat_decimal(s.normalized) << ",";
    if (s.dim_ker_compressed) os << *s.dim_ker_compressed;
    os << ",";
    if (oracle) os << rat_str(*oracle) << "," << rat_decimal(*oracle);
    else os << ",";
    os << "\n";
  }
  return os.str();
}

std::string DimensionReport::to_json() const {
  nlohmann::json j;
  j["spec"] = nlohmann::json::parse(spec.to_json());
  j["steps"] = nlohmann::json::array();
  for (const auto& s : steps) {
    nlohmann::json js;
    js["n"] = s.n;
    js["vertices"] = s.vertices;
    if (s.failed) {
      js["error"] = s.error;
    } else {
      js["dim_ker"] = s.dim_ker;
      js["normalized"] = rat_str(s.normalized);
      js["normalized_decimal"] = rat_decimal(s.normalized);
      if (s.dim_ker_compressed) js["dim_ker_compressed"] = *s.dim_ker_compressed;
    }
    j["steps"].push_back(std::move(js));
  }
  if (oracle) {
    j["oracle"] = rat_str(*oracle);
    j["oracle_decimal"] = rat_decimal(*oracle);
  }
  if (tail_gap) {
    j["tail_gap"] = rat_str(*tail_gap);
    j["tail_gap_decimal"] = rat_decimal(*tail_gap);
  }
  return j.dump(2);
}

std::string DimensionReport::to_svg() const {
  // minimal polyline plot of normalized dimension against the schedule
  const int W = 640, H = 400, ML = 60, MR = 20, MT = 20, MB = 40;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\">\n";
  os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  std::vector<std::pair<double, double>> pts;
  double xmin = 1e300, xmax = -1e300, ymin = 0.0, ymax = 1e-9;
  for (const auto& s : steps) {
    if (s.failed) continue;
    double x = static_cast<double>(s.n);
    double y = s.normalized.get_d();
    pts.emplace_back(x, y);
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymax = std::max(ymax, y);
  }
  if (oracle) ymax = std::max(ymax, oracle->get_d());
  if (pts.empty()) {
    os << "<text x=\"20\" y=\"40\">no data</text>\n</svg>\n";
    return os.str();
  }
  if (xmax <= xmin) xmax = xmin + 1;
  ymax *= 1.1;
  auto px = [&](double x) { return ML + (x - xmin) / (xmax - xmin) * (W - ML - MR); };
  auto py = [&](double y) { return H - MB - (y - ymin) / (ymax - ymin) * (H - MT - MB); };
  char buf[128];
  os << "<line x1=\"" << ML << "\" y1=\"" << H - MB << "\" x2=\"" << W - MR << "\" y2=\""
     << H - MB << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << ML << "\" y1=\"" << MT << "\" x2=\"" << ML << "\" y2=\"" << H - MB
     << "\" stroke=\"black\"/>\n";
  if (oracle) {
    double oy = py(oracle->get_d());
    std::snprintf(buf, sizeof buf, "%.6f", oy);
    os << "<line x1=\"" << ML << "\" y1=\"" << buf << "\" x2=\"" << W - MR << "\" y2=\"" << buf
       << "\" stroke=\"red\" stroke-dasharray=\"4\"/>\n";
  }
  os << "<polyline fill=\"none\" stroke=\"blue\" points=\"";
  for (const auto& [x, y] : pts) {
    std::snprintf(buf, sizeof buf, "%.6f,%.6f ", px(x), py(y));
    os << buf;
  }
  os << "\"/>\n";
  for (const auto& [x, y] : pts) {
    std::snprintf(buf, sizeof buf, "<circle cx=\"%.6f\" cy=\"%.6f\" r=\"3\" fill=\"blue\"/>",
                  px(x), py(y));
    os << buf << "\n";
  }
  std::snprintf(buf, sizeof buf, "n = %.0f .. %.0f", xmin, xmax);
  os << "<text x=\"" << ML << "\" y=\"" << H - 10 << "\">" << buf << "</text>\n";
  std::snprintf(buf, sizeof buf, "%.6f", ymax);
  os << "<text x=\"5\" y=\"" << MT + 10 << "\">" << buf << "</text>\n";
  os << "<text x=\"5\" y=\"" << H - MB << "\">0</text>\n";
  os << "</svg>\n";
  return os.str();
}

BoundReport bound_check(const GroupContext& ctx, const GroupRingMatrix& A, const ColoredGraph& B,
                        const Tiling& tiling, const Rat& eps, const Rat& delta, const Rat& target,
                        std::uint64_t seed, std::int64_t trials) {
  auto verif = verify_tiling(B, tiling);
  require(verif.disjoint, ErrorKind::PreconditionViolation,
          "bound check needs a verified eps-disjoint tiling");
  require(verif.cover >= 1 - tiling.params.epsilon, ErrorKind::PreconditionViolation,
          "bound check needs a (1-eps)-covering tiling");

  BoundReport rep;
  rep.target = target;
  rep.cover = verif.cover;

  // property-check gate per shape: minus unnormalized (the paper-literal
  // comparison), plus normalized. A refuted shape aborts.
  for (std::size_t i = 0; i < tiling.shapes.size(); ++i) {
    auto minus = property_minus_check(A, tiling.shapes[i], eps, delta, target, trials,
                                      seed + i, /*normalized=*/false);
    auto plus = property_plus_check(A, tiling.shapes[i], delta, target, /*normalized=*/true);
    rep.shape_minus.push_back(minus.verdict);
    rep.shape_plus.push_back(plus.verdict);
    require(minus.verdict != Verdict::Refuted, ErrorKind::PreconditionViolation,
            "shape " + std::to_string(i) + " refutes the minus property");
    require(plus.verdict != Verdict::Refuted, ErrorKind::PreconditionViolation,
            "shape " + std::to_string(i) + " refutes the plus property");
  }

  rep.vertices = B.n_vertices();
  if (A.is_zero()) {
    rep.dim_ker = A.block_dim() * B.n_vertices();  // the zero operator kills everything
  } else {
    auto T = build_Tn(B, ctx, A);
    rep.dim_ker = kernel_dimension(T.matrix);
  }
  rep.normalized_dim = rat(rep.dim_ker, rep.vertices);

  // per-tile kernel dimensions: functions supported deep inside one tile and
  // killed by A, i.e. the W-space of the tile's shape; identical for tiles of
  // the same shape, so computed once per shape
  std::vector<std::int64_t> shape_w_dims(tiling.shapes.size());
  for (std::size_t i = 0; i < tiling.shapes.size(); ++i)
    shape_w_dims[i] = subspace_dims(A, tiling.shapes[i]).w;
  for (const auto& t : tiling.tiles) {
    rep.tile_mass += static_cast<std::int64_t>(t.vertices.size());
    rep.per_tile_dims.push_back(shape_w_dims[static_cast<std::size_t>(t.shape_index)]);
  }

  rep.lower.bound = (target - delta) * (1 - eps);
  rep.lower.holds = rep.normalized_dim >= rep.lower.bound;
  rep.upper.bound = (target + delta) / (1 - eps) + eps;
  rep.upper.holds = rep.normalized_dim <= rep.upper.bound;
  return rep;
}

}  // namespace vndim
