#include "vndim/group.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace vndim {

namespace {

std::int64_t parse_int(const std::string& s, const std::string& what) {
  if (s.empty()) fail(ErrorKind::ParseError, "empty " + what);
  std::size_t pos = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (...) {
    fail(ErrorKind::ParseError, "bad " + what + " '" + s + "'");
  }
  if (pos != s.size()) fail(ErrorKind::ParseError, "bad " + what + " '" + s + "'");
  return v;
}

}  // namespace

GroupContext GroupContext::free_abelian(int d) {
  require(d >= 1, ErrorKind::PreconditionViolation, "free abelian rank must be >= 1");
  GroupContext ctx;
  ctx.family_ = GroupFamily::FreeAbelian;
  ctx.arity_ = d;
  ctx.build_generators();
  return ctx;
}

GroupContext GroupContext::finite_quotient(int d, std::vector<std::int64_t> moduli) {
  require(d >= 1, ErrorKind::PreconditionViolation, "quotient rank must be >= 1");
  require(static_cast<int>(moduli.size()) == d, ErrorKind::PreconditionViolation,
          "need one modulus per coordinate");
  for (auto m : moduli)
    require(m >= 0, ErrorKind::PreconditionViolation, "moduli must be >= 0 (0 = infinite)");
  GroupContext ctx;
  ctx.family_ = GroupFamily::FiniteQuotient;
  ctx.arity_ = d;
  ctx.moduli_ = std::move(moduli);
  ctx.build_generators();
  return ctx;
}

GroupContext GroupContext::heisenberg() {
  GroupContext ctx;
  ctx.family_ = GroupFamily::Heisenberg;
  ctx.arity_ = 3;
  ctx.build_generators();
  return ctx;
}

GroupContext GroupContext::heisenberg_quotient(std::int64_t q) {
  require(q >= 1, ErrorKind::PreconditionViolation, "Heisenberg quotient modulus must be >= 1");
  GroupContext ctx;
  ctx.family_ = GroupFamily::HeisenbergQuotient;
  ctx.arity_ = 3;
  ctx.moduli_ = {q, q, q};
  ctx.build_generators();
  return ctx;
}

void GroupContext::build_generators() {
  generators_.clear();
  inverse_index_.clear();
  auto push_pair = [&](GroupElement a, GroupElement b) {
    int i = static_cast<int>(generators_.size());
    generators_.push_back(std::move(a));
    generators_.push_back(std::move(b));
    inverse_index_.push_back(i + 1);
    inverse_index_.push_back(i);
  };
  switch (family_) {
    case GroupFamily::FreeAbelian:
    case GroupFamily::FiniteQuotient: {
      for (int i = 0; i < arity_; ++i) {
        if (family_ == GroupFamily::FiniteQuotient && moduli_[i] == 1) continue;  // e_i is trivial
        GroupElement plus{std::vector<std::int64_t>(arity_, 0)};
        plus.coords[i] = 1;
        push_pair(plus, inverse(plus));
      }
      break;
    }
    case GroupFamily::Heisenberg:
    case GroupFamily::HeisenbergQuotient: {
      if (family_ == GroupFamily::HeisenbergQuotient && moduli_[0] == 1) break;  // trivial group
      GroupElement x{{1, 0, 0}};
      GroupElement y{{0, 1, 0}};
      push_pair(x, inverse(x));
      push_pair(y, inverse(y));
      break;
    }
  }
}

GroupContext GroupContext::parse(const std::string& spec) {
  std::string s = spec;
  s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == ' '; }), s.end());
  if (s.empty()) fail(ErrorKind::ParseError, "empty group spec");
  if (s == "H3") return heisenberg();
  if (s.rfind("H3/", 0) == 0) return heisenberg_quotient(parse_int(s.substr(3), "H3 modulus"));
  if (s[0] != 'Z') fail(ErrorKind::ParseError, "unknown group spec '" + spec + "'");
  std::string rest = s.substr(1);
  int d = 1;
  if (rest.rfind("^", 0) == 0) {
    std::size_t slash = rest.find('/');
    std::string dpart = slash == std::string::npos ? rest.substr(1) : rest.substr(1, slash - 1);
    d = static_cast<int>(parse_int(dpart, "rank"));
    rest = slash == std::string::npos ? "" : rest.substr(slash);
  }
  if (rest.empty()) return free_abelian(d);
  if (rest[0] != '/') fail(ErrorKind::ParseError, "unknown group spec '" + spec + "'");
  std::string mods = rest.substr(1);
  if (!mods.empty() && mods.front() == '(') {
    if (mods.back() != ')') fail(ErrorKind::ParseError, "unbalanced moduli in '" + spec + "'");
    mods = mods.substr(1, mods.size() - 2);
  }
  std::vector<std::int64_t> moduli;
  std::stringstream ss(mods);
  std::string tok;
  while (std::getline(ss, tok, ',')) moduli.push_back(parse_int(tok, "modulus"));
  require(static_cast<int>(moduli.size()) == d, ErrorKind::ParseError,
          "expected " + std::to_string(d) + " moduli in '" + spec + "'");
  return finite_quotient(d, std::move(moduli));
}

std::string GroupContext::spec_string() const {
  switch (family_) {
    case GroupFamily::FreeAbelian:
      return arity_ == 1 ? "Z" : "Z^" + std::to_string(arity_);
    case GroupFamily::FiniteQuotient: {
      std::string s = arity_ == 1 ? "Z" : "Z^" + std::to_string(arity_);
      s += "/(";
      for (int i = 0; i < arity_; ++i) {
        if (i) s += ",";
        s += std::to_string(moduli_[i]);
      }
      return s + ")";
    }
    case GroupFamily::Heisenberg:
      return "H3";
    case GroupFamily::HeisenbergQuotient:
      return "H3/" + std::to_string(moduli_[0]);
  }
  return "?";
}

bool GroupContext::is_finite() const {
  switch (family_) {
    case GroupFamily::FreeAbelian:
    case GroupFamily::Heisenberg:
      return false;
    case GroupFamily::HeisenbergQuotient:
      return true;
    case GroupFamily::FiniteQuotient:
      return std::all_of(moduli_.begin(), moduli_.end(), [](std::int64_t m) { return m >= 1; });
  }
  return false;
}

std::int64_t GroupContext::reduce_coord(std::int64_t v, std::int64_t m) const {
  if (m == 0) return v;
  std::int64_t r = v % m;
  return r < 0 ? r + m : r;
}

GroupElement GroupContext::identity() const {
  return GroupElement{std::vector<std::int64_t>(arity_, 0)};
}

bool GroupContext::is_identity(const GroupElement& g) const {
  return std::all_of(g.coords.begin(), g.coords.end(), [](std::int64_t c) { return c == 0; });
}

void GroupContext::check_element(const GroupElement& g) const {
  if (static_cast<int>(g.coords.size()) != arity_)
    fail(ErrorKind::ContextMismatch, "element arity " + std::to_string(g.coords.size()) +
                                         " does not match group " + spec_string());
  if (!moduli_.empty()) {
    for (int i = 0; i < arity_; ++i) {
      if (moduli_[i] != 0 && (g.coords[i] < 0 || g.coords[i] >= moduli_[i]))
        fail(ErrorKind::ContextMismatch,
             "coordinate " + std::to_string(g.coords[i]) + " out of range for " + spec_string());
    }
  }
}

GroupElement GroupContext::compose(const GroupElement& g, const GroupElement& h) const {
  check_element(g);
  check_element(h);
  GroupElement r{std::vector<std::int64_t>(arity_)};
  switch (family_) {
    case GroupFamily::FreeAbelian:
      for (int i = 0; i < arity_; ++i) r.coords[i] = g.coords[i] + h.coords[i];
      break;
    case GroupFamily::FiniteQuotient:
      for (int i = 0; i < arity_; ++i)
        r.coords[i] = reduce_coord(g.coords[i] + h.coords[i], moduli_[i]);
      break;
    case GroupFamily::Heisenberg:
      r.coords[0] = g.coords[0] + h.coords[0];
      r.coords[1] = g.coords[1] + h.coords[1];
      r.coords[2] = g.coords[2] + h.coords[2] + g.coords[0] * h.coords[1];
      break;
    case GroupFamily::HeisenbergQuotient: {
      std::int64_t q = moduli_[0];
      r.coords[0] = reduce_coord(g.coords[0] + h.coords[0], q);
      r.coords[1] = reduce_coord(g.coords[1] + h.coords[1], q);
      r.coords[2] = reduce_coord(g.coords[2] + h.coords[2] + g.coords[0] * h.coords[1], q);
      break;
    }
  }
  return r;
}

GroupElement GroupContext::inverse(const GroupElement& g) const {
  check_element(g);
  GroupElement r{std::vector<std::int64_t>(arity_)};
  switch (family_) {
    case GroupFamily::FreeAbelian:
      for (int i = 0; i < arity_; ++i) r.coords[i] = -g.coords[i];
      break;
    case GroupFamily::FiniteQuotient:
      for (int i = 0; i < arity_; ++i) r.coords[i] = reduce_coord(-g.coords[i], moduli_[i]);
      break;
    case GroupFamily::Heisenberg:
      r.coords[0] = -g.coords[0];
      r.coords[1] = -g.coords[1];
      r.coords[2] = g.coords[0] * g.coords[1] - g.coords[2];
      break;
    case GroupFamily::HeisenbergQuotient: {
      std::int64_t q = moduli_[0];
      r.coords[0] = reduce_coord(-g.coords[0], q);
      r.coords[1] = reduce_coord(-g.coords[1], q);
      r.coords[2] = reduce_coord(g.coords[0] * g.coords[1] - g.coords[2], q);
      break;
    }
  }
  return r;
}

GroupElement GroupContext::apply_generator(int gen, const GroupElement& g) const {
  return compose(generators_[gen], g);
}

std::int64_t GroupContext::word_length(const GroupElement& g) const {
  check_element(g);
  switch (family_) {
    case GroupFamily::FreeAbelian: {
      std::int64_t w = 0;
      for (auto c : g.coords) w += std::llabs(c);
      return w;
    }
    case GroupFamily::FiniteQuotient: {
      std::int64_t w = 0;
      for (int i = 0; i < arity_; ++i) {
        std::int64_t m = moduli_[i];
        std::int64_t c = g.coords[i];
        if (m == 0)
          w += std::llabs(c);
        else if (m > 1)
          w += std::min(c, m - c);
        // m == 1: coordinate is trivial
      }
      return w;
    }
    default:
      break;
  }
  // BFS over generator multiplication, capped.
  if (is_identity(g)) return 0;
  std::unordered_set<GroupElement, GroupElementHash> seen;
  std::vector<GroupElement> frontier{identity()};
  seen.insert(identity());
  for (std::int64_t depth = 1; depth <= word_length_cap_; ++depth) {
    std::vector<GroupElement> next;
    for (const auto& e : frontier) {
      for (int s = 0; s < n_generators(); ++s) {
        GroupElement f = apply_generator(s, e);
        if (seen.insert(f).second) {
          if (f == g) return depth;
          next.push_back(std::move(f));
        }
      }
    }
    if (next.empty()) fail(ErrorKind::ContextMismatch, "element unreachable from generators");
    frontier = std::move(next);
  }
  fail(ErrorKind::CapExceeded,
       "word length exceeds cap " + std::to_string(word_length_cap_) + " in " + spec_string());
}

std::vector<std::vector<GroupElement>> GroupContext::ball_layers(std::int64_t k) const {
  require(k >= 0, ErrorKind::PreconditionViolation, "ball radius must be >= 0");
  std::vector<std::vector<GroupElement>> layers;
  std::unordered_set<GroupElement, GroupElementHash> seen;
  layers.push_back({identity()});
  seen.insert(identity());
  for (std::int64_t depth = 1; depth <= k; ++depth) {
    std::vector<GroupElement> next;
    for (const auto& e : layers.back()) {
      for (int s = 0; s < n_generators(); ++s) {
        GroupElement f = apply_generator(s, e);
        if (seen.insert(f).second) next.push_back(std::move(f));
      }
    }
    if (next.empty()) break;  // finite group exhausted
    std::sort(next.begin(), next.end());
    layers.push_back(std::move(next));
  }
  return layers;
}

std::vector<GroupElement> GroupContext::ball_elements(std::int64_t k) const {
  std::vector<GroupElement> out;
  for (auto& layer : ball_layers(k))
    for (auto& e : layer) out.push_back(std::move(e));
  return out;
}

std::string GroupContext::format_element(const GroupElement& g) const {
  std::string s;
  for (std::size_t i = 0; i < g.coords.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(g.coords[i]);
  }
  return s;
}

GroupElement GroupContext::parse_element(const std::string& s) const {
  GroupElement g;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) g.coords.push_back(parse_int(tok, "coordinate"));
  check_element(g);
  return g;
}

}  // namespace vndim
