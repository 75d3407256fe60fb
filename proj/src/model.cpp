#include "mverse/model.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace mverse {

bool AmbientModel::world_contains(HfSet s) const {
  if (index_.empty() && !class_world.empty()) {
    for (HfSet c : class_world) index_.insert(c.id());
  }
  return index_.count(s.id()) > 0;
}

const Universe* AmbientModel::find_universe(const std::string& uname) const {
  for (const Universe& u : multiverse) {
    if (u.name == uname) return &u;
  }
  return nullptr;
}

HfSet AmbientModel::multiverse_set() const {
  std::vector<HfSet> carriers;
  carriers.reserve(multiverse.size());
  for (const Universe& u : multiverse) carriers.push_back(u.carrier_set());
  return canonical_set(carriers);
}

Structure AmbientModel::ambient_structure() const {
  Structure s;
  s.domain = class_world;
  s.constants["M"] = multiverse_set();
  for (const Universe& u : multiverse) {
    s.constants[u.name] = u.carrier_set();
    s.internal_rels[u.name] = u.membership;
  }
  return s;
}

std::vector<HfSet> world_closure(std::vector<HfSet> seeds, std::size_t rank_bound,
                                 std::size_t ceiling) {
  std::vector<HfSet> world;
  std::unordered_set<std::uint32_t> seen;
  auto add_closed = [&](HfSet s) {
    if (hf_rank(s) >= rank_bound) return;
    if (!seen.insert(s.id()).second) return;
    world.push_back(s);
    for (HfSet m : transitive_closure(s)) {
      if (seen.insert(m.id()).second) world.push_back(m);
    }
  };
  for (HfSet s : seeds) add_closed(s);
  const std::size_t base = world.size();
  for (std::size_t i = 0; i < base; ++i) {
    for (std::size_t j = 0; j < base; ++j) {
      add_closed(kuratowski_pair(world[i], world[j]));
      if (world.size() > ceiling) {
        throw GuardError("class world exceeds ceiling " + std::to_string(ceiling));
      }
    }
  }
  canonicalize(world);
  return world;
}

namespace {

AmbientModel finish_model(std::string name, std::vector<Universe> universes,
                          std::vector<HfSet> world, std::size_t rank_bound) {
  AmbientModel m;
  m.name = std::move(name);
  m.multiverse = std::move(universes);
  m.class_world = std::move(world);
  m.rank_bound = rank_bound;
  for (const Universe& u : m.multiverse) {
    for (HfSet x : u.carrier) {
      if (!m.world_contains(x)) {
        throw std::invalid_argument("universe " + u.name + " element " +
                                    to_string_sugared(x) + " missing from the class world");
      }
    }
  }
  return m;
}

std::vector<HfSet> default_world(const std::vector<Universe>& universes,
                                 std::size_t rank_bound) {
  std::vector<HfSet> seeds;
  for (const Universe& u : universes) {
    seeds.insert(seeds.end(), u.carrier.begin(), u.carrier.end());
    seeds.push_back(u.carrier_set());
  }
  return world_closure(std::move(seeds), rank_bound);
}

std::size_t default_rank_bound(const std::vector<Universe>& universes) {
  std::size_t max_rank = 0;
  for (const Universe& u : universes) {
    for (HfSet x : u.carrier) max_rank = std::max(max_rank, hf_rank(x));
  }
  return max_rank + 3;
}

}  // namespace

AmbientModel build_weak_model(std::size_t world_rank_bound) {
  const HfSet three = nat(3);
  std::vector<HfSet> carrier = {empty_set(), nat(1), nat(2), three,
                                canonical_set({three})};
  Universe v = make_standard_universe("V", std::move(carrier));
  std::vector<Universe> universes{std::move(v)};
  std::vector<HfSet> world = default_world(universes, world_rank_bound);
  return finish_model("weak", std::move(universes), std::move(world), world_rank_bound);
}

AmbientModel build_fragment_model(std::size_t k) {
  Universe u = build_rank_fragment(k);
  u.name = "F" + std::to_string(k);
  std::vector<HfSet> world = u.carrier;
  std::vector<Universe> universes{std::move(u)};
  return finish_model("frag" + std::to_string(k), std::move(universes), std::move(world), k);
}

AmbientModel build_singleton_model() {
  Universe u = make_standard_universe("S", {empty_set()});
  std::vector<Universe> universes{std::move(u)};
  const std::size_t bound = default_rank_bound(universes);
  std::vector<HfSet> world = default_world(universes, bound);
  return finish_model("singleton", std::move(universes), std::move(world), bound);
}

AmbientModel build_twins_model() {
  std::vector<Universe> universes{make_standard_universe("A", {empty_set()}),
                                  make_standard_universe("B", {empty_set()})};
  const std::size_t bound = default_rank_bound(universes);
  std::vector<HfSet> world = default_world(universes, bound);
  return finish_model("twins", std::move(universes), std::move(world), bound);
}

// ---------------------------------------------------------------------------
// Model files

namespace {

struct LineParser {
  std::string_view line;
  std::size_t pos = 0;
  std::size_t line_no;

  void skip_ws() {
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
  }
  bool at_end() {
    skip_ws();
    return pos >= line.size();
  }
  [[noreturn]] void fail(const std::string& what) {
    throw ParseError("line " + std::to_string(line_no) + ": " + what, pos);
  }
  bool try_word(std::string_view w) {
    skip_ws();
    if (line.substr(pos, w.size()) != w) return false;
    const std::size_t after = pos + w.size();
    if (after < line.size() &&
        (std::isalnum(static_cast<unsigned char>(line[after])) || line[after] == '_')) {
      return false;
    }
    pos = after;
    return true;
  }
  void expect_word(std::string_view w) {
    if (!try_word(w)) fail("expected '" + std::string(w) + "'");
  }
  void expect_char(char c) {
    skip_ws();
    if (pos >= line.size() || line[pos] != c) fail(std::string("expected '") + c + "'");
    ++pos;
  }
  bool try_char(char c) {
    skip_ws();
    if (pos < line.size() && line[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  std::string ident() {
    skip_ws();
    std::size_t end = pos;
    while (end < line.size() &&
           (std::isalnum(static_cast<unsigned char>(line[end])) || line[end] == '_')) {
      ++end;
    }
    if (end == pos) fail("expected identifier");
    std::string w(line.substr(pos, end - pos));
    pos = end;
    return w;
  }
  std::size_t number() {
    skip_ws();
    std::size_t end = pos, n = 0;
    while (end < line.size() && std::isdigit(static_cast<unsigned char>(line[end]))) {
      n = n * 10 + static_cast<std::size_t>(line[end] - '0');
      ++end;
    }
    if (end == pos) fail("expected number");
    pos = end;
    return n;
  }
  HfSet literal() {
    skip_ws();
    if (pos >= line.size()) fail("expected set literal");
    std::size_t end = pos;
    if (std::isdigit(static_cast<unsigned char>(line[end]))) {
      while (end < line.size() && std::isdigit(static_cast<unsigned char>(line[end]))) ++end;
    } else if (line[end] == '{') {
      std::size_t depth = 0;
      while (end < line.size()) {
        if (line[end] == '{') ++depth;
        if (line[end] == '}' && --depth == 0) {
          ++end;
          break;
        }
        ++end;
      }
      if (depth != 0) fail("unterminated set literal");
    } else {
      fail("expected set literal");
    }
    HfSet v;
    try {
      v = parse_hf(line.substr(pos, end - pos));
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what(), pos + e.offset());
    }
    pos = end;
    return v;
  }
};

}  // namespace

AmbientModel parse_model(std::string_view text, std::string name) {
  std::vector<Universe> universes;
  std::vector<std::string> multiverse_names;
  bool saw_multiverse = false;
  std::optional<std::size_t> world_rank;
  std::optional<std::size_t> world_fragment;

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t nl = text.find('\n', start);
    std::string_view line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos
                                                                            : nl - start);
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    LineParser p{line, 0, line_no};
    if (p.at_end()) continue;
    p.skip_ws();
    if (line[p.pos] == '#') continue;

    if (p.try_word("universe")) {
      std::string uname = p.ident();
      p.expect_char('=');
      if (p.try_word("fragment")) {
        const std::size_t k = p.number();
        Universe u = build_rank_fragment(k);
        u.name = uname;
        universes.push_back(std::move(u));
      } else {
        const HfSet carrier_lit = p.literal();
        std::vector<HfSet> carrier(hf_members(carrier_lit).begin(),
                                   hf_members(carrier_lit).end());
        if (p.try_word("membership")) {
          PairRel rel;
          p.expect_char('{');
          if (!p.try_char('}')) {
            while (true) {
              p.expect_char('(');
              const HfSet a = p.literal();
              p.expect_char(',');
              const HfSet b = p.literal();
              p.expect_char(')');
              rel.add(a, b);
              if (p.try_char(',')) continue;
              p.expect_char('}');
              break;
            }
          }
          universes.push_back(make_universe(uname, std::move(carrier), std::move(rel)));
        } else {
          universes.push_back(make_standard_universe(uname, std::move(carrier)));
        }
      }
      if (!p.at_end()) p.fail("trailing input after universe");
      continue;
    }

    if (p.try_word("multiverse")) {
      p.expect_char('=');
      p.expect_char('[');
      saw_multiverse = true;
      if (!p.try_char(']')) {
        while (true) {
          multiverse_names.push_back(p.ident());
          if (p.try_char(',')) continue;
          p.expect_char(']');
          break;
        }
      }
      if (!p.at_end()) p.fail("trailing input after multiverse");
      continue;
    }

    if (p.try_word("world")) {
      if (p.try_word("fragment")) {
        world_fragment = p.number();
      } else if (p.try_word("rank")) {
        world_rank = p.number();
      } else {
        p.fail("expected 'fragment' or 'rank'");
      }
      if (!p.at_end()) p.fail("trailing input after world");
      continue;
    }

    p.fail("expected 'universe', 'multiverse' or 'world'");
  }

  std::vector<Universe> selected;
  if (saw_multiverse) {
    for (const std::string& n : multiverse_names) {
      auto it = std::find_if(universes.begin(), universes.end(),
                             [&n](const Universe& u) { return u.name == n; });
      if (it == universes.end()) {
        throw ParseError("multiverse references unknown universe '" + n + "'", 0);
      }
      selected.push_back(*it);
    }
  } else {
    selected = universes;
  }

  std::size_t bound;
  std::vector<HfSet> world;
  if (world_fragment) {
    bound = *world_fragment;
    world = build_rank_fragment(*world_fragment).carrier;
  } else {
    bound = world_rank ? *world_rank : default_rank_bound(selected);
    world = default_world(selected, bound);
  }
  return finish_model(std::move(name), std::move(selected), std::move(world), bound);
}

AmbientModel load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read model file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  std::string base = path;
  if (const auto slash = base.find_last_of('/'); slash != std::string::npos) {
    base = base.substr(slash + 1);
  }
  if (const auto dot = base.find_last_of('.'); dot != std::string::npos) {
    base = base.substr(0, dot);
  }
  return parse_model(ss.str(), base);
}

std::vector<std::string> builtin_model_names() {
  return {"weak", "singleton", "twins", "frag2", "frag3", "frag4", "frag5"};
}

AmbientModel resolve_model(const std::string& name_or_path) {
  if (name_or_path == "weak") return build_weak_model();
  if (name_or_path == "singleton") return build_singleton_model();
  if (name_or_path == "twins") return build_twins_model();
  if (name_or_path.rfind("frag", 0) == 0 && name_or_path.size() == 5 &&
      std::isdigit(static_cast<unsigned char>(name_or_path[4]))) {
    return build_fragment_model(static_cast<std::size_t>(name_or_path[4] - '0'));
  }
  return load_model_file(name_or_path);
}

}  // namespace mverse
