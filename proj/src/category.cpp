#include "mverse/category.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <sstream>

namespace mverse {

std::size_t FinCategory::add_object(std::string oname, std::optional<HfSet> value) {
  object_names.push_back(std::move(oname));
  object_values.push_back(value);
  identity.push_back(std::nullopt);
  return object_names.size() - 1;
}

std::size_t FinCategory::add_arrow(std::string aname, std::size_t dom, std::size_t cod,
                                   std::optional<HfSet> graph) {
  arrows.push_back(Arrow{std::move(aname), dom, cod, graph});
  return arrows.size() - 1;
}

std::optional<std::size_t> FinCategory::composite(std::size_t f, std::size_t g) const {
  auto it = compose.find({f, g});
  if (it == compose.end()) return std::nullopt;
  return it->second;
}

std::vector<std::size_t> FinCategory::hom(std::size_t x, std::size_t y) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < arrows.size(); ++i) {
    if (arrows[i].dom == x && arrows[i].cod == y) out.push_back(i);
  }
  return out;
}

std::optional<std::size_t> FinCategory::object_index(const std::string& oname) const {
  for (std::size_t i = 0; i < object_names.size(); ++i) {
    if (object_names[i] == oname) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> FinCategory::arrow_index(const std::string& aname) const {
  for (std::size_t i = 0; i < arrows.size(); ++i) {
    if (arrows[i].name == aname) return i;
  }
  return std::nullopt;
}

LawReport check_category_laws(const FinCategory& c) {
  LawReport r;
  for (std::size_t x = 0; x < c.object_names.size(); ++x) {
    const auto id = c.identity[x];
    if (!id || c.arrows[*id].dom != x || c.arrows[*id].cod != x) {
      r.missing_identities.push_back(x);
      continue;
    }
    // unit laws against every composable arrow
    for (std::size_t f = 0; f < c.arrows.size(); ++f) {
      if (c.arrows[f].dom == x) {
        if (auto h = c.composite(f, *id); h && *h != f) {
          r.identity_violations.push_back({*id, f, *h});
        }
      }
      if (c.arrows[f].cod == x) {
        if (auto h = c.composite(*id, f); h && *h != f) {
          r.identity_violations.push_back({*id, f, *h});
        }
      }
    }
  }

  for (std::size_t f = 0; f < c.arrows.size(); ++f) {
    for (std::size_t g = 0; g < c.arrows.size(); ++g) {
      if (c.arrows[g].cod != c.arrows[f].dom) continue;
      const auto h = c.composite(f, g);
      if (!h) {
        r.non_closed_compositions.push_back({f, g});
        continue;
      }
      if (c.arrows[*h].dom != c.arrows[g].dom || c.arrows[*h].cod != c.arrows[f].cod) {
        r.non_closed_compositions.push_back({f, g});
      }
    }
  }

  for (std::size_t f = 0; f < c.arrows.size(); ++f) {
    for (std::size_t g = 0; g < c.arrows.size(); ++g) {
      if (c.arrows[g].cod != c.arrows[f].dom) continue;
      const auto fg = c.composite(f, g);
      if (!fg) continue;
      for (std::size_t h = 0; h < c.arrows.size(); ++h) {
        if (c.arrows[h].cod != c.arrows[g].dom) continue;
        const auto gh = c.composite(g, h);
        if (!gh) continue;
        const auto lhs = c.composite(*fg, h);
        const auto rhs = c.composite(f, *gh);
        if (lhs && rhs && *lhs != *rhs) {
          r.associativity_violations.push_back({f, g, h});
        }
      }
    }
  }
  return r;
}

std::string law_report_text(const FinCategory& c, const LawReport& r) {
  std::ostringstream out;
  out << c.name << ": " << c.object_names.size() << " objects, " << c.arrows.size()
      << " arrows, verdict " << r.verdict() << "\n";
  if (!r.missing_identities.empty()) {
    out << "  missing identities:";
    for (std::size_t x : r.missing_identities) out << " " << c.object_names[x];
    out << "\n";
  }
  if (!r.non_closed_compositions.empty()) {
    out << "  non-closed compositions: " << r.non_closed_compositions.size() << "\n";
  }
  for (const auto& v : r.identity_violations) {
    out << "  identity violation: " << c.arrows[v[0]].name << " with " << c.arrows[v[1]].name
        << " gives " << c.arrows[v[2]].name << "\n";
  }
  for (const auto& v : r.associativity_violations) {
    out << "  associativity violation: (" << c.arrows[v[0]].name << ", " << c.arrows[v[1]].name
        << ", " << c.arrows[v[2]].name << ")\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Category files

FinCategory parse_category(std::string_view text, std::string name) {
  FinCategory c;
  c.name = std::move(name);
  std::size_t line_no = 0;
  std::size_t start = 0;

  auto fail = [&line_no](const std::string& what) -> void {
    throw ParseError("line " + std::to_string(line_no) + ": " + what, 0);
  };

  while (start <= text.size()) {
    const std::size_t nl = text.find('\n', start);
    std::string line(text.substr(start, nl == std::string_view::npos ? std::string_view::npos
                                                                     : nl - start));
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    std::istringstream in(line);
    std::string word;
    if (!(in >> word) || word[0] == '#') continue;

    if (word == "objects:") {
      std::string oname;
      while (in >> oname) c.add_object(oname);
      continue;
    }
    if (word == "arrow") {
      std::string aname, colon, dom, arrow_sym, cod;
      if (!(in >> aname >> colon >> dom >> arrow_sym >> cod) || colon != ":" ||
          arrow_sym != "->") {
        fail("expected 'arrow <name> : <dom> -> <cod>'");
      }
      const auto d = c.object_index(dom), k = c.object_index(cod);
      if (!d) fail("unknown object '" + dom + "'");
      if (!k) fail("unknown object '" + cod + "'");
      c.add_arrow(aname, *d, *k);
      continue;
    }
    if (word == "identity") {
      std::string oname, eq, aname;
      if (!(in >> oname >> eq >> aname) || eq != "=") fail("expected 'identity <obj> = <arrow>'");
      const auto x = c.object_index(oname);
      const auto f = c.arrow_index(aname);
      if (!x) fail("unknown object '" + oname + "'");
      if (!f) fail("unknown arrow '" + aname + "'");
      c.identity[*x] = *f;
      continue;
    }
    if (word == "compose") {
      std::string fname, gname, eq, hname;
      if (!(in >> fname >> gname >> eq >> hname) || eq != "=") {
        fail("expected 'compose <f> <g> = <h>'");
      }
      const auto f = c.arrow_index(fname), g = c.arrow_index(gname), h = c.arrow_index(hname);
      if (!f) fail("unknown arrow '" + fname + "'");
      if (!g) fail("unknown arrow '" + gname + "'");
      if (!h) fail("unknown arrow '" + hname + "'");
      c.compose[{*f, *g}] = *h;
      continue;
    }
    fail("expected 'objects:', 'arrow', 'identity' or 'compose'");
  }
  return c;
}

FinCategory load_category_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read category file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  std::string base = path;
  if (const auto slash = base.find_last_of('/'); slash != std::string::npos) {
    base = base.substr(slash + 1);
  }
  if (const auto dot = base.find_last_of('.'); dot != std::string::npos) {
    base = base.substr(0, dot);
  }
  return parse_category(ss.str(), base);
}

std::string category_to_text(const FinCategory& c) {
  std::ostringstream out;
  out << "objects:";
  for (const std::string& o : c.object_names) out << " " << o;
  out << "\n";
  for (const auto& a : c.arrows) {
    out << "arrow " << a.name << " : " << c.object_names[a.dom] << " -> "
        << c.object_names[a.cod] << "\n";
  }
  for (std::size_t x = 0; x < c.object_names.size(); ++x) {
    if (c.identity[x]) {
      out << "identity " << c.object_names[x] << " = " << c.arrows[*c.identity[x]].name << "\n";
    }
  }
  for (const auto& [fg, h] : c.compose) {
    out << "compose " << c.arrows[fg.first].name << " " << c.arrows[fg.second].name << " = "
        << c.arrows[h].name << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Stock categories

FinCategory terminal_category() {
  FinCategory c;
  c.name = "terminal";
  const std::size_t x = c.add_object("*");
  const std::size_t id = c.add_arrow("id", x, x);
  c.identity[x] = id;
  c.compose[{id, id}] = id;
  return c;
}

FinCategory discrete_category(std::size_t n) {
  FinCategory c;
  c.name = "discrete" + std::to_string(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t x = c.add_object("o" + std::to_string(i));
    const std::size_t id = c.add_arrow("id" + std::to_string(i), x, x);
    c.identity[x] = id;
    c.compose[{id, id}] = id;
  }
  return c;
}

FinCategory arrow_category() {
  FinCategory c;
  c.name = "arrow";
  const std::size_t a = c.add_object("a");
  const std::size_t b = c.add_object("b");
  const std::size_t ida = c.add_arrow("id_a", a, a);
  const std::size_t idb = c.add_arrow("id_b", b, b);
  const std::size_t m = c.add_arrow("m", a, b);
  c.identity[a] = ida;
  c.identity[b] = idb;
  c.compose[{ida, ida}] = ida;
  c.compose[{idb, idb}] = idb;
  c.compose[{m, ida}] = m;
  c.compose[{idb, m}] = m;
  return c;
}

}  // namespace mverse
