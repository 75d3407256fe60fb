#include "mverse/setcat.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <unordered_set>

namespace mverse {

namespace {

// Decoded graph of an HF set: the ordered pairs it consists of, or nothing
// when some member is not pair-shaped or a first coordinate repeats.
struct DecodedGraph {
  std::vector<std::pair<HfSet, HfSet>> pairs;  // sorted by first coordinate
};

std::optional<DecodedGraph> decode_graph(HfSet f) {
  DecodedGraph g;
  for (HfSet p : hf_members(f)) {
    const auto pair = decode_pair(p);
    if (!pair) return std::nullopt;
    g.pairs.push_back(*pair);
  }
  std::sort(g.pairs.begin(), g.pairs.end(),
            [](const auto& a, const auto& b) { return hf_less(a.first, b.first); });
  for (std::size_t i = 1; i < g.pairs.size(); ++i) {
    if (g.pairs[i].first == g.pairs[i - 1].first) return std::nullopt;  // not functional
  }
  return g;
}

bool graph_is_function(const DecodedGraph& g, HfSet x, HfSet y) {
  auto xs = hf_members(x);
  if (g.pairs.size() != xs.size()) return false;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (g.pairs[i].first != xs[i]) return false;  // both sorted canonically
    if (!hf_contains(y, g.pairs[i].second)) return false;
  }
  return true;
}

void require_standard(const Universe& u, const char* what) {
  const UniverseProperties p = universe_properties(u);
  if (!p.standard) {
    throw GuardError(std::string(what) + " supports only standard universes (got " + u.name +
                     ")");
  }
}

}  // namespace

std::vector<HfSet> internal_functions(const Universe& u, HfSet x, HfSet y) {
  require_standard(u, "internal_functions");
  std::vector<HfSet> out;
  for (HfSet f : u.carrier) {
    const auto g = decode_graph(f);
    if (g && graph_is_function(*g, x, y)) out.push_back(f);
  }
  return out;
}

std::pair<FinCategory, LawReport> build_set_category(const Universe& u,
                                                     const SetCategoryOptions& opts) {
  require_standard(u, "build_set_category");

  std::vector<HfSet> objects = u.carrier;
  if (objects.size() > opts.object_guard) {
    if (!opts.sample) {
      throw GuardError("Set_" + u.name + " has " + std::to_string(objects.size()) +
                       " objects; pass a sample size to build a slice");
    }
    std::mt19937_64 rng(opts.seed);
    std::shuffle(objects.begin(), objects.end(), rng);
    objects.resize(std::min(*opts.sample, objects.size()));
    canonicalize(objects);
  }

  FinCategory c;
  c.name = "Set_" + u.name;
  std::map<std::uint32_t, std::size_t> obj_index;
  for (HfSet x : objects) {
    obj_index[x.id()] = c.add_object(to_string_sugared(x), x);
  }

  // Decode every carrier element once; an arrow is (graph, dom, cod) with
  // cod ranging over every object whose members cover the values.
  struct Candidate {
    HfSet f;
    HfSet domain_set;
    std::vector<HfSet> values;
  };
  std::vector<Candidate> candidates;
  for (HfSet f : u.carrier) {
    const auto g = decode_graph(f);
    if (!g) continue;
    Candidate cand;
    cand.f = f;
    std::vector<HfSet> keys;
    for (const auto& [a, b] : g->pairs) {
      keys.push_back(a);
      cand.values.push_back(b);
    }
    cand.domain_set = canonical_set(keys);
    candidates.push_back(std::move(cand));
  }

  std::map<std::pair<std::uint32_t, std::pair<std::size_t, std::size_t>>, std::size_t>
      arrow_index;  // (graph id, (dom, cod)) -> arrow
  for (const Candidate& cand : candidates) {
    const auto dit = obj_index.find(cand.domain_set.id());
    if (dit == obj_index.end()) continue;
    for (std::size_t y = 0; y < c.object_names.size(); ++y) {
      const HfSet yv = *c.object_values[y];
      bool ok = true;
      for (HfSet v : cand.values) {
        if (!hf_contains(yv, v)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      const std::size_t idx =
          c.add_arrow(to_string_sugared(cand.f) + ":" + c.object_names[dit->second] + "->" +
                          c.object_names[y],
                      dit->second, y, cand.f);
      arrow_index[{cand.f.id(), {dit->second, y}}] = idx;
    }
  }

  // Identities: present iff the diagonal graph is a carrier element.
  for (std::size_t x = 0; x < c.object_names.size(); ++x) {
    std::vector<HfSet> diag;
    for (HfSet a : hf_members(*c.object_values[x])) diag.push_back(kuratowski_pair(a, a));
    const HfSet graph = canonical_set(diag);
    const auto it = arrow_index.find({graph.id(), {x, x}});
    if (it != arrow_index.end()) c.identity[x] = it->second;
  }

  // Composites: defined when the relational composite's graph is a carrier
  // element (it is then automatically an arrow of the right hom).
  for (std::size_t f = 0; f < c.arrows.size(); ++f) {
    for (std::size_t g = 0; g < c.arrows.size(); ++g) {
      if (c.arrows[g].cod != c.arrows[f].dom) continue;
      const auto gf = decode_graph(*c.arrows[g].graph);
      const auto ff = decode_graph(*c.arrows[f].graph);
      std::vector<HfSet> comp;
      for (const auto& [a, b] : gf->pairs) {
        for (const auto& [b2, d] : ff->pairs) {
          if (b2 == b) comp.push_back(kuratowski_pair(a, d));
        }
      }
      const HfSet graph = canonical_set(comp);
      const auto it = arrow_index.find({graph.id(), {c.arrows[g].dom, c.arrows[f].cod}});
      if (it != arrow_index.end()) c.compose[{f, g}] = it->second;
    }
  }

  LawReport laws = check_category_laws(c);
  return {std::move(c), std::move(laws)};
}

// ---------------------------------------------------------------------------
// V-categories

std::string vsize_name(VSize s) {
  switch (s) {
    case VSize::VSmall: return "V-small";
    case VSize::VLocallySmall: return "V-locally-small";
    case VSize::VLarge: return "V-large";
  }
  return "?";
}

namespace {

// Decode a map component as an entire functional graph from `domain` into
// `codomain`; throws MalformedError on structural problems.
std::map<std::uint32_t, HfSet> decode_map(const char* what, HfSet graph,
                                          const std::vector<HfSet>& domain,
                                          const std::vector<HfSet>& codomain) {
  std::map<std::uint32_t, HfSet> out;
  std::unordered_set<std::uint32_t> dom_ids, cod_ids;
  for (HfSet d : domain) dom_ids.insert(d.id());
  for (HfSet c : codomain) cod_ids.insert(c.id());
  for (HfSet p : hf_members(graph)) {
    const auto pair = decode_pair(p);
    if (!pair) throw MalformedError(std::string(what) + " is not a set of ordered pairs");
    if (!dom_ids.count(pair->first.id())) {
      throw MalformedError(std::string(what) + " maps outside its domain");
    }
    if (!cod_ids.count(pair->second.id())) {
      throw MalformedError(std::string(what) + " maps outside its codomain");
    }
    if (!out.emplace(pair->first.id(), pair->second).second) {
      throw MalformedError(std::string(what) + " not functional");
    }
  }
  if (out.size() != domain.size()) {
    throw MalformedError(std::string(what) + " not entire");
  }
  return out;
}

}  // namespace

VCategoryReport check_v_category(const Universe& u, const VCategoryData& data) {
  require_standard(u, "check_v_category");
  VCategoryReport report;

  // Ob and Hom are V-classes: every member a carrier element.
  for (auto [component, label] :
       {std::make_pair(data.objects, "Ob"), std::make_pair(data.homs, "Hom")}) {
    for (HfSet m : hf_members(component)) {
      if (!u.contains(m)) {
        report.diagnostic = std::string(label) + "'s member " + to_string_sugared(m) +
                            " is not a carrier element";
        return report;
      }
    }
  }
  // The four maps are V-functions, so V-sets.
  for (auto [component, label] :
       {std::make_pair(data.dom, "dom"), std::make_pair(data.cod, "cod"),
        std::make_pair(data.id, "id"), std::make_pair(data.comp, "comp")}) {
    if (!u.contains(component)) {
      report.diagnostic = std::string(label) + "'s graph is not a carrier element";
      return report;
    }
  }

  const std::vector<HfSet> objects(hf_members(data.objects).begin(),
                                   hf_members(data.objects).end());
  const std::vector<HfSet> homs(hf_members(data.homs).begin(), hf_members(data.homs).end());

  const auto dom = decode_map("dom", data.dom, homs, objects);
  const auto cod = decode_map("cod", data.cod, homs, objects);
  const auto id = decode_map("id", data.id, objects, homs);

  // Composable pairs, Kuratowski-encoded: (f, g) with dom(f) = cod(g).
  std::vector<HfSet> composable;
  for (HfSet f : homs) {
    for (HfSet g : homs) {
      if (dom.at(f.id()) == cod.at(g.id())) composable.push_back(kuratowski_pair(f, g));
    }
  }
  canonicalize(composable);
  const auto comp = decode_map("comp", data.comp, composable, homs);

  // Assemble and law-check the decoded category.
  FinCategory c;
  c.name = "C_" + u.name;
  std::map<std::uint32_t, std::size_t> obj_index, hom_index;
  for (HfSet o : objects) obj_index[o.id()] = c.add_object(to_string_sugared(o), o);
  for (HfSet h : homs) {
    hom_index[h.id()] = c.add_arrow(to_string_sugared(h), obj_index.at(dom.at(h.id()).id()),
                                    obj_index.at(cod.at(h.id()).id()), h);
  }
  for (HfSet o : objects) c.identity[obj_index.at(o.id())] = hom_index.at(id.at(o.id()).id());
  for (HfSet f : homs) {
    for (HfSet g : homs) {
      if (dom.at(f.id()) != cod.at(g.id())) continue;
      const HfSet key = kuratowski_pair(f, g);
      c.compose[{hom_index.at(f.id()), hom_index.at(g.id())}] =
          hom_index.at(comp.at(key.id()).id());
    }
  }
  report.decoded = c;
  report.laws = check_category_laws(c);
  report.is_v_category = report.laws.is_category();
  if (!report.is_v_category && report.diagnostic.empty()) {
    report.diagnostic = "decoded data violates the category laws";
  }

  // Size: V-small iff Hom is itself a carrier element; V-locally-small iff
  // every hom slice is.
  if (u.contains(data.homs)) {
    report.size = VSize::VSmall;
  } else {
    bool locally = true;
    for (HfSet x : objects) {
      for (HfSet y : objects) {
        std::vector<HfSet> slice;
        for (HfSet h : homs) {
          if (dom.at(h.id()) == x && cod.at(h.id()) == y) slice.push_back(h);
        }
        if (!u.contains(canonical_set(slice))) {
          locally = false;
          break;
        }
      }
      if (!locally) break;
    }
    report.size = locally ? VSize::VLocallySmall : VSize::VLarge;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Functors and natural transformations

std::vector<Functor> enumerate_functors(const FinCategory& c, const FinCategory& d,
                                        std::size_t ceiling) {
  const std::size_t nc = c.object_names.size();
  const std::size_t nd = d.object_names.size();
  {
    // raw object-map space, before arrow choices
    std::size_t space = 1;
    for (std::size_t i = 0; i < nc; ++i) {
      if (nd != 0 && space > ceiling / std::max<std::size_t>(nd, 1)) {
        throw GuardError("functor enumeration space exceeds ceiling " +
                         std::to_string(ceiling));
      }
      space *= std::max<std::size_t>(nd, 1);
    }
  }

  std::vector<Functor> out;
  std::vector<std::size_t> omap(nc, 0);
  std::vector<std::size_t> amap(c.arrows.size(), 0);

  // Arrow images chosen recursively with dom/cod, identity and composition
  // constraints checked as early as possible.
  std::function<void(std::size_t)> assign_arrows = [&](std::size_t ai) {
    if (ai == c.arrows.size()) {
      // composition preservation over all pairs
      for (std::size_t f = 0; f < c.arrows.size(); ++f) {
        for (std::size_t g = 0; g < c.arrows.size(); ++g) {
          const auto h = c.composite(f, g);
          if (!h) continue;
          const auto dh = d.composite(amap[f], amap[g]);
          if (!dh || *dh != amap[*h]) return;
        }
      }
      Functor fun;
      fun.name = "F" + std::to_string(out.size());
      fun.object_map = omap;
      fun.arrow_map = amap;
      out.push_back(std::move(fun));
      return;
    }
    const auto& arr = c.arrows[ai];
    const std::size_t dx = omap[arr.dom], dy = omap[arr.cod];
    // identity arrows are forced
    if (c.identity[arr.dom] && *c.identity[arr.dom] == ai) {
      if (arr.dom == arr.cod && d.identity[dx]) {
        amap[ai] = *d.identity[dx];
        assign_arrows(ai + 1);
      }
      return;
    }
    for (std::size_t di : d.hom(dx, dy)) {
      amap[ai] = di;
      assign_arrows(ai + 1);
    }
  };

  std::function<void(std::size_t)> assign_objects = [&](std::size_t oi) {
    if (oi == nc) {
      assign_arrows(0);
      return;
    }
    for (std::size_t x = 0; x < nd; ++x) {
      omap[oi] = x;
      assign_objects(oi + 1);
    }
  };

  if (nc == 0) {
    out.push_back(Functor{"F0", {}, {}});
    return out;
  }
  if (nd == 0) return out;  // no functors into the empty category
  assign_objects(0);
  return out;
}

std::vector<NatTransform> natural_transformations(const FinCategory& c, const FinCategory& d,
                                                  const std::vector<Functor>& functors,
                                                  std::size_t from, std::size_t to) {
  const Functor& F = functors[from];
  const Functor& G = functors[to];
  std::vector<NatTransform> out;
  const std::size_t nc = c.object_names.size();
  std::vector<std::size_t> comp(nc, 0);

  std::function<void(std::size_t)> assign = [&](std::size_t x) {
    if (x == nc) {
      // every naturality square commutes: α_y ∘ F f = G f ∘ α_x
      for (std::size_t f = 0; f < c.arrows.size(); ++f) {
        const std::size_t cx = c.arrows[f].dom, cy = c.arrows[f].cod;
        const auto lhs = d.composite(comp[cy], F.arrow_map[f]);
        const auto rhs = d.composite(G.arrow_map[f], comp[cx]);
        if (!lhs || !rhs || *lhs != *rhs) return;
      }
      out.push_back(NatTransform{from, to, comp});
      return;
    }
    for (std::size_t a : d.hom(F.object_map[x], G.object_map[x])) {
      comp[x] = a;
      assign(x + 1);
    }
  };
  assign(0);
  return out;
}

FinCategory functor_category(const FinCategory& c, const FinCategory& d, std::size_t ceiling) {
  const std::vector<Functor> functors = enumerate_functors(c, d, ceiling);
  FinCategory fc;
  fc.name = "Fun(" + c.name + ", " + d.name + ")";

  for (const Functor& f : functors) fc.add_object(f.name);

  std::map<std::vector<std::size_t>, std::size_t> arrow_of;  // (from,to,components...)
  std::vector<NatTransform> nats;
  for (std::size_t i = 0; i < functors.size(); ++i) {
    for (std::size_t j = 0; j < functors.size(); ++j) {
      for (NatTransform& nt : natural_transformations(c, d, functors, i, j)) {
        std::vector<std::size_t> key{i, j};
        key.insert(key.end(), nt.components.begin(), nt.components.end());
        const std::size_t idx = fc.add_arrow(
            "n" + std::to_string(nats.size()) + ":" + functors[i].name + "=>" +
                functors[j].name,
            i, j);
        arrow_of[key] = idx;
        nats.push_back(std::move(nt));
      }
    }
  }

  // identities: componentwise identity arrows of d
  for (std::size_t i = 0; i < functors.size(); ++i) {
    std::vector<std::size_t> key{i, i};
    bool ok = true;
    for (std::size_t x = 0; x < c.object_names.size(); ++x) {
      const auto id = d.identity[functors[i].object_map[x]];
      if (!id) {
        ok = false;
        break;
      }
      key.push_back(*id);
    }
    if (!ok) continue;
    if (auto it = arrow_of.find(key); it != arrow_of.end()) fc.identity[i] = it->second;
  }

  // composition: componentwise composition in d
  for (std::size_t f = 0; f < nats.size(); ++f) {
    for (std::size_t g = 0; g < nats.size(); ++g) {
      if (nats[g].to != nats[f].from) continue;
      std::vector<std::size_t> key{nats[g].from, nats[f].to};
      bool ok = true;
      for (std::size_t x = 0; x < c.object_names.size(); ++x) {
        const auto h = d.composite(nats[f].components[x], nats[g].components[x]);
        if (!h) {
          ok = false;
          break;
        }
        key.push_back(*h);
      }
      if (!ok) continue;
      if (auto it = arrow_of.find(key); it != arrow_of.end()) {
        fc.compose[{f, g}] = it->second;
      }
    }
  }
  return fc;
}

// ---------------------------------------------------------------------------
// Verse slice

namespace {

// Horizontal (Godement) composite of 2-cells: given α: F ⇒ G between
// functors U → V and α': F' ⇒ G' between V → W, the composite has component
// (α' ∘ α)_x = α'_{G x} ∘ F'(α_x) in W.
std::optional<std::vector<std::size_t>> horizontal_components(
    const FinCategory& target, const Functor& Fp, const Functor& /*Gp*/,
    const std::vector<std::size_t>& alpha_prime_components,
    const std::vector<std::size_t>& alpha_components, const Functor& /*F*/, const Functor& G) {
  std::vector<std::size_t> out;
  for (std::size_t x = 0; x < alpha_components.size(); ++x) {
    const std::size_t f_prime_alpha = Fp.arrow_map[alpha_components[x]];
    const std::size_t gpx = G.object_map[x];
    const auto comp = target.composite(alpha_prime_components[gpx], f_prime_alpha);
    if (!comp) return std::nullopt;
    out.push_back(*comp);
  }
  return out;
}

}  // namespace

VerseSlice verse_slice(const AmbientModel& m, const SetCategoryOptions& opts,
                       std::size_t functor_ceiling) {
  VerseSlice slice;
  for (const Universe& u : m.multiverse) {
    auto [cat, laws] = build_set_category(u, opts);
    if (laws.is_category()) {
      slice.objects.push_back(u.name);
      slice.set_categories.emplace(u.name, std::move(cat));
    } else {
      slice.excluded.push_back({u.name, std::move(laws)});
    }
  }
  for (const std::string& a : slice.objects) {
    for (const std::string& b : slice.objects) {
      slice.hom_categories.emplace(
          std::make_pair(a, b),
          functor_category(slice.set_categories.at(a), slice.set_categories.at(b),
                           functor_ceiling));
    }
  }

  // Godement interchange over every available composable quadruple:
  // (β'·β) ∘h (α'·α) = (β' ∘h α') · (β ∘h α), with · vertical composition.
  slice.interchange_checked = false;
  slice.interchange_ok = true;
  for (const std::string& a : slice.objects) {
    for (const std::string& b : slice.objects) {
      for (const std::string& cc : slice.objects) {
        const FinCategory& target = slice.set_categories.at(cc);
        const std::vector<Functor> fs_ab =
            enumerate_functors(slice.set_categories.at(a), slice.set_categories.at(b),
                               functor_ceiling);
        const std::vector<Functor> fs_bc =
            enumerate_functors(slice.set_categories.at(b), target, functor_ceiling);
        // 2-cells in each hom
        struct Cell {
          std::size_t from, to;
          std::vector<std::size_t> comps;
        };
        std::vector<Cell> cells_ab, cells_bc;
        for (std::size_t i = 0; i < fs_ab.size(); ++i) {
          for (std::size_t j = 0; j < fs_ab.size(); ++j) {
            for (const NatTransform& nt : natural_transformations(
                     slice.set_categories.at(a), slice.set_categories.at(b), fs_ab, i, j)) {
              cells_ab.push_back({i, j, nt.components});
            }
          }
        }
        for (std::size_t i = 0; i < fs_bc.size(); ++i) {
          for (std::size_t j = 0; j < fs_bc.size(); ++j) {
            for (const NatTransform& nt : natural_transformations(
                     slice.set_categories.at(b), target, fs_bc, i, j)) {
              cells_bc.push_back({i, j, nt.components});
            }
          }
        }
        const FinCategory& mid = slice.set_categories.at(b);
        auto vertical = [&](const FinCategory& cat_target, const Cell& beta,
                            const Cell& alpha) -> std::optional<Cell> {
          if (alpha.to != beta.from) return std::nullopt;
          Cell out{alpha.from, beta.to, {}};
          for (std::size_t x = 0; x < alpha.comps.size(); ++x) {
            const auto h = cat_target.composite(beta.comps[x], alpha.comps[x]);
            if (!h) return std::nullopt;
            out.comps.push_back(*h);
          }
          return out;
        };
        for (const Cell& alpha : cells_ab) {
          for (const Cell& beta : cells_ab) {
            auto beta_alpha = vertical(mid, beta, alpha);
            if (!beta_alpha) continue;
            for (const Cell& alpha_p : cells_bc) {
              for (const Cell& beta_p : cells_bc) {
                auto betap_alphap = vertical(target, beta_p, alpha_p);
                if (!betap_alphap) continue;
                slice.interchange_checked = true;
                // route 1: horizontal of verticals
                auto h1 = horizontal_components(target, fs_bc[betap_alphap->from],
                                                fs_bc[betap_alphap->to], betap_alphap->comps,
                                                beta_alpha->comps, fs_ab[beta_alpha->from],
                                                fs_ab[beta_alpha->to]);
                // route 2: vertical of horizontals
                auto ha = horizontal_components(target, fs_bc[alpha_p.from], fs_bc[alpha_p.to],
                                                alpha_p.comps, alpha.comps, fs_ab[alpha.from],
                                                fs_ab[alpha.to]);
                auto hb = horizontal_components(target, fs_bc[beta_p.from], fs_bc[beta_p.to],
                                                beta_p.comps, beta.comps, fs_ab[beta.from],
                                                fs_ab[beta.to]);
                if (!h1 || !ha || !hb) {
                  slice.interchange_ok = false;
                  continue;
                }
                std::optional<std::vector<std::size_t>> h2;
                {
                  std::vector<std::size_t> out;
                  bool ok = true;
                  for (std::size_t x = 0; x < ha->size(); ++x) {
                    const auto h = target.composite((*hb)[x], (*ha)[x]);
                    if (!h) {
                      ok = false;
                      break;
                    }
                    out.push_back(*h);
                  }
                  if (ok) h2 = std::move(out);
                }
                if (!h2 || *h1 != *h2) slice.interchange_ok = false;
              }
            }
          }
        }
      }
    }
  }
  return slice;
}

}  // namespace mverse
