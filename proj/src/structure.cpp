#include "infocoh/structure.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

namespace infocoh {

namespace {

std::vector<int> identity_map(std::size_t k) {
    std::vector<int> m(k);
    std::iota(m.begin(), m.end(), 0);
    return m;
}

using Bits = std::vector<std::uint64_t>;

bool test_bit(const Bits& b, std::size_t i) { return (b[i >> 6] >> (i & 63)) & 1u; }
void set_bit(Bits& b, std::size_t i) { b[i >> 6] |= std::uint64_t{1} << (i & 63); }

}  // namespace

InfoStructure::InfoStructure(std::vector<Variable> variables, const std::vector<ArrowSpec>& arrows,
                             std::size_t terminal, std::optional<ConcreteData> concrete)
    : vars_(std::move(variables)), given_(arrows), terminal_(terminal), concrete_(std::move(concrete)) {
    const std::size_t n = vars_.size();
    if (n == 0) throw StructuralInputError("structure without objects");
    if (terminal_ >= n) throw StructuralInputError("terminal index out of range");
    {
        std::set<std::string> ids;
        for (const auto& v : vars_) {
            if (v.id.empty()) throw StructuralInputError("empty variable id");
            if (!ids.insert(v.id).second) throw StructuralInputError("duplicate variable id '" + v.id + "'");
            if (v.values.empty()) throw StructuralInputError("variable '" + v.id + "' has no values");
            std::set<std::string> labels(v.values.begin(), v.values.end());
            if (labels.size() != v.values.size())
                throw StructuralInputError("duplicate value label in variable '" + v.id + "'");
        }
    }
    if (concrete_ && concrete_->partitions.size() != n)
        throw StructuralInputError("concrete data does not cover every object");

    reach_.assign(n * n, 0);
    maps_.assign(n * n, {});
    std::vector<std::vector<const ArrowSpec*>> out(n);
    for (const auto& a : given_) {
        if (a.source >= n || a.target >= n) throw StructuralInputError("arrow endpoint out of range");
        if (a.map.size() != vars_[a.source].values.size())
            throw StructuralInputError("arrow " + vars_[a.source].id + "->" + vars_[a.target].id +
                                       " does not map every source value");
        for (int v : a.map)
            if (v < 0 || static_cast<std::size_t>(v) >= vars_[a.target].values.size())
                throw StructuralInputError("arrow " + vars_[a.source].id + "->" + vars_[a.target].id +
                                           " maps to an unknown value");
        if (a.source == a.target) {
            if (a.map != identity_map(a.map.size()))
                issues_.push_back({a.source, a.target, "non-identity endomorphism"});
            continue;
        }
        out[a.source].push_back(&a);
    }

    for (std::size_t i = 0; i < n; ++i) {
        reach_[i * n + i] = 1;
        maps_[i * n + i] = identity_map(vars_[i].values.size());
        std::deque<std::size_t> queue{i};
        std::vector<char> expanded(n, 0);
        while (!queue.empty()) {
            std::size_t j = queue.front();
            queue.pop_front();
            if (expanded[j]) continue;
            expanded[j] = 1;
            const auto& mij = maps_[i * n + j];
            for (const ArrowSpec* e : out[j]) {
                std::size_t k = e->target;
                std::vector<int> composed(mij.size());
                for (std::size_t x = 0; x < mij.size(); ++x) composed[x] = e->map[mij[x]];
                if (k == i) {
                    issues_.push_back({i, j, "cycle returns to " + vars_[i].id});
                    continue;
                }
                if (!reach_[i * n + k]) {
                    reach_[i * n + k] = 1;
                    maps_[i * n + k] = std::move(composed);
                    queue.push_back(k);
                } else if (maps_[i * n + k] != composed) {
                    bool seen = false;
                    for (const auto& is : issues_) seen |= (is.source == i && is.target == k);
                    if (!seen) issues_.push_back({i, k, "two arrows with different value maps"});
                }
            }
        }
    }

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j || !arrow(i, j) || arrow(j, i)) continue;
            bool cover = true;
            for (std::size_t k = 0; k < n && cover; ++k)
                if (k != i && k != j && arrow(i, k) && arrow(k, j) && !arrow(k, i) && !arrow(j, k)) cover = false;
            if (cover) hasse_.emplace_back(i, j);
        }

    const std::size_t words = (n + 63) / 64;
    std::vector<Bits> down(n, Bits(words, 0));
    std::vector<int> down_size(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t z = 0; z < n; ++z)
            if (arrow(z, i)) {
                set_bit(down[i], z);
                ++down_size[i];
            }
    meet_.assign(n * n, -1);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            Bits common(words);
            bool any = false;
            for (std::size_t w = 0; w < words; ++w) {
                common[w] = down[i][w] & down[j][w];
                any |= common[w] != 0;
            }
            std::int64_t result = -1;
            if (any) {
                std::size_t best = n;
                for (std::size_t z = 0; z < n; ++z)
                    if (test_bit(common, z) && (best == n || down_size[z] > down_size[best])) best = z;
                bool greatest = true;
                for (std::size_t w = 0; w < words && greatest; ++w)
                    if ((common[w] & ~down[best][w]) != 0) greatest = false;
                // a cycle makes two objects mutual lower bounds: not a meet
                for (std::size_t z = 0; z < n && greatest; ++z)
                    if (z != best && test_bit(common, z) && arrow(best, z)) greatest = false;
                result = greatest ? static_cast<std::int64_t>(best) : -2;
            }
            meet_[i * n + j] = meet_[j * n + i] = result;
        }

    std::vector<int> memo(n, -1);
    std::vector<char> on_stack(n, 0);
    std::function<int(std::size_t)> h = [&](std::size_t i) -> int {
        if (memo[i] >= 0) return memo[i];
        if (on_stack[i]) return 0;
        on_stack[i] = 1;
        int best = 0;
        for (const auto& [a, b] : hasse_)
            if (a == i) best = std::max(best, 1 + h(b));
        on_stack[i] = 0;
        return memo[i] = best;
    };
    for (std::size_t i = 0; i < n; ++i) height_ = std::max<std::size_t>(height_, static_cast<std::size_t>(h(i)));
}

std::size_t InfoStructure::index_of(const std::string& id) const {
    auto f = find(id);
    if (!f) throw StructuralInputError("unknown variable id '" + id + "'");
    return *f;
}

std::optional<std::size_t> InfoStructure::find(const std::string& id) const {
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i].id == id) return i;
    return std::nullopt;
}

const std::vector<int>& InfoStructure::map(std::size_t i, std::size_t j) const {
    if (!arrow(i, j)) throw StructuralInputError("no arrow " + vars_[i].id + "->" + vars_[j].id);
    return maps_[i * vars_.size() + j];
}

std::optional<std::size_t> InfoStructure::meet(std::size_t i, std::size_t j) const {
    std::int64_t m = meet_[i * vars_.size() + j];
    if (m < 0) return std::nullopt;
    return static_cast<std::size_t>(m);
}

bool InfoStructure::have_common_refiner(std::size_t i, std::size_t j) const {
    return meet_[i * vars_.size() + j] != -1;
}

std::optional<std::size_t> InfoStructure::product(const std::vector<std::size_t>& objs) const {
    std::size_t acc = terminal_;
    for (std::size_t o : objs) {
        auto m = meet(acc, o);
        if (!m) return std::nullopt;
        acc = *m;
    }
    return acc;
}

// ---------------------------------------------------------------- builders

namespace {

std::string block_label(const std::vector<std::string>& omega, const std::vector<std::size_t>& block) {
    std::string s = "{";
    for (std::size_t k = 0; k < block.size(); ++k) {
        if (k) s += ",";
        s += omega[block[k]];
    }
    return s + "}";
}

InfoStructure from_partitions(const std::vector<std::string>& omega,
                              const std::vector<std::pair<std::string, Partition>>& objects, std::size_t terminal) {
    std::vector<Variable> vars;
    ConcreteData cd{omega, {}};
    for (const auto& [id, p] : objects) {
        Variable v{id, {}};
        for (const auto& b : p.blocks()) v.values.push_back(block_label(omega, b));
        vars.push_back(std::move(v));
        cd.partitions.push_back(p);
    }
    std::vector<ArrowSpec> arrows;
    for (std::size_t i = 0; i < objects.size(); ++i)
        for (std::size_t j = 0; j < objects.size(); ++j) {
            if (i == j) continue;
            const Partition& a = objects[i].second;
            const Partition& b = objects[j].second;
            if (!partition_refines(a, b)) continue;
            std::vector<int> m(a.block_count());
            for (std::size_t w = 0; w < a.ground_size(); ++w) m[a.block_of(w)] = b.block_of(w);
            arrows.push_back({i, j, std::move(m)});
        }
    return InfoStructure(std::move(vars), arrows, terminal, std::move(cd));
}

}  // namespace

InfoStructure build_concrete_structure(const std::vector<std::string>& omega,
                                       const std::vector<std::pair<std::string, Partition>>& generators, bool close) {
    if (omega.empty()) throw StructuralInputError("empty omega");
    {
        std::set<std::string> labels(omega.begin(), omega.end());
        if (labels.size() != omega.size()) throw StructuralInputError("duplicate omega label");
    }
    std::vector<std::pair<std::string, Partition>> objs{{"1", Partition::trivial(omega.size())}};
    bool terminal_named = false;
    for (const auto& [id, p] : generators) {
        if (p.ground_size() != omega.size())
            throw StructuralInputError("partition '" + id + "' is not a partition of omega");
        bool placed = false;
        for (std::size_t k = 0; k < objs.size(); ++k) {
            if (objs[k].first == id && !(k == 0 && !terminal_named && p == objs[0].second))
                throw StructuralInputError("duplicate partition id '" + id + "'");
            if (objs[k].second == p) {
                if (k == 0 && !terminal_named) {
                    objs[0].first = id;
                    terminal_named = true;
                    placed = true;
                    break;
                }
                throw StructuralInputError("partitions '" + objs[k].first + "' and '" + id +
                                           "' coincide after canonicalization");
            }
        }
        if (!placed) objs.emplace_back(id, p);
    }
    if (close) {
        bool changed = true;
        while (changed) {
            changed = false;
            const std::size_t count = objs.size();
            for (std::size_t a = 1; a < count; ++a)
                for (std::size_t b = a + 1; b < count; ++b) {
                    Partition p = partition_product(objs[a].second, objs[b].second);
                    bool present = false;
                    for (const auto& o : objs) present |= (o.second == p);
                    if (present) continue;
                    std::string name = objs[a].first + objs[b].first;
                    auto taken = [&](const std::string& nm) {
                        for (const auto& o : objs)
                            if (o.first == nm) return true;
                        return false;
                    };
                    while (taken(name)) name += "'";
                    objs.emplace_back(name, p);
                    changed = true;
                }
        }
    }
    return from_partitions(omega, objs, 0);
}

InfoStructure build_simplicial_structure(const std::vector<std::pair<std::string, std::size_t>>& vertices,
                                         const std::vector<std::vector<std::string>>& faces) {
    std::map<std::string, std::size_t> vindex;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        if (vertices[i].second < 2)
            throw StructuralInputError("vertex '" + vertices[i].first + "' needs an alphabet of size >= 2");
        if (!vindex.emplace(vertices[i].first, i).second)
            throw StructuralInputError("duplicate vertex '" + vertices[i].first + "'");
    }
    std::set<std::vector<std::size_t>> face_set;
    for (const auto& f : faces) {
        if (f.empty()) continue;
        std::vector<std::size_t> idx;
        for (const auto& v : f) {
            auto it = vindex.find(v);
            if (it == vindex.end()) throw StructuralInputError("face uses unknown vertex '" + v + "'");
            idx.push_back(it->second);
        }
        std::sort(idx.begin(), idx.end());
        if (std::adjacent_find(idx.begin(), idx.end()) != idx.end())
            throw StructuralInputError("face repeats a vertex");
        face_set.insert(idx);
    }
    for (const auto& f : face_set) {
        if (f.size() < 2) continue;
        for (std::size_t drop = 0; drop < f.size(); ++drop) {
            std::vector<std::size_t> sub;
            for (std::size_t k = 0; k < f.size(); ++k)
                if (k != drop) sub.push_back(f[k]);
            if (!face_set.count(sub)) {
                std::string name;
                for (auto v : sub) name += vertices[v].first;
                throw StructuralInputError("face family is not downward closed: missing {" + name + "}");
            }
        }
    }
    std::vector<std::vector<std::size_t>> ordered(face_set.begin(), face_set.end());
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const auto& a, const auto& b) { return a.size() < b.size(); });
    std::vector<Variable> vars{{"1", {"*"}}};
    for (const auto& f : ordered) {
        Variable v;
        for (auto i : f) v.id += vertices[i].first;
        if (v.id == "1") throw StructuralInputError("vertex id '1' is reserved for the terminal object");
        std::size_t total = 1;
        for (auto i : f) total *= vertices[i].second;
        for (std::size_t code = 0; code < total; ++code) {
            std::vector<std::size_t> digits(f.size());
            std::size_t c = code;
            for (std::size_t k = f.size(); k-- > 0;) {
                digits[k] = c % vertices[f[k]].second;
                c /= vertices[f[k]].second;
            }
            std::string label;
            if (f.size() > 1) label = "(";
            for (std::size_t k = 0; k < digits.size(); ++k) {
                if (k) label += ",";
                label += std::to_string(digits[k]);
            }
            if (f.size() > 1) label += ")";
            v.values.push_back(label);
        }
        vars.push_back(std::move(v));
    }
    auto decode = [&](const std::vector<std::size_t>& f, std::size_t code) {
        std::map<std::size_t, std::size_t> d;
        for (std::size_t k = f.size(); k-- > 0;) {
            d[f[k]] = code % vertices[f[k]].second;
            code /= vertices[f[k]].second;
        }
        return d;
    };
    auto encode = [&](const std::vector<std::size_t>& f, const std::map<std::size_t, std::size_t>& d) {
        std::size_t code = 0;
        for (auto i : f) code = code * vertices[i].second + d.at(i);
        return code;
    };
    std::vector<ArrowSpec> arrows;
    for (std::size_t a = 0; a < ordered.size(); ++a) {
        const auto& f = ordered[a];
        std::size_t count = vars[a + 1].values.size();
        if (f.size() == 1) {
            arrows.push_back({a + 1, 0, std::vector<int>(count, 0)});
            continue;
        }
        for (std::size_t b = 0; b < ordered.size(); ++b) {
            const auto& g = ordered[b];
            if (g.size() + 1 != f.size() || !std::includes(f.begin(), f.end(), g.begin(), g.end())) continue;
            std::vector<int> m(count);
            for (std::size_t code = 0; code < count; ++code) m[code] = static_cast<int>(encode(g, decode(f, code)));
            arrows.push_back({a + 1, b + 1, std::move(m)});
        }
    }
    return InfoStructure(std::move(vars), arrows, 0);
}

InfoStructure build_abstract_structure(
    std::vector<Variable> variables,
    const std::vector<std::tuple<std::string, std::string, std::vector<std::pair<std::string, std::string>>>>& arrows,
    const std::string& terminal) {
    std::map<std::string, std::size_t> idx;
    for (std::size_t i = 0; i < variables.size(); ++i) idx[variables[i].id] = i;
    auto lookup = [&](const std::string& id) {
        auto it = idx.find(id);
        if (it == idx.end()) throw StructuralInputError("unknown variable id '" + id + "'");
        return it->second;
    };
    auto value_index = [&](std::size_t var, const std::string& label) {
        const auto& vals = variables[var].values;
        auto it = std::find(vals.begin(), vals.end(), label);
        if (it == vals.end())
            throw StructuralInputError("unknown value '" + label + "' of variable '" + variables[var].id + "'");
        return static_cast<int>(it - vals.begin());
    };
    std::vector<ArrowSpec> specs;
    for (const auto& [from, to, pairs] : arrows) {
        ArrowSpec a{lookup(from), lookup(to), {}};
        a.map.assign(variables[a.source].values.size(), -1);
        for (const auto& [src, dst] : pairs) {
            int s = value_index(a.source, src);
            if (a.map[s] != -1) throw StructuralInputError("arrow " + from + "->" + to + " maps '" + src + "' twice");
            a.map[s] = value_index(a.target, dst);
        }
        for (std::size_t s = 0; s < a.map.size(); ++s)
            if (a.map[s] == -1)
                throw StructuralInputError("arrow " + from + "->" + to + " leaves value '" +
                                           variables[a.source].values[s] + "' unmapped");
        specs.push_back(std::move(a));
    }
    std::size_t t = lookup(terminal);
    return InfoStructure(std::move(variables), specs, t);
}

InfoStructure terminal_only_structure(const std::string& id) {
    return InfoStructure({{id, {"*"}}}, {}, 0);
}

InfoStructure renamed(const InfoStructure& s, const std::string& suffix) {
    std::vector<Variable> vars;
    for (std::size_t i = 0; i < s.size(); ++i) {
        vars.push_back(s.variable(i));
        if (i != s.terminal()) vars.back().id += suffix;
    }
    return InfoStructure(std::move(vars), s.given_arrows(), s.terminal(), s.concrete());
}

// -------------------------------------------------------------- validation

bool ValidationReport::all_pass() const {
    return std::all_of(axioms.begin(), axioms.end(), [](const AxiomVerdict& a) { return a.pass; });
}

const AxiomVerdict& ValidationReport::axiom(const std::string& name) const {
    for (const auto& a : axioms)
        if (a.name == name) return a;
    throw std::out_of_range("no axiom named " + name);
}

ValidationReport validate_structure(const InfoStructure& s) {
    const std::size_t n = s.size();
    ValidationReport r;
    auto fail = [](AxiomVerdict& v, const std::string& w) {
        if (v.pass) {
            v.pass = false;
            v.witness = w;
        }
    };

    AxiomVerdict terminal{"terminal_object", true, ""};
    for (std::size_t i = 0; i < n; ++i)
        if (!s.arrow(i, s.terminal())) fail(terminal, s.id(i) + " has no arrow to " + s.id(s.terminal()));

    AxiomVerdict poset{"poset", true, ""};
    for (const auto& is : s.closure_issues()) fail(poset, s.id(is.source) + "->" + s.id(is.target) + ": " + is.what);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (s.arrow(i, j) && s.arrow(j, i)) fail(poset, "2-cycle between " + s.id(i) + " and " + s.id(j));

    AxiomVerdict nerve{"finite_nerve", true, "height=" + std::to_string(s.height())};

    AxiomVerdict meets{"conditional_meets", true, ""};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!s.have_common_refiner(i, j)) continue;
            auto m = s.meet(i, j);
            if (!m) {
                fail(meets, s.id(i) + "," + s.id(j) + " have common refiners but no greatest one");
                continue;
            }
            if (s.concrete()) {
                const auto& ps = s.concrete()->partitions;
                if (!(ps[*m] == partition_product(ps[i], ps[j])))
                    fail(meets, "product of " + s.id(i) + "," + s.id(j) + " is not an object (greatest lower bound " +
                                    s.id(*m) + " is strictly finer)");
            }
        }

    AxiomVerdict singleton{"terminal_singleton", s.value_count(s.terminal()) == 1, ""};
    if (!singleton.pass) singleton.witness = s.id(s.terminal()) + " has " + std::to_string(s.value_count(s.terminal())) + " values";

    AxiomVerdict strict{"strict_surjection", true, ""};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j || !s.arrow(i, j)) continue;
            const auto& m = s.map(i, j);
            std::vector<char> hit(s.value_count(j), 0);
            for (int v : m) hit[v] = 1;
            for (std::size_t y = 0; y < hit.size(); ++y)
                if (!hit[y])
                    fail(strict, s.id(i) + "->" + s.id(j) + " misses value " + s.variable(j).values[y]);
            if (s.value_count(i) <= s.value_count(j)) fail(strict, s.id(i) + "->" + s.id(j) + " is not strict");
        }

    AxiomVerdict fiber{"fiber_condition", true, ""};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            auto m = s.meet(i, j);
            if (!m) continue;
            const auto& mi = s.map(*m, i);
            const auto& mj = s.map(*m, j);
            std::map<std::pair<int, int>, std::size_t> seen;
            for (std::size_t z = 0; z < s.value_count(*m); ++z) {
                auto [it, ok] = seen.emplace(std::make_pair(mi[z], mj[z]), z);
                if (!ok)
                    fail(fiber, "values " + s.variable(*m).values[it->second] + " and " + s.variable(*m).values[z] +
                                    " of " + s.id(*m) + " share their images in " + s.id(i) + " and " + s.id(j));
            }
        }

    AxiomVerdict sections{"global_sections", true, ""};
    auto secs = limit_sections(s);
    for (std::size_t i = 0; i < n && sections.pass; ++i) {
        std::vector<char> hit(s.value_count(i), 0);
        for (const auto& sec : secs) hit[sec[i]] = 1;
        for (std::size_t x = 0; x < hit.size(); ++x)
            if (!hit[x]) fail(sections, "value " + s.variable(i).values[x] + " of " + s.id(i) + " lies in no section");
    }

    r.axioms = {terminal, poset, nerve, meets, singleton, strict, fiber, sections};
    r.height = s.height();
    r.section_count = secs.size();
    return r;
}

// -------------------------------------------------------------- sections

namespace {

bool restrict_domains(const InfoStructure& s, std::size_t v, int x, const std::vector<int>& assign,
                      std::vector<std::vector<char>>& dom) {
    for (std::size_t w = 0; w < s.size(); ++w) {
        if (w == v || assign[w] != -1) continue;
        auto& d = dom[w];
        if (s.arrow(v, w)) {
            int keep = s.map(v, w)[x];
            for (std::size_t a = 0; a < d.size(); ++a)
                if (static_cast<int>(a) != keep) d[a] = 0;
        }
        if (s.arrow(w, v)) {
            const auto& m = s.map(w, v);
            for (std::size_t a = 0; a < d.size(); ++a)
                if (m[a] != x) d[a] = 0;
        }
        if (std::find(d.begin(), d.end(), 1) == d.end()) return false;
    }
    return true;
}

void section_dfs(const InfoStructure& s, const std::vector<std::size_t>& order, std::size_t depth,
                 std::vector<int>& assign, std::vector<std::vector<char>>& dom, std::vector<Section>& out) {
    if (depth == order.size()) {
        out.push_back(assign);
        return;
    }
    const std::size_t v = order[depth];
    for (std::size_t x = 0; x < dom[v].size(); ++x) {
        if (!dom[v][x]) continue;
        auto saved = dom;
        assign[v] = static_cast<int>(x);
        if (restrict_domains(s, v, static_cast<int>(x), assign, dom)) section_dfs(s, order, depth + 1, assign, dom, out);
        dom = std::move(saved);
    }
    assign[v] = -1;
}

}  // namespace

std::vector<Section> limit_sections(const InfoStructure& s, Exec exec) {
    const std::size_t n = s.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return s.value_count(a) > s.value_count(b); });
    std::vector<std::vector<char>> dom0(n);
    for (std::size_t i = 0; i < n; ++i) dom0[i].assign(s.value_count(i), 1);

    const std::size_t first = order[0];
    const int choices = static_cast<int>(s.value_count(first));
    std::vector<std::vector<Section>> parts(choices);
    auto run_choice = [&](int x) {
        std::vector<int> assign(n, -1);
        auto dom = dom0;
        assign[first] = x;
        if (restrict_domains(s, first, x, assign, dom)) section_dfs(s, order, 1, assign, dom, parts[x]);
    };
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int x = 0; x < choices; ++x) run_choice(x);
    } else {
        for (int x = 0; x < choices; ++x) run_choice(x);
    }
    std::vector<Section> out;
    for (auto& p : parts)
        for (auto& sec : p) out.push_back(std::move(sec));
    std::sort(out.begin(), out.end());
    return out;
}

// -------------------------------------------------------------- morphisms

bool MorphismReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const AxiomVerdict& a) { return a.pass; });
}

StructureMorphism identity_morphism(const InfoStructure& s) {
    StructureMorphism m;
    for (std::size_t i = 0; i < s.size(); ++i) {
        m.object_map.push_back(i);
        m.value_maps.push_back(identity_map(s.value_count(i)));
    }
    return m;
}

StructureMorphism compose(const StructureMorphism& g, const StructureMorphism& f) {
    StructureMorphism h;
    for (std::size_t i = 0; i < f.object_map.size(); ++i) {
        std::size_t mid = f.object_map[i];
        h.object_map.push_back(g.object_map[mid]);
        std::vector<int> vm(f.value_maps[i].size());
        for (std::size_t x = 0; x < vm.size(); ++x) vm[x] = g.value_maps[mid][f.value_maps[i][x]];
        h.value_maps.push_back(std::move(vm));
    }
    return h;
}

MorphismReport validate_morphism(const StructureMorphism& phi, const InfoStructure& s, const InfoStructure& t) {
    MorphismReport r;
    AxiomVerdict shape{"shape", true, ""};
    AxiomVerdict terminal{"terminal", true, ""};
    AxiomVerdict functor{"functor", true, ""};
    AxiomVerdict meets{"meets", true, ""};
    AxiomVerdict natural{"naturality", true, ""};
    AxiomVerdict onto{"surjective_values", true, ""};
    auto fail = [](AxiomVerdict& v, const std::string& w) {
        if (v.pass) {
            v.pass = false;
            v.witness = w;
        }
    };
    const std::size_t n = s.size();
    if (phi.object_map.size() != n || phi.value_maps.size() != n) {
        fail(shape, "object map does not cover the source");
        r.checks = {shape};
        return r;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (phi.object_map[i] >= t.size()) fail(shape, s.id(i) + " mapped outside the target");
        else if (phi.value_maps[i].size() != s.value_count(i)) fail(shape, "value map of " + s.id(i) + " has wrong size");
        else
            for (int v : phi.value_maps[i])
                if (v < 0 || static_cast<std::size_t>(v) >= t.value_count(phi.object_map[i]))
                    fail(shape, "value map of " + s.id(i) + " leaves the target value set");
    }
    if (!shape.pass) {
        r.checks = {shape};
        return r;
    }
    if (phi.object_map[s.terminal()] != t.terminal()) fail(terminal, "terminal goes to " + t.id(phi.object_map[s.terminal()]));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (!s.arrow(i, j)) continue;
            std::size_t a = phi.object_map[i], b = phi.object_map[j];
            if (!t.arrow(a, b)) {
                fail(functor, s.id(i) + "->" + s.id(j) + " has no image arrow");
                continue;
            }
            const auto& ms = s.map(i, j);
            const auto& mt = t.map(a, b);
            for (std::size_t x = 0; x < ms.size(); ++x)
                if (phi.value_maps[j][ms[x]] != mt[phi.value_maps[i][x]]) {
                    fail(natural, "square at " + s.id(i) + "->" + s.id(j) + " fails on value " + s.variable(i).values[x]);
                    break;
                }
        }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            auto m = s.meet(i, j);
            if (!m) continue;
            auto mt = t.meet(phi.object_map[i], phi.object_map[j]);
            if (!mt || *mt != phi.object_map[*m]) fail(meets, "meet of " + s.id(i) + "," + s.id(j) + " not preserved");
        }
    bool bijective = true;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<int> hits(t.value_count(phi.object_map[i]), 0);
        for (int v : phi.value_maps[i]) ++hits[v];
        for (std::size_t y = 0; y < hits.size(); ++y) {
            if (hits[y] == 0) fail(onto, "value map of " + s.id(i) + " misses " + t.variable(phi.object_map[i]).values[y]);
            if (hits[y] != 1) bijective = false;
        }
    }
    std::set<std::size_t> images(phi.object_map.begin(), phi.object_map.end());
    r.checks = {shape, terminal, functor, meets, natural, onto};
    r.embedding = r.all_pass() && images.size() == n && bijective;
    return r;
}

// -------------------------------------------------------------- models

ModelCheck check_model(const InfoStructure& s, const ClassicalModel& m) {
    ModelCheck c;
    const std::size_t n = s.size();
    auto note = [&](const std::string& w) {
        if (c.witness.empty()) c.witness = w;
    };
    if (m.rho.size() != n || m.value_block.size() != n) {
        c.bijective_values = false;
        note("model does not cover every object");
        return c;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (m.rho[i] == m.rho[j]) {
                c.injective = false;
                note(s.id(i) + " and " + s.id(j) + " induce the same partition");
            }
    std::vector<std::vector<int>> block_value(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (m.rho[i].ground_size() != m.omega.size() || m.value_block[i].size() != s.value_count(i) ||
            m.rho[i].block_count() != s.value_count(i)) {
            c.bijective_values = false;
            note("values of " + s.id(i) + " are not in bijection with blocks");
            continue;
        }
        block_value[i].assign(m.rho[i].block_count(), -1);
        for (std::size_t x = 0; x < m.value_block[i].size(); ++x) {
            int b = m.value_block[i][x];
            if (b < 0 || static_cast<std::size_t>(b) >= block_value[i].size() || block_value[i][b] != -1) {
                c.bijective_values = false;
                note("values of " + s.id(i) + " are not in bijection with blocks");
                break;
            }
            block_value[i][b] = static_cast<int>(x);
        }
    }
    if (!c.bijective_values) return c;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j || !s.arrow(i, j)) continue;
            const auto& mp = s.map(i, j);
            for (std::size_t w = 0; w < m.omega.size(); ++w) {
                int xi = block_value[i][m.rho[i].block_of(w)];
                int xj = block_value[j][m.rho[j].block_of(w)];
                if (mp[xi] != xj) {
                    c.functorial = false;
                    note("point " + m.omega[w] + " breaks arrow " + s.id(i) + "->" + s.id(j));
                    break;
                }
            }
        }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            auto mt = s.meet(i, j);
            if (!mt) continue;
            if (!(m.rho[*mt] == partition_product(m.rho[i], m.rho[j]))) {
                c.meets_to_products = false;
                note("meet of " + s.id(i) + "," + s.id(j) + " is not the partition product");
            }
        }
    return c;
}

InducedModel induced_model(const InfoStructure& s) {
    InducedModel r;
    auto secs = limit_sections(s);
    ClassicalModel m;
    for (std::size_t k = 0; k < secs.size(); ++k) m.omega.push_back("s" + std::to_string(k));
    const std::size_t n = s.size();
    if (secs.empty()) {
        r.diagnosis = "no global sections";
        return r;
    }
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<int> labels(secs.size());
        for (std::size_t k = 0; k < secs.size(); ++k) labels[k] = secs[k][i];
        Partition p(labels);
        std::vector<int> vb(s.value_count(i), -1);
        for (std::size_t k = 0; k < secs.size(); ++k) vb[secs[k][i]] = p.block_of(k);
        for (std::size_t x = 0; x < vb.size(); ++x)
            if (vb[x] == -1 && r.diagnosis.empty())
                r.diagnosis = "value " + s.variable(i).values[x] + " of " + s.id(i) + " lies in no section";
        m.rho.push_back(std::move(p));
        m.value_block.push_back(std::move(vb));
    }
    for (std::size_t i = 0; i < n && !r.collision; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (m.rho[i] == m.rho[j]) {
                r.collision = {i, j};
                r.diagnosis = s.id(i) + " and " + s.id(j) + " induce the same partition of the limit";
                break;
            }
    if (!r.diagnosis.empty()) return r;
    ModelCheck c = check_model(s, m);
    if (!c.ok()) {
        r.diagnosis = c.witness;
        return r;
    }
    r.model = std::move(m);
    return r;
}

ClassicalModel concrete_model(const InfoStructure& s) {
    if (!s.concrete()) throw StructuralInputError("structure is not concrete");
    ClassicalModel m;
    m.omega = s.concrete()->omega;
    m.rho = s.concrete()->partitions;
    for (std::size_t i = 0; i < s.size(); ++i) m.value_block.push_back(identity_map(s.value_count(i)));
    return m;
}

ClassicalModel product_model(const InfoStructure& s1, const InfoStructure& s2, const ClassicalModel& m1,
                             const ClassicalModel& m2) {
    ClassicalModel m;
    const std::size_t w2 = m2.omega.size();
    for (const auto& a : m1.omega)
        for (const auto& b : m2.omega) m.omega.push_back("(" + a + "," + b + ")");
    for (std::size_t i = 0; i < s1.size(); ++i)
        for (std::size_t j = 0; j < s2.size(); ++j) {
            const auto& p1 = m1.rho[i];
            const auto& p2 = m2.rho[j];
            const int nb2 = static_cast<int>(p2.block_count());
            std::vector<int> labels(m.omega.size());
            for (std::size_t a = 0; a < m1.omega.size(); ++a)
                for (std::size_t b = 0; b < w2; ++b) labels[a * w2 + b] = p1.block_of(a) * nb2 + p2.block_of(b);
            Partition p(labels);
            // raw label -> canonical block
            std::map<int, int> canon;
            for (std::size_t w = 0; w < labels.size(); ++w) canon[labels[w]] = p.block_of(w);
            std::vector<int> vb(s1.value_count(i) * s2.value_count(j));
            for (std::size_t x1 = 0; x1 < s1.value_count(i); ++x1)
                for (std::size_t x2 = 0; x2 < s2.value_count(j); ++x2)
                    vb[x1 * s2.value_count(j) + x2] = canon.at(m1.value_block[i][x1] * nb2 + m2.value_block[j][x2]);
            m.rho.push_back(std::move(p));
            m.value_block.push_back(std::move(vb));
        }
    return m;
}

ClassicalModel coproduct_model(const InfoStructure& s1, const InfoStructure& s2, const ClassicalModel& m1,
                               const ClassicalModel& m2) {
    auto c = coproduct_structure(s1, s2);
    ClassicalModel m;
    const std::size_t w1 = m1.omega.size(), w2 = m2.omega.size();
    for (const auto& a : m1.omega)
        for (const auto& b : m2.omega) m.omega.push_back("(" + a + "," + b + ")");
    m.rho.resize(c.structure.size());
    m.value_block.resize(c.structure.size());
    auto place = [&](const StructureMorphism& inj, const ClassicalModel& src, const InfoStructure& ss, bool first) {
        for (std::size_t i = 0; i < ss.size(); ++i) {
            std::size_t o = inj.object_map[i];
            if (o == c.structure.terminal() && !m.rho[o].assignment().empty()) continue;
            std::vector<int> labels(w1 * w2);
            for (std::size_t a = 0; a < w1; ++a)
                for (std::size_t b = 0; b < w2; ++b)
                    labels[a * w2 + b] = first ? src.rho[i].block_of(a) : src.rho[i].block_of(b);
            Partition p(labels);
            std::map<int, int> canon;
            for (std::size_t w = 0; w < labels.size(); ++w) canon[labels[w]] = p.block_of(w);
            std::vector<int> vb(ss.value_count(i));
            for (std::size_t x = 0; x < vb.size(); ++x) vb[x] = canon.at(src.value_block[i][x]);
            m.rho[o] = std::move(p);
            m.value_block[o] = std::move(vb);
        }
    };
    place(c.inj1, m1, s1, true);
    place(c.inj2, m2, s2, false);
    return m;
}

// -------------------------------------------------------------- product / coproduct

ProductStructure product_structure(const InfoStructure& s1, const InfoStructure& s2) {
    const std::size_t n1 = s1.size(), n2 = s2.size();
    std::vector<Variable> vars;
    for (std::size_t a = 0; a < n1; ++a)
        for (std::size_t b = 0; b < n2; ++b) {
            Variable v{"(" + s1.id(a) + "," + s2.id(b) + ")", {}};
            for (const auto& x : s1.variable(a).values)
                for (const auto& y : s2.variable(b).values) v.values.push_back("(" + x + "," + y + ")");
            vars.push_back(std::move(v));
        }
    std::vector<ArrowSpec> arrows;
    for (std::size_t a = 0; a < n1; ++a)
        for (std::size_t b = 0; b < n2; ++b) {
            const std::size_t k1 = s1.value_count(a), k2 = s2.value_count(b);
            for (const auto& [x, y] : s1.hasse()) {
                if (x != a) continue;
                std::vector<int> m(k1 * k2);
                for (std::size_t u = 0; u < k1; ++u)
                    for (std::size_t v = 0; v < k2; ++v) m[u * k2 + v] = static_cast<int>(s1.map(a, y)[u] * k2 + v);
                arrows.push_back({a * n2 + b, y * n2 + b, std::move(m)});
            }
            for (const auto& [x, y] : s2.hasse()) {
                if (x != b) continue;
                const std::size_t ky = s2.value_count(y);
                std::vector<int> m(k1 * k2);
                for (std::size_t u = 0; u < k1; ++u)
                    for (std::size_t v = 0; v < k2; ++v) m[u * k2 + v] = static_cast<int>(u * ky + s2.map(b, y)[v]);
                arrows.push_back({a * n2 + b, a * n2 + y, std::move(m)});
            }
        }
    ProductStructure p;
    p.n2 = n2;
    p.structure = InfoStructure(std::move(vars), arrows, s1.terminal() * n2 + s2.terminal());
    for (std::size_t a = 0; a < n1; ++a)
        for (std::size_t b = 0; b < n2; ++b) {
            const std::size_t k1 = s1.value_count(a), k2 = s2.value_count(b);
            std::vector<int> v1(k1 * k2), v2(k1 * k2);
            for (std::size_t u = 0; u < k1; ++u)
                for (std::size_t v = 0; v < k2; ++v) {
                    v1[u * k2 + v] = static_cast<int>(u);
                    v2[u * k2 + v] = static_cast<int>(v);
                }
            p.proj1.object_map.push_back(a);
            p.proj1.value_maps.push_back(std::move(v1));
            p.proj2.object_map.push_back(b);
            p.proj2.value_maps.push_back(std::move(v2));
        }
    return p;
}

StructureMorphism pairing(const ProductStructure& p, const InfoStructure&, const InfoStructure& s2,
                          const StructureMorphism& f1, const StructureMorphism& f2, const InfoStructure& t) {
    StructureMorphism m;
    for (std::size_t i = 0; i < t.size(); ++i) {
        std::size_t a = f1.object_map[i], b = f2.object_map[i];
        m.object_map.push_back(a * p.n2 + b);
        const std::size_t k2 = s2.value_count(b);
        std::vector<int> vm(t.value_count(i));
        for (std::size_t x = 0; x < vm.size(); ++x)
            vm[x] = static_cast<int>(f1.value_maps[i][x] * k2 + f2.value_maps[i][x]);
        m.value_maps.push_back(std::move(vm));
    }
    return m;
}

CoproductStructure coproduct_structure(const InfoStructure& s1, const InfoStructure& s2) {
    std::vector<Variable> vars{s1.variable(s1.terminal())};
    CoproductStructure c;
    c.inj1.object_map.assign(s1.size(), 0);
    c.inj2.object_map.assign(s2.size(), 0);
    for (std::size_t i = 0; i < s1.size(); ++i) {
        if (i == s1.terminal()) continue;
        c.inj1.object_map[i] = vars.size();
        vars.push_back(s1.variable(i));
    }
    for (std::size_t i = 0; i < s2.size(); ++i) {
        if (i == s2.terminal()) continue;
        for (const auto& v : vars)
            if (v.id == s2.id(i))
                throw StructuralInputError("id '" + v.id + "' occurs in both structures; rename before the coproduct");
        c.inj2.object_map[i] = vars.size();
        vars.push_back(s2.variable(i));
    }
    std::vector<ArrowSpec> arrows;
    for (const auto& [a, b] : s1.hasse()) arrows.push_back({c.inj1.object_map[a], c.inj1.object_map[b], s1.map(a, b)});
    for (const auto& [a, b] : s2.hasse()) arrows.push_back({c.inj2.object_map[a], c.inj2.object_map[b], s2.map(a, b)});
    for (std::size_t i = 0; i < s1.size(); ++i) c.inj1.value_maps.push_back(identity_map(s1.value_count(i)));
    for (std::size_t i = 0; i < s2.size(); ++i) c.inj2.value_maps.push_back(identity_map(s2.value_count(i)));
    c.structure = InfoStructure(std::move(vars), arrows, 0);
    return c;
}

StructureMorphism coproduct_to_product(const CoproductStructure& c, const ProductStructure& p,
                                       const InfoStructure& s1, const InfoStructure& s2) {
    StructureMorphism m;
    m.object_map.assign(c.structure.size(), 0);
    m.value_maps.assign(c.structure.size(), {});
    for (std::size_t i = 0; i < s1.size(); ++i) {
        std::size_t o = c.inj1.object_map[i];
        m.object_map[o] = i * p.n2 + s2.terminal();
        m.value_maps[o] = identity_map(s1.value_count(i));
    }
    for (std::size_t i = 0; i < s2.size(); ++i) {
        std::size_t o = c.inj2.object_map[i];
        if (i == s2.terminal()) continue;
        m.object_map[o] = s1.terminal() * p.n2 + i;
        m.value_maps[o] = identity_map(s2.value_count(i));
    }
    return m;
}

// -------------------------------------------------------------- minimal objects

std::size_t MinimalReport::component_of(std::size_t object) const {
    for (std::size_t c = 0; c < components.size(); ++c)
        if (std::find(components[c].begin(), components[c].end(), object) != components[c].end()) return c;
    throw std::out_of_range("object is not in any component");
}

MinimalReport analyze_minimal(const InfoStructure& s) {
    MinimalReport r;
    const std::size_t n = s.size(), t = s.terminal();
    for (std::size_t i = 0; i < n; ++i) {
        bool minimal = true;
        for (std::size_t j = 0; j < n && minimal; ++j)
            if (j != i && s.arrow(j, i)) minimal = false;
        if (!minimal) continue;
        MinimalObject mo{i, {}};
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t y = x + 1; y < n; ++y) {
                if (x == i || y == i || x == t || y == t) continue;
                auto m = s.meet(x, y);
                if (m && *m == i) mo.factorizations.emplace_back(x, y);
            }
        r.minimal.push_back(std::move(mo));
    }
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> root = [&](std::size_t a) {
        return parent[a] == a ? a : parent[a] = root(parent[a]);
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != t && j != t && s.arrow(i, j)) parent[root(i)] = root(j);
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < n; ++i)
        if (i != t) groups[root(i)].push_back(i);
    for (auto& [k, g] : groups) r.components.push_back(std::move(g));
    std::sort(r.components.begin(), r.components.end());
    return r;
}

}  // namespace infocoh
