#include "infocoh/spec_io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>
#include <algorithm>

namespace infocoh {

namespace {

[[noreturn]] void fail(const std::string& origin, const std::string& where, const std::string& what) {
    throw InputError(origin + ": at " + (where.empty() ? std::string("/") : where) + ": " + what);
}

const Json& member(const Json& obj, const char* key, const std::string& origin, const std::string& where) {
    if (!obj.is_object()) fail(origin, where, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(origin, where, std::string("missing \"") + key + "\"");
    return *it;
}

std::string str_at(const Json& v, const std::string& origin, const std::string& where) {
    if (!v.is_string()) fail(origin, where, "expected a string");
    return v.get<std::string>();
}

const Json& array_at(const Json& v, const std::string& origin, const std::string& where) {
    if (!v.is_array()) fail(origin, where, "expected an array");
    return v;
}

std::string ptr(const std::string& base, const std::string& key) { return base + "/" + key; }
std::string ptr(const std::string& base, std::size_t i) { return base + "/" + std::to_string(i); }

InfoStructure parse_concrete(const Json& doc, const std::string& origin) {
    const Json& om = array_at(member(doc, "omega", origin, ""), origin, "/omega");
    std::vector<std::string> omega;
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < om.size(); ++i) {
        std::string label = om[i].is_string() ? om[i].get<std::string>() : om[i].dump();
        if (!index.emplace(label, i).second) fail(origin, ptr("/omega", i), "duplicate point \"" + label + "\"");
        omega.push_back(std::move(label));
    }
    const Json& parts = array_at(member(doc, "partitions", origin, ""), origin, "/partitions");
    std::vector<std::pair<std::string, Partition>> gens;
    for (std::size_t k = 0; k < parts.size(); ++k) {
        const std::string base = ptr("/partitions", k);
        const std::string id = str_at(member(parts[k], "id", origin, base), origin, ptr(base, "id"));
        const Json& blocks = array_at(member(parts[k], "blocks", origin, base), origin, ptr(base, "blocks"));
        std::vector<std::vector<std::size_t>> idx;
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            const std::string bp = ptr(ptr(base, "blocks"), b);
            std::vector<std::size_t> block;
            for (std::size_t e = 0; e < array_at(blocks[b], origin, bp).size(); ++e) {
                const Json& el = blocks[b][e];
                const std::string label = el.is_string() ? el.get<std::string>() : el.dump();
                auto it = index.find(label);
                if (it == index.end()) fail(origin, ptr(bp, e), "\"" + label + "\" is not a point of omega");
                block.push_back(it->second);
            }
            idx.push_back(std::move(block));
        }
        try {
            gens.emplace_back(id, canonical_partition(idx, omega.size()));
        } catch (const StructuralInputError& e) {
            fail(origin, ptr(base, "blocks"), e.what());
        }
    }
    bool close = true;
    if (auto it = doc.find("close"); it != doc.end()) {
        if (!it->is_boolean()) fail(origin, "/close", "expected a boolean");
        close = it->get<bool>();
    }
    return build_concrete_structure(omega, gens, close);
}

InfoStructure parse_abstract(const Json& doc, const std::string& origin) {
    const Json& vars = array_at(member(doc, "variables", origin, ""), origin, "/variables");
    std::vector<Variable> variables;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        const std::string base = ptr("/variables", i);
        Variable v;
        v.id = str_at(member(vars[i], "id", origin, base), origin, ptr(base, "id"));
        const Json& vals = array_at(member(vars[i], "values", origin, base), origin, ptr(base, "values"));
        for (std::size_t j = 0; j < vals.size(); ++j) v.values.push_back(str_at(vals[j], origin, ptr(ptr(base, "values"), j)));
        variables.push_back(std::move(v));
    }
    std::vector<std::tuple<std::string, std::string, std::vector<std::pair<std::string, std::string>>>> arrows;
    if (auto it = doc.find("arrows"); it != doc.end()) {
        const Json& arr = array_at(*it, origin, "/arrows");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string base = ptr("/arrows", i);
            const std::string from = str_at(member(arr[i], "from", origin, base), origin, ptr(base, "from"));
            const std::string to = str_at(member(arr[i], "to", origin, base), origin, ptr(base, "to"));
            const Json& m = member(arr[i], "map", origin, base);
            if (!m.is_object()) fail(origin, ptr(base, "map"), "expected an object of value pairs");
            std::vector<std::pair<std::string, std::string>> pairs;
            for (auto e = m.begin(); e != m.end(); ++e)
                pairs.emplace_back(e.key(), str_at(e.value(), origin, ptr(ptr(base, "map"), e.key())));
            arrows.emplace_back(from, to, std::move(pairs));
        }
    }
    const std::string terminal = str_at(member(doc, "terminal", origin, ""), origin, "/terminal");
    return build_abstract_structure(std::move(variables), arrows, terminal);
}

InfoStructure parse_simplicial(const Json& doc, const std::string& origin) {
    const Json& vs = array_at(member(doc, "vertices", origin, ""), origin, "/vertices");
    std::vector<std::pair<std::string, std::size_t>> vertices;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        const std::string base = ptr("/vertices", i);
        const std::string id = str_at(member(vs[i], "id", origin, base), origin, ptr(base, "id"));
        const Json& c = member(vs[i], "cardinality", origin, base);
        if (!c.is_number_integer() || c.get<long>() < 1)
            fail(origin, ptr(base, "cardinality"), "expected a positive integer");
        vertices.emplace_back(id, c.get<std::size_t>());
    }
    const Json& fs = array_at(member(doc, "faces", origin, ""), origin, "/faces");
    std::vector<std::vector<std::string>> faces;
    for (std::size_t i = 0; i < fs.size(); ++i) {
        std::vector<std::string> f;
        const Json& face = array_at(fs[i], origin, ptr("/faces", i));
        for (std::size_t j = 0; j < face.size(); ++j) f.push_back(str_at(face[j], origin, ptr(ptr("/faces", i), j)));
        faces.push_back(std::move(f));
    }
    return build_simplicial_structure(vertices, faces);
}

ProbabilityFunctor parse_q(const Json& doc, const InfoStructure& s, const std::string& origin) {
    ProbabilityFunctor q = ProbabilityFunctor::full(s);
    auto it = doc.find("Q");
    if (it == doc.end()) return q;
    if (it->is_string()) {
        if (it->get<std::string>() != "full") fail(origin, "/Q", "expected \"full\" or an object");
        return q;
    }
    if (!it->is_object()) fail(origin, "/Q", "expected \"full\" or an object");
    for (auto e = it->begin(); e != it->end(); ++e) {
        const std::string base = ptr("/Q", e.key());
        auto obj = s.find(e.key());
        if (!obj) fail(origin, base, "unknown variable \"" + e.key() + "\"");
        const Variable& var = s.variable(*obj);
        if (var.values.size() > 64) fail(origin, base, "restricted supports need at most 64 values");
        const Json& sup = array_at(member(e.value(), "maximal_supports", origin, base), origin,
                                   ptr(base, "maximal_supports"));
        std::vector<std::uint64_t> masks;
        for (std::size_t i = 0; i < sup.size(); ++i) {
            const std::string sp = ptr(ptr(base, "maximal_supports"), i);
            std::uint64_t mask = 0;
            for (std::size_t j = 0; j < array_at(sup[i], origin, sp).size(); ++j) {
                const std::string label = str_at(sup[i][j], origin, ptr(sp, j));
                auto at = std::find(var.values.begin(), var.values.end(), label);
                if (at == var.values.end()) fail(origin, ptr(sp, j), "\"" + label + "\" is not a value of " + var.id);
                mask |= std::uint64_t{1} << (at - var.values.begin());
            }
            if (mask == 0) fail(origin, sp, "empty support");
            masks.push_back(mask);
        }
        q.q[*obj] = SupportComplex::from_supports(std::move(masks));
    }
    return q;
}

}  // namespace

ParsedSpec parse_spec(const Json& doc, const std::string& origin) {
    if (!doc.is_object()) fail(origin, "", "expected an object");
    ParsedSpec out;
    out.kind = str_at(member(doc, "kind", origin, ""), origin, "/kind");
    try {
        if (out.kind == "concrete")
            out.structure = parse_concrete(doc, origin);
        else if (out.kind == "abstract")
            out.structure = parse_abstract(doc, origin);
        else if (out.kind == "simplicial")
            out.structure = parse_simplicial(doc, origin);
        else
            fail(origin, "/kind", "unknown kind \"" + out.kind + "\"");
    } catch (const StructuralInputError& e) {
        throw InputError(origin + ": " + e.what());
    }
    out.q = parse_q(doc, out.structure, origin);
    return out;
}

ParsedSpec parse_spec_text(const std::string& text, const std::string& origin) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw InputError(origin + ": byte " + std::to_string(e.byte) + ": malformed JSON (" + e.what() + ")");
    }
    return parse_spec(doc, origin);
}

ParsedSpec load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_spec_text(ss.str(), path);
}

Json structure_to_json(const InfoStructure& s, const ProbabilityFunctor* q) {
    Json doc;
    doc["kind"] = "abstract";
    Json vars = Json::array();
    for (std::size_t i = 0; i < s.size(); ++i) vars.push_back({{"id", s.id(i)}, {"values", s.variable(i).values}});
    doc["variables"] = std::move(vars);
    Json arrows = Json::array();
    for (const auto& [a, b] : s.hasse()) {
        Json m = Json::object();
        const auto& map = s.map(a, b);
        for (std::size_t v = 0; v < map.size(); ++v)
            m[s.variable(a).values[v]] = s.variable(b).values[static_cast<std::size_t>(map[v])];
        arrows.push_back({{"from", s.id(a)}, {"to", s.id(b)}, {"map", std::move(m)}});
    }
    doc["arrows"] = std::move(arrows);
    doc["terminal"] = s.id(s.terminal());
    if (q) {
        Json qj = Json::object();
        for (std::size_t i = 0; i < s.size(); ++i) {
            const SupportComplex& c = q->at(i);
            if (c.full) continue;
            Json sups = Json::array();
            for (auto mask : c.maximal) {
                Json face = Json::array();
                for (std::size_t v = 0; v < s.value_count(i); ++v)
                    if (mask >> v & 1u) face.push_back(s.variable(i).values[v]);
                sups.push_back(std::move(face));
            }
            qj[s.id(i)] = {{"maximal_supports", std::move(sups)}};
        }
        if (qj.empty())
            doc["Q"] = "full";
        else
            doc["Q"] = std::move(qj);
    }
    return doc;
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {
std::string value_string(const ExactReal& v) { return v.str(); }
std::string value_string(double v) { return format_double(v); }
}  // namespace

template <class V>
Json cochain_to_json(const Cochain<V>& f) {
    Json doc;
    doc["degree"] = f.degree();
    doc["alpha"] = f.alpha().value;
    Json tables = Json::object();
    const GridContext& ctx = f.context();
    for (std::size_t slot = 0; slot < f.slot_count(); ++slot) {
        const std::size_t prod = f.product(slot);
        if (prod == Cochain<V>::npos) continue;
        Json t = Json::object();
        const auto& laws = ctx.laws(prod);
        for (std::size_t i = 0; i < laws.size(); ++i) t[laws[i].key()] = value_string(f.table(slot)[i]);
        tables[f.tuple_name(slot)] = std::move(t);
    }
    doc["tables"] = std::move(tables);
    return doc;
}

namespace {
void parse_value(const std::string& s, ExactReal& v) { v = ExactReal::parse(s); }
void parse_value(const std::string& s, double& v) { v = std::stod(s); }
}  // namespace

template <class V>
Cochain<V> cochain_from_json(const Json& doc, std::shared_ptr<const GridContext> ctx, AlphaParam alpha,
                             const std::string& origin) {
    const Json& deg = member(doc, "degree", origin, "");
    if (!deg.is_number_integer() || deg.get<int>() < 0) fail(origin, "/degree", "expected a nonnegative integer");
    Cochain<V> f(ctx, alpha, deg.get<int>());
    const InfoStructure& s = ctx->structure();
    const Json& tables = member(doc, "tables", origin, "");
    if (!tables.is_object()) fail(origin, "/tables", "expected an object");
    for (auto t = tables.begin(); t != tables.end(); ++t) {
        const std::string base = ptr("/tables", t.key());
        const std::string& key = t.key();
        if (key.size() < 2 || key.front() != '[' || key.back() != ']') fail(origin, base, "tuple keys look like [X|Y]");
        std::vector<std::size_t> tuple;
        const std::string inner = key.substr(1, key.size() - 2);
        if (!inner.empty()) {
            std::stringstream ss(inner);
            std::string id;
            while (std::getline(ss, id, '|')) {
                auto obj = s.find(id);
                if (!obj) fail(origin, base, "unknown variable \"" + id + "\"");
                tuple.push_back(*obj);
            }
        }
        std::size_t slot = 0;
        try {
            slot = f.slot(tuple);
        } catch (const CochainError& e) {
            fail(origin, base, e.what());
        }
        const std::size_t prod = f.product(slot);
        if (prod == Cochain<V>::npos) fail(origin, base, "the tuple has no product");
        if (!t.value().is_object()) fail(origin, base, "expected an object of law values");
        for (auto e = t.value().begin(); e != t.value().end(); ++e) {
            const std::string lp = ptr(base, e.key());
            try {
                const std::size_t law = ctx->index_of(parse_law(prod, e.key()));
                parse_value(str_at(e.value(), origin, lp), f.table(slot).at(law));
            } catch (const InputError&) {
                throw;
            } catch (const std::exception& ex) {
                fail(origin, lp, ex.what());
            }
        }
    }
    return f;
}

template Cochain<ExactReal> cochain_from_json(const Json&, std::shared_ptr<const GridContext>, AlphaParam,
                                              const std::string&);
template Cochain<double> cochain_from_json(const Json&, std::shared_ptr<const GridContext>, AlphaParam,
                                           const std::string&);

template Json cochain_to_json(const Cochain<ExactReal>&);
template Json cochain_to_json(const Cochain<double>&);

}  // namespace infocoh
