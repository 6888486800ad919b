#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include <CLI11.hpp>

#include "infocoh/cohomology.hpp"
#include "infocoh/funceq.hpp"
#include "infocoh/spec_io.hpp"

using namespace infocoh;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Options {
    std::vector<std::string> inputs;
    std::vector<double> alphas{1.0};
    int n = 4;
    double tol = 1e-10;
    std::string format = "text";
    std::uint64_t seed = 1;
    std::string out;

    std::string law;
    std::string cochain;
    std::string save_cochain;
    std::vector<int> bounds;
    std::vector<std::string> alpha_text, bounds_text;
    std::size_t samples = 0;
    std::int64_t max_den = 50;
    std::vector<std::int64_t> fraction;
};

struct Outcome {
    Json result = Json::object();
    std::ostringstream text;
    int code = 0;
    std::string method;
};

// structure file that fails an axiom: exit 2 with the failing names
class ValidationFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

template <class T>
std::vector<T> split_list(const std::vector<std::string>& items, const char* what) {
    std::vector<T> out;
    for (const auto& item : items) {
        std::stringstream ss(item);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            std::size_t used = 0;
            T v{};
            try {
                if constexpr (std::is_same_v<T, double>)
                    v = std::stod(tok, &used);
                else
                    v = std::stoi(tok, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || used != tok.size()) throw std::invalid_argument(std::string("bad ") + what + " '" + tok + "'");
            out.push_back(v);
        }
    }
    return out;
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string yes(bool b) { return b ? "yes" : "no"; }

const std::string& need_input(const Options& o, std::size_t i = 0) {
    if (o.inputs.size() <= i) throw std::invalid_argument("missing input file");
    return o.inputs[i];
}

Json validation_json(const ValidationReport& r) {
    Json axioms = Json::array();
    for (const auto& a : r.axioms) axioms.push_back({{"name", a.name}, {"pass", a.pass}, {"witness", a.witness}});
    return {{"all_pass", r.all_pass()}, {"axioms", axioms}, {"height", r.height}, {"sections", r.section_count}};
}

std::string failing_axioms(const ValidationReport& r) {
    std::string names;
    for (const auto& a : r.axioms)
        if (!a.pass) names += (names.empty() ? "" : "; ") + a.name + " (" + a.witness + ")";
    return names;
}

ParsedSpec load_checked(const Options& o, std::size_t i = 0) {
    const std::string& path = need_input(o, i);
    ParsedSpec p = load_spec(path);
    auto r = validate_structure(p.structure);
    if (!r.all_pass()) throw ValidationFailure(path + ": validation failed: " + failing_axioms(r));
    auto ad = check_adapted(p.structure, p.q, o.n);
    if (!ad.ok()) throw AdaptednessError(path + ": Q is not adapted: " + ad.witness);
    return p;
}

std::shared_ptr<const GridContext> grid(const ParsedSpec& p, int n) {
    return std::make_shared<const GridContext>(p.structure, p.q, n);
}

std::string section_str(const InfoStructure& s, const Section& sec) {
    std::string out = "(";
    for (std::size_t i = 0; i < sec.size(); ++i) {
        if (i) out += ", ";
        out += s.variable(i).values[sec[i]];
    }
    return out + ")";
}

Json ids(const InfoStructure& s, const std::vector<std::size_t>& objs) {
    Json a = Json::array();
    for (auto o : objs) a.push_back(s.id(o));
    return a;
}

Json residual_json(const Residual& r) {
    return {{"max_abs", r.max_abs}, {"exact_zero", r.exact_zero}, {"worst_tuple", r.tuple}, {"worst_law", r.law}};
}

// ---------------------------------------------------------------- structure commands

void cmd_validate(const Options& o, Outcome& out) {
    const std::string& path = need_input(o);
    ParsedSpec p = load_spec(path);
    auto r = validate_structure(p.structure);
    auto ad = check_adapted(p.structure, p.q, o.n);
    out.method = "exhaustive axiom check; adaptedness on grid laws";
    out.result["kind"] = p.kind;
    out.result["objects"] = p.structure.size();
    out.result["validation"] = validation_json(r);
    out.result["adapted"] = {{"ok", ad.ok()}, {"laws_checked", ad.laws_checked}, {"witness", ad.witness}};
    out.text << path << ": " << p.structure.size() << " objects, height " << r.height << ", " << r.section_count
             << " sections\n";
    for (const auto& a : r.axioms)
        out.text << "  " << (a.pass ? "pass " : "FAIL ") << a.name << (a.pass ? "" : "  " + a.witness) << "\n";
    out.text << "  Q adapted at N=" << o.n << ": " << yes(ad.ok()) << (ad.ok() ? "" : "  " + ad.witness) << "\n";
    if (!r.all_pass()) {
        std::cerr << "validation failed: " << failing_axioms(r) << "\n";
        out.code = 2;
    } else if (!ad.ok()) {
        std::cerr << "Q is not adapted: " << ad.witness << "\n";
        out.code = 2;
    }
}

void cmd_limit(const Options& o, Outcome& out) {
    ParsedSpec p = load_checked(o);
    const auto& s = p.structure;
    auto sections = limit_sections(s, Exec::parallel);
    out.method = "enumeration of compatible families";
    Json objs = Json::array();
    for (std::size_t i = 0; i < s.size(); ++i) objs.push_back(s.id(i));
    Json secs = Json::array();
    out.text << sections.size() << " sections over objects (";
    for (std::size_t i = 0; i < s.size(); ++i) out.text << (i ? ", " : "") << s.id(i);
    out.text << ")\n";
    for (const auto& sec : sections) {
        Json row = Json::array();
        for (std::size_t i = 0; i < sec.size(); ++i) row.push_back(s.variable(i).values[sec[i]]);
        secs.push_back(std::move(row));
        out.text << "  " << section_str(s, sec) << "\n";
    }
    out.result["objects"] = std::move(objs);
    out.result["count"] = sections.size();
    out.result["sections"] = std::move(secs);
}

// runs on structures that fail the axioms as well, so that a collision can still be reported
void cmd_model(const Options& o, Outcome& out) {
    const std::string& path = need_input(o);
    ParsedSpec p = load_spec(path);
    const auto& s = p.structure;
    auto r = validate_structure(s);
    auto sections = limit_sections(s, Exec::parallel);
    auto im = induced_model(s);
    out.method = "model on the inverse limit";
    out.result["validation"] = validation_json(r);
    if (!r.all_pass()) {
        std::cerr << "validation failed: " << failing_axioms(r) << "\n";
        out.text << "axioms failing: " << failing_axioms(r) << "\n";
        out.code = 2;
    }
    out.result["limit_size"] = sections.size();
    out.result["induced_model"] = static_cast<bool>(im.model);
    out.result["diagnosis"] = im.diagnosis;
    if (im.collision)
        out.result["collision"] = {s.id(im.collision->first), s.id(im.collision->second)};
    out.text << "|lim E| = " << sections.size() << "\n";
    if (im.model) {
        auto chk = check_model(s, *im.model);
        out.result["model_check"] = {{"ok", chk.ok()}, {"witness", chk.witness}};
        out.text << "induced model over lim E: " << (chk.ok() ? "valid" : "INVALID " + chk.witness) << "\n";
        if (!chk.ok() && out.code == 0) out.code = 1;
    } else {
        out.text << "no model over lim E: " << im.diagnosis << "\n";
    }
    if (s.concrete()) {
        auto cm = concrete_model(s);
        auto chk = check_model(s, cm);
        out.result["omega_size"] = cm.omega.size();
        out.result["omega_equals_limit"] = cm.omega.size() == sections.size();
        out.text << "|Omega| = " << cm.omega.size() << (cm.omega.size() == sections.size() ? " = " : " != ")
                 << "|lim E|\n";
        if (!chk.ok() && out.code == 0) out.code = 1;
    }
}

void describe_pair(Outcome& out, const InfoStructure& s, std::size_t lim1, std::size_t lim2,
                   const std::vector<std::pair<std::string, MorphismReport>>& maps, bool product) {
    auto r = validate_structure(s);
    auto sections = limit_sections(s, Exec::parallel);
    const std::size_t expect = lim1 * lim2;
    out.result["objects"] = s.size();
    out.result["validation"] = validation_json(r);
    out.result["limit_size"] = sections.size();
    out.result["factor_limit_sizes"] = {lim1, lim2};
    Json ms = Json::object();
    bool maps_ok = true;
    for (const auto& [name, m] : maps) {
        ms[name] = {{"valid", m.all_pass()}, {"embedding", m.embedding}};
        maps_ok &= m.all_pass();
    }
    out.result["morphisms"] = std::move(ms);
    out.result["structure"] = structure_to_json(s);
    out.text << (product ? "product" : "coproduct") << ": " << s.size() << " objects, axioms "
             << (r.all_pass() ? "pass" : "FAIL: " + failing_axioms(r)) << "\n";
    out.text << "  |lim E| = " << sections.size() << " (factors " << lim1 << " x " << lim2 << ")\n";
    out.text << "  structure maps valid: " << yes(maps_ok) << "\n";
    if (!r.all_pass() || !maps_ok || sections.size() != expect) out.code = 1;
}

void cmd_product(const Options& o, Outcome& out) {
    ParsedSpec a = load_checked(o, 0), b = load_checked(o, 1);
    auto p = product_structure(a.structure, b.structure);
    out.method = "categorical product";
    describe_pair(out, p.structure, limit_sections(a.structure).size(), limit_sections(b.structure).size(),
                  {{"proj1", validate_morphism(p.proj1, p.structure, a.structure)},
                   {"proj2", validate_morphism(p.proj2, p.structure, b.structure)}},
                  true);
}

void cmd_coproduct(const Options& o, Outcome& out) {
    ParsedSpec a = load_checked(o, 0), b = load_checked(o, 1);
    bool clash = false;
    for (std::size_t i = 0; i < b.structure.size(); ++i)
        clash |= i != b.structure.terminal() && a.structure.find(b.structure.id(i)).has_value();
    if (clash) b.structure = renamed(b.structure, "'");
    auto c = coproduct_structure(a.structure, b.structure);
    auto p = product_structure(a.structure, b.structure);
    out.method = "categorical coproduct (terminal objects identified)";
    describe_pair(out, c.structure, limit_sections(a.structure).size(), limit_sections(b.structure).size(),
                  {{"inj1", validate_morphism(c.inj1, a.structure, c.structure)},
                   {"inj2", validate_morphism(c.inj2, b.structure, c.structure)},
                   {"to_product", validate_morphism(coproduct_to_product(c, p, a.structure, b.structure), c.structure,
                                                    p.structure)}},
                  false);
}

// ---------------------------------------------------------------- entropy and cochains

void cmd_entropy(const Options& o, Outcome& out) {
    if (o.law.empty()) throw std::invalid_argument("entropy needs --law w1,w2,...");
    std::vector<Rational> w;
    {
        std::stringstream ss(o.law);
        std::string item;
        while (std::getline(ss, item, ',')) w.push_back(Rational::parse(item));
    }
    RationalLaw p = make_law(0, std::move(w));
    out.method = "closed form";
    out.result["law"] = p.key();
    Json vals = Json::array();
    for (double a : o.alphas) {
        AlphaParam alpha(a);
        Json v = {{"alpha", a}, {"value", entropy(a, p)}};
        out.text << "S_" << num(a) << "(" << p.key() << ") = " << num(entropy(a, p));
        if (alpha.exact) {
            auto e = shannon_exact(p);
            v["exact"] = e.str();
            out.text << "  [" << e.str() << "]";
        }
        out.text << "\n";
        vals.push_back(std::move(v));
    }
    out.result["values"] = std::move(vals);
}

template <class V>
Cochain<V> input_or_entropy(const Options& o, std::shared_ptr<const GridContext> ctx, AlphaParam alpha) {
    if (o.cochain.empty()) return entropy_cochain<V>(ctx, alpha);
    std::ifstream in(o.cochain);
    if (!in) throw InputError(o.cochain + ": cannot open file");
    std::stringstream buf;
    buf << in.rdbuf();
    Json doc;
    try {
        doc = Json::parse(buf.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(o.cochain + ": byte " + std::to_string(e.byte) + ": malformed JSON");
    }
    return cochain_from_json<V>(doc, ctx, alpha, o.cochain);
}

template <class V>
Json cocycle_for(const Options& o, std::shared_ptr<const GridContext> ctx, AlphaParam alpha, Outcome& out) {
    auto f = input_or_entropy<V>(o, ctx, alpha);
    auto r = cocycle_residual(f, Exec::parallel);
    const bool pass = alpha.exact ? r.exact_zero : r.max_abs <= o.tol;
    if (!o.save_cochain.empty()) {
        std::ofstream(o.save_cochain) << cochain_to_json(f).dump(2) << "\n";
    }
    out.text << "alpha=" << num(alpha.value) << ": " << (o.cochain.empty() ? "S_alpha" : o.cochain) << " degree "
             << f.degree() << ", residual " << (alpha.exact && r.exact_zero ? "0 (exact)" : num(r.max_abs)) << " -> "
             << (pass ? "cocycle" : "not a cocycle") << "\n";
    if (o.cochain.empty() && !pass) out.code = 1;
    Json j = residual_json(r);
    j["alpha"] = alpha.value;
    j["exact"] = alpha.exact;
    j["cocycle"] = pass;
    return j;
}

void cmd_cocycle_check(const Options& o, Outcome& out) {
    ParsedSpec p = load_checked(o);
    auto ctx = grid(p, o.n);
    out.method = o.cochain.empty() ? "entropy cochain, coboundary on grid" : "input cochain, coboundary on grid";
    Json runs = Json::array();
    for (double a : o.alphas) {
        AlphaParam alpha(a);
        runs.push_back(alpha.exact ? cocycle_for<ExactReal>(o, ctx, alpha, out) : cocycle_for<double>(o, ctx, alpha, out));
    }
    out.result["runs"] = std::move(runs);
}

void cmd_h0(const Options& o, Outcome& out) {
    ParsedSpec p = load_checked(o);
    auto ctx = grid(p, o.n);
    out.method = "constants versus the non-atomic obstruction";
    Json runs = Json::array();
    for (double a : o.alphas) {
        auto h = h0_compute(*ctx, AlphaParam(a));
        runs.push_back({{"alpha", a}, {"dimension", h.dimension}, {"witness", h.witness}});
        out.text << "alpha=" << num(a) << ": dim H0 = " << h.dimension << "  (" << h.witness << ")\n";
    }
    out.result["runs"] = std::move(runs);
}

// ---------------------------------------------------------------- Z1 / H1

Json dims_json(const GridDimensions& d) {
    Json j = {{"unknowns", d.unknowns}, {"rows", d.rows},   {"rank", d.rank},
              {"z1", d.z1},             {"b1", d.b1},       {"h1", d.h1},
              {"exact", d.exact}};
    if (d.exact)
        j["pivot_bits"] = d.pivot_bits;
    else {
        j["singular_gap"] = d.gap;
        j["gap_warning"] = d.gap_warning;
    }
    return j;
}

void print_dims(std::ostream& os, const GridDimensions& d) {
    os << "  grid: " << d.unknowns << " unknowns, " << d.rows << " rows, rank " << d.rank << " ("
       << (d.exact ? "exact" : "SVD") << ")\n";
    os << "  dim Z1_grid = " << d.z1 << ", dim B1_grid = " << d.b1 << ", dim H1_grid = " << d.h1 << "\n";
    if (!d.exact && d.gap_warning) os << "  warning: singular value gap " << num(d.gap) << " is small\n";
}

Json concordance_json(const Options& o, const ParsedSpec& p, Outcome& out) {
    auto c = grid_concordance(p.structure, p.q, o.bounds);
    out.text << "concordance (alpha=1, exact) over N = ";
    for (std::size_t i = 0; i < c.bounds.size(); ++i) out.text << (i ? "," : "") << c.bounds[i];
    out.text << "\n";
    Json rows = Json::array();
    for (std::size_t i = 0; i < c.bounds.size(); ++i) {
        rows.push_back({{"N", c.bounds[i]}, {"z1", c.grid_dims[i]}, {"projected", c.projected_dims[i]}});
        out.text << "  N=" << c.bounds[i] << ": dim Z1_grid " << c.grid_dims[i] << ", projected to N=" << c.bounds[0]
                 << ": " << c.projected_dims[i] << "\n";
    }
    out.text << "  non-increasing: " << yes(c.non_increasing) << ", projections solve base rows: "
             << yes(c.projections_solve_base) << "\n";
    if (!c.non_increasing || !c.projections_solve_base) out.code = 1;
    return {{"bounds", rows}, {"non_increasing", c.non_increasing}, {"projections_solve_base", c.projections_solve_base}};
}

void cmd_z1(const Options& o, Outcome& out) {
    ParsedSpec p = load_checked(o);
    auto ctx = grid(p, o.n);
    out.method = "Z1 system on grid; exact Bareiss rank at alpha=1, SVD otherwise";
    Json runs = Json::array();
    for (double a : o.alphas) {
        AlphaParam alpha(a);
        auto sys = assemble_z1_system(*ctx, alpha, Exec::parallel);
        auto d = z1_h1_dimensions(sys, *ctx);
        out.text << "alpha=" << num(a) << ":\n";
        print_dims(out.text, d);
        Json j = dims_json(d);
        j["alpha"] = a;
        runs.push_back(std::move(j));
    }
    out.result["runs"] = std::move(runs);
    if (!o.bounds.empty()) out.result["concordance"] = concordance_json(o, p, out);
}

Json chain_json(const InfoStructure& s, std::size_t w, const BlockChain& c) {
    Json blocks = Json::array();
    for (const auto& b : c.blocks) {
        Json cells = Json::array();
        for (auto [x, y] : b.cells) cells.push_back({x, y});
        blocks.push_back({{"row", b.row}, {"col", b.col}, {"cells", cells}});
    }
    return {{"object", s.id(w)}, {"x_order", c.x_order}, {"y_order", c.y_order}, {"blocks", blocks}};
}

Json prediction_json(const InfoStructure& s, const H1Prediction& h) {
    Json j = {{"kind", kind_name(h.kind)}, {"reason", h.reason}};
    if (h.kind == H1Prediction::Kind::finite) {
        j["dimension"] = h.dimension;
        j["components"] = h.components;
        Json certs = Json::array();
        for (const auto& [w, c] : h.certificates) certs.push_back(chain_json(s, w, c));
        j["certificates"] = certs;
    } else if (h.kind == H1Prediction::Kind::infinite) {
        j["irreducible"] = s.id(h.irreducible);
        j["chain"] = ids(s, h.chain);
        j["witness"] = h.witness;
    }
    return j;
}

void print_prediction(std::ostream& os, const InfoStructure& s, const H1Prediction& h) {
    os << "  structural H1: " << kind_name(h.kind);
    if (h.kind == H1Prediction::Kind::finite) os << ", dim " << h.dimension << " (" << h.components << " components)";
    if (h.kind == H1Prediction::Kind::infinite) {
        os << ", chain " << s.id(h.irreducible);
        for (auto c : h.chain) os << " -> " << s.id(c);
        os << ", witness " << h.witness;
    }
    os << "\n  reason: " << h.reason << "\n";
}

void cmd_predict_h1(const Options& o, Outcome& out) {
    ParsedSpec p = load_checked(o);
    out.method = "structure theorems (non-degenerate products, irreducible chains)";
    Json runs = Json::array();
    for (double a : o.alphas) {
        auto h = predict_h1(p.structure, p.q, AlphaParam(a));
        out.text << "alpha=" << num(a) << ":\n";
        print_prediction(out.text, p.structure, h);
        Json j = prediction_json(p.structure, h);
        j["alpha"] = a;
        runs.push_back(std::move(j));
    }
    out.result["runs"] = std::move(runs);
}

template <class V>
bool in_nullspace(const LinearSystem& sys, const Cochain<V>& f, double tol, SystemResidual* res = nullptr) {
    auto r = system_residual(sys, cochain_vector(sys, f));
    if (res) *res = r;
    return sys.exact ? r.exact_zero : r.max_abs <= tol;
}

template <class V>
Json h1_directions(const Options& o, std::shared_ptr<const GridContext> ctx, AlphaParam alpha, const LinearSystem& sys,
                   const H1Prediction& h, Outcome& out) {
    const InfoStructure& s = ctx->structure();
    Json j = Json::object();
    SystemResidual r;
    const bool ent = in_nullspace(sys, entropy_cochain<V>(ctx, alpha), o.tol, &r);
    j["entropy_in_nullspace"] = ent;
    j["entropy_residual"] = r.max_abs;
    out.text << "  S_alpha in grid nullspace: " << (ent ? "pass" : "FAIL") << " (residual "
             << (sys.exact && r.exact_zero ? "0 exact" : num(r.max_abs)) << ")\n";
    if (!ent) out.code = 1;

    Json comps = Json::array();
    for (const auto& comp : analyze_minimal(s).components) {
        const bool ok = in_nullspace(sys, component_entropy<V>(ctx, alpha, comp), o.tol);
        comps.push_back({{"objects", ids(s, comp)}, {"in_nullspace", ok}});
        if (!ok) out.code = 1;
    }
    j["component_entropies"] = std::move(comps);

    if (h.kind == H1Prediction::Kind::unknown) {
        // entropy supported on one maximal face of Q at a minimal object
        Json blocks = Json::array();
        for (const auto& m : analyze_minimal(s).minimal) {
            const auto& qw = ctx->functor().at(m.object);
            if (qw.full) continue;
            for (const auto& face : qw.faces(s.value_count(m.object))) {
                if (face.size() < 2) continue;
                const bool ok = in_nullspace(sys, restricted_entropy<V>(ctx, alpha, m.object, face), o.tol);
                Json cells = Json::array();
                for (auto c : face) cells.push_back(s.variable(m.object).values[c]);
                blocks.push_back({{"object", s.id(m.object)}, {"cells", cells}, {"in_nullspace", ok}});
                out.text << "  S_alpha restricted to " << s.id(m.object) << " face of " << face.size()
                         << " cells: " << (ok ? "in nullspace" : "not in nullspace") << "\n";
            }
        }
        j["face_entropies"] = std::move(blocks);
    }
    return j;
}

void cmd_h1(const Options& o, Outcome& out) {
    ParsedSpec p = load_checked(o);
    auto ctx = grid(p, o.n);
    out.method = "structure theorems plus grid Z1 system";
    Json runs = Json::array();
    for (double a : o.alphas) {
        AlphaParam alpha(a);
        auto h = predict_h1(p.structure, p.q, alpha);
        auto sys = assemble_z1_system(*ctx, alpha, Exec::parallel);
        auto d = z1_h1_dimensions(sys, *ctx);
        out.text << "alpha=" << num(a) << ":\n";
        print_prediction(out.text, p.structure, h);
        print_dims(out.text, d);
        Json j = {{"alpha", a}, {"structural", prediction_json(p.structure, h)}, {"grid", dims_json(d)}};
        Json dir = alpha.exact ? h1_directions<ExactReal>(o, ctx, alpha, sys, h, out)
                               : h1_directions<double>(o, ctx, alpha, sys, h, out);
        for (auto it = dir.begin(); it != dir.end(); ++it) j[it.key()] = it.value();
        // the component entropies always lie in the grid Z1, so a smaller grid H1 is an inconsistency
        const bool below = h.kind == H1Prediction::Kind::finite && d.h1 < h.dimension;
        j["grid_below_structural"] = below;
        if (below) {
            out.text << "  grid H1 " << d.h1 << " is below the structural " << h.dimension << "\n";
            out.code = 1;
        }
        auto ex = explain_nullspace(sys, *ctx);
        j["explained"] = {{"nullity", ex.nullity}, {"explained", ex.explained}, {"fraction", ex.fraction}};
        out.text << "  entropy span explains " << ex.explained << " of " << ex.nullity << " nullspace dimensions ("
                 << num(ex.fraction) << ")\n";
        runs.push_back(std::move(j));
    }
    out.result["runs"] = std::move(runs);
    if (!o.bounds.empty()) out.result["concordance"] = concordance_json(o, p, out);
}

template <class V>
Json fit_for(const Options& o, std::shared_ptr<const GridContext> ctx, AlphaParam alpha, Outcome& out) {
    auto f = input_or_entropy<V>(o, ctx, alpha);
    if (f.degree() != 1) throw InputError(o.cochain + ": fit-lambda needs a degree-1 cochain");
    auto fit = fit_entropy_multiples(f);
    const InfoStructure& s = ctx->structure();
    Json comps = Json::array();
    out.text << "alpha=" << num(alpha.value) << ":\n";
    for (std::size_t c = 0; c < fit.components.size(); ++c) {
        comps.push_back({{"objects", ids(s, fit.components[c])}, {"lambda", fit.lambda[c]}});
        out.text << "  component {";
        for (std::size_t k = 0; k < fit.components[c].size(); ++k)
            out.text << (k ? "," : "") << s.id(fit.components[c][k]);
        out.text << "}: lambda = " << num(fit.lambda[c]) << "\n";
    }
    out.text << "  residual " << num(fit.residual) << "\n";
    return {{"alpha", alpha.value}, {"components", comps}, {"residual", fit.residual}};
}

void cmd_fit_lambda(const Options& o, Outcome& out) {
    ParsedSpec p = load_checked(o);
    auto ctx = grid(p, o.n);
    out.method = "least squares against per-component S_alpha";
    Json runs = Json::array();
    for (double a : o.alphas) {
        AlphaParam alpha(a);
        runs.push_back(alpha.exact ? fit_for<ExactReal>(o, ctx, alpha, out) : fit_for<double>(o, ctx, alpha, out));
    }
    out.result["runs"] = std::move(runs);
}

// ---------------------------------------------------------------- functional equation, modular group

void cmd_funceq(const Options& o, Outcome& out) {
    out.method = "Farey grid system; closed form sampling; zero propagation";
    const std::size_t samples = o.samples ? o.samples : 10000;
    Json runs = Json::array();
    for (double a : o.alphas) {
        auto sys = assemble_funceq_system(a, o.n);
        auto d = funceq_dimensions(sys);
        auto r = funceq_entropy_residual(sys);
        auto cf = closed_form_check(a, 1.0, samples, o.seed);
        auto pr = symmetry_propagation(a, o.n);
        const bool ent_ok = sys.exact ? r.exact_zero : r.max_abs <= o.tol;
        const bool cf_ok = cf.max_residual <= o.tol;
        if (!ent_ok || !cf_ok) out.code = 1;
        Json attempts = Json::array();
        for (const auto& at : pr.attempts)
            attempts.push_back({{"ambient", at.ambient}, {"forced", at.forced}, {"covered", at.covered}});
        runs.push_back({{"alpha", a},
                        {"grid_points", sys.grid.points.size()},
                        {"system",
                         {{"rows", d.rows},
                          {"rank", d.rank},
                          {"nullity", d.nullity},
                          {"symmetric_nullity", d.symmetric_nullity},
                          {"exact", sys.exact}}},
                        {"s_alpha_residual", {{"max_abs", r.max_abs}, {"exact_zero", r.exact_zero}, {"pass", ent_ok}}},
                        {"closed_form", {{"samples", cf.samples}, {"max_residual", cf.max_residual}, {"pass", cf_ok}}},
                        {"propagation",
                         {{"grid_points", pr.grid_points},
                          {"forced", pr.forced},
                          {"covered", pr.covered},
                          {"ambient", pr.ambient},
                          {"attempts", attempts}}}});
        out.text << "alpha=" << num(a) << ", N=" << o.n << ": " << sys.grid.points.size() << " grid points, "
                 << d.rows << " rows, rank " << d.rank << ", nullity " << d.nullity << " (" << d.symmetric_nullity
                 << " with symmetry)\n";
        out.text << "  s_alpha residual " << (sys.exact && r.exact_zero ? "0 exact" : num(r.max_abs)) << " -> "
                 << (ent_ok ? "pass" : "FAIL") << "\n";
        out.text << "  closed form over " << cf.samples << " samples: max residual " << num(cf.max_residual) << " -> "
                 << (cf_ok ? "pass" : "FAIL") << "\n";
        out.text << "  u(x)=u(1-x) forced on " << pr.forced << "/" << pr.grid_points << " points"
                 << (pr.covered ? " at ambient M=" + std::to_string(pr.ambient) : " (inconclusive)") << "\n";
    }
    out.result["runs"] = std::move(runs);
}

Json identity_json(const IdentityCheck& c) {
    return {{"name", c.name}, {"pass", c.pass}, {"lhs", c.lhs}, {"rhs", c.rhs}};
}

void cmd_modular_check(const Options&, Outcome& out) {
    auto r = modular_group_check();
    out.method = "exact integer matrices modulo +-I";
    Json ids_ = Json::array(), sup = Json::array();
    std::size_t passed = 0;
    for (const auto& c : r.identities) {
        ids_.push_back(identity_json(c));
        passed += c.pass;
        out.text << "  " << (c.pass ? "pass " : "FAIL ") << c.name << "\n";
    }
    out.text << passed << "/" << r.identities.size() << " identities pass\n";
    out.text << "supplementary:\n";
    for (const auto& c : r.supplementary) {
        sup.push_back(identity_json(c));
        out.text << "  " << (c.pass ? "holds " : "fails ") << c.name << "  (lhs " << c.lhs << ")\n";
    }
    out.result["identities"] = std::move(ids_);
    out.result["passed"] = passed;
    out.result["supplementary"] = std::move(sup);
    if (!r.all_pass()) out.code = 1;
}

Json orbit_json(const OrbitWitness& w) {
    return {{"p", w.p},
            {"q", w.q},
            {"g", w.g.str()},
            {"st_word", w.st_word},
            {"word", w.word.str()},
            {"length", w.word.letters.size()},
            {"verified", w.verified}};
}

void cmd_orbit(const Options& o, Outcome& out) {
    out.method = "Euclidean S/T decomposition rewritten in A and B^2";
    std::vector<std::pair<std::int64_t, std::int64_t>> fracs;
    if (!o.fraction.empty()) {
        if (o.fraction.size() != 2) throw std::invalid_argument("orbit takes two integers p q");
        fracs.emplace_back(o.fraction[0], o.fraction[1]);
    }
    if (o.samples) {
        if (o.max_den < 1) throw std::invalid_argument("--max-den must be positive");
        std::mt19937_64 rng(o.seed);
        std::uniform_int_distribution<std::int64_t> den(1, o.max_den);
        while (fracs.size() < o.samples + (o.fraction.empty() ? 0 : 1)) {
            const std::int64_t q = den(rng);
            const std::int64_t p = std::uniform_int_distribution<std::int64_t>(0, q)(rng);
            if (std::gcd(p, q) == 1) fracs.emplace_back(p, q);
        }
    }
    if (fracs.empty()) throw std::invalid_argument("orbit needs p q or --samples");
    Json ws = Json::array();
    std::size_t ok = 0;
    for (auto [p, q] : fracs) {
        auto w = orbit_witness(p, q);
        ok += w.verified;
        ws.push_back(orbit_json(w));
        if (fracs.size() == 1 || !w.verified) {
            out.text << p << "/" << q << ": g = " << w.g.str() << "\n  S,T: " << w.st_word << "\n  A,B^2: " << w.word.str()
                     << "\n  verified: " << yes(w.verified) << "\n";
        }
    }
    out.text << ok << "/" << fracs.size() << " witnesses verified\n";
    out.result["witnesses"] = std::move(ws);
    out.result["verified"] = ok;
    out.result["total"] = fracs.size();
    if (ok != fracs.size()) out.code = 1;
}

// ---------------------------------------------------------------- driver

// the report still goes out, with the message in place of the result
void fail(Outcome& out, const std::exception& e, int code) {
    std::cerr << "error: " << e.what() << "\n";
    out.result = {{"error", e.what()}};
    out.text.str("");
    out.code = code;
}

Json header(const std::string& command, const Options& o, const std::string& method) {
    return {{"tool", "infocoh"}, {"version", kVersion}, {"command", command}, {"inputs", o.inputs},
            {"alpha", o.alphas}, {"N", o.n},           {"tol", o.tol},       {"seed", o.seed},
            {"method", method}};
}

void add_common(CLI::App* sub, Options& o, bool takes_files) {
    sub->add_option("--alpha", o.alpha_text, "comma-separated alpha values")->allow_extra_args(false);
    sub->add_option("--N", o.n, "denominator bound")->check(CLI::PositiveNumber);
    sub->add_option("--tol", o.tol, "tolerance for floating residuals")->check(CLI::PositiveNumber);
    sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--seed", o.seed, "seed for randomized searches");
    sub->add_option("--out", o.out, "write the JSON report to this path");
    if (takes_files) sub->add_option("inputs", o.inputs, "structure files");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Information cohomology on finite information structures"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    Options o;

    using Handler = void (*)(const Options&, Outcome&);
    struct Entry {
        const char* name;
        const char* help;
        Handler run;
        bool files;
    };
    const std::vector<Entry> entries = {
        {"validate", "check the structure axioms and adaptedness of Q", cmd_validate, true},
        {"limit", "list the sections of the inverse limit", cmd_limit, true},
        {"model", "classical model over the inverse limit", cmd_model, true},
        {"product", "product of two structures", cmd_product, true},
        {"coproduct", "coproduct of two structures", cmd_coproduct, true},
        {"entropy", "entropy of a law given with --law", cmd_entropy, false},
        {"cocycle-check", "cocycle residual of S_alpha or of --cochain", cmd_cocycle_check, true},
        {"h0", "dimension of H0", cmd_h0, true},
        {"z1", "grid Z1 system dimensions", cmd_z1, true},
        {"h1", "structural H1 with grid cross-checks", cmd_h1, true},
        {"predict-h1", "structural H1 verdict", cmd_predict_h1, true},
        {"fit-lambda", "fit per-component entropy multiples", cmd_fit_lambda, true},
        {"funceq", "fundamental functional equation on Farey grids", cmd_funceq, false},
        {"modular-check", "modular group identities", cmd_modular_check, false},
        {"orbit", "word in A and B^2 sending 0 to p/q", cmd_orbit, false},
    };
    std::vector<std::pair<CLI::App*, const Entry*>> subs;
    for (const auto& e : entries) {
        CLI::App* sub = app.add_subcommand(e.name, e.help);
        add_common(sub, o, e.files);
        const std::string name = e.name;
        if (name == "entropy") sub->add_option("--law", o.law, "weights, e.g. 1/2,1/3,1/6")->required();
        if (name == "cocycle-check" || name == "fit-lambda") sub->add_option("--cochain", o.cochain, "cochain JSON file");
        if (name == "cocycle-check") sub->add_option("--save-cochain", o.save_cochain, "write the checked cochain");
        if (name == "z1" || name == "h1")
            sub->add_option("--bounds", o.bounds_text, "grid bounds for the concordance check")->allow_extra_args(false);
        if (name == "funceq") sub->add_option("--samples", o.samples, "closed-form samples (default 10000)");
        if (name == "orbit") {
            sub->add_option("fraction", o.fraction, "p q");
            sub->add_option("--samples", o.samples, "random reduced fractions");
            sub->add_option("--max-den", o.max_den, "largest denominator for --samples");
        }
        subs.emplace_back(sub, &e);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    for (const auto& [sub, entry] : subs) {
        if (!sub->parsed()) continue;
        Outcome out;
        try {
            if (!o.alpha_text.empty()) o.alphas = split_list<double>(o.alpha_text, "alpha");
            o.bounds = split_list<int>(o.bounds_text, "bound");
            for (int b : o.bounds)
                if (b < 1) throw std::invalid_argument("bounds must be positive");
            for (double a : o.alphas)
                if (!(a > 0)) throw std::invalid_argument("alpha must be positive");
            entry->run(o, out);
        } catch (const ValidationFailure& e) {
            fail(out, e, 2);
        } catch (const InputError& e) {
            fail(out, e, 2);
        } catch (const StructuralInputError& e) {
            fail(out, e, 2);
        } catch (const AdaptednessError& e) {
            fail(out, e, 2);
        } catch (const std::invalid_argument& e) {
            fail(out, e, 2);
        } catch (const std::exception& e) {
            fail(out, e, 1);
        }
        Json report = header(entry->name, o, out.method);
        report["result"] = std::move(out.result);
        report["exit_code"] = out.code;
        const std::string json = report.dump(2) + "\n";
        if (!o.out.empty()) {
            std::ofstream f(o.out);
            if (!f) {
                std::cerr << "error: cannot write " << o.out << "\n";
                return 2;
            }
            f << json;
        }
        if (o.format == "json")
            std::cout << json;
        else
            std::cout << out.text.str();
        return out.code;
    }
    return 2;
}
