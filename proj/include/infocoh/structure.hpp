#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <tuple>
#include <string>
#include <utility>
#include <vector>

#include "infocoh/exec.hpp"
#include "infocoh/partition.hpp"

namespace infocoh {

struct Variable {
    std::string id;
    std::vector<std::string> values;
};

// Arrow as given in input: map[i] is the target value index of source value i.
struct ArrowSpec {
    std::size_t source = 0;
    std::size_t target = 0;
    std::vector<int> map;
};

// Present when the structure came from partitions of a finite set.
struct ConcreteData {
    std::vector<std::string> omega;
    std::vector<Partition> partitions;  // one per object
};

// A problem found while closing the arrow set under composition; reported by
// validate_structure rather than thrown.
struct ClosureIssue {
    std::size_t source = 0;
    std::size_t target = 0;
    std::string what;
};

class InfoStructure {
public:
    InfoStructure() = default;
    InfoStructure(std::vector<Variable> variables, const std::vector<ArrowSpec>& arrows, std::size_t terminal,
                  std::optional<ConcreteData> concrete = std::nullopt);

    std::size_t size() const { return vars_.size(); }
    const Variable& variable(std::size_t i) const { return vars_[i]; }
    const std::string& id(std::size_t i) const { return vars_[i].id; }
    std::size_t value_count(std::size_t i) const { return vars_[i].values.size(); }
    std::size_t terminal() const { return terminal_; }
    std::size_t index_of(const std::string& id) const;  // throws StructuralInputError
    std::optional<std::size_t> find(const std::string& id) const;

    // i -> j (reflexive)
    bool arrow(std::size_t i, std::size_t j) const { return reach_[i * vars_.size() + j] != 0; }
    // value map of the arrow i -> j; identity for i == j
    const std::vector<int>& map(std::size_t i, std::size_t j) const;
    // covering arrows
    const std::vector<std::pair<std::size_t, std::size_t>>& hasse() const { return hasse_; }
    const std::vector<ArrowSpec>& given_arrows() const { return given_; }
    const std::vector<ClosureIssue>& closure_issues() const { return issues_; }

    // greatest common lower bound, when unique
    std::optional<std::size_t> meet(std::size_t i, std::size_t j) const;
    // whether some object refines both
    bool have_common_refiner(std::size_t i, std::size_t j) const;
    // product of a list of objects through iterated meets; empty list gives the terminal
    std::optional<std::size_t> product(const std::vector<std::size_t>& objs) const;

    // longest chain of non-identity arrows
    std::size_t height() const { return height_; }
    const std::optional<ConcreteData>& concrete() const { return concrete_; }

private:
    std::vector<Variable> vars_;
    std::vector<ArrowSpec> given_;
    std::size_t terminal_ = 0;
    std::vector<char> reach_;
    std::vector<std::vector<int>> maps_;
    std::vector<std::pair<std::size_t, std::size_t>> hasse_;
    std::vector<ClosureIssue> issues_;
    std::vector<std::int64_t> meet_;  // -1: no common lower bound, -2: no greatest one
    std::size_t height_ = 0;
    std::optional<ConcreteData> concrete_;
};

// Builders.
InfoStructure build_concrete_structure(const std::vector<std::string>& omega,
                                       const std::vector<std::pair<std::string, Partition>>& generators, bool close);
InfoStructure build_simplicial_structure(const std::vector<std::pair<std::string, std::size_t>>& vertices,
                                         const std::vector<std::vector<std::string>>& faces);
InfoStructure build_abstract_structure(std::vector<Variable> variables,
                                       const std::vector<std::tuple<std::string, std::string, std::vector<std::pair<std::string, std::string>>>>& arrows,
                                       const std::string& terminal);
InfoStructure terminal_only_structure(const std::string& id = "1");
// same structure with `suffix` appended to every non-terminal id
InfoStructure renamed(const InfoStructure& s, const std::string& suffix);

struct AxiomVerdict {
    std::string name;
    bool pass = true;
    std::string witness;
};

struct ValidationReport {
    std::vector<AxiomVerdict> axioms;
    std::size_t height = 0;
    std::size_t section_count = 0;
    bool all_pass() const;
    const AxiomVerdict& axiom(const std::string& name) const;
};

ValidationReport validate_structure(const InfoStructure& s);

using Section = std::vector<int>;  // value index per object
std::vector<Section> limit_sections(const InfoStructure& s, Exec exec = Exec::serial);

struct StructureMorphism {
    std::vector<std::size_t> object_map;
    std::vector<std::vector<int>> value_maps;
};

struct MorphismReport {
    std::vector<AxiomVerdict> checks;
    bool embedding = false;
    bool all_pass() const;
};

MorphismReport validate_morphism(const StructureMorphism& phi, const InfoStructure& s, const InfoStructure& t);
StructureMorphism identity_morphism(const InfoStructure& s);
StructureMorphism compose(const StructureMorphism& g, const StructureMorphism& f);  // g after f

struct ClassicalModel {
    std::vector<std::string> omega;
    std::vector<Partition> rho;                 // per object
    std::vector<std::vector<int>> value_block;  // per object: value index -> block of rho
};

struct ModelCheck {
    bool injective = true;
    bool bijective_values = true;
    bool functorial = true;
    bool meets_to_products = true;
    std::string witness;
    bool ok() const { return injective && bijective_values && functorial && meets_to_products; }
};

ModelCheck check_model(const InfoStructure& s, const ClassicalModel& m);

struct InducedModel {
    std::optional<ClassicalModel> model;
    std::optional<std::pair<std::size_t, std::size_t>> collision;
    std::string diagnosis;
};

InducedModel induced_model(const InfoStructure& s);
// the model carried by a concrete structure
ClassicalModel concrete_model(const InfoStructure& s);

struct ProductStructure {
    InfoStructure structure;
    StructureMorphism proj1, proj2;
    std::size_t n2 = 0;  // object (a,b) has index a*n2+b
};

ProductStructure product_structure(const InfoStructure& s1, const InfoStructure& s2);
// <f1,f2>: T -> S1 x S2
StructureMorphism pairing(const ProductStructure& p, const InfoStructure& s1, const InfoStructure& s2,
                          const StructureMorphism& f1, const StructureMorphism& f2, const InfoStructure& t);

struct CoproductStructure {
    InfoStructure structure;
    StructureMorphism inj1, inj2;
};

CoproductStructure coproduct_structure(const InfoStructure& s1, const InfoStructure& s2);
// coproduct -> product: X in S1 goes to <X,1>, X in S2 to <1,X>
StructureMorphism coproduct_to_product(const CoproductStructure& c, const ProductStructure& p,
                                       const InfoStructure& s1, const InfoStructure& s2);

ClassicalModel product_model(const InfoStructure& s1, const InfoStructure& s2, const ClassicalModel& m1,
                             const ClassicalModel& m2);
ClassicalModel coproduct_model(const InfoStructure& s1, const InfoStructure& s2, const ClassicalModel& m1,
                               const ClassicalModel& m2);

struct MinimalObject {
    std::size_t object = 0;
    std::vector<std::pair<std::size_t, std::size_t>> factorizations;  // X<Y with meet(X,Y) = object
};

struct MinimalReport {
    std::vector<MinimalObject> minimal;
    std::vector<std::vector<std::size_t>> components;  // of S minus the terminal
    std::size_t component_of(std::size_t object) const;
};

MinimalReport analyze_minimal(const InfoStructure& s);

}  // namespace infocoh
