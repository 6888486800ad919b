#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "infocoh/cochain.hpp"
#include "infocoh/probability.hpp"
#include "infocoh/structure.hpp"

namespace infocoh {

using Json = nlohmann::ordered_json;

// Malformed structure file; the message carries the file and a byte offset or JSON pointer.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ParsedSpec {
    std::string kind;
    InfoStructure structure;
    ProbabilityFunctor q;
};

ParsedSpec parse_spec(const Json& doc, const std::string& origin = "<input>");
ParsedSpec parse_spec_text(const std::string& text, const std::string& origin = "<input>");
ParsedSpec load_spec(const std::string& path);

// abstract-kind document for any structure; parse_spec reads it back
Json structure_to_json(const InfoStructure& s, const ProbabilityFunctor* q = nullptr);

std::string format_double(double v);  // shortest round-trip decimal

template <class V>
Json cochain_to_json(const Cochain<V>& f);
// reads the format written by cochain_to_json; tables absent from the document stay zero
template <class V>
Cochain<V> cochain_from_json(const Json& doc, std::shared_ptr<const GridContext> ctx, AlphaParam alpha,
                             const std::string& origin = "<cochain>");

}  // namespace infocoh
