#pragma once

#include <filesystem>
#include <string>

#include "gnd/instance.hpp"

namespace gnd {

// Parse the instance document format:
//   {resources:[{id, cost}], graph:{directed, nodes, edges:[{id, from, to}]},
//    requests:[{weights|demand, replies}]}
// Cost records are tagged: {kind:"dos", sigma, xi, alpha}, {kind:"power", c,
// alpha}, {kind:"rep", sigma, terms:[{xi, alpha}]}. Unknown kinds are
// rejected. Throws ValidationError on malformed or invariant-breaking input.
Instance parse_instance(const std::string& json_text);
Instance load_instance(const std::filesystem::path& path);

std::string instance_to_json(const Instance& inst);
void save_instance(const Instance& inst, const std::filesystem::path& path);

} // namespace gnd
