#pragma once

#include <string>

#include "treesym/classify.hpp"
#include "treesym/nielsen.hpp"
#include "treesym/rooted.hpp"

namespace treesym {

// JSON documents as strings; the schemas are documented in the README.
// Vertices serialize as digit strings, the empty string being t0.

std::string classification_to_json(const Classification& c);

std::string rooted_to_json(const RootedAut& g);
RootedAut rooted_from_json(const std::string& text);

std::string verdict_to_json(const Verdict& v);

}  // namespace treesym
