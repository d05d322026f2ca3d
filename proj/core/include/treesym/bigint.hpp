#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace treesym {

// Group orders overflow 64 bits already for modest rooted shapes.
using BigInt = boost::multiprecision::cpp_int;

}  // namespace treesym
