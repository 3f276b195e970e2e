#pragma once

#include <span>
#include <vector>

namespace telab::oracle {

// Euclidean projection onto the probability simplex {x >= 0, sum x = 1}
// by sort-and-threshold. Input must be nonempty.
std::vector<double> project_simplex(std::span<const double> v);

}  // namespace telab::oracle
