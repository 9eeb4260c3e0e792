#pragma once

#include <vector>

#include "tq/rational.hpp"

namespace tq {

/// Z-basis of the integer points in the rational row span of `rows`.
std::vector<IntVec> saturated_basis(const std::vector<Vec>& rows, std::size_t n);

/// Z-basis of {x in Z^n : c x = 0} for a rational matrix c.
std::vector<IntVec> integer_kernel(const Mat& c);

/// LLL reduction (delta = 3/4) of linearly independent integer vectors.
std::vector<IntVec> lll_reduce(std::vector<IntVec> basis);

}  // namespace tq
