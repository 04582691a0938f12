#pragma once

#include "ud/problem.hpp"

namespace ud {

// f(x) = 1/2 (x - center)^T D (x - center) with a diagonal D whose entries
// interpolate linearly from mu to L, so both extreme curvatures are attained
// and the (mu, L) pair is exact without any eigen-solve. For dimension 1 this
// forces mu == L.
Problem make_quadratic_problem(std::size_t dimension, double mu, double L,
                               Vec center);

}  // namespace ud
