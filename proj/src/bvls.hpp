#pragma once

#include <vector>

namespace logwave {

// Bounded-variable least squares: minimize ||A z - y||_2 subject to
// lo <= z <= hi (entries may be +-infinity). Primal active-set method in
// the style of Stark & Parker / Lawson-Hanson, with constraint release,
// driven by the precomputed normal equations.
//
//   gram:   n x n matrix A^T A, row-major
//   rhs:    A^T y
//
// Returns the solution vector. Variables pinned at a bound are set to the
// bound value exactly. The result is the unique QP optimum whenever the
// free-column Gram blocks stay positive definite.
std::vector<double> bvls_solve(const std::vector<double>& gram,
                               const std::vector<double>& rhs,
                               const std::vector<double>& lo,
                               const std::vector<double>& hi);

} // namespace logwave
