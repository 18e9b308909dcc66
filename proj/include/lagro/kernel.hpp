#pragma once

#include "lagro/matrix.hpp"

namespace lagro {

/// True iff every square submatrix has determinant in {-1, 0, 1}. The empty
/// matrix is totally unimodular. Exhaustive, so only meant for small inputs.
bool is_totally_unimodular(const Mat& m);

/// Bound on the entries of any vertex of {w >= 0 : A w = b}:
/// m! * ||b|| * ||A||^(m-1) with ||.|| the largest absolute entry and m the
/// row count of A. Throws ConditionViolation unless A and b are integral.
Scalar vertex_bound(const Mat& a, const Vec& b);

}  // namespace lagro
