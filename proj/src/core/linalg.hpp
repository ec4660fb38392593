#pragma once

#include <vector>

#include "rational.hpp"

namespace pnsurf {

using QVector = std::vector<Rational>;
using QMatrix = std::vector<QVector>;

// Exact kernel basis of M (possibly empty). Basis vectors satisfy
// M * v = 0 exactly; their count is cols - rank.
std::vector<QVector> nullspace(const QMatrix& M);

size_t matrix_rank(QMatrix M);

Rational det3(const Mat3Q& M);

// Cramer solve of a 3x3 system; throws ErrorCode::singular_matrix when
// det(M) = 0.
Vec3Q solve3(const Mat3Q& M, const Vec3Q& b);

} // namespace pnsurf
