#pragma once

#include <optional>

#include "json_util.hpp"
#include "patchwork.hpp"

namespace pnsurf {

// Parses a grid file. Exact "p/q" strings and decimal literals both load
// exactly; an optional stored rotation (exact orthogonal, det +1) is applied
// to points and normals. The pole-proximity check runs unless the caller
// plans to auto-rotate.
HermiteGrid load_grid(const std::string& path, double eps_pole = kDefaultPoleEps,
                      bool check_poles = true);
HermiteGrid grid_from_json(const Json& j, double eps_pole = kDefaultPoleEps,
                           bool check_poles = true);

Json grid_to_json(const HermiteGrid& g);
void save_grid(const HermiteGrid& g, const std::string& path);

// Canonical serialization hash, used for bundle provenance.
std::string grid_hash(const HermiteGrid& g);

struct AutoRotateResult {
    HermiteGrid grid;
    Mat3Q rotation; // exact orthogonal, det +1
};

// Rotates the data set so the mean unit normal goes to (0,0,-1), using an
// exact rational rotation within 1e-12 of the floating-point one. Throws
// ErrorCode::still_near_pole when the Gauss image cannot avoid (0,0,1).
AutoRotateResult auto_rotate(const HermiteGrid& g, double eps_pole = kDefaultPoleEps);

// Scales file: {"rows": r, "cols": c, "tangent_scales": [[...], ...]}.
std::vector<std::array<Rational, 2>> load_scales(const std::string& path, int rows, int cols);
Json scales_to_json(const std::vector<std::array<Rational, 2>>& scales, int rows, int cols);

} // namespace pnsurf
