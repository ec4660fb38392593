#pragma once

#include <json.hpp>

#include <string>

#include "poly.hpp"

namespace pnsurf {

using Json = nlohmann::json;

// Parses JSON with every number captured as its raw token string, so
// decimal literals can be rationalized by place value instead of going
// through double.
Json parse_json_exact(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

Rational rational_from_json(const Json& j);
int int_from_json(const Json& j);
Json poly_to_json(const BivariatePoly& p);
BivariatePoly poly_from_json(const Json& j);
Json vec3q_to_json(const Vec3Q& v);
Vec3Q vec3q_from_json(const Json& j);
Json polyvec_to_json(const PolyVec3& p);
PolyVec3 polyvec_from_json(const Json& j);

// FNV-1a 64-bit, hex-encoded; used for provenance hashes.
std::string fnv1a_hex(const std::string& data);

} // namespace pnsurf
