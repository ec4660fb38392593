#include "grid_io.hpp"

#include <cmath>

namespace pnsurf {

namespace {

Vec3Q mat_vec(const Mat3Q& m, const Vec3Q& v) {
    return {dot(m[0], v), dot(m[1], v), dot(m[2], v)};
}

Mat3Q mat_mul(const Mat3Q& a, const Mat3Q& b) {
    Mat3Q r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            Rational s(0);
            for (int k = 0; k < 3; ++k) s += a[i][k] * b[k][j];
            r[i][j] = s;
        }
    return r;
}

bool is_identity(const Mat3Q& m) {
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (m[i][j] != (i == j ? 1 : 0)) return false;
    return true;
}

Mat3Q transpose(const Mat3Q& m) {
    Mat3Q r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r[i][j] = m[j][i];
    return r;
}

void require_rotation(const Mat3Q& r) {
    if (!is_identity(mat_mul(transpose(r), r)))
        throw Error(ErrorCode::parse, "stored rotation is not exactly orthogonal");
    if (det3(r) != 1)
        throw Error(ErrorCode::parse, "stored rotation must have determinant +1");
}

// reflection through the plane orthogonal to w
Mat3Q reflection(const Vec3Q& w) {
    Mat3Q r;
    Rational ww = norm2(w);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            Rational e = (i == j) ? 1 : 0;
            r[i][j] = e - 2 * w[i] * w[j] / ww;
        }
    return r;
}

} // namespace

HermiteGrid grid_from_json(const Json& j, double eps_pole, bool check_poles) {
    if (!j.is_object()) throw Error(ErrorCode::parse, "grid file must be a JSON object");
    HermiteGrid g;
    if (!j.contains("rows") || !j.contains("cols"))
        throw Error(ErrorCode::parse, "grid file needs 'rows' and 'cols'");
    g.rows = int_from_json(j.at("rows"));
    g.cols = int_from_json(j.at("cols"));
    if (g.rows < 2 || g.cols < 2)
        throw Error(ErrorCode::parse, "grid must have at least 2 rows and 2 cols");

    auto read_matrix = [&](const char* name) {
        if (!j.contains(name))
            throw Error(ErrorCode::parse, std::string("grid file needs '") + name + "'");
        const Json& rowsj = j.at(name);
        if (!rowsj.is_array() || static_cast<int>(rowsj.size()) != g.rows)
            throw Error(ErrorCode::parse, std::string("'") + name + "' must have rows lines");
        std::vector<Vec3Q> out;
        for (const Json& rowj : rowsj) {
            if (!rowj.is_array() || static_cast<int>(rowj.size()) != g.cols)
                throw Error(ErrorCode::parse, std::string("'") + name + "' row width mismatch");
            for (const Json& e : rowj) out.push_back(vec3q_from_json(e));
        }
        return out;
    };
    g.points = read_matrix("points");
    g.normals = read_matrix("normals");
    for (size_t i = 0; i < g.normals.size(); ++i)
        if (is_zero(g.normals[i]))
            throw Error(ErrorCode::parse, "zero normal at flat index " + std::to_string(i));

    if (j.contains("tangent_scales") && !j.at("tangent_scales").is_null()) {
        const Json& sj = j.at("tangent_scales");
        if (!sj.is_array() || static_cast<int>(sj.size()) != g.rows)
            throw Error(ErrorCode::parse, "'tangent_scales' shape mismatch");
        for (const Json& rowj : sj) {
            if (!rowj.is_array() || static_cast<int>(rowj.size()) != g.cols)
                throw Error(ErrorCode::parse, "'tangent_scales' shape mismatch");
            for (const Json& e : rowj) {
                if (!e.is_array() || e.size() != 2)
                    throw Error(ErrorCode::parse, "tangent scale entries are pairs");
                Rational su = rational_from_json(e[0]), sv = rational_from_json(e[1]);
                if (su <= 0 || sv <= 0)
                    throw Error(ErrorCode::parse, "tangent scales must be positive");
                g.tangent_scales.push_back({su, sv});
            }
        }
    } else {
        g.init_default_scales();
    }

    if (j.contains("rotation") && !j.at("rotation").is_null()) {
        const Json& rj = j.at("rotation");
        if (!rj.is_array() || rj.size() != 3)
            throw Error(ErrorCode::parse, "rotation must be a 3x3 matrix");
        Mat3Q r;
        for (int i = 0; i < 3; ++i) r[i] = vec3q_from_json(rj[i]);
        require_rotation(r);
        for (auto& p : g.points) p = mat_vec(r, p);
        for (auto& n : g.normals) n = mat_vec(r, n);
    }

    if (check_poles) check_pole_proximity(g, eps_pole);
    return g;
}

HermiteGrid load_grid(const std::string& path, double eps_pole, bool check_poles) {
    return grid_from_json(parse_json_exact(read_text_file(path)), eps_pole, check_poles);
}

Json grid_to_json(const HermiteGrid& g) {
    Json j;
    j["rows"] = g.rows;
    j["cols"] = g.cols;
    auto dump_matrix = [&](const std::vector<Vec3Q>& m) {
        Json rows = Json::array();
        for (int i = 0; i < g.rows; ++i) {
            Json row = Json::array();
            for (int jj = 0; jj < g.cols; ++jj) row.push_back(vec3q_to_json(m[g.idx(i, jj)]));
            rows.push_back(std::move(row));
        }
        return rows;
    };
    j["points"] = dump_matrix(g.points);
    j["normals"] = dump_matrix(g.normals);
    Json scales = Json::array();
    for (int i = 0; i < g.rows; ++i) {
        Json row = Json::array();
        for (int jj = 0; jj < g.cols; ++jj) {
            const auto& s = g.scale(i, jj);
            row.push_back(Json::array({rational_to_string(s[0]), rational_to_string(s[1])}));
        }
        scales.push_back(std::move(row));
    }
    j["tangent_scales"] = std::move(scales);
    return j;
}

void save_grid(const HermiteGrid& g, const std::string& path) {
    write_text_file(path, grid_to_json(g).dump(2) + "\n");
}

std::string grid_hash(const HermiteGrid& g) {
    return fnv1a_hex(grid_to_json(g).dump());
}

AutoRotateResult auto_rotate(const HermiteGrid& g, double eps_pole) {
    Vec3d mean{0, 0, 0};
    for (const Vec3Q& n : g.normals) {
        Vec3Q u = exact_unit_normal(n);
        mean = mean + to_double(u);
    }
    double len = norm(mean);
    if (len < 1e-9)
        throw Error(ErrorCode::still_near_pole,
                    "normals have no dominant direction; cannot rotate away from the pole");
    mean = (1.0 / len) * mean;

    Vec3Q q;
    if (mean.z >= 1.0 - 1e-9) {
        q = {Rational(0), Rational(0), Rational(1)};
    } else {
        q = exact_unit_normal(
            {rationalize(mean.x, 1e-13), rationalize(mean.y, 1e-13), rationalize(mean.z, 1e-13)});
    }

    const Vec3Q e{Rational(0), Rational(0), Rational(-1)};
    Mat3Q rot;
    Vec3Q w = q - e;
    if (is_zero(w)) {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) rot[i][j] = (i == j) ? 1 : 0;
    } else {
        Mat3Q h1 = reflection(w);
        Vec3Q d = w - dot(w, e) * e;
        if (is_zero(d)) d = {Rational(1), Rational(0), Rational(0)};
        Mat3Q h2 = reflection(d);
        rot = mat_mul(h2, h1);
    }

    AutoRotateResult res;
    res.rotation = rot;
    res.grid = g;
    for (auto& p : res.grid.points) p = mat_vec(rot, p);
    for (auto& n : res.grid.normals) n = mat_vec(rot, n);
    try {
        check_pole_proximity(res.grid, eps_pole);
    } catch (const Error&) {
        throw Error(ErrorCode::still_near_pole,
                    "Gauss image still touches (0,0,1) after rotation; the normals spread too "
                    "widely");
    }
    return res;
}

std::vector<std::array<Rational, 2>> load_scales(const std::string& path, int rows, int cols) {
    Json j = parse_json_exact(read_text_file(path));
    if (!j.is_object() || !j.contains("tangent_scales"))
        throw Error(ErrorCode::parse, "scales file needs 'tangent_scales'");
    if (j.contains("rows") && int_from_json(j.at("rows")) != rows)
        throw Error(ErrorCode::parse, "scales file row count does not match the grid");
    if (j.contains("cols") && int_from_json(j.at("cols")) != cols)
        throw Error(ErrorCode::parse, "scales file col count does not match the grid");
    const Json& sj = j.at("tangent_scales");
    if (!sj.is_array() || static_cast<int>(sj.size()) != rows)
        throw Error(ErrorCode::parse, "'tangent_scales' shape mismatch");
    std::vector<std::array<Rational, 2>> out;
    for (const Json& rowj : sj) {
        if (!rowj.is_array() || static_cast<int>(rowj.size()) != cols)
            throw Error(ErrorCode::parse, "'tangent_scales' shape mismatch");
        for (const Json& e : rowj) {
            if (!e.is_array() || e.size() != 2)
                throw Error(ErrorCode::parse, "tangent scale entries are pairs");
            Rational su = rational_from_json(e[0]), sv = rational_from_json(e[1]);
            if (su <= 0 || sv <= 0)
                throw Error(ErrorCode::parse, "tangent scales must be positive");
            out.push_back({su, sv});
        }
    }
    return out;
}

Json scales_to_json(const std::vector<std::array<Rational, 2>>& scales, int rows, int cols) {
    Json j;
    j["rows"] = rows;
    j["cols"] = cols;
    Json arr = Json::array();
    for (int i = 0; i < rows; ++i) {
        Json row = Json::array();
        for (int c = 0; c < cols; ++c) {
            const auto& s = scales[i * cols + c];
            row.push_back(Json::array({rational_to_string(s[0]), rational_to_string(s[1])}));
        }
        arr.push_back(std::move(row));
    }
    j["tangent_scales"] = std::move(arr);
    return j;
}

} // namespace pnsurf
