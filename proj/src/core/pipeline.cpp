#include "pipeline.hpp"

#include <atomic>
#include <cstdio>
#include <future>
#include <sstream>
#include <thread>

namespace pnsurf {

const BundlePatch& Bundle::at(int r, int c) const {
    for (const auto& p : patches)
        if (p.row == r && p.col == c) return p;
    throw Error(ErrorCode::parse,
                "bundle has no patch for cell (" + std::to_string(r) + "," + std::to_string(c) +
                    ")");
}

namespace {

int pick_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hc = std::thread::hardware_concurrency();
    return static_cast<int>(std::max(1u, std::min(hc, 4u)));
}

} // namespace

Bundle interpolate_grid(const HermiteGrid& g, int threads) {
    CoonsNetwork nw = build_network(g);

    Bundle b;
    b.grid = g;
    b.source_hash = grid_hash(g);
    b.offset = 0;

    int n = nw.cell_rows * nw.cell_cols;
    std::vector<PnPatch> patches(n);
    int nthreads = pick_threads(threads);
    std::vector<std::future<void>> futs;
    std::atomic<int> next{0};
    for (int t = 0; t < std::min(nthreads, n); ++t) {
        futs.push_back(std::async(std::launch::async, [&]() {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1))
                patches[i] = envelope_patch(nw.patches[i].surface);
        }));
    }
    for (auto& f : futs) f.get();

    b.patches.reserve(n);
    for (int r = 0; r < nw.cell_rows; ++r)
        for (int c = 0; c < nw.cell_cols; ++c)
            b.patches.push_back({r, c, std::move(patches[r * nw.cell_cols + c])});
    return b;
}

Bundle offset_bundle(const Bundle& b, const Rational& d) {
    Bundle out = b;
    out.offset = b.offset + d;
    for (auto& p : out.patches) p.patch = offset_patch(p.patch, d);
    return out;
}

Json bundle_to_json(const Bundle& b) {
    Json j;
    j["format"] = "pnsurf-bundle";
    j["version"] = b.version;
    j["offset"] = rational_to_string(b.offset);
    Json prov;
    prov["grid_hash"] = b.source_hash;
    prov["library"] = kLibraryVersion;
    j["provenance"] = std::move(prov);
    j["grid"] = grid_to_json(b.grid);
    Json patches = Json::array();
    for (const auto& p : b.patches) {
        Json pj;
        pj["cell"] = Json::array({p.row, p.col});
        pj["normal_num"] = polyvec_to_json(p.patch.normal_num);
        pj["support_num"] = poly_to_json(p.patch.support_num);
        pj["nh_den"] = poly_to_json(p.patch.nh_den);
        pj["point_num"] = polyvec_to_json(p.patch.point_num);
        pj["point_den"] = poly_to_json(p.patch.point_den);
        pj["offset"] = rational_to_string(p.patch.offset);
        if (p.patch.has_source) pj["coons"] = polyvec_to_json(p.patch.source);
        patches.push_back(std::move(pj));
    }
    j["patches"] = std::move(patches);
    return j;
}

Bundle bundle_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("format") || j.at("format") != "pnsurf-bundle")
        throw Error(ErrorCode::parse, "not a pnsurf bundle file");
    Bundle b;
    b.version = j.value("version", std::string(kLibraryVersion));
    b.offset = j.contains("offset") ? rational_from_json(j.at("offset")) : Rational(0);
    if (j.contains("provenance") && j.at("provenance").contains("grid_hash"))
        b.source_hash = j.at("provenance").at("grid_hash").get<std::string>();
    b.grid = grid_from_json(j.at("grid"), kDefaultPoleEps, false);
    for (const Json& pj : j.at("patches")) {
        BundlePatch p;
        p.row = int_from_json(pj.at("cell")[0]);
        p.col = int_from_json(pj.at("cell")[1]);
        p.patch.normal_num = polyvec_from_json(pj.at("normal_num"));
        p.patch.support_num = poly_from_json(pj.at("support_num"));
        p.patch.nh_den = poly_from_json(pj.at("nh_den"));
        p.patch.point_num = polyvec_from_json(pj.at("point_num"));
        p.patch.point_den = poly_from_json(pj.at("point_den"));
        p.patch.offset = pj.contains("offset") ? rational_from_json(pj.at("offset")) : Rational(0);
        if (pj.contains("coons")) {
            p.patch.source = polyvec_from_json(pj.at("coons"));
            p.patch.has_source = true;
        }
        b.patches.push_back(std::move(p));
    }
    return b;
}

void save_bundle(const Bundle& b, const std::string& path) {
    write_text_file(path, bundle_to_json(b).dump(2) + "\n");
}

Bundle load_bundle(const std::string& path) {
    return bundle_from_json(parse_json_exact(read_text_file(path)));
}

VerifyOutcome verify_bundle(const Bundle& b, int g1_samples, double g1_tol, int threads) {
    VerifyOutcome out;
    int nthreads = pick_threads(threads);

    out.certificates.resize(b.patches.size());
    {
        std::vector<std::future<void>> futs;
        std::atomic<size_t> next{0};
        size_t n = b.patches.size();
        for (size_t t = 0; t < std::min(static_cast<size_t>(nthreads), n); ++t) {
            futs.push_back(std::async(std::launch::async, [&]() {
                for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                    const auto& p = b.patches[i];
                    std::string id =
                        "cell(" + std::to_string(p.row) + "," + std::to_string(p.col) + ")";
                    out.certificates[i] = verify_pn(p.patch, id, 1);
                }
            }));
        }
        for (auto& f : futs) f.get();
    }
    for (const auto& c : out.certificates) out.all_exact_pn = out.all_exact_pn && c.exact_pn;

    // interior shared edges
    int rows = 0, cols = 0;
    for (const auto& p : b.patches) {
        rows = std::max(rows, p.row + 1);
        cols = std::max(cols, p.col + 1);
    }
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) {
                VerifyOutcome::Edge e;
                e.cell_a = {r, c};
                e.cell_b = {r, c + 1};
                e.report = check_g1_cells(b.at(r, c).patch, e.cell_a, b.at(r, c + 1).patch,
                                          e.cell_b, g1_samples, g1_tol);
                out.all_g1 = out.all_g1 && e.report.pass;
                out.edges.push_back(std::move(e));
            }
            if (r + 1 < rows) {
                VerifyOutcome::Edge e;
                e.cell_a = {r, c};
                e.cell_b = {r + 1, c};
                e.report = check_g1_cells(b.at(r, c).patch, e.cell_a, b.at(r + 1, c).patch,
                                          e.cell_b, g1_samples, g1_tol);
                out.all_g1 = out.all_g1 && e.report.pass;
                out.edges.push_back(std::move(e));
            }
        }
    }
    return out;
}

Json verify_to_json(const VerifyOutcome& v) {
    Json j;
    Json certs = Json::array();
    for (const auto& c : v.certificates) {
        Json cj;
        cj["patch"] = c.patch_id;
        cj["grid"] = Json::array({c.grid_u, c.grid_v});
        cj["exact_pn"] = c.exact_pn;
        if (c.witness)
            cj["witness"] = Json::array(
                {rational_to_string(c.witness->first), rational_to_string(c.witness->second)});
        certs.push_back(std::move(cj));
    }
    j["pn_certificates"] = std::move(certs);
    Json edges = Json::array();
    for (const auto& e : v.edges) {
        Json ej;
        ej["cells"] = Json::array({Json::array({e.cell_a.first, e.cell_a.second}),
                                   Json::array({e.cell_b.first, e.cell_b.second})});
        ej["samples"] = e.report.samples;
        ej["positions_exact"] = e.report.positions_exact;
        ej["normals_exact"] = e.report.normals_exact;
        ej["max_normal_angle"] = e.report.max_normal_angle;
        ej["max_position_deviation"] = e.report.max_position_deviation;
        ej["pass"] = e.report.pass;
        edges.push_back(std::move(ej));
    }
    j["g1_edges"] = std::move(edges);
    j["all_exact_pn"] = v.all_exact_pn;
    j["all_g1"] = v.all_g1;
    j["pass"] = v.pass();
    return j;
}

AnalyzeOutcome analyze_bundle(const Bundle& b, int resolution, double eps_rel) {
    AnalyzeOutcome out;
    out.resolution = resolution;
    out.eps_rel = eps_rel;
    for (const auto& p : b.patches) {
        AnalyzeOutcome::PatchAnalysis pa;
        pa.row = p.row;
        pa.col = p.col;
        pa.field = sample_curvature(p.patch, resolution);
        pa.ridges = detect_ridges(pa.field, eps_rel);
        out.any_ridge = out.any_ridge || !pa.ridges.ridge_free();
        out.patches.push_back(std::move(pa));
    }
    return out;
}

Json analyze_to_json(const AnalyzeOutcome& a, bool include_samples) {
    Json j;
    j["resolution"] = a.resolution;
    j["ridge_eps_rel"] = a.eps_rel;
    j["any_ridge"] = a.any_ridge;
    Json patches = Json::array();
    for (const auto& pa : a.patches) {
        Json pj;
        pj["cell"] = Json::array({pa.row, pa.col});
        pj["ridge_free"] = pa.ridges.ridge_free();
        pj["eps_used"] = pa.ridges.eps_used;
        Json flags = Json::array();
        for (const auto& f : pa.ridges.flags)
            flags.push_back(Json{{"i", f.a}, {"j", f.b}, {"reason", f.reason}});
        pj["flags"] = std::move(flags);
        if (include_samples) {
            Json samples = Json::array();
            for (const auto& s : pa.field.samples)
                samples.push_back(Json::array(
                    {s.u, s.v, s.det_ratio, s.eig1, s.eig2, s.degenerate ? 1 : 0}));
            pj["samples"] = std::move(samples);
        }
        patches.push_back(std::move(pj));
    }
    j["patches"] = std::move(patches);
    return j;
}

std::string obj_from_mesh(const Mesh& m) {
    std::ostringstream out;
    char buf[128];
    for (size_t i = 0; i < m.vertices.size(); ++i) {
        const Vec3d& v = m.vertices[i];
        snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", v.x, v.y, v.z);
        out << buf;
    }
    for (size_t i = 0; i < m.normals.size(); ++i) {
        const Vec3d& n = m.normals[i];
        snprintf(buf, sizeof buf, "vn %.17g %.17g %.17g\n", n.x, n.y, n.z);
        out << buf;
    }
    for (const auto& t : m.triangles) {
        snprintf(buf, sizeof buf, "f %d//%d %d//%d %d//%d\n", t[0] + 1, t[0] + 1, t[1] + 1,
                 t[1] + 1, t[2] + 1, t[2] + 1);
        out << buf;
    }
    return out.str();
}

void export_obj(const Mesh& m, const std::string& path) {
    write_text_file(path, obj_from_mesh(m));
}

} // namespace pnsurf
