#include "hsd/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace hsd {

Json matrix_to_json(const CMatrix& m) {
    Json rows = Json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

CMatrix matrix_from_json(const Json& j, Index p, Index q, const std::string& field) {
    if (!j.is_array() || static_cast<Index>(j.size()) != p) {
        throw InputError(field + ": expected an array of " + std::to_string(p) + " rows");
    }
    CMatrix m(p, q);
    for (Index i = 0; i < p; ++i) {
        const Json& row = j[static_cast<std::size_t>(i)];
        const std::string rf = field + "[" + std::to_string(i) + "]";
        if (!row.is_array() || static_cast<Index>(row.size()) != q) {
            throw InputError(rf + ": expected a row of " + std::to_string(q) + " entries");
        }
        for (Index k = 0; k < q; ++k) {
            const Json& e = row[static_cast<std::size_t>(k)];
            const std::string ef = rf + "[" + std::to_string(k) + "]";
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
                throw InputError(ef + ": expected [re, im]");
            }
            m(i, k) = Complex(e[0].get<double>(), e[1].get<double>());
        }
    }
    return m;
}

VertexFile parse_vertex_file(const Json& doc) {
    if (!doc.is_object()) throw InputError("document: expected a JSON object");
    if (!doc.contains("domain") || !doc["domain"].is_object()) throw InputError("domain: missing or not an object");
    const Json& dom = doc["domain"];
    for (const char* k : {"p", "q"}) {
        if (!dom.contains(k) || !dom[k].is_number_integer() || dom[k].get<long long>() < 1) {
            throw InputError(std::string("domain.") + k + ": expected a positive integer");
        }
    }
    VertexFile vf;
    vf.p = dom["p"].get<Index>();
    vf.q = dom["q"].get<Index>();
    if (!doc.contains("vertices") || !doc["vertices"].is_array()) throw InputError("vertices: missing or not an array");
    const Json& vs = doc["vertices"];
    if (vs.size() != 3) throw InputError("vertices: expected exactly 3 vertices, got " + std::to_string(vs.size()));
    std::array<MatrixPoint, 3> pts;
    for (std::size_t k = 0; k < 3; ++k) {
        const std::string field = "vertices[" + std::to_string(k) + "]";
        CMatrix m = matrix_from_json(vs[k], vf.p, vf.q, field);
        if (!contains(vf.p, vf.q, m)) {
            std::ostringstream os;
            os.precision(17);
            os << field << ": outside the domain (sigma_max = " << sigma_max(m) << ")";
            throw InputError(os.str());
        }
        pts[k] = MatrixPoint(std::move(m));
    }
    vf.triangle = {pts[0], pts[1], pts[2]};
    return vf;
}

VertexFile read_vertex_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("input: cannot open " + path.string());
    Json doc;
    try {
        in >> doc;
    } catch (const Json::parse_error& e) {
        throw InputError(std::string("input: malformed JSON: ") + e.what());
    }
    return parse_vertex_file(doc);
}

Json triangle_to_json(const Triangle& t) {
    return Json::array({matrix_to_json(t.p.matrix()), matrix_to_json(t.q.matrix()), matrix_to_json(t.r.matrix())});
}

Json vertex_file_to_json(const VertexFile& vf) {
    return {{"domain", {{"p", vf.p}, {"q", vf.q}}}, {"vertices", triangle_to_json(vf.triangle)}};
}

Json area_result_to_json(const AreaResult& r) {
    const AreaDiagnostics& d = r.diagnostics;
    return {{"method", std::string(to_string(r.method))},
            {"value", r.value},
            {"error", r.error},
            {"diagnostics",
             {{"windings", d.windings},
              {"phase_intervals", d.phase_intervals},
              {"refinement_depth", d.refinement_depth},
              {"cells", d.cells},
              {"branch_ambiguous", d.branch_ambiguous},
              {"refinement_capped", d.refinement_capped},
              {"ill_conditioned", d.ill_conditioned},
              {"degenerate", d.degenerate}}}};
}

Json area_report(const VertexFile& input, std::span<const AreaResult> results, std::optional<std::uint64_t> seed) {
    Json out;
    out["input"] = vertex_file_to_json(input);
    Json rs = Json::array();
    double max_abs = 0.0;
    for (const AreaResult& r : results) {
        rs.push_back(area_result_to_json(r));
        max_abs = std::max(max_abs, std::abs(r.value));
    }
    out["results"] = std::move(rs);
    Json deltas = Json::array();
    for (std::size_t i = 0; i < results.size(); ++i) {
        for (std::size_t j = i + 1; j < results.size(); ++j) {
            deltas.push_back({{"a", std::string(to_string(results[i].method))},
                              {"b", std::string(to_string(results[j].method))},
                              {"delta", results[i].value - results[j].value}});
        }
    }
    out["deltas"] = std::move(deltas);
    const double bound = rank_bound(input.p, input.q);
    out["bound"] = bound;
    out["bound_margin"] = bound - max_abs;
    out["seed"] = seed ? Json(*seed) : Json(nullptr);
    return out;
}

Json search_trace_to_json(const SearchTrace& trace, const EqualityReport& equality) {
    const SearchConfig& c = trace.config;
    Json out;
    out["config"] = {{"p", c.p},
                     {"q", c.q},
                     {"margins", c.margins},
                     {"budget", c.budget},
                     {"restarts", c.restarts},
                     {"method", std::string(to_string(c.method))}};
    out["seed"] = c.seed;
    out["target"] = trace.target;
    out["initial"] = {{"vertices", triangle_to_json(trace.initial)}, {"area", trace.initial_area}};
    Json stages = Json::array();
    for (std::size_t i = 0; i < trace.stages.size(); ++i) {
        const SearchStage& s = trace.stages[i];
        stages.push_back({{"margin", s.margin},
                          {"best_area", s.best_area},
                          {"best_abs", s.best_abs},
                          {"shilov_defects", s.defects},
                          {"evaluations", s.evaluations},
                          {"stagnated", s.stagnated},
                          {"gap", equality.stages.at(i).gap},
                          {"vertices", triangle_to_json(s.best)}});
    }
    out["stages"] = std::move(stages);
    out["best_so_far"] = trace.best_so_far();
    out["final_best"] = trace.best_abs();
    out["achieved_fraction"] = trace.achieved_fraction();
    out["final_max_shilov_defect"] = equality.final_max_defect;
    out["final_gap"] = equality.final_gap;
    out["defect_decreasing"] = equality.defect_decreasing;
    return out;
}

std::string format_double(double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

std::string sweep_csv(std::span<const SweepRow> rows) {
    std::string out = "eps,area,bound_gap\n";
    for (const SweepRow& r : rows) {
        out += format_double(r.eps) + "," + format_double(r.area) + "," + format_double(r.bound_gap) + "\n";
    }
    return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
    namespace fs = std::filesystem;
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    if (!fs::is_directory(dir)) throw IoError("cannot write " + path.string() + ": directory does not exist");
    const fs::path tmp = dir / ("." + path.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + path.string());
        out << contents;
        out.flush();
        if (!out) throw IoError("write failed for " + path.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot rename into " + path.string());
    }
}

}  // namespace hsd
