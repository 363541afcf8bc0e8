#include "doctest.h"

#include "hsd/report.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

using namespace hsd;
namespace fs = std::filesystem;

namespace {

Json disc_doc() {
    return Json::parse(R"({"domain":{"p":1,"q":1},"vertices":[[[[0,0]]],[[[0.5,0]]],[[[0,0.5]]]]})");
}

std::string message_of(const Json& doc) {
    try {
        parse_vertex_file(doc);
    } catch (const InputError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("vertex file parsing") {
    const VertexFile vf = parse_vertex_file(disc_doc());
    CHECK(vf.p == 1);
    CHECK(vf.triangle.r(0, 0) == Complex(0.0, 0.5));
    CHECK(parse_vertex_file(vertex_file_to_json(vf)).triangle.q(0, 0) == Complex(0.5));
}

TEST_CASE("vertex file errors name the field") {
    Json d = disc_doc();
    d["vertices"][1][0][0] = Json::array({0.5});
    CHECK(message_of(d).find("vertices[1][0][0]") != std::string::npos);

    d = disc_doc();
    d["domain"].erase("q");
    CHECK(message_of(d).find("domain.q") != std::string::npos);

    d = disc_doc();
    d["vertices"].erase(2);
    CHECK(message_of(d).find("exactly 3") != std::string::npos);

    d = disc_doc();
    d["vertices"][2] = Json::parse("[[[1.2, 0]]]");
    CHECK(message_of(d).find("vertices[2]: outside") != std::string::npos);

    d = disc_doc();
    d["domain"]["p"] = 2;
    CHECK(message_of(d).find("vertices[0]") != std::string::npos);

    CHECK(message_of(Json::array()).find("document") != std::string::npos);
}

TEST_CASE("matrix JSON round trip is exact") {
    CMatrix m(2, 2);
    m << Complex(0.1, 1.0 / 3.0), Complex(-2e-300, 0.7), Complex(std::numbers::pi / 10, -0.0), Complex(1e-17, 0.123456789012345678);
    const Json j = Json::parse(matrix_to_json(m).dump());
    CHECK((matrix_from_json(j, 2, 2, "m") - m).norm() == 0.0);
    CHECK_THROWS_AS(matrix_from_json(j, 3, 2, "m"), InputError);
}

TEST_CASE("number formatting round-trips") {
    for (const double x : {0.1, 1.0 / 3.0, std::numbers::pi, 1e-4, 6.283185307179586, -2.5e-300}) {
        CHECK(std::stod(format_double(x)) == x);
    }
    CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("area report") {
    const VertexFile vf = parse_vertex_file(disc_doc());
    std::vector<AreaResult> rs;
    for (const AreaMethod m : {AreaMethod::vformula, AreaMethod::quadrature}) rs.push_back(area(m, vf.triangle));
    const Json r = area_report(vf, rs, 42u);
    CHECK(r["results"].size() == 2);
    CHECK(r["deltas"].size() == 1);
    CHECK(r["deltas"][0]["delta"].get<double>() == rs[0].value - rs[1].value);
    CHECK(r["bound"].get<double>() == std::numbers::pi);
    CHECK(r["seed"].get<int>() == 42);
    CHECK(r["results"][0]["method"] == "vformula");
}

TEST_CASE("sweep CSV") {
    const SweepRow rows[] = {{0.1, 2.5, 0.6415926535897931}, {1e-4, 3.1, 0.04}};
    const std::string csv = sweep_csv(rows);
    CHECK(csv.rfind("eps,area,bound_gap\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("atomic writes") {
    const fs::path dir = fs::temp_directory_path() / "hsd_report_test";
    fs::create_directories(dir);
    const fs::path f = dir / "out.json";
    write_atomic(f, "first");
    write_atomic(f, "second");
    std::ifstream in(f);
    std::string s;
    in >> s;
    CHECK(s == "second");
    for (const auto& e : fs::directory_iterator(dir)) CHECK(e.path().filename() == "out.json");
    CHECK_THROWS_AS(write_atomic(dir / "missing" / "x.json", "x"), IoError);
    fs::remove_all(dir);
    CHECK_THROWS_AS(read_vertex_file(dir / "nope.json"), InputError);
}

TEST_CASE("search trace JSON") {
    SearchConfig c;
    c.budget = 0;
    c.restarts = 1;
    c.seed = 17;
    const SearchTrace t = maximize_area(c);
    const Json j = search_trace_to_json(t, equality_diagnostics(t));
    CHECK(j["seed"].get<int>() == 17);
    CHECK(j["stages"].size() == c.margins.size());
    CHECK(j["target"].get<double>() == std::numbers::pi);
    CHECK(j["stages"][0]["shilov_defects"].size() == 3);
    CHECK(j.contains("achieved_fraction"));
}
