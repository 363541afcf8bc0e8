// hsd: areas, property suites, boundary sweeps and extremal searches for
// geodesic triangles in D_{p,q}.
//
// Exit codes: 0 ok, 1 property failure, 2 input validation, 3 numerical or I/O failure.

#include "hsd/extremal.hpp"
#include "hsd/report.hpp"
#include "hsd/suites.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

using namespace hsd;

namespace {

enum Exit { kOk = 0, kPropertyFailure = 1, kValidation = 2, kNumerical = 3 };

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// --seed, else HSD_SEED, else 1.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("HSD_SEED"); env && *env) {
        std::uint64_t v = 0;
        std::istringstream is(env);
        if (!(is >> v) || !is.eof()) throw InputError(std::string("HSD_SEED is not an unsigned integer: ") + env);
        return v;
    }
    return 1;
}

void emit(const Json& doc, const std::string& out) {
    const std::string text = doc.dump(2) + "\n";
    if (out.empty() || out == "-") {
        std::cout << text;
    } else {
        write_atomic(out, text);
    }
}

std::vector<double> parse_eps_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size()) throw InputError("--eps-list: not a number: '" + item + "'");
        if (!(v > 0.0 && v < 0.5)) throw InputError("--eps-list: eps must lie in (0, 0.5), got " + item);
        out.push_back(v);
    }
    if (out.empty()) throw InputError("--eps-list is empty");
    return out;
}

struct AreaArgs {
    std::string input;
    std::string method = "all";
    std::string out;
};

int cmd_area(const AreaArgs& a) {
    const VertexFile vf = read_vertex_file(a.input);
    std::vector<AreaMethod> methods;
    if (a.method == "all") {
        methods = {AreaMethod::vformula, AreaMethod::stokes, AreaMethod::quadrature};
        if (vf.p == 1 && vf.q == 1) methods.push_back(AreaMethod::gauss_bonnet);
    } else {
        const auto m = parse_area_method(a.method);
        if (!m) throw InputError("unknown method " + a.method);
        methods = {*m};
    }
    std::vector<AreaResult> results;
    for (const AreaMethod m : methods) results.push_back(area(m, vf.triangle));
    Json doc = area_report(vf, results);
    doc["generated_at"] = utc_timestamp();
    emit(doc, a.out);
    return kOk;
}

struct VerifyArgs {
    std::string suite;
    Index p = 1;
    Index q = 1;
    int trials = 50;
    std::optional<std::uint64_t> seed;
    std::string out;
};

int cmd_verify(const VerifyArgs& a) {
    SuiteOptions o;
    o.p = a.p;
    o.q = a.q;
    o.trials = a.trials;
    o.seed = resolve_seed(a.seed);
    const SuiteResult r = run_suite(a.suite, o);
    for (const CheckResult& c : r.checks) {
        std::cerr << (c.passed ? "PASS " : "FAIL ") << r.suite << "." << c.name << " worst=" << format_double(c.worst)
                  << " tol=" << format_double(c.tolerance) << "\n";
        if (!c.passed) std::cerr << "  instance: " << c.instance.dump() << "\n";
    }
    Json doc = r.to_json();
    doc["generated_at"] = utc_timestamp();
    if (!a.out.empty()) emit(doc, a.out);
    return r.passed() ? kOk : kPropertyFailure;
}

struct SweepArgs {
    Index p = 1;
    Index q = 1;
    std::string eps = "0.1,0.01,0.001,0.0001";
    std::string csv;
};

int cmd_sweep(const SweepArgs& a) {
    if (a.p < 1 || a.q < 1) throw InputError("sweep: --p and --q must be positive");
    const std::vector<double> eps = parse_eps_list(a.eps);
    const std::string text = sweep_csv(boundary_sweep(a.p, a.q, eps));
    if (a.csv.empty() || a.csv == "-") {
        std::cout << text;
    } else {
        write_atomic(a.csv, text);
    }
    return kOk;
}

struct MaximizeArgs {
    Index p = 1;
    Index q = 1;
    int restarts = 4;
    int budget = 3000;
    std::optional<std::uint64_t> seed;
    std::string out;
};

int cmd_maximize(const MaximizeArgs& a) {
    SearchConfig c;
    c.p = a.p;
    c.q = a.q;
    c.restarts = a.restarts;
    c.budget = a.budget;
    c.seed = resolve_seed(a.seed);
    const SearchTrace trace = maximize_area(c);
    Json doc = search_trace_to_json(trace, equality_diagnostics(trace));
    doc["generated_at"] = utc_timestamp();
    emit(doc, a.out);
    std::cerr << "best |area| " << format_double(trace.best_abs()) << " of " << format_double(trace.target) << " ("
              << format_double(trace.achieved_fraction()) << ")\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Areas of geodesic triangles in type-I bounded symmetric domains"};
    const CLI::Range kPositive(1, std::numeric_limits<int>::max());
    app.require_subcommand(1);

    AreaArgs area_args;
    auto* area_cmd = app.add_subcommand("area", "area of one triangle by one or all methods");
    area_cmd->add_option("--input", area_args.input, "vertex JSON file")->required();
    area_cmd->add_option("--method", area_args.method, "all|vformula|stokes|quadrature|gauss-bonnet")
        ->check(CLI::IsMember({"all", "vformula", "stokes", "quadrature", "gauss-bonnet"}));
    area_cmd->add_option("--out", area_args.out, "report path (stdout if omitted)");

    VerifyArgs verify_args;
    auto* verify_cmd = app.add_subcommand("verify", "randomized property suite");
    verify_cmd->add_option("--suite", verify_args.suite, "potentials|projection|additivity|bound")
        ->required()
        ->check(CLI::IsMember({"potentials", "projection", "additivity", "bound"}));
    verify_cmd->add_option("--p", verify_args.p)->check(kPositive);
    verify_cmd->add_option("--q", verify_args.q)->check(kPositive);
    verify_cmd->add_option("--trials", verify_args.trials)->check(kPositive);
    verify_cmd->add_option("--seed", verify_args.seed);
    verify_cmd->add_option("--out", verify_args.out, "JSON summary path");

    SweepArgs sweep_args;
    auto* sweep_cmd = app.add_subcommand("sweep", "near-ideal triangle sweep toward the boundary");
    sweep_cmd->add_option("--p", sweep_args.p)->check(kPositive);
    sweep_cmd->add_option("--q", sweep_args.q)->check(kPositive);
    sweep_cmd->add_option("--eps-list", sweep_args.eps, "comma-separated eps values in (0, 0.5)");
    sweep_cmd->add_option("--csv", sweep_args.csv, "CSV path (stdout if omitted)");

    MaximizeArgs max_args;
    auto* max_cmd = app.add_subcommand("maximize", "annealed search for the largest area");
    max_cmd->add_option("--p", max_args.p)->check(kPositive);
    max_cmd->add_option("--q", max_args.q)->check(kPositive);
    max_cmd->add_option("--restarts", max_args.restarts)->check(kPositive);
    max_cmd->add_option("--budget", max_args.budget, "area evaluations per stage and restart")
        ->check(CLI::Range(0, std::numeric_limits<int>::max()));
    max_cmd->add_option("--seed", max_args.seed);
    max_cmd->add_option("--out", max_args.out, "trace path (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kValidation;
    }

    try {
        if (*area_cmd) return cmd_area(area_args);
        if (*verify_cmd) return cmd_verify(verify_args);
        if (*sweep_cmd) return cmd_sweep(sweep_args);
        if (*max_cmd) return cmd_maximize(max_args);
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kNumerical;
    } catch (const IoError& e) {
        std::cerr << "I/O failure: " << e.what() << "\n";
        return kNumerical;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return kNumerical;
    }
    return kValidation;
}
