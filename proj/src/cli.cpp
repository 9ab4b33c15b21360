#include "nzs/cli.hpp"

#include "nzs/flags_numeric.hpp"
#include "nzs/gluing.hpp"
#include "nzs/peripheral.hpp"
#include "nzs/triangulation.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

namespace nzs {

namespace {

using nlohmann::json;

constexpr int kMaxN = 8;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command;
    std::string input;
    std::string fixture_name;
    std::string n_text = "2";
    std::uint64_t seed = 1;
    std::string output;
    bool pretty = false;
    Tolerances tol;
};

json matrix_json(const IntMatrix& m)
{
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(to_long(m(r, c)));
        rows.push_back(row);
    }
    return rows;
}

json complex_json(Complex z)
{
    return json::array({z.real(), z.imag()});
}

Triangulation load_input(const RunConfig& cfg)
{
    std::string name = cfg.fixture_name.empty() ? cfg.input : cfg.fixture_name;
    if (name.empty()) throw UsageError("no input: give a fixture name or a triangulation file");
    if (auto t = fixture(name)) return *t;
    if (!cfg.fixture_name.empty()) throw UsageError("unknown fixture '" + name + "'");
    std::ifstream in(name);
    if (!in) throw ParseError("cannot open '" + name + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_triangulation(ss.str());
}

json cmd_info(const Triangulation& tri)
{
    auto classes = edge_classes(tri);
    auto links = vertex_links(tri);
    json link_list = json::array();
    std::map<std::string, int> kinds;
    for (const auto& l : links) {
        link_list.push_back({{"vertex_class", l.vertex_class},
                             {"kind", to_string(l.kind)},
                             {"triangles", l.triangles.size()},
                             {"euler_characteristic", l.euler_characteristic},
                             {"boundary_circles", l.boundary_circles}});
        ++kinds[to_string(l.kind)];
    }
    int interior = static_cast<int>(std::count_if(classes.begin(), classes.end(), [](const auto& c) { return c.interior; }));
    auto sigma = boundary_surface(tri);
    return {{"command", "info"},
            {"tetrahedra", tri.size()},
            {"edge_classes", classes.size()},
            {"interior_edge_classes", interior},
            {"links", link_list},
            {"link_kinds", kinds},
            {"sigma_triangles", sigma.triangles.size()},
            {"sigma_empty", sigma.empty()}};
}

struct Outcome {
    json report;
    bool passed = true;
};

Outcome cmd_equations(const Triangulation& tri, const std::vector<int>& ns, const RunConfig& cfg)
{
    Outcome o;
    const bool csv = cfg.output.size() > 4 && cfg.output.substr(cfg.output.size() - 4) == ".csv";
    if (csv) {
        if (ns.size() != 1) throw UsageError("csv output takes a single --n");
        auto s = face_edge_equations(tri, ns.front());
        o.report = to_csv(s.matrix(), s.variables);
        return o;
    }
    json per_n = json::array();
    for (int n : ns) {
        json j = to_json(face_edge_equations(tri, n));
        j["n"] = n;
        per_n.push_back(j);
    }
    o.report = ns.size() == 1 ? per_n.front() : json{{"command", "equations"}, {"reports", per_n}};
    return o;
}

Outcome cmd_verify(const Triangulation& tri, const std::vector<int>& ns)
{
    Outcome o;
    json per_n = json::array();
    for (int n : ns) {
        json checks = json::array();
        auto add = [&](const CheckReport& r) {
            if (r.failed()) o.passed = false;
            checks.push_back(r.to_json());
        };
        ComplexReport cr = verify_complex(tri, n);
        if (!cr.passed()) o.passed = false;
        checks.push_back(to_json(cr));
        add(check_g_identity(tri, n));
        add(check_hol_lemma(tri, n));
        add(check_times4(tri, n));
        add(dim_formula_check(tri, n));
        per_n.push_back({{"n", n}, {"checks", checks}});
    }

    std::set<int> pin{2, 3, 4};
    pin.insert(ns.begin(), ns.end());
    ConventionSelection sel = select_h_convention(tri, std::vector<int>(pin.begin(), pin.end()));
    bool has_periphery = !peripheral_bases(tri).empty();
    json conv = sel.to_json();
    if (!has_periphery) {
        conv["status"] = "skipped";
        conv["reason"] = "no torus or annulus links";
    } else if (sel.selected && *sel.selected == HVariant::symmetric) {
        conv["status"] = "pass";
    } else {
        conv["status"] = "fail";
        o.passed = false;
    }
    conv["in_use"] = to_string(HVariant::symmetric);

    o.report = {{"command", "verify"},
                {"ns", ns},
                {"reports", per_n},
                {"convention", conv},
                {"status", o.passed ? "pass" : "fail"}};
    return o;
}

Outcome cmd_nz_data(const Triangulation& tri, const std::vector<int>& ns)
{
    Outcome o;
    json per_n = json::array();
    for (int n : ns) {
        HomologyHJ h = homology_HJ(tri, n);
        if (!h.forms_match) o.passed = false;
        per_n.push_back({{"n", n},
                         {"dim", h.dim},
                         {"basis", matrix_json(h.basis.transpose())},
                         {"gram", matrix_json(h.gram)},
                         {"dual_dim", h.dual_dim},
                         {"dual_gram", matrix_json(h.dual_gram)},
                         {"forms_match", h.forms_match}});
    }
    o.report = ns.size() == 1 ? per_n.front() : json{{"reports", per_n}};
    o.report["command"] = "nz-data";
    return o;
}

json solution_json(const Triangulation& tri, const GluingSolution& s)
{
    json shapes = json::array();
    for (auto x : s.shapes) shapes.push_back(complex_json(x));
    GluedComplex g = build_glued(tri, 2);
    CVector z = glued_z(g, s.shapes);
    auto ids = g.point_ids();
    json zs = json::object();
    for (std::size_t k = 0; k < ids.size(); ++k) zs[ids[k]] = complex_json(z(k));
    return {{"shapes", shapes}, {"residual", s.residual}, {"positive", s.positive}, {"z", zs}};
}

Outcome cmd_solve2(const Triangulation& tri, const RunConfig& cfg)
{
    Outcome o;
    SolveReport rep = solve_gluing_n2(tri, cfg.seed, cfg.tol);
    json sols = json::array();
    for (const auto& s : rep.solutions) sols.push_back(solution_json(tri, s));
    o.report = {{"command", "solve2"},
                {"seed", rep.seed},
                {"starts", rep.starts},
                {"converged", rep.converged},
                {"solutions", sols},
                {"diagnostics", rep.diagnostics},
                {"tolerances", cfg.tol.to_json()}};
    auto geo = geometric_solution(rep);
    if (!geo) {
        o.passed = false;
        o.report["geometric"] = nullptr;
        o.report["status"] = "fail";
        return o;
    }
    json geom = solution_json(tri, *geo);
    json c1 = json::array();
    for (const auto& b : peripheral_bases(tri)) {
        if (b.kind != LinkKind::torus) continue;
        for (std::size_t k = 0; k < b.generators.size(); ++k) {
            Complex v = evaluate_c1(tri, geo->shapes, b.generators[k]);
            bool ok = std::abs(v - 1.0) < cfg.tol.completeness;
            if (!ok) o.passed = false;
            c1.push_back({{"link", b.link}, {"generator", k == 0 ? "l" : "m"}, {"value", complex_json(v)}, {"complete", ok}});
        }
    }
    geom["C1"] = c1;
    o.report["geometric"] = geom;
    o.report["status"] = o.passed ? "pass" : "fail";
    return o;
}

Outcome cmd_rigidity(const Triangulation& tri, const std::vector<int>& ns, const RunConfig& cfg)
{
    Outcome o;
    auto geo = geometric_solution(solve_gluing_n2(tri, cfg.seed, cfg.tol));
    if (!geo) {
        o.passed = false;
        o.report = {{"command", "rigidity"}, {"status", "fail"}, {"error", "no geometric solution found"}};
        return o;
    }
    json per_n = json::array();
    for (int n : ns) {
        RigidityReport r = rigidity_rank_check(tri, n, geo->shapes, cfg.tol);
        if (r.status == "fail") o.passed = false;
        per_n.push_back(r.to_json());
    }
    json shapes = json::array();
    for (auto x : geo->shapes) shapes.push_back(complex_json(x));
    o.report = {{"command", "rigidity"},
                {"seed", cfg.seed},
                {"shapes", shapes},
                {"reports", per_n},
                {"tolerances", cfg.tol.to_json()},
                {"status", o.passed ? "pass" : "fail"}};
    return o;
}

void add_tolerance_flags(CLI::App& app, Tolerances& tol)
{
    app.add_option("--tol-svd-gap", tol.svd_gap);
    app.add_option("--tol-isotropy", tol.isotropy);
    app.add_option("--tol-invariance", tol.invariance);
    app.add_option("--tol-nz-relative", tol.nz_relative);
    app.add_option("--tol-fd-step", tol.fd_step);
    app.add_option("--tol-solve-residual", tol.solve_residual);
    app.add_option("--tol-reject-residual", tol.reject_residual);
    app.add_option("--tol-dedup", tol.dedup);
    app.add_option("--tol-completeness", tol.completeness);
    app.add_option("--tol-rigidity-zero", tol.rigidity_zero);
    app.add_option("--tol-rigidity-gap", tol.rigidity_gap);
    app.add_option("--tol-newton-iterations", tol.newton_iterations);
    app.add_option("--tol-newton-starts", tol.newton_starts);
}

void write_output(const json& report, const RunConfig& cfg, std::ostream& out)
{
    std::string text = report.is_string() ? report.get<std::string>() : report.dump(cfg.pretty ? 2 : -1) + "\n";
    if (cfg.output.empty()) {
        out << text;
        return;
    }
    std::ofstream f(cfg.output);
    if (!f) throw UsageError("cannot write '" + cfg.output + "'");
    f << text;
}

void report_error(std::ostream& err, const std::string& kind, const std::string& message)
{
    err << json{{"error", kind}, {"message", message}}.dump() << "\n";
}

}  // namespace

std::vector<int> parse_n_range(const std::string& text)
{
    auto to_int = [&](const std::string& s) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(s, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad --n value '" + text + "'");
        }
        if (used != s.size()) throw std::invalid_argument("bad --n value '" + text + "'");
        return v;
    };
    int lo, hi;
    auto dots = text.find("..");
    if (dots == std::string::npos) {
        lo = hi = to_int(text);
    } else {
        lo = to_int(text.substr(0, dots));
        hi = to_int(text.substr(dots + 2));
    }
    if (lo < 2 || hi < lo || hi > kMaxN)
        throw std::invalid_argument("--n must lie in 2.." + std::to_string(kMaxN) + " with a nonempty range");
    std::vector<int> ns;
    for (int n = lo; n <= hi; ++n) ns.push_back(n);
    return ns;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    RunConfig cfg;
    CLI::App app{"nzs: gluing equations and symplectic checks for triangulated 3-manifolds", "nzs"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--n", cfg.n_text, "n or a range a..b");
    app.add_option("--seed", cfg.seed);
    app.add_option("-o,--output", cfg.output);
    app.add_flag("--pretty", cfg.pretty);
    app.add_option("--fixture", cfg.fixture_name, "built-in triangulation: fig8, single");
    add_tolerance_flags(app, cfg.tol);

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"info", "summary of the triangulation"},
        {"equations", "face and edge equations as JSON or CSV"},
        {"verify", "exact checks of the complex, the holonomy lemma and the symplectic identities"},
        {"nz-data", "Gram matrices of the forms on the homology of the complex"},
        {"solve2", "classical gluing equations at n = 2"},
        {"rigidity", "rank of the peripheral holonomy differential"}};
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("input", cfg.input, "fixture name or triangulation file");
        sub->callback([&cfg, name = name] { cfg.command = name; });
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitPass;
    } catch (const CLI::ParseError& e) {
        report_error(err, "usage", e.what());
        return kExitUsage;
    }

    try {
        const Triangulation tri = load_input(cfg);
        Outcome o;
        if (cfg.command == "info") {
            o.report = cmd_info(tri);
        } else {
            const auto ns = parse_n_range(cfg.n_text);
            if (cfg.command == "equations") o = cmd_equations(tri, ns, cfg);
            else if (cfg.command == "verify") o = cmd_verify(tri, ns);
            else if (cfg.command == "nz-data") o = cmd_nz_data(tri, ns);
            else if (cfg.command == "solve2") o = cmd_solve2(tri, cfg);
            else o = cmd_rigidity(tri, ns, cfg);
        }
        write_output(o.report, cfg, out);
        return o.passed ? kExitPass : kExitFailure;
    } catch (const ParseError& e) {
        report_error(err, "parse", e.what());
    } catch (const TopologyError& e) {
        report_error(err, "topology", e.what());
    } catch (const UsageError& e) {
        report_error(err, "usage", e.what());
    } catch (const std::invalid_argument& e) {
        report_error(err, "usage", cfg.command + ": " + e.what());
    }
    return kExitUsage;
}

}  // namespace nzs
