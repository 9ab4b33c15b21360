// One line per acceptance criterion; exit status is the number of failures.
#include "nzs/cli.hpp"
#include "nzs/flags_numeric.hpp"
#include "nzs/gluing.hpp"
#include "nzs/peripheral.hpp"
#include "nzs/tetra_lattice.hpp"
#include "nzs/triangulation.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

using namespace nzs;

namespace {

struct Outcome {
    bool ok = true;
    std::string note;
};

int failures = 0;

void criterion(int id, const std::string& title, const std::function<Outcome()>& body)
{
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.ok) ++failures;
    std::ostringstream line;
    line.precision(2);
    line << std::fixed << (o.ok ? "PASS" : "FAIL") << " [" << id << "] " << title << " (" << secs << "s)";
    if (!o.note.empty()) line << ": " << o.note;
    std::cout << line.str() << std::endl;
}

Outcome fail(const std::string& why)
{
    return {false, why};
}

const Complex kGeometric(0.5, std::sqrt(3.0) / 2);

}  // namespace

int main()
{
    criterion(1, "point counts, rank of the tetrahedron form and its kernel, n = 2..5", [] {
        for (int n = 2; n <= 5; ++n) {
            TetraLattice t = build_module(n);
            if (t.points.size() != static_cast<std::size_t>(2 * (n * n - 1))) return fail("point count at n=" + std::to_string(n));
            if (rank(t.module.form) != static_cast<std::size_t>(2 * (n - 1) * (n - 1))) return fail("rank at n=" + std::to_string(n));
            IntMatrix kb = kernel_basis(t.module.form);
            if (kb.cols() != static_cast<std::size_t>(4 * (n - 1))) return fail("kernel dimension at n=" + std::to_string(n));
            IntMatrix full = IntMatrix::from_columns(plane_vectors(n), t.points.size());
            if (!same_lattice(full, kb)) return fail("kernel at n=" + std::to_string(n));
            IntMatrix k = IntMatrix::from_columns(kernel_vectors(n), t.points.size());
            if (torsion_factors(k) != std::vector<Int>{Int(n)}) return fail("index of m >= 1 planes at n=" + std::to_string(n));
        }
        return Outcome{true, "|I_T| = 2(n^2-1), rank = 2(n-1)^2, kernel = span v_i(m) for m = 0..n-1; "
                             "m = 1..n-1 alone has index n"};
    });

    criterion(2, "F* p F = 0 and Ker G = Im(F')^perp on the figure-eight, n = 2..4", [] {
        for (int n = 2; n <= 4; ++n) {
            ComplexReport r = verify_complex(figure_eight(), n);
            if (!r.passed()) return fail("n=" + std::to_string(n) + " " + to_json(r).dump());
        }
        return Outcome{};
    });

    criterion(3, "holonomy lemma h(c x v_m) - 2w(c,m) in sat(ker p + Im F), figure-eight, n = 2..4", [] {
        for (int n = 2; n <= 4; ++n) {
            CheckReport r = check_hol_lemma(figure_eight(), n);
            if (!r.passed()) return fail(r.to_json().dump());
        }
        return Outcome{};
    });

    criterion(4, "duality omega(c, g(e)) = Omega(e, h(c)), figure-eight, n = 2..3", [] {
        std::size_t pairs = 0;
        for (int n = 2; n <= 3; ++n) {
            CheckReport r = check_g_identity(figure_eight(), n);
            if (!r.passed()) return fail(r.to_json().dump());
            pairs += r.details["pairs_checked"].get<std::size_t>();
        }
        return Outcome{true, std::to_string(pairs) + " pairs"};
    });

    criterion(5, "g h = x4 on H1(boundary, L) and h*Omega = -4 omega, figure-eight, n = 2..4", [] {
        for (int n = 2; n <= 4; ++n) {
            CheckReport r = check_times4(figure_eight(), n);
            if (!r.passed()) return fail(r.to_json().dump());
        }
        return Outcome{};
    });

    criterion(6, "dimension formula: figure-eight n = 2..5, disc-link complexes n = 2..3", [] {
        for (int n = 2; n <= 5; ++n) {
            CheckReport r = dim_formula_check(figure_eight(), n);
            if (!r.passed()) return fail(r.to_json().dump());
        }
        const std::vector<Triangulation> partial = {single_tetrahedron(),
                                                    Triangulation(1, {{0, 0, 0, 1, {1, 0, 2, 3}}}),
                                                    Triangulation(1, {{0, 0, 0, 1, {1, 2, 3, 0}}}),
                                                    Triangulation(2, {{0, 3, 1, 3, {1, 0, 2, 3}}})};
        for (const auto& tri : partial)
            for (int n = 2; n <= 3; ++n) {
                CheckReport r = dim_formula_check(tri, n);
                if (!r.passed()) return fail(r.to_json().dump());
            }
        return Outcome{true, "4 fixtures with disc links"};
    });

    criterion(7, "Lagrangian rank (n-1)^2 with gap >= 1e6 and isotropy < 1e-9, n = 2..4, 20 samples", [] {
        std::ostringstream note;
        for (int n = 2; n <= 4; ++n) {
            LagrangianReport r = lagrangian_check(n, 20, 1000 + n);
            if (!r.passed) return fail(r.to_json().dump());
            note << "n=" << n << " gap " << r.min_gap << " iso " << r.max_isotropy << "; ";
        }
        return Outcome{true, note.str()};
    });

    criterion(8, "NZ ratio 1, 4, 10 for n = 2, 3, 4 at three cross-ratios, positive NZ form", [] {
        std::ostringstream note;
        note.precision(8);
        for (Complex x : {Complex(0.3, 0.8), kGeometric, Complex(-1.5, 0.4)})
            for (int n = 2; n <= 4; ++n) {
                NzFactorReport r = nz_factor_check(n, x);
                if (!r.passed) return fail(r.to_json().dump());
                if (x == kGeometric) note << r.ratio << " ";
            }
        return Outcome{true, note.str()};
    });

    criterion(9, "figure-eight n = 2 solution exp(i pi/3), residual < 1e-12, C1 = 1", [] {
        Triangulation tri = figure_eight();
        auto geo = geometric_solution(solve_gluing_n2(tri, 1));
        if (!geo) return fail("no geometric solution");
        for (auto x : geo->shapes)
            if (std::abs(x - kGeometric) > 1e-10) return fail("shape off exp(i pi/3)");
        if (geo->residual >= 1e-12) return fail("residual " + std::to_string(geo->residual));
        const auto bases = peripheral_bases(tri);
        for (const auto& p : bases[0].generators)
            if (std::abs(evaluate_c1(tri, geo->shapes, p) - 1.0) > 1e-8) return fail("C1 != 1");
        std::ostringstream note;
        note << "residual " << geo->residual;
        return Outcome{true, note.str()};
    });

    criterion(10, "peripheral holonomy differential rank (n-1)l at the geometric point, n = 2, 3", [] {
        Triangulation tri = figure_eight();
        auto geo = geometric_solution(solve_gluing_n2(tri, 1));
        if (!geo) return fail("no geometric solution");
        std::ostringstream note;
        for (int n = 2; n <= 3; ++n) {
            RigidityReport r = rigidity_rank_check(tri, n, geo->shapes);
            if (r.status != "pass") return fail(r.to_json().dump());
            note << "n=" << n << " rank " << r.peripheral_rank << "; ";
        }
        return Outcome{true, note.str()};
    });

    criterion(11, "h convention is the unique variant passing criteria 3 and 5 for n = 2..4", [] {
        ConventionSelection s = select_h_convention(figure_eight(), {2, 3, 4});
        if (!s.selected) return fail(s.to_json().dump());
        std::ostringstream out, err;
        if (run_cli({"verify", "fig8", "--n", "2..4"}, out, err) != kExitPass) return fail("verify exit code");
        auto report = nlohmann::json::parse(out.str());
        if (report["convention"]["selected"] != to_string(*s.selected)) return fail("verify report does not record it");
        return Outcome{true, "selected " + to_string(*s.selected) + ", " + s.to_json()["variants"].dump()};
    });

    return failures;
}
