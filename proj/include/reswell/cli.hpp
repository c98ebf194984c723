#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "bound_states.hpp"
#include "exceptional.hpp"
#include "parallel.hpp"
#include "pt_algebra.hpp"
#include "pu_oscillator.hpp"
#include "resonances.hpp"
#include "scattering.hpp"
#include "verify.hpp"
#include "well1d.hpp"

namespace reswell::cli {

using json = nlohmann::json;

inline constexpr const char* version = "0.1.0";

enum ExitCode { ok = 0, check_failed = 1, invalid = 2, no_convergence = 3 };

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return buf;
}

// Objects come out key-sorted because json uses std::map.
inline void write_json(std::ostream& os, const json& j, int indent = 0) {
    const std::string pad(static_cast<std::size_t>(indent), ' '), inner(static_cast<std::size_t>(indent + 2), ' ');
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            os << "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) os << ",\n";
                first = false;
                os << inner << json(it.key()).dump() << ": ";
                write_json(os, it.value(), indent + 2);
            }
            os << "\n" << pad << "}";
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                os << "[]";
                return;
            }
            os << "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) os << ",\n";
                os << inner;
                write_json(os, j[i], indent + 2);
            }
            os << "\n" << pad << "]";
            return;
        }
        case json::value_t::number_float: {
            const double v = j.get<double>();
            if (std::isfinite(v))
                os << format_double(v);
            else
                os << "null";
            return;
        }
        default: os << j.dump();
    }
}

using Cell = std::variant<long long, double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

inline void write_csv(std::ostream& os, const Table& t) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ",";
            std::visit(
                [&](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, double>)
                        os << format_double(v);
                    else
                        os << v;
                },
                row[i]);
        }
        os << "\n";
    }
}

inline json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

struct Result {
    json data;
    Table table;
    std::vector<std::string> notes;
};

struct Params {
    std::string units = "natural";
    std::optional<double> hbar, mass, radius;
    std::string format = "json";
    std::string output;

    double v0 = 0.0;
    int n_max = 4;
    int n = 0;
    double emin = 0.0, emax = 0.0;

    std::optional<double> s;
    std::string matrix_file;
    double tol = 1e-9;

    std::string realization = "unequal";
    double omega1 = 1.0, omega2 = 2.0, pair_a = 1.0, pair_b = 0.5;
    double box = 8.0;
    int grid = 512;

    double e0 = 0.0, gamma = 1.0;
    std::string kind = "pt-pair", contour = "real-axis", domain = "energy";
    double xmin = -5.0, xmax = 5.0;
    std::string geometry = "radial3d";
};

inline WellSpec make_well(const Params& p, Geometry g) {
    WellSpec w = WellSpec::natural(p.v0, g);
    if (p.units == "si") {
        if (!p.hbar || !p.mass || !p.radius) throw DomainError("--units si requires --hbar, --mass and --radius");
        w.hbar = *p.hbar;
        w.m = *p.mass;
        w.a = *p.radius;
    } else if (p.hbar || p.mass || p.radius) {
        throw DomainError("--hbar, --mass and --radius are only accepted with --units si");
    }
    w.validate();
    return w;
}

inline std::vector<double> linspace(double lo, double hi, int n) {
    if (!(hi > lo)) throw DomainError("--emax must exceed --emin");
    if (n < 2) throw DomainError("--n must be at least 2");
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
    return v;
}

inline json pair_json(const ResonancePair& p) {
    return {{"branch", p.branch_index}, {"E0", p.E0},       {"Gamma", p.Gamma},
            {"mu", p.mu},               {"nu", p.nu},       {"K_plus", complex_json(p.K_plus)},
            {"k_plus", complex_json(p.k_plus)}, {"residual", p.residual}};
}

inline Table pair_table(const std::vector<ResonancePair>& pairs) {
    Table t{{"branch", "E0", "Gamma", "mu", "nu", "re_K", "im_K", "re_k", "im_k", "residual"}, {}};
    for (const ResonancePair& p : pairs)
        t.rows.push_back({(long long)p.branch_index, p.E0, p.Gamma, p.mu, p.nu, p.K_plus.real(), p.K_plus.imag(), p.k_plus.real(),
                          p.k_plus.imag(), p.residual});
    return t;
}

inline Result cmd_bound(const Params& p) {
    const WellSpec w = make_well(p, Geometry::radial3d);
    BoundSearch s = bound_search(w);
    Result r;
    r.data = json::array();
    r.table.columns = {"branch", "E", "K", "sigma", "A", "B"};
    for (const BoundState& b : s.states) {
        r.data.push_back({{"branch", b.branch}, {"E", b.E}, {"K", b.K}, {"sigma", b.sigma}, {"A", b.A}, {"B", b.B}});
        r.table.rows.push_back({(long long)b.branch, b.E, b.K, b.sigma, b.A, b.B});
    }
    for (int h : s.threshold_hits) r.notes.push_back("branch " + std::to_string(h) + " sits on the threshold and was excluded");
    return r;
}

inline Result cmd_resonances(const Params& p, Geometry g) {
    const WellSpec w = make_well(p, g);
    ResonanceSearch s = g == Geometry::radial3d ? resonance_search(w, p.n_max) : pole_search_1d(w, p.n_max);
    if (s.pairs.empty()) throw NoConvergence("no branch up to --n-max produced a root: " + s.skipped.front().reason);
    Result r;
    json pairs = json::array(), skipped = json::array();
    for (const ResonancePair& q : s.pairs) pairs.push_back(pair_json(q));
    for (const SkippedBranch& b : s.skipped) {
        skipped.push_back({{"branch", b.branch}, {"reason", b.reason}});
        r.notes.push_back("branch " + std::to_string(b.branch) + " skipped: " + b.reason);
    }
    r.data = {{"pairs", pairs}, {"skipped", skipped}};
    r.table = pair_table(s.pairs);
    return r;
}

inline Result cmd_exceptional(const Params& p) {
    if (p.n < 1) throw DomainError("--n must be at least 1");
    Params q = p;
    q.v0 = 1.0;  // the depth does not enter the closed form
    const WellSpec w = make_well(q, Geometry::radial3d);
    auto v = exceptional_potentials(w, p.n);
    Result r;
    r.data = json::array();
    r.table.columns = {"n", "V0"};
    for (int i = 0; i < p.n; ++i) {
        r.data.push_back({{"n", i}, {"V0", v[i]}});
        r.table.rows.push_back({(long long)i, v[i]});
    }
    return r;
}

inline Result cmd_scatter(const Params& p) {
    const WellSpec w = make_well(p, Geometry::radial3d);
    if (!(p.emin > w.V0)) throw DomainError("--emin must exceed V0");
    const auto Es = linspace(p.emin, p.emax, p.n);
    const auto pts = phase_shift_sweep(w, Es);
    const auto delays = parallel_map<double>(Es.size(), [&](std::size_t i) {
        const double E = Es[i];
        const double h = std::min(1e-4 * std::max(1.0, E), 0.4 * (E - w.V0));
        return wigner_time_delay(w, E, h);
    });
    Result r;
    r.data = json::array();
    r.table.columns = {"E", "delta", "re_f", "im_f", "time_delay"};
    for (std::size_t i = 0; i < Es.size(); ++i) {
        const cplx f = std::exp(I * pts[i].delta) * std::sin(pts[i].delta);
        r.data.push_back({{"E", Es[i]}, {"delta", pts[i].delta}, {"re_f", f.real()}, {"im_f", f.imag()}, {"time_delay", delays[i]}});
        r.table.rows.push_back({Es[i], pts[i].delta, f.real(), f.imag(), delays[i]});
    }
    return r;
}

inline Result cmd_well1d(const Params& p) {
    const WellSpec w = make_well(p, Geometry::line1d);
    if (!(p.emin > w.V0)) throw DomainError("--emin must exceed V0");
    const auto Es = linspace(p.emin, p.emax, p.n);
    Result r;
    json sweep = json::array();
    r.table.columns = {"E", "T", "R"};
    for (double E : Es) {
        Well1DResult t = transmission_reflection(w, E);
        sweep.push_back({{"E", E}, {"T", t.T}, {"R", t.R}});
        r.table.rows.push_back({E, t.T, t.R});
    }
    json poles = json::array();
    if (p.n_max > 0) {
        ResonanceSearch s = pole_search_1d(w, p.n_max);
        for (const ResonancePair& q : s.pairs) poles.push_back(pair_json(q));
        for (const SkippedBranch& b : s.skipped) r.notes.push_back("pole branch " + std::to_string(b.branch) + " skipped: " + b.reason);
    }
    json full = json::array();
    for (double E : transmission_resonances_1d(w, std::max(p.n_max, 1))) full.push_back(E);
    r.data = {{"sweep", sweep}, {"poles", poles}, {"full_transmission", full}};
    return r;
}

inline CMatrix read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open --matrix " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw DomainError(std::string("--matrix is not valid JSON: ") + e.what());
    }
    if (!j.is_array() || j.empty()) throw DomainError("--matrix must be a non-empty array of rows");
    const std::size_t n = j.size();
    CMatrix M(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!j[i].is_array() || j[i].size() != n) throw DomainError("--matrix must be square");
        for (std::size_t k = 0; k < n; ++k) {
            const json& e = j[i][k];
            if (e.is_number())
                M(i, k) = e.get<double>();
            else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
                M(i, k) = cplx{e[0].get<double>(), e[1].get<double>()};
            else
                throw DomainError("--matrix entries must be numbers or [re, im] pairs");
        }
    }
    return M;
}

inline Result cmd_ptmatrix(const Params& p) {
    if (p.s && !p.matrix_file.empty()) throw DomainError("give either --s or --matrix, not both");
    if (!p.s && p.matrix_file.empty()) throw DomainError("ptmatrix needs --s or --matrix");
    const FiniteOperator H = p.s ? m_of_s(*p.s) : FiniteOperator(read_matrix_file(p.matrix_file));
    SpectrumReport rep = classify_spectrum(H, p.tol);
    Result r;
    json ev = json::array(), clusters = json::array();
    r.table.columns = {"index", "re", "im"};
    for (Eigen::Index i = 0; i < rep.eigenvalues.size(); ++i) {
        ev.push_back(complex_json(rep.eigenvalues(i)));
        r.table.rows.push_back({(long long)i, rep.eigenvalues(i).real(), rep.eigenvalues(i).imag()});
    }
    for (const EigenCluster& c : rep.clusters)
        clusters.push_back({{"eigenvalue", complex_json(c.eigenvalue)}, {"algebraic", c.algebraic}, {"geometric", c.geometric}});
    json inter = nullptr;
    try {
        Intertwiner v = solve_intertwiner(H);
        json V = json::array();
        for (Eigen::Index i = 0; i < v.V.dim(); ++i) {
            json row = json::array();
            for (Eigen::Index k = 0; k < v.V.dim(); ++k) row.push_back(complex_json(v.V.matrix(i, k)));
            V.push_back(row);
        }
        inter = {{"V", V}, {"residual", v.residual}, {"condition", v.condition}, {"kernel_dim", v.kernel_dim}};
    } catch (const NoInvertibleIntertwiner& e) {
        r.notes.push_back(std::string("no intertwiner: ") + e.what());
    }
    r.data = {{"classification", to_string(rep.classification)}, {"eigenvalues", ev}, {"clusters", clusters}, {"intertwiner", inter}};
    return r;
}

inline Result cmd_pu(const Params& p) {
    PUSpec s = p.realization == "unequal" ? PUSpec::unequal(p.omega1, p.omega2)
               : p.realization == "equal" ? PUSpec::equal(p.omega1)
                                          : PUSpec::pair(p.pair_a, p.pair_b);
    PUResult res = pu_rayleigh_and_residual(s, {p.box, p.grid});
    PUCoefficients c = pu_hamiltonian_coefficients(s);
    Result r;
    r.data = {{"realization", to_string(s.realization)},
              {"omega1", complex_json(s.omega1)},
              {"omega2", complex_json(s.omega2)},
              {"E_est", res.E_est.real()},
              {"residual", res.residual},
              {"ratio_to_sum", res.ratio_to_sum},
              {"h", res.h},
              {"taxonomy", to_string(pu_taxonomy(s))},
              {"coefficients", {{"pz2", complex_json(c.pz2)}, {"pzx", complex_json(c.pzx)}, {"x2", complex_json(c.x2)}, {"z2", complex_json(c.z2)}}}};
    r.table.columns = {"E_est", "residual", "ratio_to_sum", "h"};
    r.table.rows.push_back({res.E_est.real(), res.residual, res.ratio_to_sum, res.h});
    r.notes.push_back("E_est / (omega1 + omega2) = " + format_double(res.ratio_to_sum));
    return r;
}

inline Result cmd_propagator(const Params& p) {
    PropagatorSpec spec{p.e0, p.gamma, p.kind == "breit-wigner" ? PropagatorKind::breit_wigner : PropagatorKind::pt_pair,
                        p.contour == "real-axis" ? Contour::real_axis : Contour::deformed_lower};
    spec.validate();
    const auto xs = linspace(p.xmin, p.xmax, p.n);
    Result r;
    r.data = json::array();
    const bool energy = p.domain == "energy";
    r.table.columns = {energy ? "E" : "t", "re", "im"};
    for (double x : xs) {
        const cplx g = energy ? propagator_energy(spec, x) : propagator_time(spec, x);
        r.data.push_back({{energy ? "E" : "t", x}, {"re", g.real()}, {"im", g.imag()}});
        r.table.rows.push_back({x, g.real(), g.imag()});
    }
    return r;
}

inline Result cmd_verify(bool& all_passed) {
    Result r;
    r.data = json::array();
    r.table.columns = {"check", "status", "value", "tolerance"};
    all_passed = true;
    for (const InvariantCheck& c : run_invariant_checks()) {
        all_passed = all_passed && c.passed;
        json row = {{"check", c.name}, {"passed", c.passed}, {"value", c.value}, {"tolerance", c.tolerance}};
        if (!c.error.empty()) row["error"] = c.error;
        r.data.push_back(row);
        r.table.rows.push_back({c.name, std::string(c.passed ? "PASS" : "FAIL"), c.value, c.tolerance});
    }
    return r;
}

inline void print_verify_table(std::ostream& os, const Table& t) {
    std::size_t width = 5;
    for (const auto& row : t.rows) width = std::max(width, std::get<std::string>(row[0]).size());
    for (const auto& row : t.rows) {
        const std::string& name = std::get<std::string>(row[0]);
        os << std::get<std::string>(row[1]) << "  " << name << std::string(width - name.size(), ' ') << "  "
           << format_double(std::get<double>(row[2])) << " <= " << format_double(std::get<double>(row[3])) << "\n";
    }
}

namespace detail {

inline const std::vector<std::string>& subcommand_names() {
    static const std::vector<std::string> names{"bound", "resonances", "exceptional", "scatter", "well1d",
                                                "ptmatrix", "pu", "propagator", "verify-all"};
    return names;
}

inline std::string json_scalar_token(const json& v, const std::string& key) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
        return buf;
    }
    throw DomainError("config key '" + key + "' must be a string or a number");
}

// Config entries become flags placed ahead of the command line so later flags win.
inline std::vector<std::string> expand_config(std::vector<std::string> args) {
    std::string path;
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw DomainError("--config needs a path");
            path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
        }
    }
    if (path.empty()) return rest;
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open --config " + path);
    json cfg;
    try {
        cfg = json::parse(in);
    } catch (const json::exception& e) {
        throw DomainError(std::string("--config is not valid JSON: ") + e.what());
    }
    if (!cfg.is_object()) throw DomainError("--config must hold a JSON object");

    const auto& names = subcommand_names();
    std::string sub;
    std::vector<std::string> user;
    for (const std::string& a : rest) {
        if (sub.empty() && std::find(names.begin(), names.end(), a) != names.end())
            sub = a;
        else
            user.push_back(a);
    }
    if (sub.empty() && cfg.contains("subcommand")) sub = cfg["subcommand"].get<std::string>();
    if (sub.empty()) throw DomainError("no subcommand on the command line or in --config");
    std::vector<std::string> out{sub};
    for (auto it = cfg.begin(); it != cfg.end(); ++it) {
        if (it.key() == "subcommand") continue;
        out.push_back("--" + it.key());
        out.push_back(json_scalar_token(it.value(), it.key()));
    }
    out.insert(out.end(), user.begin(), user.end());
    return out;
}

}  // namespace detail

inline int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        args = detail::expand_config(args);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return invalid;
    }

    Params p;
    CLI::App app{"Square-well resonance toolkit", "reswell"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.set_version_flag("--version", version);

    std::vector<std::pair<std::string, std::function<json()>>> echo;
    auto record = [&](CLI::App* sub, const std::string& name, auto& var) {
        echo.emplace_back(sub->get_name() + "." + name, [&var]() -> json {
            using T = std::decay_t<decltype(var)>;
            if constexpr (std::is_same_v<T, std::optional<double>>)
                return var ? json(*var) : json(nullptr);
            else
                return json(var);
        });
    };
    auto add = [&](CLI::App* sub, const std::string& name, auto& var, const std::string& help) {
        record(sub, name, var);
        return sub->add_option("--" + name, var, help);
    };
    auto common = [&](CLI::App* sub, bool well) {
        add(sub, "format", p.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
        add(sub, "output", p.output, "write to this file instead of stdout");
        if (!well) return;
        add(sub, "units", p.units, "natural or si")->check(CLI::IsMember({"natural", "si"}));
        add(sub, "hbar", p.hbar, "hbar (si units)");
        add(sub, "mass", p.mass, "particle mass (si units)");
        add(sub, "radius", p.radius, "well radius or width (si units)");
    };

    auto* bound = app.add_subcommand("bound", "bound states below V0");
    common(bound, true);
    add(bound, "v0", p.v0, "exterior potential")->required();

    auto* res = app.add_subcommand("resonances", "conjugate resonance pairs");
    common(res, true);
    add(res, "v0", p.v0, "exterior potential")->required();
    add(res, "n-max", p.n_max, "highest branch")->check(CLI::Range(1, 64));
    add(res, "geometry", p.geometry, "radial3d or line1d")->check(CLI::IsMember({"radial3d", "line1d"}));

    auto* exc = app.add_subcommand("exceptional", "threshold depths");
    common(exc, true);
    add(exc, "n", p.n, "number of depths")->required()->check(CLI::Range(1, 10000));

    auto* sc = app.add_subcommand("scatter", "s-wave phase shift sweep");
    common(sc, true);
    add(sc, "v0", p.v0, "exterior potential")->required();
    add(sc, "emin", p.emin, "first energy")->required();
    add(sc, "emax", p.emax, "last energy")->required();
    add(sc, "n", p.n, "number of energies")->required();

    auto* w1 = app.add_subcommand("well1d", "one-dimensional transmission");
    common(w1, true);
    add(w1, "v0", p.v0, "exterior potential")->required();
    add(w1, "emin", p.emin, "first energy")->required();
    add(w1, "emax", p.emax, "last energy")->required();
    add(w1, "n", p.n, "number of energies")->required();
    add(w1, "n-max", p.n_max, "pole branches (0 for none)")->check(CLI::Range(0, 64));

    auto* pt = app.add_subcommand("ptmatrix", "spectrum and intertwiner of a finite operator");
    common(pt, false);
    add(pt, "s", p.s, "coupling of the two-level family");
    add(pt, "matrix", p.matrix_file, "JSON file with rows of numbers or [re, im] pairs");
    add(pt, "tol", p.tol, "eigenvalue clustering tolerance");

    auto* pu = app.add_subcommand("pu", "two-frequency oscillator ground state");
    common(pu, false);
    add(pu, "realization", p.realization, "unequal, equal or pair")->check(CLI::IsMember({"unequal", "equal", "pair"}));
    add(pu, "omega1", p.omega1, "first frequency");
    add(pu, "omega2", p.omega2, "second frequency");
    add(pu, "a", p.pair_a, "real part for a pair");
    add(pu, "b", p.pair_b, "imaginary part for a pair");
    add(pu, "box", p.box, "half-width of the grid");
    add(pu, "grid", p.grid, "points per axis");

    auto* pr = app.add_subcommand("propagator", "single-pole and pair propagators");
    common(pr, false);
    add(pr, "e0", p.e0, "pole centre");
    add(pr, "gamma", p.gamma, "pole width");
    add(pr, "kind", p.kind, "breit-wigner or pt-pair")->check(CLI::IsMember({"breit-wigner", "pt-pair"}));
    add(pr, "contour", p.contour, "real-axis or deformed-lower")->check(CLI::IsMember({"real-axis", "deformed-lower"}));
    add(pr, "domain", p.domain, "energy or time")->check(CLI::IsMember({"energy", "time"}));
    add(pr, "min", p.xmin, "first sample");
    add(pr, "max", p.xmax, "last sample");
    add(pr, "n", p.n, "number of samples")->required();

    auto* va = app.add_subcommand("verify-all", "run the invariant suite");
    common(va, false);

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::CallForVersion&) {
        out << version << "\n";
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return invalid;
    }

    CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    Result result;
    bool verify_passed = true;
    try {
        if (name == "bound") result = cmd_bound(p);
        else if (name == "resonances") result = cmd_resonances(p, p.geometry == "line1d" ? Geometry::line1d : Geometry::radial3d);
        else if (name == "exceptional") result = cmd_exceptional(p);
        else if (name == "scatter") result = cmd_scatter(p);
        else if (name == "well1d") result = cmd_well1d(p);
        else if (name == "ptmatrix") result = cmd_ptmatrix(p);
        else if (name == "pu") result = cmd_pu(p);
        else if (name == "propagator") result = cmd_propagator(p);
        else result = cmd_verify(verify_passed);
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return invalid;
    } catch (const NotExceptional& e) {
        err << "error: " << e.what() << "\n";
        return invalid;
    } catch (const BoundaryLeak& e) {
        err << "error: " << e.what() << "\n";
        return invalid;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return no_convergence;
    }

    json config = json::object();
    const std::string prefix = name + ".";
    for (const auto& [key, get] : echo)
        if (key.rfind(prefix, 0) == 0) config[key.substr(prefix.size())] = get();
    config["subcommand"] = name;
    json doc = {{"data", result.data}, {"meta", {{"version", version}, {"config", config}}}};

    std::ostringstream body;
    if (p.format == "csv")
        write_csv(body, result.table);
    else {
        write_json(body, doc);
        body << "\n";
    }

    for (const std::string& n : result.notes) err << "note: " << n << "\n";
    if (name == "verify-all") print_verify_table(out, result.table);
    if (!p.output.empty()) {
        std::ofstream f(p.output, std::ios::binary);
        if (!f) {
            err << "error: cannot write --output " << p.output << "\n";
            return invalid;
        }
        f << body.str();
    } else if (name != "verify-all") {
        out << body.str();
    }
    if (name == "verify-all" && !verify_passed) return check_failed;
    return ok;
}

}  // namespace reswell::cli
