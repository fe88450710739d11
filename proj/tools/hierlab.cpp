// hierlab: generate integrable-hierarchy tables, run forward scattering and
// Fredholm-determinant cross-checks, evolve the flows, and run the
// verification suites. One binary, subcommand style; every output artifact
// embeds the fully materialized configuration.

#include "hierlab/flows/evolve.hpp"
#include "hierlab/io/svg.hpp"
#include "hierlab/io/table_io.hpp"
#include "hierlab/scattering/fredholm.hpp"
#include "hierlab/scattering/generating.hpp"
#include "hierlab/verify.hpp"

#include <CLI11.hpp>

#include <future>
#include <iostream>
#include <sstream>

using namespace hierlab;
namespace fs = std::filesystem;
namespace sc = hierlab::scattering;
namespace fl = hierlab::flows;

namespace {

struct Common {
    std::string out = "out";
    std::string config_path;
    unsigned seed = 20260809;
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}
std::string fmt(cdouble v) { return fmt(v.real()) + (v.imag() < 0 ? "" : "+") + fmt(v.imag()) + "i"; }

int thread_cap() {
    if (const char* env = std::getenv("HIERARCHYLAB_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

// "sech:amp=0.5,width=2" | "csv:path"
sc::Potential parse_potential(const std::string& spec) {
    auto colon = spec.find(':');
    std::string name = spec.substr(0, colon);
    std::map<std::string, std::string> kv;
    if (colon != std::string::npos) {
        std::stringstream ss(spec.substr(colon + 1));
        std::string item;
        while (std::getline(ss, item, ',')) {
            auto eq = item.find('=');
            if (eq == std::string::npos)
                kv[""] = item;
            else
                kv[item.substr(0, eq)] = item.substr(eq + 1);
        }
    }
    sc::Potential p;
    if (name == "csv") {
        std::ifstream f(kv.count("") ? kv[""] : kv["path"]);
        if (!f) throw CLI::ValidationError("--potential", "cannot open csv file");
        std::vector<double> xs;
        std::vector<cdouble> vals;
        std::string line;
        while (std::getline(f, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::replace(line.begin(), line.end(), ',', ' ');
            std::istringstream ls(line);
            double x, re, im = 0.0;
            if (ls >> x >> re) {
                ls >> im;
                xs.push_back(x);
                vals.push_back({re, im});
            }
        }
        if (xs.size() < 16) throw CLI::ValidationError("--potential", "csv needs >= 16 samples");
        GridFunction g;
        g.geom = Geometry::Line;
        g.a = xs.front();
        g.length = xs.back() - xs.front();
        g.v = std::move(vals);
        return sc::Potential::from_samples(std::move(g));
    }
    static const std::map<std::string, sc::Potential::Kind> kinds = {
        {"zero", sc::Potential::Kind::Zero},       {"sech", sc::Potential::Kind::Sech},
        {"sech2", sc::Potential::Kind::Sech2},     {"sech4", sc::Potential::Kind::Sech4},
        {"gaussian", sc::Potential::Kind::Gaussian}, {"bump", sc::Potential::Kind::TwoBump},
        {"twobump", sc::Potential::Kind::TwoBump}};
    auto it = kinds.find(name);
    if (it == kinds.end()) throw CLI::ValidationError("--potential", "unknown family " + name);
    p.kind = it->second;
    if (kv.count("a") || kv.count("amp")) p.amp = std::stod(kv.count("a") ? kv["a"] : kv["amp"]);
    if (kv.count("w") || kv.count("width")) p.width = std::stod(kv.count("w") ? kv["w"] : kv["width"]);
    if (kv.count("sep")) p.sep = std::stod(kv["sep"]);
    return p;
}

// "0+2i", "1+2i", "2i", "-0.5+4i"
cdouble parse_z(std::string s) {
    if (s.empty() || s.back() != 'i') throw CLI::ValidationError("--z", "expected re+imi");
    s.pop_back();
    auto pos = s.find_last_of("+-");
    if (pos == std::string::npos || pos == 0)
        return {0.0, std::stod(s)};
    double im = std::stod(s.substr(pos));
    double re = std::stod(s.substr(0, pos));
    return {re, im};
}

// "cos:amp=0.5,k=1;cos:amp=0.1,k=2"
GridFunction parse_initial(const std::string& spec, std::size_t n, double period) {
    GridFunction g = GridFunction::zeros(Geometry::Periodic, 0.0, period, n);
    std::stringstream ss(spec);
    std::string part;
    while (std::getline(ss, part, ';')) {
        auto colon = part.find(':');
        std::string name = part.substr(0, colon);
        double amp = 0.5;
        int k = 1;
        if (colon != std::string::npos) {
            std::stringstream ps(part.substr(colon + 1));
            std::string item;
            while (std::getline(ps, item, ',')) {
                auto eq = item.find('=');
                std::string key = item.substr(0, eq), val = item.substr(eq + 1);
                if (key == "amp" || key == "a") amp = std::stod(val);
                if (key == "k") k = std::stoi(val);
            }
        }
        for (std::size_t j = 0; j < n; ++j) {
            double x = g.x(j);
            if (name == "cos")
                g.v[j] += amp * std::cos(k * x);
            else if (name == "sin")
                g.v[j] += amp * std::sin(k * x);
            else
                throw CLI::ValidationError("--initial", "unknown component " + name);
        }
    }
    return g;
}

void write_json(const fs::path& p, const ordered_json& j) { io::write_file(p, j.dump(2) + "\n"); }

// ----------------------------------------------------------------- gen

int cmd_gen(const Common& c, const std::string& family, int N) {
    ordered_json cfg{{"command", "gen"}, {"family", family}, {"n", N}, {"out", c.out}};
    using hierarchy::Family;
    try {
        std::vector<std::pair<int, ordered_json>> entries;
        std::string famdir = family;
        std::vector<std::string> pretty_lines;
        if (family == "akns") {
            auto t = hierarchy::akns_table(N);
            for (int n = 0; n <= N; ++n) {
                entries.emplace_back(n, io::entry_to_json(t, n));
                pretty_lines.push_back(io::entry_pretty(t, n));
            }
        } else if (family == "kdv") {
            auto t = hierarchy::lenard_sequence(N);
            for (int n = 0; n <= N; ++n) {
                entries.emplace_back(n, io::entry_to_json(t, n));
                pretty_lines.push_back(io::entry_pretty(t, n));
            }
        } else if (family == "gardner") {
            auto lenard = hierarchy::lenard_sequence(std::max(0, N - 1));
            auto t = hierarchy::gardner_hamiltonians(N, lenard);
            for (int n = 0; n <= N; ++n) {
                t.entries[static_cast<std::size_t>(n)].flux = hierarchy::gardner_flux(t, n);
                entries.emplace_back(n, io::entry_to_json(t, n));
                pretty_lines.push_back(io::entry_pretty(t, n));
            }
        } else if (family == "mkdv") {
            auto t = hierarchy::mkdv_hamiltonians(N, hierarchy::akns_table(2 * N + 1));
            for (int n = 0; n <= N; ++n) {
                entries.emplace_back(n, io::entry_to_json(t, n));
                pretty_lines.push_back(io::entry_pretty(t, n));
            }
        } else if (family == "goodvar") {
            auto lenard = hierarchy::lenard_sequence(std::max(0, N - 1));
            for (int n = 0; n <= N; ++n) {
                DiffPoly f = hierarchy::good_variable_equation(n, lenard);
                ordered_json j{{"family", "goodvar"}, {"n", n}, {"convention", "main-text-half"}};
                j["F"] = poly_to_json(f);
                j["vector_field"] = ordered_json::array({poly_to_json(x_derivative(f))});
                entries.emplace_back(n, std::move(j));
                pretty_lines.push_back("F_" + std::to_string(n) + " = " + pretty(f) + "\n");
            }
        } else {
            std::cerr << "gen: unknown family " << family << "\n";
            return 2;
        }
        for (auto& [n, j] : entries) {
            j["config"] = cfg;
            write_json(fs::path(c.out) / famdir / (std::to_string(n) + ".json"), j);
            io::write_file(fs::path(c.out) / famdir / (std::to_string(n) + ".txt"),
                           pretty_lines[static_cast<std::size_t>(n)]);
        }
        std::cout << "gen: wrote " << entries.size() << " entries to " << (fs::path(c.out) / famdir)
                  << "\n";
        return 0;
    } catch (const hierarchy::RecursionInconsistency& e) {
        std::cerr << "gen: recursion inconsistency: " << e.what() << "\n";
        return 2;
    } catch (const hierarchy::StructureViolation& e) {
        std::cerr << "gen: structure violation: " << e.what() << "\n";
        return 2;
    }
}

// ----------------------------------------------------------------- scatter

int cmd_scatter(const Common& c, const std::string& pot_spec, std::vector<std::string> z_specs,
                std::size_t grid, bool det2, int remainder_N, const std::string& z_ray,
                double tol_ode, double tol_res) {
    ordered_json cfg{{"command", "scatter"}, {"potential", pot_spec},
                     {"z", z_specs},         {"grid", grid},
                     {"det2", det2},         {"remainder", remainder_N},
                     {"z_ray", z_ray},       {"tol_ode", tol_ode},
                     {"tol_residual", tol_res}, {"out", c.out}};
    sc::Potential pot = parse_potential(pot_spec);
    sc::JostOptions opt;
    opt.grid_n = grid;
    opt.rel_tol = tol_ode;
    opt.abs_tol = tol_ode * 1e-2;
    opt.residual_tol = tol_res;

    std::string csv = "# config: " + cfg.dump() + "\n";
    csv += "z_re,z_im,T_re,T_im,Tr_re,Tr_im,wronskian_drift,t_minus1_re,t_minus1_im";
    if (det2) csv += ",det2_re,det2_im,route_diff";
    csv += "\n";

    struct Row {
        cdouble z, T, Tr, t1, d2;
        double drift = 0, diff = 0;
    };
    std::vector<std::future<Row>> futures;
    int cap = thread_cap();
    std::vector<Row> rows;
    try {
        for (const auto& zs : z_specs) {
            cdouble z = parse_z(zs);
            auto worker = [&, z]() {
                Row row;
                row.z = z;
                auto rec = sc::jost_solutions(pot, z, opt);
                row.T = rec.T;
                row.Tr = rec.T_renormalized;
                row.drift = rec.wronskian_drift;
                row.t1 = sc::t_minus1_kdv(pot, z, opt);
                if (det2) {
                    row.d2 = sc::t_minus1_det2(pot, z, grid);
                    row.diff = std::abs(row.d2 - row.t1);
                }
                return row;
            };
            if (cap > 1 && z_specs.size() > 1) {
                futures.push_back(std::async(std::launch::async, worker));
                if (futures.size() >= static_cast<std::size_t>(cap)) {
                    rows.push_back(futures.front().get());
                    futures.erase(futures.begin());
                }
            } else {
                rows.push_back(worker());
            }
        }
        for (auto& f : futures) rows.push_back(f.get());
    } catch (const std::exception& e) {
        std::cerr << "scatter: " << pot_spec << ": " << e.what() << "\n";
        return 3;
    }
    std::sort(rows.begin(), rows.end(),
              [](const Row& a, const Row& b) { return a.z.imag() < b.z.imag(); });
    for (const auto& r : rows) {
        ordered_json j{{"config", cfg}};
        j["z"] = {r.z.real(), r.z.imag()};
        j["T"] = {r.T.real(), r.T.imag()};
        j["T_renormalized"] = {r.Tr.real(), r.Tr.imag()};
        j["wronskian_drift"] = r.drift;
        j["t_minus1"] = {r.t1.real(), r.t1.imag()};
        j["grid"] = {{"n", grid}, {"a", pot.a}, {"b", pot.b}};
        if (det2) {
            j["t_minus1_det2"] = {r.d2.real(), r.d2.imag()};
            j["route_diff"] = r.diff;
        }
        write_json(fs::path(c.out) / ("scatter_z" + fmt(r.z.imag()) + "_" + fmt(r.z.real()) + ".json"), j);
        csv += fmt(r.z.real()) + "," + fmt(r.z.imag()) + "," + fmt(r.T.real()) + "," +
               fmt(r.T.imag()) + "," + fmt(r.Tr.real()) + "," + fmt(r.Tr.imag()) + "," +
               fmt(r.drift) + "," + fmt(r.t1.real()) + "," + fmt(r.t1.imag());
        if (det2) csv += "," + fmt(r.d2.real()) + "," + fmt(r.d2.imag()) + "," + fmt(r.diff);
        csv += "\n";
    }
    io::write_file(fs::path(c.out) / "scatter.csv", csv);

    if (remainder_N >= 0 && !z_ray.empty()) {
        auto lenard = hierarchy::lenard_sequence(std::max(2, remainder_N));
        std::vector<double> taus;
        std::stringstream ss(z_ray);
        std::string item;
        while (std::getline(ss, item, ',')) taus.push_back(std::stod(item));
        std::string rcsv = "# config: " + cfg.dump() + "\ntau,probe\n";
        std::vector<double> lt, lp;
        for (double tau : taus) {
            double probe = sc::remainder_probe(remainder_N, tau, pot, lenard, 4096);
            rcsv += fmt(tau) + "," + fmt(probe) + "\n";
            lt.push_back(std::log(tau));
            lp.push_back(std::log(probe));
        }
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < lt.size(); ++i) {
            sx += lt[i];
            sy += lp[i];
            sxx += lt[i] * lt[i];
            sxy += lt[i] * lp[i];
        }
        double nn = static_cast<double>(lt.size());
        double slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
        rcsv += "# fitted log-log slope: " + fmt(slope) + "\n";
        io::write_file(fs::path(c.out) / "remainder.csv", rcsv);
        std::cout << "scatter: remainder slope " << slope << "\n";
    }
    std::cout << "scatter: wrote " << rows.size() << " records to " << c.out << "\n";
    return 0;
}

// ----------------------------------------------------------------- flow

int cmd_flow(const Common& c, const std::string& family, int N, double tau0, double tau,
             std::size_t grid, double period, double dt, double t_end, const std::string& initial,
             bool intertwine, bool flux) {
    ordered_json cfg{{"command", "flow"}, {"family", family}, {"n", N},
                     {"tau0", tau0},      {"tau", tau},       {"grid", grid},
                     {"period", period},  {"dt", dt},         {"t_end", t_end},
                     {"initial", initial}, {"intertwine", intertwine}, {"flux", flux},
                     {"out", c.out}};
    fl::FlowSpec spec;
    if (family == "kdv")
        spec.family = fl::FlowFamily::KdV;
    else if (family == "gardner")
        spec.family = fl::FlowFamily::Gardner;
    else if (family == "goodvar")
        spec.family = fl::FlowFamily::GoodVariable;
    else if (family == "tauflow")
        spec.family = fl::FlowFamily::TauFlow;
    else {
        std::cerr << "flow: unknown family " << family << "\n";
        return 4;
    }
    spec.N = N;
    spec.tau0 = tau0;
    spec.tau = tau;
    spec.grid = grid;
    spec.period = period;
    spec.dt = dt;
    spec.t_end = t_end;
    spec.snapshot_stride = std::max<std::size_t>(1, static_cast<std::size_t>(t_end / dt / 100));

    GridFunction w0 = parse_initial(initial, grid, period);
    try {
        fl::Trajectory traj;
        hierarchy::HierarchyTable lenard, gardner;
        if (spec.family == fl::FlowFamily::TauFlow) {
            traj = fl::evolve_tau_flow(spec, w0);
        } else {
            lenard = hierarchy::lenard_sequence(std::max(N, 3));
            if (spec.family == fl::FlowFamily::Gardner) {
                gardner = hierarchy::gardner_hamiltonians(std::max(N, 3), lenard);
                traj = fl::evolve(spec, w0, gardner);
            } else {
                traj = fl::evolve(spec, w0, lenard);
            }
        }

        // trajectory snapshots
        std::string tcsv = "# config: " + cfg.dump() + "\nt";
        for (std::size_t j = 0; j < grid; ++j) tcsv += ",x" + std::to_string(j);
        tcsv += "\n";
        for (std::size_t i = 0; i < traj.states.size(); ++i) {
            tcsv += fmt(traj.times[i]);
            for (std::size_t j = 0; j < grid; ++j) tcsv += "," + fmt(traj.states[i].v[j].real());
            tcsv += "\n";
        }
        io::write_file(fs::path(c.out) / "trajectory.csv", tcsv);

        // conserved quantities
        if (spec.family == fl::FlowFamily::Gardner) {
            std::vector<std::pair<std::string, DiffPoly>> hams;
            hams.emplace_back("L2", DiffPoly::variable(var("w"), 0, 2));
            for (int m = 0; m <= std::min(3, gardner.order); ++m)
                hams.emplace_back("H" + std::to_string(m), gardner.at(m).hamiltonian);
            auto rep = fl::conservation_report(traj, hams, var("w"), tau0);
            std::string dcsv = "# config: " + cfg.dump() + "\nt";
            for (const auto& [name, vals] : rep.conserved) dcsv += "," + name + "_drift";
            dcsv += "\n";
            std::vector<io::SvgSeries> series;
            for (const auto& [name, vals] : rep.conserved) {
                io::SvgSeries s;
                s.label = name;
                for (std::size_t i = 0; i < vals.size(); ++i) {
                    s.x.push_back(rep.times[i]);
                    s.y.push_back(std::abs(vals[i] - vals.front()) + 1e-18);
                }
                series.push_back(std::move(s));
            }
            for (std::size_t i = 0; i < rep.times.size(); ++i) {
                dcsv += fmt(rep.times[i]);
                for (const auto& [name, vals] : rep.conserved)
                    dcsv += "," + fmt(std::abs(vals[i] - vals.front()));
                dcsv += "\n";
            }
            io::write_file(fs::path(c.out) / "conserved.csv", dcsv);
            io::write_file(fs::path(c.out) / "drift.svg",
                           io::svg_plot(series, "conserved-quantity drift"));
        }

        if (intertwine && spec.family == fl::FlowFamily::Gardner) {
            auto diag = fl::intertwining_check(spec, w0, lenard, gardner);
            std::string icsv = "# config: " + cfg.dump() + "\nt,miura,wmap,min_1pv\n";
            std::vector<io::SvgSeries> series(2);
            series[0].label = "miura";
            series[1].label = "wmap";
            for (std::size_t i = 0; i < diag.times.size(); ++i) {
                icsv += fmt(diag.times[i]) + "," + fmt(diag.residuals.at("miura")[i]) + "," +
                        fmt(diag.residuals.at("wmap")[i]) + "," +
                        fmt(diag.residuals.at("min_1pv")[i]) + "\n";
                series[0].x.push_back(diag.times[i]);
                series[0].y.push_back(diag.residuals.at("miura")[i] + 1e-18);
                series[1].x.push_back(diag.times[i]);
                series[1].y.push_back(diag.residuals.at("wmap")[i] + 1e-18);
            }
            io::write_file(fs::path(c.out) / "intertwining.csv", icsv);
            io::write_file(fs::path(c.out) / "intertwining.svg",
                           io::svg_plot(series, "Miura / W-map intertwining residuals"));
        }

        if (flux && spec.family == fl::FlowFamily::Gardner) {
            DiffPoly fl_poly = hierarchy::gardner_flux(gardner, N);
            auto diag = fl::flux_residual(traj, fl_poly, tau0);
            std::string fcsv = "# config: " + cfg.dump() + "\nt,flux_l2\n";
            for (std::size_t i = 0; i < diag.times.size(); ++i)
                fcsv += fmt(diag.times[i]) + "," + fmt(diag.residuals.at("flux_l2")[i]) + "\n";
            io::write_file(fs::path(c.out) / "flux_residual.csv", fcsv);
        }
        std::cout << "flow: " << traj.states.size() << " snapshots written to " << c.out << "\n";
        return 0;
    } catch (const fl::BlowupDetected& e) {
        std::cerr << "flow: " << e.what() << "\n";
        return 4;
    } catch (const fl::StabilityViolation& e) {
        std::cerr << "flow: " << e.what() << "\n";
        return 4;
    }
}

// ----------------------------------------------------------------- verify

int cmd_verify(const Common& c, const std::string& suite, bool fast, const std::string& inject) {
    ordered_json cfg{{"command", "verify"}, {"suite", suite}, {"fast", fast},
                     {"seed", c.seed},      {"out", c.out}};
    verify::Options opt;
    opt.fast = fast;
    opt.seed = c.seed;
    opt.inject_fault = inject;
    auto results = verify::run_suite(suite, opt);
    ordered_json rep{{"config", cfg}};
    rep["checks"] = ordered_json::array();
    std::size_t failures = 0;
    for (const auto& r : results) {
        std::cout << (r.pass ? "PASS " : "FAIL ") << r.name
                  << (r.detail.empty() ? "" : "  [" + r.detail + "]") << "\n";
        rep["checks"].push_back(
            {{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
        if (!r.pass) ++failures;
    }
    rep["total"] = results.size();
    rep["failures"] = failures;
    write_json(fs::path(c.out) / "verify_report.json", rep);
    std::cout << (failures == 0 ? "verify: all " : "verify: FAILURES ") << results.size()
              << " checks, " << failures << " failed\n";
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"symbolic + numerical laboratory for the KdV/Gardner/AKNS hierarchies"};
    app.require_subcommand(1);
    app.fallthrough();

    Common common;
    app.add_option("--out", common.out, "output directory");
    app.add_option("--seed", common.seed, "seed for randomized property checks");

    auto* gen = app.add_subcommand("gen", "generate hierarchy tables");
    std::string family = "akns";
    int N = 3;
    gen->add_option("--family", family, "akns|kdv|gardner|mkdv|goodvar")->required();
    gen->add_option("--n", N, "highest order")->required();

    auto* scatter = app.add_subcommand("scatter", "Jost / transmission / det2 runs");
    std::string pot = "sech:amp=0.5";
    std::vector<std::string> zs;
    std::size_t grid = 2048;
    bool det2 = false;
    int remainder_N = -1;
    std::string z_ray;
    double tol_ode = 1e-10, tol_res = 1e-7;
    scatter->add_option("--potential", pot, "family:params or csv:path");
    scatter->add_option("--z", zs, "spectral points re+imi (repeatable)");
    scatter->add_option("--grid", grid, "line grid size");
    scatter->add_flag("--det2", det2, "cross-check against the regularized determinant");
    scatter->add_option("--remainder", remainder_N, "remainder probe order N");
    scatter->add_option("--z-ray", z_ray, "comma list of tau values for the remainder probe");
    scatter->add_option("--tol-ode", tol_ode, "ODE relative tolerance");
    scatter->add_option("--tol-residual", tol_res, "residual gate");

    auto* flow = app.add_subcommand("flow", "evolve a flow on the periodic box");
    std::string ffamily = "gardner", initial = "cos:amp=0.5,k=1";
    int fN = 1;
    double tau0 = 2.0, tau = 2.0, period = 2.0 * M_PI, dt = 1e-4, t_end = 1.0;
    std::size_t fgrid = 256;
    bool intertwine = false, flux = false;
    flow->add_option("--family", ffamily, "kdv|gardner|goodvar|tauflow");
    flow->add_option("--n", fN, "flow order N");
    flow->add_option("--tau0", tau0, "Gardner/good-variable parameter");
    flow->add_option("--tau", tau, "tau-flow parameter");
    flow->add_option("--grid", fgrid, "periodic grid size");
    flow->add_option("--period", period, "period");
    flow->add_option("--dt", dt, "time step");
    flow->add_option("--t-end", t_end, "final time");
    flow->add_option("--initial", initial, "e.g. cos:amp=0.5,k=1;cos:amp=0.1,k=2");
    flow->add_flag("--intertwine", intertwine, "run the Miura/W-map intertwining diagnostic");
    flow->add_flag("--flux", flux, "run the energy-flux residual diagnostic");

    auto* verify_cmd = app.add_subcommand("verify", "run a verification suite");
    std::string suite = "all", inject;
    bool fast = false;
    verify_cmd->add_option("--suite", suite, "symbolic|scattering|flows|all");
    verify_cmd->add_flag("--fast", fast, "reduced grids and horizons");
    verify_cmd->add_option("--inject-fault", inject, "test fixture: corrupt a named table entry");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen(common, family, N);
        if (scatter->parsed())
            return cmd_scatter(common, pot, zs, grid, det2, remainder_N, z_ray, tol_ode, tol_res);
        if (flow->parsed())
            return cmd_flow(common, ffamily, fN, tau0, tau, fgrid, period, dt, t_end, initial,
                            intertwine, flux);
        if (verify_cmd->parsed()) return cmd_verify(common, suite, fast, inject);
    } catch (const std::exception& e) {
        std::cerr << "hierlab: " << e.what() << "\n";
        return 10;
    }
    return 0;
}
