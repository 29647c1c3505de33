// rab: evaluate energy-per-bit bounds for massive random access over
// quasi-static Rayleigh fading. Subcommands: point, sweep, figure, validate.
//
// Exit status: 0 ok, 1 validation failure, 2 usage error, 3 I/O error.
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rab/rab.hpp"

namespace {

struct Options {
    int k = 100;
    double pa = 0.6;
    double eps = 1e-3;
    double mu = 0.0;
    double pa_mu = 0.0;
    bool has_mu = false, has_pa_mu = false;
    std::string bounds_str;
    std::string grid_str;
    std::string axis_str = "mu";
    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 1;
    double delta3 = 0.0;
    int jobs = 0;
    rab::SearchOptions search;
    rab::QuadratureSpec quad;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Flat INI: [params] / [sweep] / [search] sections of key = value lines.
// Command-line flags parsed afterwards override these.
void load_config(const std::string& path, Options& o) {
    std::ifstream f(path);
    if (!f) throw std::ios_base::failure("cannot read config file: " + path);
    std::string line, section;
    auto bad = [&](const std::string& why) {
        throw std::invalid_argument("config " + path + ": " + why);
    };
    while (std::getline(f, line)) {
        const auto cpos = line.find_first_of("#;");
        if (cpos != std::string::npos) line.erase(cpos);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') bad("malformed section: " + line);
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) bad("expected key = value: " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        const std::string q = section + "." + key;
        try {
            if (q == "params.k") o.k = std::stoi(val);
            else if (q == "params.pa") o.pa = std::stod(val);
            else if (q == "params.eps") o.eps = std::stod(val);
            else if (q == "params.mu") { o.mu = std::stod(val); o.has_mu = true; }
            else if (q == "params.pa_mu") { o.pa_mu = std::stod(val); o.has_pa_mu = true; }
            else if (q == "sweep.axis") o.axis_str = val;
            else if (q == "sweep.grid") o.grid_str = val;
            else if (q == "sweep.bounds") o.bounds_str = val;
            else if (q == "sweep.out") o.out_path = val;
            else if (q == "search.coarse_grid_points") o.search.coarse_grid_points = std::stoi(val);
            else if (q == "search.refine_tolerance") o.search.refine_tolerance = std::stod(val);
            else if (q == "search.max_refinements") o.search.max_refinements = std::stoi(val);
            else if (q == "search.open_interval_margin") o.search.open_interval_margin = std::stod(val);
            else if (q == "search.quad_abs_tol") o.quad.abs_tol = std::stod(val);
            else if (q == "search.quad_rel_tol") o.quad.rel_tol = std::stod(val);
            else if (q == "search.quad_tail_cut") o.quad.tail_cut = std::stod(val);
            else if (q == "search.delta3") o.delta3 = std::stod(val);
            else if (q == "search.jobs") o.jobs = std::stoi(val);
            else if (q == "search.seed") o.seed = std::stoull(val);
            else bad("unknown key: " + q);
        } catch (const std::invalid_argument&) {
            bad("bad value for " + q + ": " + val);
        }
    }
}

std::vector<rab::BoundKind> parse_bounds(const std::string& s) {
    std::vector<rab::BoundKind> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        if (tok == "all") {
            for (auto b : {rab::BoundKind::csir_ach, rab::BoundKind::csir_conv,
                           rab::BoundKind::nocsi_ach, rab::BoundKind::nocsi_conv,
                           rab::BoundKind::nocsi_ach_known_activity, rab::BoundKind::tdma})
                out.push_back(b);
            continue;
        }
        const auto k = rab::parse_bound_kind(tok);
        if (!k) throw std::invalid_argument("unknown bound: " + tok);
        out.push_back(*k);
    }
    if (out.empty()) throw std::invalid_argument("empty bounds list");
    return out;
}

// "start:stop:points[:log|:lin]" or an explicit comma list.
std::vector<double> parse_grid(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty grid");
    std::vector<double> g;
    if (s.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(s);
        std::string tok;
        while (std::getline(ss, tok, ':')) parts.push_back(trim(tok));
        if (parts.size() < 3 || parts.size() > 4)
            throw std::invalid_argument("grid range must be start:stop:points[:log|:lin]");
        const double start = std::stod(parts[0]);
        const double stop = std::stod(parts[1]);
        const int n = std::stoi(parts[2]);
        const std::string mode = parts.size() == 4 ? parts[3] : "log";
        if (n < 1 || !(start < stop) || (mode != "log" && mode != "lin"))
            throw std::invalid_argument("bad grid range: " + s);
        if (mode == "log") {
            if (!(start > 0)) throw std::invalid_argument("log grid needs positive start");
            g = rab::log_grid(start, stop, n);
        } else {
            for (int i = 0; i < n; ++i)
                g.push_back(i == n - 1 ? stop : start + i * ((stop - start) / (n - 1)));
        }
    } else {
        std::stringstream ss(s);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            tok = trim(tok);
            if (!tok.empty()) g.push_back(std::stod(tok));
        }
    }
    if (g.empty()) throw std::invalid_argument("empty grid");
    return g;
}

void print_results(const rab::SystemParams& p, const std::vector<rab::BoundResult>& rs) {
    std::printf("k=%d mu=%.10g pa=%.10g eps=%.10g S=%.10g\n", p.k, p.mu, p.pa, p.eps, p.S);
    std::printf("%-26s %14s %10s  %s\n", "bound", "eb_linear", "eb_db", "detail");
    for (const auto& r : rs) {
        if (r.eb.feasible)
            std::printf("%-26s %14.8g %10.4f  %s%s%s\n", rab::to_string(r.kind), r.eb.linear,
                        r.eb.db, r.diagnostics.active_constraint.c_str(),
                        r.diagnostics.active_constraint.empty() ? "" : " ",
                        r.diagnostics.notes.c_str());
        else
            std::printf("%-26s %14s %10s  %s\n", rab::to_string(r.kind), "infeasible", "-",
                        r.diagnostics.notes.c_str());
    }
}

int run(int argc, char** argv) {
    Options o;
    // Config file values load first so explicit flags can override them.
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--config") load_config(argv[i + 1], o);

    CLI::App app{"energy-per-bit bounds for massive random access"};
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* c) {
        c->add_option("--k", o.k, "payload size in bits");
        c->add_option("--pa", o.pa, "activity probability");
        c->add_option("--eps", o.eps, "target per-user error probability");
        c->add_option("--config", o.config_path, "INI config file (flags override)");
        c->add_option("--seed", o.seed, "seed for randomized checks");
        c->add_option("--delta3", o.delta3, "override of the third margin (default 0)");
        c->add_option("--jobs", o.jobs, "worker threads (0 = hardware)");
        c->add_option("--grid-points", o.search.coarse_grid_points, "coarse grid points per axis");
        c->add_option("--out", o.out_path, "output path");
    };

    CLI::App* point = app.add_subcommand("point", "evaluate bounds at one parameter point");
    add_common(point);
    point->add_option("--mu", o.mu, "UE density")->trigger_on_parse();
    point->add_option("--pa-mu", o.pa_mu, "active UE density pa*mu");
    point->add_option("--bounds", o.bounds_str, "comma list or 'all'");

    CLI::App* sweep = app.add_subcommand("sweep", "sweep an axis, write CSV");
    add_common(sweep);
    sweep->add_option("--axis", o.axis_str, "mu or pa_mu");
    sweep->add_option("--grid", o.grid_str, "start:stop:points[:log|:lin] or comma list");
    sweep->add_option("--bounds", o.bounds_str, "comma list or 'all'");

    CLI::App* figure = app.add_subcommand("figure", "reproduce a canonical trade-off figure");
    std::string which;
    figure->add_option("which", which, "fig1 or fig2")->required();
    add_common(figure);

    CLI::App* validate = app.add_subcommand("validate", "run the validation suite");
    add_common(validate);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const bool mu_given = point->count("--mu") > 0 || o.has_mu;
    const bool pamu_given = point->count("--pa-mu") > 0 || o.has_pa_mu;

    if (point->parsed()) {
        if (mu_given == pamu_given)
            throw std::invalid_argument("point: give exactly one of --mu / --pa-mu");
        const double mu = mu_given ? o.mu : o.pa_mu / o.pa;
        const auto params = rab::SystemParams::make(o.k, mu, o.pa, o.eps);
        const auto bounds = parse_bounds(o.bounds_str);
        const auto rs = rab::run_point(params, bounds, o.search, o.quad, o.delta3);
        print_results(params, rs);
        if (!o.out_path.empty()) {
            rab::SweepSpec spec;
            spec.axis = pamu_given ? rab::SweepAxis::pa_mu : rab::SweepAxis::mu;
            spec.grid = {pamu_given ? o.pa_mu : mu};
            spec.k = o.k;
            spec.pa = o.pa;
            spec.eps = o.eps;
            spec.bounds = bounds;
            spec.search = o.search;
            spec.quadrature = o.quad;
            spec.delta3 = o.delta3;
            spec.jobs = o.jobs;
            rab::run_sweep_to_file(spec, o.out_path);
        }
        return 0;
    }

    if (sweep->parsed()) {
        rab::SweepSpec spec;
        if (o.axis_str == "mu") spec.axis = rab::SweepAxis::mu;
        else if (o.axis_str == "pa_mu") spec.axis = rab::SweepAxis::pa_mu;
        else throw std::invalid_argument("axis must be mu or pa_mu");
        spec.grid = parse_grid(o.grid_str);
        spec.k = o.k;
        spec.pa = o.pa;
        spec.eps = o.eps;
        spec.bounds = parse_bounds(o.bounds_str);
        spec.search = o.search;
        spec.quadrature = o.quad;
        spec.delta3 = o.delta3;
        spec.jobs = o.jobs;
        spec.validate();
        if (o.out_path.empty()) throw std::invalid_argument("sweep: --out is required");
        const auto sum = rab::run_sweep_to_file(spec, o.out_path);
        std::printf("wrote %zu rows (%zu infeasible) to %s\n", sum.rows, sum.infeasible,
                    o.out_path.c_str());
        return 0;
    }

    if (figure->parsed()) {
        const std::string dir = o.out_path.empty() ? "." : o.out_path;
        const auto files = rab::emit_figure(which, dir, o.search, o.quad, o.jobs);
        for (const auto& f : files) std::printf("wrote %s\n", f.c_str());
        return 0;
    }

    if (validate->parsed()) {
        rab::ValidateOptions vo;
        vo.seed = o.seed;
        bool ok;
        if (!o.out_path.empty()) {
            std::ofstream f(o.out_path, std::ios::binary);
            if (!f) throw std::ios_base::failure("cannot open report file: " + o.out_path);
            ok = rab::validate(f, vo);
            std::printf("%s (report: %s)\n", ok ? "VALIDATION PASSED" : "VALIDATION FAILED",
                        o.out_path.c_str());
        } else {
            ok = rab::validate(std::cout, vo);
        }
        return ok ? 0 : 1;
    }
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::ios_base::failure& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
