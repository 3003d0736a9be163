// axifb: batch driver for the free-boundary laboratory.
#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>

#include "axifb/classify.hpp"
#include "axifb/errors.hpp"
#include "axifb/functionals.hpp"
#include "axifb/legendre.hpp"
#include "axifb/parallel.hpp"
#include "axifb/profiles.hpp"
#include "axifb/solver.hpp"
#include "config.hpp"
#include "svg.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace axifb;
using cli::Config;

namespace {

struct Run {
    Config cfg;
    fs::path out;
    bool plots = false;
    double tol_scale = 1.0;
};

const std::set<std::string> kEosKeys = {"model", "gamma", "A", "rho_bar0", "g", "eps0"};
const std::set<std::string> kProfileKeys = {"profile", "amp", "x1c", "x2c"};
const std::set<std::string> kBoxKeys = {"x1_lo", "x1_hi", "x2_lo", "x2_hi", "h"};

std::set<std::string> keys(std::initializer_list<std::set<std::string>> groups, std::set<std::string> extra = {}) {
    for (const auto& g : groups) extra.insert(g.begin(), g.end());
    return extra;
}

std::unique_ptr<ConstitutiveModel> model_from(const Config& c, const std::string& def) {
    EosParams p;
    p.gamma = c.num("gamma", p.gamma);
    p.A = c.num("A", p.A);
    p.rho_bar0 = c.num("rho_bar0", p.rho_bar0);
    p.g = c.num("g", p.g);
    p.eps0 = c.num("eps0", p.eps0);
    return make_model(c.str("model", def), p);
}

// Profile plus its degenerate point.
struct NamedProfile {
    ProfileSpec spec;
    Point point;
};

NamedProfile profile_from(const Config& c) {
    std::string name = c.str("profile");
    double x1c = c.num("x1c", 1.0), x2c = c.num("x2c", 0.5);
    NamedProfile p;
    if (name == "stokes") p = {stokes_corner_physical(x1c), {x1c, 0}};
    else if (name == "stokes_normalized") p = {stokes_corner_normalized(x1c), {x1c, 0}};
    else if (name == "stokes_printed") p = {stokes_corner_printed(x1c, c.num("rho_bar0", 1.0)), {x1c, 0}};
    else if (name == "axis") p = {axis_parabola(1.0, x2c), {0, x2c}};
    else if (name == "garabedian") p = {garabedian_bernoulli(), {0, 0}};
    else if (name == "garabedian_normalized") p = {garabedian_normalized(), {0, 0}};
    else if (name == "flat") p = {flat_origin(), {0, 0}};
    else if (name == "zero") p = {zero_profile(), {0, 0}};
    else throw ParseError("field 'profile': unknown profile '" + name + "'");
    if (c.has("amp")) p.spec.amp = c.num("amp");
    return p;
}

GridSpec box_from(const Config& c, Point around, double def_h) {
    bool axis = around.x1 == 0;
    double half = axis ? 0.5 : 0.5 * std::min(1.0, around.x1);
    double a1 = c.num("x1_lo", axis ? 0.0 : around.x1 - half), b1 = c.num("x1_hi", around.x1 + (axis ? 1.0 : half));
    double a2 = c.num("x2_lo", around.x2 - (axis ? 1.0 : half)), b2 = c.num("x2_hi", around.x2 + (axis ? 1.0 : half));
    double h = c.num("h", def_h);
    if (!(b1 > a1) || !(b2 > a2)) throw DomainError("grid box is empty");
    if (a1 < 0) throw DomainError("grid box must lie in x1 >= 0");
    return GridSpec::box(a1, b1, a2, b2, h);
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream os(path);
    if (!os) throw DomainError("cannot write " + path.string());
    os << j.dump(2) << '\n';
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream os(path);
    if (!os) throw DomainError("cannot write " + path.string());
    return os;
}

std::string f17(double v) { return format_double(v); }

int cmd_eos_table(const Run& run) {
    run.cfg.require_known(keys({kEosKeys}, {"t_min", "t_max", "t_count", "s_min", "s_max", "s_count"}));
    auto m = model_from(run.cfg, "gamma");
    double t0 = run.cfg.num("t_min", 0.0), t1 = run.cfg.num("t_max", 0.05);
    double s0 = run.cfg.num("s_min", 0.05), s1 = run.cfg.num("s_max", 0.25);
    int nt = run.cfg.integer("t_count", 11), ns = run.cfg.integer("s_count", 5);
    if (nt < 1 || ns < 1) throw DomainError("t_count and s_count must be positive");
    auto os = open_out(run.out / "eos_table.csv");
    os << "t,s,H,d1H,d2H,F,lambda\n";
    int skipped = 0;
    for (int js = 0; js < ns; ++js) {
        double s = ns == 1 ? s0 : s0 + (s1 - s0) * js / (ns - 1);
        double lam = m->lambda(s);
        for (int it = 0; it < nt; ++it) {
            double t = nt == 1 ? t0 : t0 + (t1 - t0) * it / (nt - 1);
            try {
                BernoulliState st = m->invert(t, s);
                FValue fv = m->F(t, s);
                os << f17(t) << ',' << f17(s) << ',' << f17(st.rho) << ',' << f17(st.d1H()) << ',' << f17(st.d2H()) << ','
                   << f17(fv.F) << ',' << f17(lam) << '\n';
            } catch (const StateError&) {
                ++skipped;
            } catch (const SubsonicityError&) {
                ++skipped;
            }
        }
    }
    if (skipped) std::cerr << "eos-table: skipped " << skipped << " supersonic or near-critical states\n";
    return 0;
}

int cmd_profile_check(const Run& run) {
    run.cfg.require_known({});
    const LegendreConstants& L = find_theta_star();
    json j;
    j["s_star"] = L.s_star;
    j["theta_star_deg"] = L.theta_star_deg;
    j["m0"] = L.m0;
    j["beta"] = L.beta;
    j["beta0"] = L.beta0;
    j["beta0_bernoulli"] = L.beta0_bernoulli;
    j["P_prime_at_s_star"] = legendre_P_prime(1.5, L.s_star);
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> ux(0.05, 1.0), uy(-1.0, 1.0), ul(0.1, 10.0);
    json list = json::array();
    std::pair<const char*, ProfileSpec> all[] = {{"stokes_normalized", stokes_corner_normalized(1.0)},
                                                 {"stokes", stokes_corner_physical(1.0)},
                                                 {"axis", axis_parabola(1.0, 0.0)},
                                                 {"garabedian", garabedian_bernoulli()},
                                                 {"flat", flat_origin()}};
    for (auto& [name, p] : all) {
        double hom = 0, pde = 0;
        int pde_n = 0;
        for (int k = 0; k < 100; ++k) {
            Point x{ux(rng), uy(rng)};
            double lam = ul(rng);
            Point c = p.center;
            Point y{c.x1 + lam * (x.x1 - c.x1), c.x2 + lam * (x.x2 - c.x2)};
            double a = p.value(y), b = std::pow(lam, p.degree()) * p.value(x);
            double sc = std::max(std::abs(a), std::abs(b));
            if (sc > 0) hom = std::max(hom, std::abs(a - b) / sc);
            try {
                pde = std::max(pde, std::abs(profile_pde_residual(p, x, 1e-3)));
                ++pde_n;
            } catch (const DomainError&) {
            }
        }
        json e;
        e["name"] = name;
        e["degree"] = p.degree();
        e["amp"] = p.amp;
        e["homogeneity_max_rel_error"] = hom;
        e["pde_residual_max"] = pde;
        e["pde_samples"] = pde_n;
        if (p.kind == ProfileKind::StokesCorner) {
            // |grad u|^2 against the free-boundary condition on both rays at unit distance
            double worst = 0;
            for (double phi : {M_PI / 3 * (1 - 1e-12), -M_PI / 3 * (1 - 1e-12)}) {
                Point x{p.center.x1 + std::sin(phi), p.center.x2 + std::cos(phi)};
                Vec2 g = p.gradient(x);
                double scale = name == std::string("stokes") ? p.center.x1 * p.center.x1 : 1.0;
                worst = std::max(worst, std::abs(g.norm2() / scale - (x.x2 - p.center.x2)));
            }
            e["free_boundary_condition_max"] = worst;
        }
        list.push_back(e);
    }
    j["profiles"] = list;
    write_json(run.out / "profile_check.json", j);
    return 0;
}

int cmd_profile_table(const Run& run) {
    run.cfg.require_known(keys({kProfileKeys, kBoxKeys}, {"rho_bar0"}));
    NamedProfile p = profile_from(run.cfg);
    GridSpec g = box_from(run.cfg, p.point, 1.0 / 128);
    auto os = open_out(run.out / "profile_table.csv");
    os << "x1,x2,u,ux1,ux2\n";
    for (int j = 0; j < g.n2; ++j)
        for (int i = 0; i < g.n1; ++i) {
            Point x{g.x1(i), g.x2(j)};
            Vec2 d = p.spec.gradient(x);
            os << f17(x.x1) << ',' << f17(x.x2) << ',' << f17(p.spec.value(x)) << ',' << f17(d.a) << ',' << f17(d.b) << '\n';
        }
    return 0;
}

int cmd_minimize(const Run& run) {
    run.cfg.require_known(keys({kEosKeys, kProfileKeys, kBoxKeys},
                               {"boundary_field", "eps_chi", "tol", "max_iter", "armijo", "step0", "max_halvings",
                                "window", "nested", "coarsest", "pin_negative_x2"}));
    auto m = model_from(run.cfg, "incompressible");
    MinimizeConfig mc;
    std::unique_ptr<GridField> trace;
    Point around{1, 0};
    if (run.cfg.has("boundary_field")) {
        trace = std::make_unique<GridField>(read_field(run.cfg.str("boundary_field")));
        const GridSpec& tg = trace->grid();
        around = {0.5 * (tg.x1_min + tg.x1_max()), 0.5 * (tg.x2_min + tg.x2_max())};
        mc.boundary = [&](Point x) { return trace->value(x); };
    } else {
        NamedProfile p = profile_from(run.cfg);
        around = p.point;
        mc.boundary = [spec = p.spec](Point x) { return spec.value(x); };
    }
    mc.grid = box_from(run.cfg, around, 1.0 / 64);
    mc.eps_chi = run.cfg.num("eps_chi", mc.eps_chi);
    mc.tol = run.cfg.num("tol", mc.tol) * run.tol_scale;
    mc.max_iter = run.cfg.integer("max_iter", mc.max_iter);
    mc.armijo = run.cfg.num("armijo", mc.armijo);
    mc.step0 = run.cfg.num("step0", mc.step0);
    mc.max_halvings = run.cfg.integer("max_halvings", mc.max_halvings);
    mc.window = run.cfg.integer("window", mc.window);
    mc.nested = run.cfg.flag("nested", mc.nested);
    mc.coarsest = run.cfg.integer("coarsest", mc.coarsest);
    mc.pin_negative_x2 = run.cfg.flag("pin_negative_x2", mc.pin_negative_x2);
    MinimizeResult res = minimize_EF(mc, *m);
    write_field((run.out / "field.txt").string(), res.field);
    json j;
    j["status"] = res.status;
    j["converged"] = res.converged;
    j["iterations"] = res.iterations;
    j["total_iterations"] = res.total_iterations;
    j["energy"] = res.energy;
    j["grad_norm"] = res.grad_norm;
    json log = json::array();
    for (const auto& e : res.log) log.push_back({{"iteration", e.iter}, {"energy", e.energy}, {"step", e.step}, {"max_gradient", e.max_grad}});
    j["log"] = log;
    write_json(run.out / "convergence.json", j);
    if (run.plots) cli::write_level_sets((run.out / "field.svg").string(), "minimizer", res.field);
    if (!res.converged) {
        std::cerr << "minimize: " << res.status << " after " << res.iterations << " iterations\n";
        return 2;
    }
    return 0;
}

// The field under study and its default point.
struct Subject {
    std::unique_ptr<Field> field;
    Point point;
};

Subject subject_from(const Config& c) {
    Subject s;
    if (c.has("field")) {
        s.field = std::make_unique<GridField>(read_field(c.str("field")));
        s.point = {0, 0};
    } else if (c.has("profile")) {
        NamedProfile p = profile_from(c);
        s.field = std::make_unique<ProfileField>(p.spec);
        s.point = p.point;
    } else {
        throw ParseError("config: need 'field = PATH' or 'profile = NAME'");
    }
    s.point.x1 = c.num("center_x1", s.point.x1);
    s.point.x2 = c.num("center_x2", s.point.x2);
    return s;
}

std::vector<double> radii_from(const Config& c, const Field& f, Point p, PointKind kind) {
    if (!c.has("r_min") && !c.has("r_max")) return default_radii(f, p, kind);
    std::vector<double> def = default_radii(f, p, kind);
    return log_radii(c.num("r_min", def.front()), c.num("r_max", def.back()), c.integer("per_decade", 24));
}

const std::set<std::string> kSubjectKeys = {"field", "center_x1", "center_x2", "kind", "r_min", "r_max", "per_decade"};

int cmd_sweep(const Run& run) {
    run.cfg.require_known(keys({kEosKeys, kProfileKeys, kSubjectKeys}, {"frequency"}));
    auto m = model_from(run.cfg, "incompressible");
    Subject s = subject_from(run.cfg);
    PointKind kind = run.cfg.has("kind") ? point_kind_from_string(run.cfg.str("kind")) : kind_of(s.point);
    std::vector<double> radii = radii_from(run.cfg, *s.field, s.point, kind);
    bool freq = run.cfg.flag("frequency", kind == PointKind::Origin);
    RadialSweep sw = radial_sweep(*s.field, *m, s.point, kind, radii, freq);
    auto os = open_out(run.out / "sweep.csv");
    os << "r,I,J,M,dM_fd,rhs,K1,K2,K3,K4,K5,K6,D,V,Vplus,Vtilde,N,e,Pi,pohozaev,pohozaev_scale,energy_identity\n";
    for (const auto& row : sw.rows) {
        const MRecord& r = row.rec;
        os << f17(r.r) << ',' << f17(r.I) << ',' << f17(r.J) << ',' << f17(r.M) << ',' << f17(row.dM_fd) << ','
           << f17(r.rhs);
        for (double k : r.K) os << ',' << f17(k);
        os << ',' << f17(row.D) << ',' << f17(row.V) << ',' << f17(row.Vplus) << ',' << f17(row.Vtilde) << ','
           << f17(row.N) << ',' << f17(row.e) << ',' << f17(row.Pi) << ',' << f17(r.pohozaev) << ','
           << f17(r.pohozaev_scale) << ',' << f17(r.energy_identity) << '\n';
    }
    if (run.plots) {
        cli::Series M{"M(r)", {}, {}}, N{"N(r)", {}, {}};
        for (const auto& row : sw.rows) {
            M.x.push_back(row.rec.r);
            M.y.push_back(row.rec.M);
            if (row.freq_defined) {
                N.x.push_back(row.rec.r);
                N.y.push_back(row.N);
            }
        }
        std::vector<cli::Series> series{M};
        if (!N.x.empty()) series.push_back(N);
        cli::write_line_plot((run.out / "sweep.svg").string(), std::string("sweep at ") + to_string(kind) + " point",
                             series, true);
    }
    return 0;
}

int cmd_classify(const Run& run) {
    run.cfg.require_known(keys({kEosKeys, kProfileKeys, kSubjectKeys}, {"r_fit"}));
    Subject s = subject_from(run.cfg);
    PointKind kind = run.cfg.has("kind") ? point_kind_from_string(run.cfg.str("kind")) : kind_of(s.point);
    ClassifyOptions opt;
    opt.rho_bar0 = run.cfg.num("rho_bar0", 1.0);
    if (run.cfg.has("r_min") || run.cfg.has("r_max")) opt.radii = radii_from(run.cfg, *s.field, s.point, kind);
    opt.r_fit = run.cfg.num("r_fit", -1);
    Classification c = classify(*s.field, s.point, kind, opt);
    json j;
    j["point"] = {c.point.x1, c.point.x2};
    j["kind"] = to_string(c.kind);
    j["label"] = to_string(c.label);
    json tied = json::array();
    for (Label l : c.tied) tied.push_back(to_string(l));
    j["ambiguous_between"] = tied;
    j["density"] = c.density.limit;
    j["density_uncertainty"] = c.density.sigma;
    j["density_slope"] = c.density.slope;
    j["radii_used"] = c.density.used;
    j["nearest_density"] = c.nearest;
    j["gap"] = c.gap;
    j["physical_density"] = c.physical_density;
    j["fit_parameter"] = c.fit_name;
    j["fit_value"] = c.fit_param;
    j["fit_residual"] = c.fit_residual;
    j["r_fit"] = c.r_fit;
    j["blowup_norm_small"] = c.blowup_norm_small;
    j["blowup_norm_large"] = c.blowup_norm_large;
    j["ray_slopes"] = c.ray_slopes;
    json per = json::array();
    for (std::size_t k = 0; k < c.density.radii.size(); ++k) per.push_back({c.density.radii[k], c.density.values[k]});
    j["densities"] = per;
    write_json(run.out / "classification.json", j);
    if (run.plots) {
        GridField b = blowup(*s.field, s.point, kind, c.r_fit, 64);
        cli::write_level_sets((run.out / "blowup.svg").string(), std::string("blow-up, ") + to_string(c.label), b);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"axifb: free-boundary singularity laboratory"};
    std::string config_path, out_dir = ".";
    bool plots = false;
    int threads = 1;
    double tol_scale = 1.0;
    std::vector<std::string> sets;
    app.add_option("--config", config_path, "config file (key = value lines)");
    app.add_option("--out", out_dir, "output directory");
    app.add_flag("--plots", plots, "also write SVG plots");
    app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--tol-scale", tol_scale, "multiplier for solver tolerances")->check(CLI::PositiveNumber);
    app.add_option("--set", sets, "override a config entry, key=value");
    app.require_subcommand(1);
    const std::pair<const char*, const char*> commands[] = {
        {"eos-table", "tabulate H, its partials, F and lambda"},
        {"profile-check", "constants and residuals of the exact profiles"},
        {"profile-table", "sample a profile on a grid"},
        {"minimize", "minimize the smoothed energy with given boundary data"},
        {"sweep", "radial functionals around a point"},
        {"classify", "label a degenerate point by density and blow-up fit"},
    };
    for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    try {
        Run run;
        run.cfg = config_path.empty() ? Config::parse("", "config") : Config::load(config_path);
        for (const auto& s : sets) {
            auto eq = s.find('=');
            if (eq == std::string::npos) throw ParseError("--set expects key=value, got '" + s + "'");
            run.cfg.set(s.substr(0, eq), s.substr(eq + 1));
        }
        run.out = out_dir;
        run.plots = plots;
        run.tol_scale = tol_scale;
        fs::create_directories(run.out);
        set_num_threads(threads);
        std::string cmd = app.get_subcommands().front()->get_name();
        if (cmd == "eos-table") return cmd_eos_table(run);
        if (cmd == "profile-check") return cmd_profile_check(run);
        if (cmd == "profile-table") return cmd_profile_table(run);
        if (cmd == "minimize") return cmd_minimize(run);
        if (cmd == "sweep") return cmd_sweep(run);
        if (cmd == "classify") return cmd_classify(run);
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << " (residual " << e.residual << ")\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
