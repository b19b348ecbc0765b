#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "cpchain/bethe.hpp"
#include "cpchain/errors.hpp"
#include "cpchain/fss.hpp"
#include "cpchain/liebwu.hpp"
#include "cpchain/models.hpp"
#include "cpchain/reference.hpp"
#include "cpchain/spectra.hpp"
#include "cpchain/ybx.hpp"

namespace cpchain::cli {

using nlohmann::json;

namespace {

std::string format_real(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string csv_cell(const Cell& c)
{
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::string>) {
                if (v.find_first_of(",\"\n") == std::string::npos) return v;
                std::string q = "\"";
                for (char ch : v) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
                return q + "\"";
            } else if constexpr (std::is_same_v<T, double>) {
                return format_real(v);
            } else if constexpr (std::is_same_v<T, bool>) {
                return v ? "true" : "false";
            } else {
                return std::to_string(v);
            }
        },
        c);
}

json json_cell(const Cell& c)
{
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
                if (!std::isfinite(v)) return nullptr;
            }
            return v;
        },
        c);
}

// shared by every subcommand
struct Common {
    std::string out;
    std::string format = "csv";
    std::uint64_t seed = 12345;
    int jobs = 1;
    double tol = 0.0;
};

struct Context {
    std::ostream& out;
    std::ostream& err;
    std::string command_line;
};

void add_common(CLI::App* app, Common& c)
{
    app->add_option("--out", c.out, "output path (stem when --format both)");
    app->add_option("--format", c.format, "csv, json or both")->check(CLI::IsMember({"csv", "json", "both"}));
    app->add_option("--seed", c.seed, "random seed");
    app->add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);
    app->add_option("--tol", c.tol, "tolerance used for pass/fail columns");
}

fock::Sector parse_sector(const std::string& s)
{
    const auto comma = s.find(',');
    require(comma != std::string::npos, "sector must be written N_up,N_down, got '" + s + "'");
    try {
        return {std::stoi(s.substr(0, comma)), std::stoi(s.substr(comma + 1))};
    } catch (const std::exception&) {
        throw PreconditionError("sector must be two integers, got '" + s + "'");
    }
}

std::vector<double> couplings_or(const std::vector<double>& given, std::vector<double> fallback)
{
    return given.empty() ? fallback : given;
}

bethe::Parity parity_of(int L) { return L % 2 == 0 ? bethe::Parity::even : bethe::Parity::odd; }

void attach_progress(fss::EnergyCache& cache, std::ostream& err)
{
    static std::mutex io;
    cache.set_progress([&err](bethe::StateClass s, int L, double U, double secs) {
        if (L <= 500) return;
        std::lock_guard lock(io);
        err << "solved " << bethe::to_string(s) << " L=" << L << " U=" << U << " in " << format_real(secs) << " s\n";
    });
}

void emit(const Output& o, const Common& c, const Context& ctx, double wall)
{
    const std::string csv = to_csv(o.table);
    const json j = to_json(o, ctx.command_line, wall);
    std::string stem = c.out;
    for (const char* ext : {".csv", ".json"}) {
        const std::string e(ext);
        if (c.format == "both" && stem.size() > e.size() && stem.compare(stem.size() - e.size(), e.size(), e) == 0)
            stem.resize(stem.size() - e.size());
    }
    auto write = [&](const std::string& path, const std::string& body) {
        if (path.empty()) {
            ctx.out << body;
            return;
        }
        std::ofstream f(path, std::ios::binary);
        require(static_cast<bool>(f), "cannot open output file '" + path + "'");
        f << body;
    };
    if (c.format == "csv") write(c.out, csv);
    else if (c.format == "json") write(c.out, j.dump(2) + "\n");
    else {
        write(stem.empty() ? "" : stem + ".csv", csv);
        write(stem.empty() ? "" : stem + ".json", j.dump(2) + "\n");
    }
}

// ---- subcommands ----

struct SpectrumArgs {
    std::string model = "charge_pair";
    std::string model_b = "hubbard";
    int L = 2;
    double U = 0.0;
    std::string sector;
    std::optional<int> lowest;
    double theta_up = 0, theta_down = 0, h1 = 0, h2 = 0;
};

models::ModelKind model_kind(const std::string& name)
{
    auto k = models::parse_model(name);
    require(k.has_value(), "unknown model '" + name + "'");
    return *k;
}

models::ModelParams params_of(const SpectrumArgs& a)
{
    models::ModelParams p;
    p.L = a.L;
    p.U = a.U;
    p.theta_up = a.theta_up;
    p.theta_down = a.theta_down;
    p.h1 = a.h1;
    p.h2 = a.h2;
    return p;
}

spectra::SpectrumReport spectrum_of(const std::string& model, const SpectrumArgs& a, const Common& c)
{
    const auto kind = model_kind(model);
    const auto p = params_of(a);
    OperatorMatrix h;
    if (!a.sector.empty()) {
        require(!models::is_spin_model(kind) && kind != models::ModelKind::charge_pair_jw,
                "--sector applies to fermionic models only");
        h = fock::assemble_operator(p.L, models::model_terms(kind, p), parse_sector(a.sector));
    } else {
        h = models::build_model(kind, p);
    }
    spectra::SpectrumOptions opt;
    opt.lowest = a.lowest;
    opt.seed = c.seed;
    auto r = spectra::spectrum(h, opt);
    r.model = model;
    r.params = p;
    return r;
}

json model_params_json(const SpectrumArgs& a)
{
    return {{"L", a.L}, {"U", a.U}, {"theta_up", a.theta_up}, {"theta_down", a.theta_down}, {"h1", a.h1},
            {"h2", a.h2}, {"sector", a.sector}};
}

Output do_spectrum(const SpectrumArgs& a, const Common& c)
{
    const auto r = spectrum_of(a.model, a, c);
    Output o;
    o.seed = c.seed;
    o.parameters = model_params_json(a);
    o.parameters["model"] = a.model;
    o.table.columns = {"index", "energy", "group_size"};
    std::size_t g = 0, left = r.degeneracies.empty() ? 0 : r.degeneracies[0];
    for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
        if (left == 0) left = r.degeneracies[++g];
        o.table.rows.push_back({static_cast<long long>(i), r.eigenvalues[i], static_cast<long long>(r.degeneracies[g])});
        --left;
    }
    return o;
}

Output do_compare(const SpectrumArgs& a, const Common& c)
{
    const double tol = c.tol > 0 ? c.tol : 1e-10;
    const auto x = spectrum_of(a.model, a, c);
    const auto y = spectrum_of(a.model_b, a, c);
    const auto m = spectra::compare_spectra(x, y, tol);
    Output o;
    o.seed = c.seed;
    o.parameters = model_params_json(a);
    o.parameters["model"] = a.model;
    o.parameters["model_b"] = a.model_b;
    o.parameters["tol"] = tol;
    o.table.columns = {"model_a", "model_b", "L", "U", "levels", "max_deviation", "match"};
    o.table.rows.push_back({a.model, a.model_b, static_cast<long long>(a.L), a.U,
                            static_cast<long long>(x.eigenvalues.size()), m.max_deviation, m.match});
    o.deviations.push_back({{"quantity", "spectrum"}, {"max_deviation", m.max_deviation}, {"tol", tol}});
    return o;
}

bethe::StateClass parse_state(const std::string& s)
{
    if (s == "ground") return bethe::StateClass::ground;
    if (s == "charge_excitation" || s == "charge") return bethe::StateClass::charge_excitation;
    if (s == "spin_excitation" || s == "spin") return bethe::StateClass::spin_excitation;
    if (s == "first_excitation" || s == "first") return bethe::StateClass::first_excitation;
    throw PreconditionError("unknown state '" + s + "'");
}

void check_parity(const std::string& parity, int L)
{
    if (parity.empty() || parity == "auto") return;
    require(parity == "even" || parity == "odd", "parity must be even, odd or auto");
    require((parity == "even") == (L % 2 == 0), "--parity " + parity + " does not match L=" + std::to_string(L));
}

Output do_bethe(int L, double U, const std::string& state, const std::string& parity, const Common& c)
{
    check_parity(parity, L);
    const auto cfg = bethe::quantum_numbers(parse_state(state), L, U);
    bethe::SolveOptions opt;
    if (c.tol > 0) opt.tol = c.tol;
    const auto roots = bethe::solve(cfg, opt);
    Output o;
    o.parameters = {{"L", L}, {"U", U}, {"state", state}, {"parity", bethe::to_string(cfg.parity)},
                    {"sector", {cfg.sector.n_up, cfg.sector.n_down}}, {"tol", opt.tol}};
    o.table.columns = {"kind", "index", "value"};
    for (std::size_t i = 0; i < roots.k.size(); ++i)
        o.table.rows.push_back({std::string("k"), static_cast<long long>(i + 1), roots.k[i]});
    for (std::size_t i = 0; i < roots.mu.size(); ++i)
        o.table.rows.push_back({std::string("mu"), static_cast<long long>(i + 1), roots.mu[i]});
    o.table.rows.push_back({std::string("energy"), 0LL, bethe::energy(roots, cfg)});
    o.table.rows.push_back({std::string("residual"), 0LL, roots.residual_norm});
    o.table.rows.push_back({std::string("iterations"), 0LL, static_cast<double>(roots.iterations)});
    return o;
}

Output do_gap(const std::vector<int>& sizes, double U, const std::string& parity, const Common& c,
              std::ostream& err)
{
    require(!sizes.empty(), "gap needs --L or --sizes");
    fss::EnergyCache cache;
    attach_progress(cache, err);
    std::vector<std::tuple<bethe::StateClass, int, double>> want;
    for (int L : sizes) {
        check_parity(parity, L);
        want.emplace_back(bethe::StateClass::ground, L, U);
        want.emplace_back(bethe::StateClass::charge_excitation, L, U);
    }
    cache.prefetch(want, c.jobs);
    Output o;
    o.parameters = {{"sizes", sizes}, {"U", U}, {"parity", parity}};
    o.table.columns = {"L", "U", "parity", "gap"};
    for (int L : sizes) {
        const double g = cache.energy(bethe::StateClass::charge_excitation, L, U) -
                         cache.energy(bethe::StateClass::ground, L, U);
        o.table.rows.push_back({static_cast<long long>(L), U, bethe::to_string(parity_of(L)), g});
    }
    return o;
}

Output do_central(const std::vector<int>& sizes, double U, const Common& c, std::ostream& err)
{
    require(!sizes.empty(), "central-charge needs --sizes");
    fss::EnergyCache cache;
    attach_progress(cache, err);
    std::vector<std::tuple<bethe::StateClass, int, double>> want;
    for (int L : sizes) {
        require(L % 4 == 2, "central charge needs L = 2 (mod 4), got L=" + std::to_string(L));
        want.emplace_back(bethe::StateClass::ground, L, U);
    }
    cache.prefetch(want, c.jobs);
    Output o;
    o.parameters = {{"sizes", sizes}, {"U", U}};
    o.table.columns = {"L", "U", "C"};
    for (int L : sizes)
        o.table.rows.push_back({static_cast<long long>(L), U, fss::central_charge_estimator(L, U, &cache)});
    return o;
}

void prefetch_dimensions(fss::EnergyCache& cache, int j, const std::vector<int>& sizes, double U,
                         fss::Pairing pairing, int jobs)
{
    const auto state = j == 0 ? bethe::StateClass::ground : bethe::StateClass::first_excitation;
    std::vector<std::tuple<bethe::StateClass, int, double>> want;
    for (auto [a, b] : fss::estimator_pairs(sizes, pairing)) {
        want.emplace_back(state, a, U);
        want.emplace_back(state, b, U);
    }
    cache.prefetch(want, jobs);
}

Output do_scaling(int j, const std::vector<int>& sizes, double U, const std::string& pairing, const Common& c,
                  std::ostream& err)
{
    const auto pr = fss::parse_pairing(pairing);
    fss::EnergyCache cache;
    attach_progress(cache, err);
    prefetch_dimensions(cache, j, sizes, U, pr, c.jobs);
    const auto s = fss::scaling_dimension_series(j, sizes, U, pr, &cache);
    const auto pairs = fss::estimator_pairs(sizes, pr);
    Output o;
    o.parameters = {{"j", j}, {"sizes", sizes}, {"U", U}, {"pairing", pairing}};
    o.table.columns = {"L", "L_partner", "U", "X"};
    for (std::size_t i = 0; i < s.points.size(); ++i)
        o.table.rows.push_back({static_cast<long long>(s.points[i].first), static_cast<long long>(pairs[i].first), U,
                                s.points[i].second});
    return o;
}

Output do_liebwu(const std::string& what, double U, double x, const std::string& kind)
{
    Output o;
    o.table.columns = {"quantity", "argument", "value"};
    if (what == "bessel") {
        liebwu::BesselKind k;
        if (kind == "J0") k = liebwu::BesselKind::J0;
        else if (kind == "J1") k = liebwu::BesselKind::J1;
        else if (kind == "I0") k = liebwu::BesselKind::I0;
        else if (kind == "I1") k = liebwu::BesselKind::I1;
        else throw PreconditionError("--kind must be J0, J1, I0 or I1");
        o.parameters = {{"kind", kind}, {"x", x}};
        o.table.rows.push_back({kind, x, liebwu::bessel(k, x)});
        return o;
    }
    o.parameters = {{"U", U}};
    if (what == "gap") o.table.rows.push_back({std::string("gap_infinite"), U, liebwu::gap_infinite(U)});
    else if (what == "energy")
        o.table.rows.push_back({std::string("ground_energy_density"), U, liebwu::ground_energy_density(U)});
    else if (what == "velocity") o.table.rows.push_back({std::string("spin_velocity"), U, liebwu::spin_velocity(U)});
    else if (what == "all") {
        o.table.rows.push_back({std::string("ground_energy_density"), U, liebwu::ground_energy_density(U)});
        o.table.rows.push_back({std::string("gap_infinite"), U, liebwu::gap_infinite(U)});
        o.table.rows.push_back({std::string("spin_velocity"), U, liebwu::spin_velocity(U)});
    } else {
        throw PreconditionError("liebwu quantity must be gap, energy, velocity, bessel or all");
    }
    return o;
}

fss::FssSeries read_series(const std::string& inline_series, const std::string& input)
{
    fss::FssSeries s;
    auto add = [&s](const std::string& l, const std::string& v) {
        try {
            s.points.emplace_back(std::stoi(l), std::stod(v));
        } catch (const std::exception&) {
            throw PreconditionError("bad series entry '" + l + ":" + v + "'");
        }
    };
    if (!inline_series.empty()) {
        std::stringstream ss(inline_series);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto colon = item.find(':');
            require(colon != std::string::npos, "series entries are written L:value");
            add(item.substr(0, colon), item.substr(colon + 1));
        }
    } else {
        std::ifstream f(input);
        require(static_cast<bool>(f), "cannot read series file '" + input + "'");
        std::string line;
        bool header = true;
        while (std::getline(f, line)) {
            if (line.empty()) continue;
            const auto comma = line.find(',');
            require(comma != std::string::npos, "series file needs two columns L,value");
            if (header) {
                header = false;
                if (!std::isdigit(static_cast<unsigned char>(line[0]))) continue;
            }
            add(line.substr(0, comma), line.substr(comma + 1));
        }
    }
    s.label = "input";
    return s;
}

Output do_extrapolate(const fss::FssSeries& s, const std::string& mode, double omega)
{
    fss::ExtrapolationOptions opt;
    opt.omega = omega;
    const auto r = fss::extrapolate(s, fss::parse_extrapolation_mode(mode), opt);
    Output o;
    o.parameters = {{"mode", mode}, {"omega", omega}, {"points", s.points.size()}};
    o.table.columns = {"mode", "omega", "points", "limit", "uncertainty"};
    o.table.rows.push_back({fss::to_string(r.mode), r.omega, static_cast<long long>(r.points), r.limit, r.uncertainty});
    return o;
}

Output do_ybe(const std::string& form, double U, int pairs, const std::string& sign, const Common& c)
{
    require(pairs >= 1, "--pairs must be positive");
    std::mt19937_64 gen(c.seed);
    std::uniform_real_distribution<double> dist(-std::numbers::pi, std::numbers::pi);
    Output o;
    o.seed = c.seed;
    o.parameters = {{"form", form}, {"U", U}, {"pairs", pairs}, {"seed", c.seed}};
    o.table.columns = {"pair", "lambda1", "lambda2", "residual"};
    double worst = 0.0;
    for (int i = 0; i < pairs; ++i) {
        const double l1 = dist(gen), l2 = dist(gen);
        double r = 0.0;
        if (form == "spin") r = ybx::ybe_residual_spin(l1, l2, U);
        else if (form == "spin-printed") r = ybx::ybe_residual_spin(l1, l2, U, true);
        else if (form == "graded") r = ybx::ybe_residual_graded(ybx::curve_point(l1, U), ybx::curve_point(l2, U));
        else if (form == "graded-tensor") {
            require(sign == "A" || sign == "B", "--sign must be A or B");
            r = ybx::ybe_residual_graded_tensor(ybx::curve_point(l1, U), ybx::curve_point(l2, U),
                                                sign == "A" ? ybx::GradedSign::A : ybx::GradedSign::B);
        } else if (form == "curve") {
            r = std::max(std::abs(ybx::curve_point(l1, U).residual()), std::abs(ybx::curve_point(l2, U).residual()));
        } else {
            throw PreconditionError("ybe form must be spin, spin-printed, graded, graded-tensor or curve");
        }
        worst = std::max(worst, r);
        o.table.rows.push_back({static_cast<long long>(i), l1, l2, r});
    }
    o.deviations.push_back({{"quantity", "max_residual"}, {"value", worst}});
    return o;
}

Output do_transfer(int L, double U, int grid)
{
    require(grid >= 2, "--grid must be at least 2");
    Output o;
    o.parameters = {{"L", L}, {"U", U}, {"grid", grid}};
    o.table.columns = {"lambda1", "lambda2", "commutator"};
    std::vector<double> pts;
    for (int i = 0; i < grid; ++i) pts.push_back(-1.2 + 2.4 * i / (grid - 1));
    double worst = 0.0;
    for (double a : pts)
        for (double b : pts) {
            const double r = ybx::transfer_commutator(a, b, U, L);
            worst = std::max(worst, r);
            o.table.rows.push_back({a, b, r});
        }
    const auto m = ybx::transfer_hamiltonian_match(U, L);
    o.deviations.push_back({{"quantity", "max_commutator"}, {"value", worst}});
    o.deviations.push_back({{"quantity", "log_derivative_vs_spin_chain"}, {"value", m.deviation}, {"offset", m.offset}});
    return o;
}

// ---- reproduce ----

Output reproduce_table2(const std::vector<double>& Us)
{
    Output o;
    o.parameters = {{"table", "table2"}, {"U", Us}};
    o.table.columns = {"U", "sector", "roots", "closed_form", "from_roots", "nearest_ed", "deviation"};
    for (double U : Us) {
        models::ModelParams p;
        p.L = 2;
        p.U = U;
        for (const auto& row : bethe::l2_closed_forms(U)) {
            const auto sec = row.sector;
            const auto levels = spectra::spectrum(models::build_transformed_sector(p, sec)).eigenvalues;
            double nearest = levels.front();
            for (double e : levels)
                if (std::abs(e - row.energy) < std::abs(nearest - row.energy)) nearest = e;
            const double dev = std::max(std::abs(nearest - row.energy), std::abs(row.energy_from_roots - row.energy));
            const std::string s = "(" + std::to_string(sec.n_up) + "," + std::to_string(sec.n_down) + ")";
            o.table.rows.push_back({U, s, row.roots, row.energy, row.energy_from_roots, nearest, dev});
            o.deviations.push_back({{"U", U}, {"sector", s}, {"deviation", dev}});
        }
    }
    return o;
}

struct TableJob {
    const reference::PublishedTable* table;
    std::string id;
};

Output reproduce_sequence(const std::string& id, const std::vector<double>& Us, const std::vector<int>& given_sizes,
                          const std::string& pairing, const Common& c, std::ostream& err)
{
    const reference::PublishedTable* t = nullptr;
    if (id == "table4") t = &reference::gap_even();
    else if (id == "table5") t = &reference::central_charge();
    else if (id == "table7") t = &reference::gap_odd();
    else if (id == "table8") t = &reference::dimension_ground();
    else t = &reference::dimension_first();
    const std::vector<int> sizes = given_sizes.empty() ? t->sizes : given_sizes;
    const auto pr = fss::parse_pairing(pairing);

    fss::EnergyCache cache;
    attach_progress(cache, err);
    std::vector<std::tuple<bethe::StateClass, int, double>> want;
    for (double U : Us) {
        for (int L : sizes) {
            if (id == "table4" || id == "table7") {
                want.emplace_back(bethe::StateClass::ground, L, U);
                want.emplace_back(bethe::StateClass::charge_excitation, L, U);
            } else if (id == "table5") {
                want.emplace_back(bethe::StateClass::ground, L, U);
            }
        }
        if (id == "table8" || id == "table9") {
            const auto state = id == "table8" ? bethe::StateClass::ground : bethe::StateClass::first_excitation;
            for (auto [a, b] : fss::estimator_pairs(sizes, pr)) {
                want.emplace_back(state, a, U);
                want.emplace_back(state, b, U);
            }
        }
    }
    cache.prefetch(want, c.jobs);

    Output o;
    o.parameters = {{"table", id}, {"U", Us}, {"sizes", sizes}};
    if (id == "table8" || id == "table9") o.parameters["pairing"] = pairing;
    o.table.columns = {"L", "U", "computed", "published", "deviation", "suspect"};
    for (double U : Us) {
        const auto col = reference::column_of(*t, U);
        std::vector<double> values;
        if (id == "table8" || id == "table9") {
            for (const auto& [L, v] : fss::scaling_dimension_series(id == "table8" ? 0 : 1, sizes, U, pr, &cache).points) {
                (void)L;
                values.push_back(v);
            }
        } else {
            for (int L : sizes) {
                if (id == "table5") values.push_back(fss::central_charge_estimator(L, U, &cache));
                else
                    values.push_back(cache.energy(bethe::StateClass::charge_excitation, L, U) -
                                     cache.energy(bethe::StateClass::ground, L, U));
            }
        }
        for (std::size_t i = 0; i < sizes.size(); ++i) {
            const int L = sizes[i];
            double published = std::nan("");
            bool suspect = false;
            if (col) {
                for (std::size_t r = 0; r < t->sizes.size(); ++r)
                    if (t->sizes[r] == L) {
                        published = t->values[*col][r];
                        suspect = t->suspect[*col][r];
                    }
            }
            const double dev = std::isnan(published) ? std::nan("") : std::abs(values[i] - published);
            o.table.rows.push_back({static_cast<long long>(L), U, values[i], published, dev, suspect});
            if (!std::isnan(published)) {
                json d = {{"L", L}, {"U", U}, {"deviation", dev}, {"suspect", suspect}};
                if (suspect) d["excluded"] = true;
                o.deviations.push_back(d);
            }
        }
    }
    return o;
}

} // namespace

std::string to_csv(const Table& t)
{
    std::string s;
    for (std::size_t i = 0; i < t.columns.size(); ++i) s += (i ? "," : "") + t.columns[i];
    s += "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + csv_cell(row[i]);
        s += "\n";
    }
    return s;
}

std::uint64_t fnv1a(const std::string& bytes)
{
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

json to_json(const Output& o, const std::string& command_line, double wall_seconds)
{
    json rows = json::array();
    for (const auto& r : o.table.rows) {
        json obj = json::object();
        for (std::size_t i = 0; i < r.size() && i < o.table.columns.size(); ++i) obj[o.table.columns[i]] = json_cell(r[i]);
        rows.push_back(obj);
    }
    char digest[32];
    std::snprintf(digest, sizeof digest, "%016llx", static_cast<unsigned long long>(fnv1a(to_csv(o.table))));
    json manifest = {{"command_line", command_line}, {"parameters", o.parameters}, {"seed", o.seed},
                     {"tool_version", tool_version}, {"wall_time_seconds", wall_seconds},
                     {"output_digest", std::string("fnv1a64:") + digest}};
    return {{"manifest", manifest}, {"parameters", o.parameters}, {"rows", rows}, {"deviations", o.deviations}};
}

std::vector<int> parse_sizes(const std::string& s)
{
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            std::size_t used = 0;
            const int v = std::stoi(item, &used);
            require(used == item.size(), "");
            out.push_back(v);
        } catch (const std::exception&) {
            throw PreconditionError("bad size '" + item + "' in list '" + s + "'");
        }
    }
    return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"charge pair chain workbench", "cpchain"};
    app.require_subcommand(1);
    Common common;
    SpectrumArgs sa;
    int L = 6;
    double U = 2.0;
    std::string sizes_s, state = "ground", parity = "auto", pairing = "lag8", what = "all", kind = "J0";
    std::string mode = "power-law", series, input, form = "spin", sign = "B", table;
    std::vector<double> Us;
    double x = 0.0, omega = 1.0;
    int j = 0, pairs = 100, grid = 5;

    auto model_opts = [&](CLI::App* s) {
        s->add_option("--model", sa.model, "model name");
        s->add_option("--L", sa.L, "site count")->required();
        s->add_option("--U", sa.U, "interaction");
        s->add_option("--sector", sa.sector, "N_up,N_down");
        s->add_option("--lowest", sa.lowest, "only the lowest k levels");
        s->add_option("--theta-up", sa.theta_up);
        s->add_option("--theta-down", sa.theta_down);
        s->add_option("--h1", sa.h1);
        s->add_option("--h2", sa.h2);
        add_common(s, common);
    };
    auto* spectrum = app.add_subcommand("spectrum", "eigenvalues of a model");
    model_opts(spectrum);
    auto* compare = app.add_subcommand("compare", "multiset comparison of two spectra");
    model_opts(compare);
    compare->add_option("--model-b", sa.model_b, "second model");

    auto* bethe_cmd = app.add_subcommand("bethe", "solve the Bethe equations for one state");
    bethe_cmd->add_option("--L", L)->required();
    bethe_cmd->add_option("--U", U);
    bethe_cmd->add_option("--state", state);
    bethe_cmd->add_option("--parity", parity);
    add_common(bethe_cmd, common);

    auto sized = [&](CLI::App* s) {
        s->add_option("--L", L);
        s->add_option("--sizes", sizes_s, "comma separated sizes");
        s->add_option("--U", U);
        add_common(s, common);
    };
    auto* gap = app.add_subcommand("gap", "charge gap");
    sized(gap);
    gap->add_option("--parity", parity);
    auto* central = app.add_subcommand("central-charge", "central charge estimator");
    sized(central);
    auto* scaling = app.add_subcommand("scaling-dim", "two-step scaling dimension estimator");
    sized(scaling);
    scaling->add_option("--j", j)->check(CLI::IsMember({0, 1}));
    scaling->add_option("--pairing", pairing, "lag8 or consecutive");

    auto* lw = app.add_subcommand("liebwu", "thermodynamic-limit integrals");
    lw->add_option("quantity", what, "gap, energy, velocity, bessel or all");
    lw->add_option("--U", U);
    lw->add_option("--x", x);
    lw->add_option("--kind", kind);
    add_common(lw, common);

    auto* ex = app.add_subcommand("extrapolate", "extrapolate a finite-size series");
    ex->add_option("--series", series, "L:value,L:value,...");
    ex->add_option("--input", input, "CSV file with columns L,value");
    ex->add_option("--mode", mode, "power-law or log-corrected");
    ex->add_option("--omega", omega);
    add_common(ex, common);

    auto* ybe = app.add_subcommand("ybe", "Yang-Baxter residual sweep");
    ybe->add_option("form", form, "spin, spin-printed, graded, graded-tensor or curve");
    ybe->add_option("--U", U);
    ybe->add_option("--pairs", pairs);
    ybe->add_option("--sign", sign);
    add_common(ybe, common);

    auto* transfer = app.add_subcommand("transfer", "transfer-matrix commutators and log-derivative");
    transfer->add_option("--L", L);
    transfer->add_option("--U", U);
    transfer->add_option("--grid", grid);
    add_common(transfer, common);

    auto* repro = app.add_subcommand("reproduce", "recompute a published table");
    repro->add_option("table", table, "table2, table4, table5, table7, table8 or table9")
        ->required()
        ->check(CLI::IsMember({"table2", "table4", "table5", "table7", "table8", "table9"}));
    repro->add_option("--U", Us, "couplings (default: the published columns)")->delimiter(',');
    repro->add_option("--sizes", sizes_s);
    repro->add_option("--pairing", pairing);
    add_common(repro, common);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    std::string command_line = "cpchain";
    for (const auto& a : args) command_line += " " + a;
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    const Context ctx{out, err, command_line};
    const auto t0 = std::chrono::steady_clock::now();
    try {
        auto sizes = [&] { return sizes_s.empty() ? std::vector<int>{L} : parse_sizes(sizes_s); };
        Output o;
        if (*spectrum) o = do_spectrum(sa, common);
        else if (*compare) o = do_compare(sa, common);
        else if (*bethe_cmd) o = do_bethe(L, U, state, parity, common);
        else if (*gap) o = do_gap(sizes(), U, parity, common, err);
        else if (*central) o = do_central(sizes(), U, common, err);
        else if (*scaling) o = do_scaling(j, sizes(), U, pairing, common, err);
        else if (*lw) o = do_liebwu(what, U, x, kind);
        else if (*ex) {
            require(!series.empty() || !input.empty(), "extrapolate needs --series or --input");
            o = do_extrapolate(read_series(series, input), mode, omega);
        } else if (*ybe) o = do_ybe(form, U, pairs, sign, common);
        else if (*transfer) o = do_transfer(L, U, grid);
        else {
            if (table == "table2") o = reproduce_table2(couplings_or(Us, {1.0, 2.5, 6.0}));
            else
                o = reproduce_sequence(table, couplings_or(Us, {2.0, 3.0, 4.0}),
                                       sizes_s.empty() ? std::vector<int>{} : parse_sizes(sizes_s), pairing, common,
                                       err);
        }
        if (o.seed == 0) o.seed = common.seed;
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        emit(o, common, ctx, wall);
        return 0;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const SolverError& e) {
        err << "solver failure: " << e.what() << "\n";
        return 1;
    }
}

} // namespace cpchain::cli
