#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "cpchain/bethe.hpp"
#include "cpchain/fss.hpp"
#include "cpchain/liebwu.hpp"
#include "cpchain/models.hpp"
#include "cpchain/reference.hpp"
#include "cpchain/spectra.hpp"
#include "cpchain/ybx.hpp"

using namespace cpchain;
using bethe::StateClass;
using models::ModelKind;

namespace {

constexpr double pi = std::numbers::pi;

struct Verdict {
    bool pass = true;
    std::string detail;
};

int failures = 0;
fss::EnergyCache cache;
int jobs = 1;

void criterion(int id, const char* title, double budget_seconds, const std::function<Verdict()>& body)
{
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
        v = body();
    } catch (const std::exception& e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (budget_seconds > 0 && secs > budget_seconds) {
        v.pass = false;
        v.detail += " (over time budget " + std::to_string(budget_seconds) + " s)";
    }
    if (!v.pass) ++failures;
    std::printf("%s %2d %s: %s [%.2f s]\n", v.pass ? "PASS" : "FAIL", id, title, v.detail.c_str(), secs);
    std::fflush(stdout);
}

std::string fmt(double x)
{
    char b[32];
    std::snprintf(b, sizeof b, "%.3g", x);
    return b;
}

models::ModelParams params(int L, double U)
{
    models::ModelParams p;
    p.L = L;
    p.U = U;
    return p;
}

spectra::SpectrumReport levels_of(ModelKind k, int L, double U) { return spectra::spectrum(models::build_model(k, params(L, U))); }

double gap(int L, double U)
{
    return cache.energy(StateClass::charge_excitation, L, U) - cache.energy(StateClass::ground, L, U);
}

void prefetch_gaps(const std::vector<int>& sizes, const std::vector<double>& Us)
{
    std::vector<std::tuple<StateClass, int, double>> w;
    for (double U : Us)
        for (int L : sizes) {
            w.emplace_back(StateClass::ground, L, U);
            w.emplace_back(StateClass::charge_excitation, L, U);
        }
    cache.prefetch(w, jobs);
}

// ---------------------------------------------------------------------------

Verdict two_site()
{
    double worst = 0.0;
    for (double U : {1.0, 2.5, 6.0}) {
        // printed sector energies in row order
        const std::vector<double> printed{U / 2, 0.0, -U / 2, U / 2, -U / 2};
        const auto rows = bethe::l2_closed_forms(U);
        if (rows.size() != printed.size()) return {false, "expected five rows"};
        for (std::size_t i = 0; i < rows.size(); ++i) {
            worst = std::max(worst, std::abs(rows[i].energy - printed[i]));
            worst = std::max(worst, std::abs(rows[i].energy_from_roots - printed[i]));
            const auto ev = spectra::spectrum(models::build_transformed_sector(params(2, U), rows[i].sector)).eigenvalues;
            double nearest = 1e300;
            for (double e : ev) nearest = std::min(nearest, std::abs(e - printed[i]));
            worst = std::max(worst, nearest);
        }
    }
    return {worst <= 1e-12, "max deviation " + fmt(worst)};
}

Verdict equivalence()
{
    double iso = 0.0, spin = 0.0;
    for (double U : {1.0, 4.0})
        iso = std::max(iso, spectra::compare_spectra(levels_of(ModelKind::hubbard, 4, U), levels_of(ModelKind::charge_pair, 4, U), 1e-10)
                                .max_deviation);
    const double odd =
        spectra::compare_spectra(levels_of(ModelKind::hubbard, 3, 2.0), levels_of(ModelKind::charge_pair, 3, 2.0), 1e-10).max_deviation;
    for (int L : {3, 5})
        spin = std::max(spin, spectra::compare_spectra(levels_of(ModelKind::spin_coupled, L, 2.0),
                                                       levels_of(ModelKind::charge_pair, L, 2.0), 1e-9)
                                  .max_deviation);
    return {iso <= 1e-10 && odd > 1e-3 && spin <= 1e-9,
            "L=4 " + fmt(iso) + ", L=3 mismatch " + fmt(odd) + ", spin chain " + fmt(spin)};
}

Verdict conservation()
{
    using models::GeneratorKind;
    double kept = 0.0, stag_even = 0.0, stag_odd = 1e300;
    for (int L = 3; L <= 6; ++L) {
        const auto h = models::build_model(ModelKind::charge_pair, params(L, 2.0));
        kept = std::max(kept, spectra::commutator_norm(h, models::symmetry_generator(GeneratorKind::S_y, L)));
        kept = std::max(kept, spectra::commutator_norm(h, models::symmetry_generator(GeneratorKind::R_x, L)));
        double s = 0.0;
        for (auto g : {GeneratorKind::S_x_staggered, GeneratorKind::S_z_staggered, GeneratorKind::R_y_staggered,
                       GeneratorKind::R_z_staggered})
            s = std::max(s, spectra::commutator_norm(h, models::symmetry_generator(g, L)));
        if (L % 2 == 0) stag_even = std::max(stag_even, s);
        else stag_odd = std::min(stag_odd, s);
    }
    return {kept <= 1e-12 && stag_even <= 1e-12 && stag_odd > 1e-6,
            "S^y/R^x " + fmt(kept) + ", staggered even " + fmt(stag_even) + ", staggered odd " + fmt(stag_odd)};
}

Verdict reference_states()
{
    using spectra::ReferenceState;
    const double U = 2.0;
    double worst = 0.0, energy_dev = 0.0;
    auto one = [&](ReferenceState r, int L, double expect) {
        worst = std::max(worst, spectra::reference_state_residual(r, L, U));
        energy_dev = std::max(energy_dev, std::abs(spectra::reference_energy(r, L, U) - expect));
    };
    for (int L = 3; L <= 6; ++L) {
        one(ReferenceState::table1_plus, L, L * U / 4);
        one(ReferenceState::table1_minus, L, L * U / 4);
        one(ReferenceState::table1_ferro, L, -L * U / 4);
        if (L % 2) {
            one(ReferenceState::table10_plus, L, L * U / 4);
            one(ReferenceState::table10_minus, L, -L * U / 4);
        }
    }
    return {worst <= 1e-12 && energy_dev <= 1e-14, "max residual " + fmt(worst)};
}

Verdict bethe_vs_ed()
{
    double worst = 0.0;
    for (int L : {6, 5}) {
        const auto c = bethe::quantum_numbers(StateClass::ground, L, 2.0);
        const double e = bethe::energy(bethe::solve(c), c);
        // lowest level over every sector of the chain
        double ed = 1e300;
        for (int nu = 0; nu <= L; ++nu)
            for (int nd = 0; nd <= L; ++nd)
                if (nu + nd == L) ed = std::min(ed, spectra::sector_ground_energy(params(L, 2.0), {nu, nd}));
        worst = std::max(worst, std::abs(e - ed));
    }
    return {worst <= 1e-10, "max |E_Bethe - E_ED| " + fmt(worst)};
}

Verdict lieb_wu()
{
    double worst = 0.0;
    for (auto [U, v] : {std::pair{2.0, 0.0863890951}, std::pair{3.0, 0.3156965889}, std::pair{4.0, 0.6433635110}})
        worst = std::max(worst, std::abs(liebwu::gap_infinite(U) - v));
    return {worst <= 1e-9, "max deviation " + fmt(worst)};
}

Verdict table4()
{
    const auto& t = reference::gap_even();
    prefetch_gaps(t.sizes, t.couplings);
    double named = 0.0;
    for (auto [L, U, v] : {std::tuple{62, 2.0, 0.1397049178}, std::tuple{302, 3.0, 0.3234174755},
                           std::tuple{1038, 4.0, 0.6452407134}})
        named = std::max(named, std::abs(gap(L, U) - v));
    double column = 0.0;
    for (std::size_t c = 0; c < t.couplings.size(); ++c)
        for (std::size_t r = 0; r < t.sizes.size(); ++r)
            column = std::max(column, std::abs(gap(t.sizes[r], t.couplings[c]) - t.values[c][r]));
    return {named <= 1e-8, "named cells " + fmt(named) + ", whole table " + fmt(column)};
}

Verdict table7()
{
    const auto& t = reference::gap_odd();
    prefetch_gaps(t.sizes, t.couplings);
    double named = 0.0;
    for (auto [L, U, v] : {std::tuple{65, 2.0, 0.0908120137}, std::tuple{225, 4.0, 0.6438819345},
                           std::tuple{1025, 3.0, 0.3158029708}})
        named = std::max(named, std::abs(gap(L, U) - v));
    double kept = 0.0, suspect = 0.0;
    for (std::size_t c = 0; c < t.couplings.size(); ++c)
        for (std::size_t r = 0; r < t.sizes.size(); ++r) {
            const double d = std::abs(gap(t.sizes[r], t.couplings[c]) - t.values[c][r]);
            (t.suspect[c][r] ? suspect : kept) = std::max(t.suspect[c][r] ? suspect : kept, d);
        }
    return {named <= 1e-8 && kept <= 1e-8,
            "named cells " + fmt(named) + ", other cells " + fmt(kept) + ", excluded cells off by " + fmt(suspect)};
}

Verdict table5()
{
    const auto& t = reference::central_charge();
    std::vector<std::tuple<StateClass, int, double>> w;
    for (double U : t.couplings)
        for (int L : t.sizes) w.emplace_back(StateClass::ground, L, U);
    cache.prefetch(w, jobs);
    const double a = std::abs(fss::central_charge_estimator(222, 2.0, &cache) - 0.9990148608);
    const double b = std::abs(fss::central_charge_estimator(1038, 4.0, &cache) - 1.0004712889);
    double trend = 0.0, table = 0.0;
    for (std::size_t c = 0; c < t.couplings.size(); ++c) {
        trend = std::max(trend, std::abs(fss::central_charge_estimator(t.sizes.back(), t.couplings[c], &cache) - 1.0));
        for (std::size_t r = 0; r < t.sizes.size(); ++r)
            if (!t.suspect[c][r])
                table = std::max(table,
                                 std::abs(fss::central_charge_estimator(t.sizes[r], t.couplings[c], &cache) - t.values[c][r]));
    }
    return {a <= 1e-6 && b <= 1e-6 && trend <= 1e-3,
            "C(222,2) " + fmt(a) + ", C(1038,4) " + fmt(b) + ", |C-1| at largest L " + fmt(trend) + ", table " +
                fmt(table)};
}

Verdict dimensions()
{
    double seq = 0.0, lim = 0.0, lim_log = 0.0;
    std::string limits;
    for (int j : {0, 1}) {
        const auto& t = j == 0 ? reference::dimension_ground() : reference::dimension_first();
        const auto state = j == 0 ? StateClass::ground : StateClass::first_excitation;
        std::vector<std::tuple<StateClass, int, double>> w;
        for (double U : t.couplings)
            for (auto [a, b] : fss::estimator_pairs(t.sizes, fss::Pairing::lag8)) {
                w.emplace_back(state, a, U);
                w.emplace_back(state, b, U);
            }
        cache.prefetch(w, jobs);
        const double target = j == 0 ? 0.125 : 0.625;
        for (std::size_t c = 0; c < t.couplings.size(); ++c) {
            const auto s = fss::scaling_dimension_series(j, t.sizes, t.couplings[c], fss::Pairing::lag8, &cache);
            for (std::size_t r = 0; r < t.sizes.size(); ++r) seq = std::max(seq, std::abs(s.points[r].second - t.values[c][r]));
            const double x = fss::extrapolate(s, fss::ExtrapolationMode::power_law).limit;
            const double y = fss::extrapolate(s, fss::ExtrapolationMode::log_corrected).limit;
            lim = std::max(lim, std::abs(x - target));
            lim_log = std::max(lim_log, std::abs(y - target));
            limits += " X" + std::to_string(j) + "(U=" + fmt(t.couplings[c]) + ")=" + fmt(x);
        }
    }
    return {seq <= 5e-3 && lim <= 5e-3, "sequences " + fmt(seq) + ", limits " + fmt(lim) + " (log-corrected fit " +
                                            fmt(lim_log) + ");" + limits};
}

Verdict extrapolation()
{
    const auto& t = reference::gap_even();
    prefetch_gaps(t.sizes, t.couplings);
    double worst = 0.0;
    std::string parts;
    for (double U : t.couplings) {
        fss::FssSeries s;
        for (int L : t.sizes) s.points.emplace_back(L, gap(L, U));
        const auto r = fss::extrapolate(s, fss::ExtrapolationMode::power_law);
        const double d = std::abs(r.limit - liebwu::gap_infinite(U));
        worst = std::max(worst, d);
        parts += " U=" + fmt(U) + ":" + fmt(d);
    }
    return {worst <= 2e-4, "max |limit - gap| " + fmt(worst) + ";" + parts};
}

Verdict yang_baxter()
{
    std::mt19937_64 gen(20240611);
    std::uniform_real_distribution<double> dist(-pi, pi);
    double spin = 0.0, graded = 0.0, curve = 0.0;
    for (double U : {1.0, 2.0, 4.0})
        for (int i = 0; i < 100; ++i) {
            const double a = dist(gen), b = dist(gen);
            spin = std::max(spin, ybx::ybe_residual_spin(a, b, U));
            curve = std::max(curve, std::abs(ybx::curve_point(a, U).residual()));
        }
    for (int i = 0; i < 50; ++i) {
        const auto p1 = ybx::curve_point(dist(gen), 4.0), p2 = ybx::curve_point(dist(gen), 4.0);
        graded = std::max(graded, ybx::ybe_residual_graded(p1, p2));
        curve = std::max({curve, std::abs(p1.residual()), std::abs(p2.residual())});
    }
    return {spin <= 1e-12 && graded <= 1e-10 && curve <= 1e-12,
            "spin " + fmt(spin) + ", graded " + fmt(graded) + ", curve " + fmt(curve)};
}

Verdict transfer()
{
    double worst = 0.0;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            worst = std::max(worst, ybx::transfer_commutator(-1.2 + 0.6 * i, -1.2 + 0.6 * j, 2.0, 3));
    const auto m = ybx::transfer_hamiltonian_match(2.0, 3);
    return {worst <= 1e-10 && m.deviation <= 1e-10,
            "commutators " + fmt(worst) + ", log-derivative " + fmt(m.deviation) + " with offset " + fmt(m.offset)};
}

Verdict density()
{
    double d = 0.0;
    for (double U : {0.0, 2.0, 4.0}) d = std::max(d, max_abs(DenseMatrix(ybx::density_expansion(U) - ybx::printed_density(U))));
    const double ring = ybx::density_ring_deviation(2.0, 3);
    return {d <= 1e-10 && ring <= 1e-10, "density " + fmt(d) + ", ring sum " + fmt(ring)};
}

Verdict extended()
{
    auto p = params(3, 2.0);
    p.theta_up = 0.4;
    p.theta_down = -0.7;
    const auto flux = spectra::spectrum(models::build_model(ModelKind::charge_pair_extended, p));
    const auto plain = levels_of(ModelKind::charge_pair, 3, 2.0);
    const double fluxdev = spectra::compare_spectra(flux, plain, 1e-11).max_deviation;

    p.h1 = 0.3;
    p.h2 = 0.2;
    const OperatorMatrix rotated = models::extended_rotated(p);
    double shift = 0.0;
    for (int nu = 0; nu <= 3; ++nu)
        for (int nd = 0; nd <= 3; ++nd) {
            const fock::Sector d{nu, nd};
            const auto block = spectra::spectrum(fock::restrict_to_sector(rotated, models::rotated_frame_sector(d, 3)));
            auto base = spectra::spectrum(models::build_transformed_sector(params(3, 2.0), d));
            const double s = p.h1 * (nu - nd) + p.h2 * (nu + nd - 3);
            for (auto& e : base.eigenvalues) e += s;
            shift = std::max(shift, spectra::compare_spectra(block, base, 1e-11).max_deviation);
        }
    // the sector blocks exhaust the operator
    const double leak = models::extended_reduction_residual(p);
    return {fluxdev <= 1e-11 && shift <= 1e-11 && leak <= 1e-11,
            "flux-free " + fmt(fluxdev) + ", shifted sectors " + fmt(shift) + ", block structure " + fmt(leak)};
}

} // namespace

int main()
{
    jobs = std::max(1u, std::thread::hardware_concurrency());
    criterion(1, "two-site closed forms", 1.0, two_site);
    criterion(2, "spectrum equivalences", 60.0, equivalence);
    criterion(3, "conservation laws", 60.0, conservation);
    criterion(4, "reference product states", 10.0, reference_states);
    criterion(5, "Bethe energies vs exact diagonalisation", 10.0, bethe_vs_ed);
    criterion(6, "thermodynamic gap integrals", 1.0, lieb_wu);
    criterion(7, "even-L charge gaps", 300.0, table4);
    criterion(8, "odd-L charge gaps", 300.0, table7);
    criterion(9, "central charge", 0.0, table5);
    criterion(10, "scaling dimensions", 0.0, dimensions);
    criterion(11, "extrapolated gaps", 0.0, extrapolation);
    criterion(12, "Yang-Baxter relations", 60.0, yang_baxter);
    criterion(13, "transfer matrices", 0.0, transfer);
    criterion(14, "Hamiltonian density", 0.0, density);
    criterion(15, "extended model", 0.0, extended);
    std::printf("%d of 15 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
