#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cpchain/bethe.hpp"
#include "cpchain/errors.hpp"
#include "cpchain/fss.hpp"
#include "cpchain/liebwu.hpp"
#include "cpchain/reference.hpp"

using namespace cpchain;
using namespace cpchain::fss;
using bethe::Rational;

namespace {

constexpr double pi = std::numbers::pi;

// energies of a critical level with a log-amplitude A
double synthetic_energy(int L, double U, double X, double A, double einf, double xi)
{
    const double u = 1.0 / std::log(L * std::cyl_bessel_i(0.0, 2 * pi / U));
    return einf * L + 2 * pi * xi / L * (X - 1.0 / 12.0 + A * u);
}

FssSeries make_series(const std::vector<int>& sizes, auto f)
{
    FssSeries s;
    for (int L : sizes) s.points.emplace_back(L, f(L));
    return s;
}

} // namespace

TEST_SUITE("fss") {

TEST_CASE("predicted dimensions")
{
    CHECK(predicted_dimension(Rational(1, 2), Rational(1, 2)) == Rational(1, 8));
    CHECK(predicted_dimension(Rational(1, 2), Rational(-1, 2)) == Rational(5, 8));
    CHECK(predicted_dimension(Rational(1, 2), Rational(3, 2)) == Rational(5, 8));
    for (int a = -5; a <= 5; a += 2) {
        const Rational m(a, 2);
        CHECK(predicted_dimension(Rational(3, 2), m) == predicted_dimension(Rational(3, 2), 1 - m));
    }
}

TEST_CASE("estimator pairs")
{
    using P = std::vector<std::pair<int, int>>;
    CHECK(estimator_pairs({65, 145}, Pairing::lag8) == P{{57, 65}, {137, 145}});
    CHECK(estimator_pairs({65, 145, 225}, Pairing::consecutive) == P{{65, 145}, {145, 225}});
    CHECK_THROWS_AS(estimator_pairs({64, 145}, Pairing::lag8), PreconditionError);
    CHECK_THROWS_AS(estimator_pairs({145, 65}, Pairing::consecutive), PreconditionError);
    CHECK_THROWS_AS(estimator_pairs({65}, Pairing::consecutive), PreconditionError);
    CHECK(parse_pairing(to_string(Pairing::consecutive)) == Pairing::consecutive);
    CHECK_THROWS_AS(parse_pairing("sideways"), PreconditionError);
}

TEST_CASE("two-step estimator eliminates the log amplitude")
{
    const double U = 3.0, einf = -1.1, xi = 1.7;
    for (double A : {0.0, 0.4, -1.3}) {
        const int L1 = 57, L2 = 65;
        const double e1 = synthetic_energy(L1, U, 0.125, A, einf, xi);
        const double e2 = synthetic_energy(L2, U, 0.125, A, einf, xi);
        CHECK(two_step_estimate(L1, e1, L2, e2, U, einf, xi) == doctest::Approx(0.125).epsilon(1e-10));
        if (A == 0.0) {
            CHECK(bare_estimate(L2, e2, einf, xi) == doctest::Approx(0.125).epsilon(1e-12));
            CHECK(two_step_estimate(L1, e1, L2, e2, U, einf, xi) ==
                  doctest::Approx(bare_estimate(L2, e2, einf, xi)).epsilon(1e-10));
        }
    }
}

TEST_CASE("BST reproduces rational series")
{
    const std::vector<int> sizes{10, 20, 40, 80, 160, 320};
    const auto s = make_series(sizes, [](int L) { return 0.3 + 1.7 / L; });
    CHECK(std::abs(bst(s.points, 1.0) - 0.3) < 1e-10);
    const auto s2 = make_series(sizes, [](int L) { return -0.2 + 0.5 / L - 3.0 / (double(L) * L); });
    CHECK(std::abs(extrapolate(s2, ExtrapolationMode::power_law).limit + 0.2) < 1e-10);
    const auto c = make_series(sizes, [](int) { return 0.625; });
    const auto rc = extrapolate(c, ExtrapolationMode::power_law);
    CHECK(std::abs(rc.limit - 0.625) < 1e-14);
    CHECK(rc.uncertainty < 1e-13);
    const auto sq = make_series(sizes, [](int L) { return 1.0 + 2.0 / std::sqrt(double(L)); });
    CHECK(std::abs(bst(sq.points, 0.5) - 1.0) < 1e-10);
}

TEST_CASE("log-corrected fit")
{
    const std::vector<int> sizes{65, 145, 225, 305, 385};
    const auto s = make_series(sizes, [](int L) { return 0.125 - 0.3 / std::log(double(L)) + 0.8 / L; });
    const auto r = extrapolate(s, ExtrapolationMode::log_corrected);
    CHECK(std::abs(r.limit - 0.125) < 1e-10);
    CHECK(r.mode == ExtrapolationMode::log_corrected);
    CHECK(parse_extrapolation_mode("log-corrected") == ExtrapolationMode::log_corrected);
    CHECK(parse_extrapolation_mode(to_string(ExtrapolationMode::power_law)) == ExtrapolationMode::power_law);
    CHECK_THROWS_AS(extrapolate(make_series({10, 20}, [](int) { return 1.0; }), ExtrapolationMode::power_law),
                    PreconditionError);
}

TEST_CASE("published gap column extrapolates to the exact limit")
{
    const auto& t = reference::gap_even();
    FssSeries s;
    for (std::size_t i = 0; i < t.sizes.size(); ++i) s.points.emplace_back(t.sizes[i], t.values[0][i]);
    CHECK(std::abs(extrapolate(s, ExtrapolationMode::power_law).limit - liebwu::gap_infinite(2.0)) < 2e-4);
}

TEST_CASE("central charge estimator")
{
    EnergyCache cache;
    CHECK(std::abs(central_charge_estimator(62, 2.0, &cache) - 0.6157199846) < 1e-6);
    CHECK(std::abs(central_charge_estimator(222, 2.0, &cache) - 0.9990148608) < 1e-6);
    CHECK(cache.size() == 2);
    CHECK_THROWS_AS(central_charge_estimator(64, 2.0), PreconditionError);
}

TEST_CASE("scaling dimension sequences under the lag-8 pairing")
{
    EnergyCache cache;
    const auto x0 = scaling_dimension_series(0, {65, 145}, 3.0, Pairing::lag8, &cache);
    const auto& t0 = reference::dimension_ground();
    CHECK(std::abs(x0.points[0].second - t0.values[1][0]) < 1e-7);
    CHECK(std::abs(x0.points[1].second - t0.values[1][1]) < 1e-7);
    const auto x1 = scaling_dimension_series(1, {65, 145}, 2.0, Pairing::lag8, &cache);
    const auto& t1 = reference::dimension_first();
    CHECK(std::abs(x1.points[0].second - t1.values[0][0]) < 1e-7);
    CHECK(std::abs(x1.points[1].second - t1.values[0][1]) < 1e-7);
}

TEST_CASE("energy cache prefetch matches serial solves")
{
    EnergyCache parallel;
    parallel.prefetch({{bethe::StateClass::ground, 65, 2.0}, {bethe::StateClass::first_excitation, 65, 2.0},
                       {bethe::StateClass::ground, 62, 2.0}, {bethe::StateClass::ground, 62, 2.0}},
                      3);
    CHECK(parallel.size() == 3);
    EnergyCache serial;
    CHECK(parallel.energy(bethe::StateClass::ground, 65, 2.0) == serial.energy(bethe::StateClass::ground, 65, 2.0));
    CHECK(parallel.energy(bethe::StateClass::first_excitation, 65, 2.0) ==
          serial.energy(bethe::StateClass::first_excitation, 65, 2.0));
}

TEST_CASE("leading check on computed data")
{
    EnergyCache cache;
    CHECK(leading_fss_check(0, {65, 145, 225, 305, 385}, 3.0, Pairing::lag8, &cache) < 5e-3);
    CHECK(leading_fss_check(1, {65, 145, 225, 305, 385}, 2.0, Pairing::lag8, &cache) < 5e-3);
}
}

TEST_SUITE("fss") {

TEST_CASE("published tables and their flagged cells")
{
    const auto u = reference::parse_uncertain("0.08645(1)");
    CHECK(u.value == doctest::Approx(0.08645));
    CHECK(u.uncertainty == doctest::Approx(1e-5));
    CHECK(reference::parse_uncertain("1.0003(2)").uncertainty == doctest::Approx(2e-4));
    CHECK(reference::column_of(reference::gap_odd(), 3.0) == 1u);
    CHECK_FALSE(reference::column_of(reference::gap_odd(), 5.0).has_value());
    CHECK(reference::gap_odd().suspect[0][4]);
    CHECK(reference::gap_odd().suspect[0][5]);
    CHECK(reference::printed_gap_infinite(3.0) == 0.3156965889);
}

TEST_CASE("flagged central-charge cells hold the values of the next size")
{
    const auto& t = reference::central_charge();
    EnergyCache cache;
    for (std::size_t r = 3; r <= 5; ++r) {
        CHECK(t.suspect[1][r]);
        const double next = central_charge_estimator(t.sizes[r + 1], 3.0, &cache);
        const double own = central_charge_estimator(t.sizes[r], 3.0, &cache);
        CHECK(std::abs(next - t.values[1][r]) < 1e-6);
        CHECK(std::abs(own - t.values[1][r]) > 1e-5);
    }
    CHECK_FALSE(t.suspect[1][6]);
    CHECK(std::abs(central_charge_estimator(638, 3.0, &cache) - t.values[1][6]) < 1e-6);
}
}
