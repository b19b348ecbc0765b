#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cpchain/models.hpp"
#include "cpchain/ybx.hpp"

using namespace cpchain;
using namespace cpchain::ybx;

namespace {

constexpr double pi = std::numbers::pi;

// swap of the two 4-dim factors
DenseMatrix factor_swap()
{
    DenseMatrix s = DenseMatrix::Zero(16, 16);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) s(4 * a + b, 4 * b + a) = 1.0;
    return s;
}

} // namespace

TEST_SUITE("ybx") {

TEST_CASE("free-fermion weights and the quartic curve")
{
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> dist(0.0, 2 * pi);
    for (int i = 0; i < 200; ++i) {
        const double l = dist(gen);
        CHECK(std::abs(weights(l).free_fermion_residual()) <= 1e-14);
        for (double U : {1.0, 2.0, 4.0}) CHECK(std::abs(curve_point(l, U).residual()) <= 1e-12);
    }
    const auto p0 = curve_point(0.0, 3.0);
    CHECK(p0.x == 1.0);
    CHECK(p0.y == 0.0);
    CHECK(std::abs(curve_point(pi / 4, 2.0).residual()) < 1e-13);
}

TEST_CASE("Shastry coupling")
{
    CHECK(coupling_h(0.0, 2.0) == 0.0);
    CHECK(coupling_h(pi / 4, 4.0) == doctest::Approx(std::asinh(1.0) / 2).epsilon(1e-14));
}

TEST_CASE("regular point of the coupled Lax operator")
{
    CHECK(max_abs(DenseMatrix(coupled_lax(0.0, 2.0) - factor_swap())) < 1e-15);
    for (double l : {0.0, 0.4}) {
        const DenseMatrix r = shastry_r(l, l, 2.0);
        CHECK(max_abs(DenseMatrix(r - r(0, 0) * factor_swap())) < 1e-14);
    }
}

TEST_CASE("spin-form Yang-Baxter relation")
{
    CHECK(ybe_residual_spin(0.3, 0.7, 2.0) < 1e-12);
    CHECK(ybe_residual_spin(0.5, 0.5, 2.0) < 1e-13);
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> dist(-pi, pi);
    for (double U : {1.0, 2.0, 4.0}) {
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) worst = std::max(worst, ybe_residual_spin(dist(gen), dist(gen), U));
        CHECK(worst < 1e-12);
    }
    // the R as printed is not the intertwiner of the symmetric Lax operator
    CHECK(ybe_residual_spin(0.3, 0.7, 2.0, true) > 1e-2);
}

TEST_CASE("transfer matrices commute")
{
    for (int L : {2, 3}) {
        double worst = 0.0;
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j) worst = std::max(worst, transfer_commutator(-1.0 + 0.5 * i, -1.0 + 0.5 * j, 2.0, L));
        CHECK(worst < 1e-10);
    }
}

TEST_CASE("log-derivative of the transfer matrix is the coupled spin chain")
{
    const int L = 3;
    const double U = 2.0;
    models::ModelParams p;
    p.L = L;
    p.U = U;
    const DenseMatrix hs = models::build_model(models::ModelKind::spin_coupled, p).dense();
    const DenseMatrix d = transfer_log_derivative(U, L);
    const DenseMatrix diff = d - hs;
    const Complex c = diff(0, 0);
    CHECK(max_abs(DenseMatrix(diff - c * DenseMatrix::Identity(diff.rows(), diff.cols()))) < 1e-10);
    CHECK(std::abs(c - Complex(L * U / 4, 0)) < 1e-10);
    const auto m = transfer_hamiltonian_match(U, L);
    CHECK(m.deviation < 1e-10);
    CHECK(m.offset == doctest::Approx(L * U / 4));
}

TEST_CASE("graded Lax operator")
{
    CHECK(max_abs(DenseMatrix(graded_lax(CurvePoint{1.0, 0.0, 2.0}).entries - graded_permutation().entries)) == 0.0);
    for (double l : {0.2, 0.7, -1.1})
        CHECK(max_abs(DenseMatrix(graded_lax_twist(l, 2.0).entries - graded_lax(curve_point(l, 2.0)).entries)) < 1e-14);
    const DenseMatrix pg = graded_permutation().entries;
    CHECK(max_abs(DenseMatrix(pg * pg - DenseMatrix::Identity(16, 16))) == 0.0);
}

TEST_CASE("graded R entries")
{
    const auto p = curve_point(0.3, 2.0);
    CHECK(graded_r_entries(p, p).d == 0.0);
    const auto e = graded_r_entries(p, CurvePoint{1.0, 0.0, 2.0});
    CHECK(e.b_bar == doctest::Approx(p.y / (p.x * p.x + p.y * p.y)).epsilon(1e-14));
    CHECK(graded_r_entries(CurvePoint{1.0, 0.0, 2.0}, CurvePoint{1.0, 0.0, 2.0}).h == doctest::Approx(1.0));
}

TEST_CASE("graded Yang-Baxter relation")
{
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> dist(-pi, pi);
    const auto p = curve_point(0.4, 2.0);
    CHECK(ybe_residual_graded(p, p) < 1e-13);
    for (double U : {2.0, 4.0}) {
        double worst = 0.0, worst_b = 0.0, best_a = 1e300;
        for (int i = 0; i < 50; ++i) {
            const auto p1 = curve_point(dist(gen), U), p2 = curve_point(dist(gen), U);
            worst = std::max(worst, ybe_residual_graded(p1, p2));
            worst_b = std::max(worst_b, ybe_residual_graded_tensor(p1, p2, GradedSign::B));
            best_a = std::min(best_a, ybe_residual_graded_tensor(p1, p2, GradedSign::A));
        }
        CHECK(worst < 1e-10);
        // convention B is the one under which the graded tensor form holds
        CHECK(worst_b < 1e-10);
        CHECK(best_a > 1e-3);
    }
}

TEST_CASE("graded embedding reduces to the plain one for even operators")
{
    const DenseMatrix id = DenseMatrix::Identity(16, 16);
    CHECK(max_abs(DenseMatrix(graded_embed(id, 0, 1, GradedSign::B) - embed_pair(id, 0, 1))) == 0.0);
}

TEST_CASE("Hamiltonian density from the graded Lax operator")
{
    for (double U : {0.0, 1.0, 2.0}) CHECK(max_abs(DenseMatrix(density_expansion(U) - printed_density(U))) < 1e-10);
    CHECK(density_expansion(0.0).diagonal().cwiseAbs().maxCoeff() < 1e-12);
    CHECK(max_abs(DenseMatrix(density_expansion(2.0, 1e-3) - density_expansion(2.0, 5e-4))) < 1e-10);
    CHECK(density_ring_deviation(2.0, 3) < 1e-10);
    CHECK(density_ring_deviation(1.5, 4) < 1e-10);
}
}
