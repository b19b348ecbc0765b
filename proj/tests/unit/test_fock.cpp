#include <doctest.h>

#include "cpchain/errors.hpp"
#include "cpchain/fock.hpp"

using namespace cpchain;
using namespace cpchain::fock;

TEST_SUITE("fock") {

TEST_CASE("basis sizes and ordering")
{
    CHECK(enumerate_basis(1).size() == 4);
    CHECK(enumerate_basis(2, Sector{1, 1}).size() == 4);
    const auto b = enumerate_basis(3);
    REQUIRE(b.size() == 64);
    for (std::size_t i = 0; i < b.size(); ++i) CHECK(b[i].word() == i);
    for (const auto& s : enumerate_basis(4, Sector{2, 1})) {
        CHECK(s.n_up() == 2);
        CHECK(s.n_down() == 1);
    }
}

TEST_CASE("mode application and exclusion")
{
    const FockState vac{0, 0, 2};
    auto r = apply_mode(vac, ModeKind::create, Spin::up, 1);
    REQUIRE(r.has_value());
    CHECK(r->sign == 1);
    CHECK(r->state.up_bits == 1u);
    CHECK_FALSE(apply_mode(r->state, ModeKind::create, Spin::up, 1).has_value());
    CHECK_FALSE(apply_mode(vac, ModeKind::annihilate, Spin::down, 2).has_value());

    auto a = apply_mode(apply_mode(vac, ModeKind::create, Spin::up, 2)->state, ModeKind::create, Spin::up, 1);
    auto b = apply_mode(apply_mode(vac, ModeKind::create, Spin::up, 1)->state, ModeKind::create, Spin::up, 2);
    REQUIRE(a.has_value());
    REQUIRE(b.has_value());
    CHECK(a->state == b->state);
    CHECK(a->sign == -b->sign);
}

TEST_CASE("number operator on one site")
{
    const auto n = assemble_operator(1, {Term{1.0, {cdag(Spin::up, 1), c(Spin::up, 1)}}}).dense();
    Eigen::Vector4cd expect(0, 1, 0, 1);
    CHECK(max_abs(DenseMatrix(n - DenseMatrix(expect.asDiagonal()))) == 0.0);
}

TEST_CASE("canonical anticommutators")
{
    const int L = 3;
    for (int i = 1; i <= L; ++i)
        for (int j = 1; j <= L; ++j)
            for (Spin s : {Spin::up, Spin::down})
                for (Spin t : {Spin::up, Spin::down}) {
                    const auto a = assemble_operator(L, {Term{1.0, {c(s, i)}}}).dense();
                    const auto bd = assemble_operator(L, {Term{1.0, {cdag(t, j)}}}).dense();
                    const auto b = assemble_operator(L, {Term{1.0, {c(t, j)}}}).dense();
                    DenseMatrix expect = DenseMatrix::Zero(a.rows(), a.cols());
                    if (i == j && s == t) expect.setIdentity();
                    CHECK(max_abs(DenseMatrix(a * bd + bd * a - expect)) < 1e-15);
                    CHECK(max_abs(DenseMatrix(a * b + b * a)) < 1e-15);
                }
}

TEST_CASE("hermitian completion and adjoint")
{
    const Term t{Complex(0.3, 0.2), {cdag(Spin::up, 1), c(Spin::down, 2)}};
    const auto h = assemble_operator(2, {t, adjoint(t)});
    CHECK(hermiticity_defect(h) < 1e-15);
    const auto a = assemble_operator(2, {t}).dense();
    const auto ad = assemble_operator(2, {adjoint(t)}).dense();
    CHECK(max_abs(DenseMatrix(a.adjoint() - ad)) < 1e-15);
}

TEST_CASE("sector assembly matches restriction and rejects leaks")
{
    const std::vector<Term> hop{{1.0, {cdag(Spin::up, 1), c(Spin::up, 2)}}, {1.0, {cdag(Spin::up, 2), c(Spin::up, 1)}},
                                {0.7, {cdag(Spin::down, 1), c(Spin::down, 1)}}};
    const Sector s{1, 1};
    const auto direct = assemble_operator(2, hop, s);
    const auto restricted = restrict_to_sector(assemble_operator(2, hop), s);
    CHECK(direct.dimension() == 4);
    CHECK(max_abs(SparseMatrix(direct.matrix - restricted.matrix)) < 1e-15);
    CHECK_THROWS_AS(assemble_operator(2, {Term{1.0, {cdag(Spin::up, 1)}}}, s), PreconditionError);
}

TEST_CASE("applying terms to the vacuum")
{
    const auto v = apply_terms({Term{1.0, {cdag(Spin::up, 1), cdag(Spin::down, 1)}}}, vacuum(1));
    REQUIRE(v.amplitudes.size() == 4);
    CHECK(std::abs(v.amplitudes[3] - Complex(1.0)) < 1e-15);
    CHECK(std::abs(v.amplitudes[0]) == 0.0);
}

TEST_CASE("invalid arguments")
{
    CHECK_THROWS_AS(enumerate_basis(0), PreconditionError);
    CHECK_THROWS_AS(enumerate_basis(max_sites + 1), PreconditionError);
    CHECK_THROWS_AS(enumerate_basis(2, Sector{3, 0}), PreconditionError);
}
}
