#include "cpchain/fock.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "cpchain/errors.hpp"

namespace cpchain {
namespace fock {

namespace {

void check_sites(int L)
{
    require(L >= 1 && L <= max_sites,
            "site count must lie in [1, " + std::to_string(max_sites) + "], got " + std::to_string(L));
}

std::uint32_t low_mask(int n) { return n >= 32 ? ~0u : ((1u << n) - 1u); }

} // namespace

FockState FockState::from_word(std::uint64_t w, int L)
{
    FockState s;
    s.L = L;
    s.up_bits = static_cast<std::uint32_t>(w & low_mask(L));
    s.down_bits = static_cast<std::uint32_t>((w >> L) & low_mask(L));
    return s;
}

bool FockState::occupied(Spin s, int site) const
{
    std::uint32_t bits = s == Spin::up ? up_bits : down_bits;
    return (bits >> (site - 1)) & 1u;
}

int FockState::n_up() const { return std::popcount(up_bits); }
int FockState::n_down() const { return std::popcount(down_bits); }

std::vector<FockState> enumerate_basis(int L, std::optional<Sector> sector)
{
    Basis b(L, sector);
    std::vector<FockState> out;
    out.reserve(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) out.push_back(b.state(i));
    return out;
}

std::optional<ModeResult> apply_mode(const FockState& state, ModeKind kind, Spin spin, int site)
{
    require(site >= 1 && site <= state.L, "site index out of range: " + std::to_string(site));
    const bool occ = state.occupied(spin, site);
    if ((kind == ModeKind::create) == occ) return std::nullopt;

    // occupied modes before the target in canonical order
    int before = 0;
    const std::uint32_t below = low_mask(site - 1);
    if (spin == Spin::up) {
        before = std::popcount(state.up_bits & below);
    } else {
        before = std::popcount(state.up_bits) + std::popcount(state.down_bits & below);
    }

    ModeResult r;
    r.sign = (before & 1) ? -1 : 1;
    r.state = state;
    const std::uint32_t bit = 1u << (site - 1);
    if (spin == Spin::up) r.state.up_bits ^= bit;
    else r.state.down_bits ^= bit;
    return r;
}

Term adjoint(const Term& t)
{
    Term a;
    a.coefficient = std::conj(t.coefficient);
    a.factors.assign(t.factors.rbegin(), t.factors.rend());
    for (auto& f : a.factors)
        f.kind = f.kind == ModeKind::create ? ModeKind::annihilate : ModeKind::create;
    return a;
}

Basis::Basis(int L, std::optional<Sector> sector) : L_(L), sector_(sector)
{
    check_sites(L);
    if (sector) {
        require(sector->n_up >= 0 && sector->n_up <= L && sector->n_down >= 0 && sector->n_down <= L,
                "sector occupations must lie in [0, L]");
    }
    const std::uint64_t dim = std::uint64_t(1) << (2 * L);
    if (!sector) {
        words_.resize(dim);
        for (std::uint64_t w = 0; w < dim; ++w) words_[w] = w;
        return;
    }
    std::vector<std::uint32_t> ups, downs;
    for (std::uint32_t b = 0; b < (1u << L); ++b) {
        if (std::popcount(b) == sector->n_up) ups.push_back(b);
        if (std::popcount(b) == sector->n_down) downs.push_back(b);
    }
    words_.reserve(ups.size() * downs.size());
    for (auto d : downs)
        for (auto u : ups) words_.push_back(std::uint64_t(u) | (std::uint64_t(d) << L));
    // down bits are the high half, so this is already increasing
}

std::optional<std::size_t> Basis::index_of(std::uint64_t word) const
{
    if (!sector_) {
        if (word < words_.size()) return static_cast<std::size_t>(word);
        return std::nullopt;
    }
    auto it = std::lower_bound(words_.begin(), words_.end(), word);
    if (it == words_.end() || *it != word) return std::nullopt;
    return static_cast<std::size_t>(it - words_.begin());
}

namespace {

// apply one term to a basis state; nullopt when annihilated
std::optional<std::pair<Complex, FockState>> apply_term(const Term& t, const FockState& s)
{
    Complex amp = t.coefficient;
    FockState cur = s;
    for (auto it = t.factors.rbegin(); it != t.factors.rend(); ++it) {
        auto r = apply_mode(cur, it->kind, it->spin, it->site);
        if (!r) return std::nullopt;
        if (r->sign < 0) amp = -amp;
        cur = r->state;
    }
    return std::make_pair(amp, cur);
}

} // namespace

OperatorMatrix assemble_operator(int L, const std::vector<Term>& terms, std::optional<Sector> sector)
{
    Basis basis(L, sector);
    for (const auto& t : terms)
        for (const auto& f : t.factors)
            require(f.site >= 1 && f.site <= L, "mode site out of range: " + std::to_string(f.site));

    std::vector<Eigen::Triplet<Complex>> trip;
    trip.reserve(basis.size() * (terms.size() / 4 + 1));
    for (std::size_t col = 0; col < basis.size(); ++col) {
        const FockState s = basis.state(col);
        for (const auto& t : terms) {
            auto r = apply_term(t, s);
            if (!r) continue;
            auto row = basis.index_of(r->second.word());
            if (!row) {
                throw PreconditionError("operator does not preserve sector (" + std::to_string(sector->n_up) +
                                        "," + std::to_string(sector->n_down) + ")");
            }
            trip.emplace_back(static_cast<int>(*row), static_cast<int>(col), r->first);
        }
    }
    OperatorMatrix op;
    op.L = L;
    op.sector = sector;
    op.matrix.resize(static_cast<Eigen::Index>(basis.size()), static_cast<Eigen::Index>(basis.size()));
    op.matrix.setFromTriplets(trip.begin(), trip.end());
    op.matrix.prune([](Eigen::Index, Eigen::Index, const Complex& v) { return v != Complex(0.0, 0.0); });
    return op;
}

OperatorMatrix restrict_to_sector(const OperatorMatrix& full, Sector sector)
{
    require(!full.sector, "restrict_to_sector expects a full-space operator");
    Basis basis(full.L, sector);
    std::vector<Eigen::Triplet<Complex>> trip;
    for (std::size_t col = 0; col < basis.size(); ++col) {
        const auto w = static_cast<Eigen::Index>(basis.word(col));
        for (SparseMatrix::InnerIterator it(full.matrix, w); it; ++it) {
            auto row = basis.index_of(static_cast<std::uint64_t>(it.row()));
            if (row) trip.emplace_back(static_cast<int>(*row), static_cast<int>(col), it.value());
        }
    }
    OperatorMatrix out;
    out.L = full.L;
    out.sector = sector;
    out.matrix.resize(static_cast<Eigen::Index>(basis.size()), static_cast<Eigen::Index>(basis.size()));
    out.matrix.setFromTriplets(trip.begin(), trip.end());
    return out;
}

StateVector vacuum(int L)
{
    check_sites(L);
    StateVector v;
    v.L = L;
    v.amplitudes = ComplexVector::Zero(Eigen::Index(1) << (2 * L));
    v.amplitudes(0) = 1.0;
    return v;
}

StateVector apply_terms(const std::vector<Term>& terms, const StateVector& v)
{
    require(!v.sector, "apply_terms expects a full-space vector");
    StateVector out;
    out.L = v.L;
    out.amplitudes = ComplexVector::Zero(v.amplitudes.size());
    for (Eigen::Index i = 0; i < v.amplitudes.size(); ++i) {
        if (v.amplitudes(i) == Complex(0.0, 0.0)) continue;
        const FockState s = FockState::from_word(static_cast<std::uint64_t>(i), v.L);
        for (const auto& t : terms) {
            auto r = apply_term(t, s);
            if (!r) continue;
            out.amplitudes(static_cast<Eigen::Index>(r->second.word())) += r->first * v.amplitudes(i);
        }
    }
    return out;
}

} // namespace fock

double max_abs(const SparseMatrix& m)
{
    double best = 0.0;
    for (int k = 0; k < m.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(m, k); it; ++it) best = std::max(best, std::abs(it.value()));
    return best;
}

double max_abs(const DenseMatrix& m)
{
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermiticity_defect(const OperatorMatrix& a)
{
    SparseMatrix d = a.matrix - SparseMatrix(a.matrix.adjoint());
    return max_abs(d);
}

} // namespace cpchain
