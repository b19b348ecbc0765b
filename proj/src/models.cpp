#include "cpchain/models.hpp"

#include <array>
#include <bit>
#include <cmath>

#include "cpchain/errors.hpp"

namespace cpchain::models {

using fock::c;
using fock::cdag;
using fock::ModeKind;
using fock::Spin;
using fock::Term;

namespace {

constexpr std::array<Spin, 2> spins{Spin::up, Spin::down};
const Complex I1{0.0, 1.0};

int next_site(int j, int L) { return j % L + 1; }

void add_interaction(std::vector<Term>& t, int L, double U)
{
    if (U == 0.0) return;
    for (int j = 1; j <= L; ++j) {
        t.push_back({U, {cdag(Spin::up, j), c(Spin::up, j), cdag(Spin::down, j), c(Spin::down, j)}});
        t.push_back({-U / 2, {cdag(Spin::up, j), c(Spin::up, j)}});
        t.push_back({-U / 2, {cdag(Spin::down, j), c(Spin::down, j)}});
    }
    t.push_back({U * L / 4.0, {}});
}

void reject_extended_params(ModelKind kind, const ModelParams& p)
{
    if (kind == ModelKind::charge_pair_extended) return;
    require(p.theta_up == 0.0 && p.theta_down == 0.0 && p.h1 == 0.0 && p.h2 == 0.0,
            "fluxes and chemical potentials are only read by charge_pair_extended");
}

Term number(Spin s, int j) { return {1.0, {cdag(s, j), c(s, j)}}; }

} // namespace

std::string to_string(ModelKind k)
{
    switch (k) {
    case ModelKind::hubbard: return "hubbard";
    case ModelKind::charge_pair: return "charge_pair";
    case ModelKind::charge_pair_transformed: return "charge_pair_transformed";
    case ModelKind::charge_pair_extended: return "charge_pair_extended";
    case ModelKind::spin_coupled: return "spin_coupled";
    case ModelKind::spin_xx_even: return "spin_xx_even";
    case ModelKind::spin_xx_odd: return "spin_xx_odd";
    case ModelKind::charge_pair_jw: return "charge_pair_jw";
    }
    return "unknown";
}

std::optional<ModelKind> parse_model(const std::string& name)
{
    for (auto k : {ModelKind::hubbard, ModelKind::charge_pair, ModelKind::charge_pair_transformed,
                   ModelKind::charge_pair_extended, ModelKind::spin_coupled, ModelKind::spin_xx_even,
                   ModelKind::spin_xx_odd, ModelKind::charge_pair_jw}) {
        if (to_string(k) == name) return k;
    }
    return std::nullopt;
}

bool is_spin_model(ModelKind k)
{
    return k == ModelKind::spin_coupled || k == ModelKind::spin_xx_even || k == ModelKind::spin_xx_odd ||
           k == ModelKind::charge_pair_jw;
}

std::vector<Term> model_terms(ModelKind kind, const ModelParams& p)
{
    require(!is_spin_model(kind), "model_terms: " + to_string(kind) + " is not a fermionic model");
    require(p.L >= 2, "ring models need L >= 2");
    reject_extended_params(kind, p);
    const int L = p.L;
    std::vector<Term> t;
    switch (kind) {
    case ModelKind::hubbard:
        for (int j = 1; j <= L; ++j) {
            const int k = next_site(j, L);
            for (auto s : spins) {
                t.push_back({-1.0, {cdag(s, j), c(s, k)}});
                t.push_back({-1.0, {cdag(s, k), c(s, j)}});
            }
        }
        break;
    case ModelKind::charge_pair:
        for (int j = 1; j <= L; ++j) {
            const int k = next_site(j, L);
            for (auto s : spins) {
                t.push_back({1.0, {c(s, j), c(s, k)}});
                t.push_back({1.0, {cdag(s, k), cdag(s, j)}});
            }
        }
        break;
    case ModelKind::charge_pair_transformed:
        for (int j = 1; j <= L; ++j) {
            const int k = next_site(j, L);
            t.push_back({I1, {cdag(Spin::up, j), c(Spin::up, k)}});
            t.push_back({-I1, {cdag(Spin::up, k), c(Spin::up, j)}});
            t.push_back({-I1, {cdag(Spin::down, j), c(Spin::down, k)}});
            t.push_back({I1, {cdag(Spin::down, k), c(Spin::down, j)}});
        }
        break;
    case ModelKind::charge_pair_extended: {
        for (int j = 1; j <= L; ++j) {
            const int k = next_site(j, L);
            for (auto s : spins) {
                const double th = s == Spin::up ? p.theta_up : p.theta_down;
                t.push_back({std::exp(I1 * th), {c(s, j), c(s, k)}});
                t.push_back({std::exp(-I1 * th), {cdag(s, k), cdag(s, j)}});
            }
        }
        const double phi = 0.5 * (p.theta_up - p.theta_down);
        const double psi = 0.5 * (p.theta_up + p.theta_down);
        for (int j = 1; j <= L; ++j) {
            if (p.h1 != 0.0) {
                t.push_back({I1 * p.h1 * std::exp(I1 * phi), {cdag(Spin::down, j), c(Spin::up, j)}});
                t.push_back({-I1 * p.h1 * std::exp(-I1 * phi), {cdag(Spin::up, j), c(Spin::down, j)}});
            }
            if (p.h2 != 0.0) {
                t.push_back({p.h2 * std::exp(-I1 * psi), {cdag(Spin::up, j), cdag(Spin::down, j)}});
                t.push_back({p.h2 * std::exp(I1 * psi), {c(Spin::down, j), c(Spin::up, j)}});
            }
        }
        break;
    }
    default:
        break;
    }
    add_interaction(t, L, p.U);
    return t;
}

OperatorMatrix build_model(ModelKind kind, const ModelParams& p)
{
    require(p.L >= 2, "ring models need L >= 2");
    reject_extended_params(kind, p);
    switch (kind) {
    case ModelKind::spin_coupled:
        return assemble_pauli(p.L, spin_coupled_terms(p.L, p.U));
    case ModelKind::spin_xx_even:
    case ModelKind::spin_xx_odd: {
        const bool even = kind == ModelKind::spin_xx_even;
        require((p.L % 2 == 0) == even, to_string(kind) + " requires L " + (even ? "even" : "odd") +
                                            ", got L=" + std::to_string(p.L));
        std::vector<PauliTerm> t;
        const int L = p.L;
        for (auto sp : {Species::sigma, Species::tau}) {
            for (int j = 1; j < L; ++j) {
                t.push_back({1.0, {{PauliOp::minus, sp, j}, {PauliOp::plus, sp, j + 1}}});
                t.push_back({1.0, {{PauliOp::plus, sp, j}, {PauliOp::minus, sp, j + 1}}});
            }
            if (even) {
                t.push_back({1.0, {{PauliOp::minus, sp, L}, {PauliOp::plus, sp, 1}}});
                t.push_back({1.0, {{PauliOp::plus, sp, L}, {PauliOp::minus, sp, 1}}});
            } else {
                t.push_back({1.0, {{PauliOp::minus, sp, L}, {PauliOp::minus, sp, 1}}});
                t.push_back({1.0, {{PauliOp::plus, sp, 1}, {PauliOp::plus, sp, L}}});
            }
        }
        for (int j = 1; j <= L; ++j)
            t.push_back({p.U / 4, {{PauliOp::z, Species::sigma, j}, {PauliOp::z, Species::tau, j}}});
        return assemble_pauli(L, t);
    }
    case ModelKind::charge_pair_jw:
        return jordan_wigner_image(p.L, p.U);
    default:
        return fock::assemble_operator(p.L, model_terms(kind, p));
    }
}

OperatorMatrix build_transformed_sector(const ModelParams& p, fock::Sector sector)
{
    return fock::assemble_operator(p.L, model_terms(ModelKind::charge_pair_transformed, p), sector);
}

std::string to_string(GeneratorKind g)
{
    switch (g) {
    case GeneratorKind::S_x: return "S_x";
    case GeneratorKind::S_y: return "S_y";
    case GeneratorKind::S_z: return "S_z";
    case GeneratorKind::R_x: return "R_x";
    case GeneratorKind::R_y: return "R_y";
    case GeneratorKind::R_z: return "R_z";
    case GeneratorKind::S_x_staggered: return "S_x_staggered";
    case GeneratorKind::S_z_staggered: return "S_z_staggered";
    case GeneratorKind::R_y_staggered: return "R_y_staggered";
    case GeneratorKind::R_z_staggered: return "R_z_staggered";
    }
    return "unknown";
}

std::vector<Term> generator_terms(GeneratorKind g, int L)
{
    require(L >= 1, "generators need L >= 1");
    std::vector<Term> t;
    const auto up = Spin::up;
    const auto dn = Spin::down;
    for (int j = 1; j <= L; ++j) {
        const double st = (j % 2 == 0) ? 1.0 : -1.0;
        switch (g) {
        case GeneratorKind::S_x:
        case GeneratorKind::S_x_staggered: {
            const double f = g == GeneratorKind::S_x ? 0.5 : 0.5 * st;
            t.push_back({f, {cdag(up, j), c(dn, j)}});
            t.push_back({f, {cdag(dn, j), c(up, j)}});
            break;
        }
        case GeneratorKind::S_y:
            t.push_back({0.5 * I1, {cdag(dn, j), c(up, j)}});
            t.push_back({-0.5 * I1, {cdag(up, j), c(dn, j)}});
            break;
        case GeneratorKind::S_z:
        case GeneratorKind::S_z_staggered: {
            const double f = g == GeneratorKind::S_z ? 0.5 : 0.5 * st;
            t.push_back({f, {cdag(up, j), c(up, j)}});
            t.push_back({-f, {cdag(dn, j), c(dn, j)}});
            break;
        }
        case GeneratorKind::R_x:
            t.push_back({0.5, {cdag(up, j), cdag(dn, j)}});
            t.push_back({0.5, {c(dn, j), c(up, j)}});
            break;
        case GeneratorKind::R_y:
        case GeneratorKind::R_y_staggered: {
            const Complex f = (g == GeneratorKind::R_y ? 0.5 : 0.5 * st) * I1;
            t.push_back({f, {c(dn, j), c(up, j)}});
            t.push_back({-f, {cdag(up, j), cdag(dn, j)}});
            break;
        }
        case GeneratorKind::R_z:
        case GeneratorKind::R_z_staggered: {
            const double f = g == GeneratorKind::R_z ? 0.5 : 0.5 * st;
            t.push_back({f, {cdag(up, j), c(up, j)}});
            t.push_back({f, {cdag(dn, j), c(dn, j)}});
            t.push_back({-f, {}});
            break;
        }
        }
    }
    return t;
}

OperatorMatrix symmetry_generator(GeneratorKind g, int L)
{
    return fock::assemble_operator(L, generator_terms(g, L));
}

Eigen::Matrix4cd local_rotation()
{
    Eigen::Matrix4cd v;
    v << 1, 0, 0, 1,
         0, -I1, 1, 0,
         0, -1, I1, 0,
         -1, 0, 0, 1;
    return v / std::sqrt(2.0);
}

std::vector<Term> local_operator_terms(const Eigen::Matrix4cd& m, int site)
{
    // |a> = m_a |0> with m_0 = 1, m_1 = c+up, m_2 = c+dn, m_3 = c+up c+dn
    const std::array<std::vector<fock::ModeFactor>, 4> mono{
        std::vector<fock::ModeFactor>{},
        std::vector<fock::ModeFactor>{cdag(Spin::up, site)},
        std::vector<fock::ModeFactor>{cdag(Spin::down, site)},
        std::vector<fock::ModeFactor>{cdag(Spin::up, site), cdag(Spin::down, site)}};
    // on-site vacuum projector (1 - n_up)(1 - n_dn)
    const std::vector<Term> pvac{
        {1.0, {}},
        {-1.0, {cdag(Spin::up, site), c(Spin::up, site)}},
        {-1.0, {cdag(Spin::down, site), c(Spin::down, site)}},
        {1.0, {cdag(Spin::up, site), c(Spin::up, site), cdag(Spin::down, site), c(Spin::down, site)}}};
    std::vector<Term> out;
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            if (m(a, b) == Complex(0.0, 0.0)) continue;
            const Term right = fock::adjoint(Term{1.0, mono[b]});
            for (const auto& pv : pvac) {
                Term t;
                t.coefficient = m(a, b) * pv.coefficient;
                t.factors = mono[a];
                t.factors.insert(t.factors.end(), pv.factors.begin(), pv.factors.end());
                t.factors.insert(t.factors.end(), right.factors.begin(), right.factors.end());
                out.push_back(std::move(t));
            }
        }
    }
    return out;
}

OperatorMatrix basis_rotation(int L)
{
    const Eigen::Matrix4cd v = local_rotation();
    OperatorMatrix out = fock::assemble_operator(L, local_operator_terms(v, 1));
    for (int j = 2; j <= L; ++j) {
        OperatorMatrix vj = fock::assemble_operator(L, local_operator_terms(v, j));
        out.matrix = SparseMatrix(out.matrix * vj.matrix);
    }
    out.matrix.prune([](Eigen::Index, Eigen::Index, const Complex& x) { return std::abs(x) > 1e-15; });
    return out;
}

std::vector<Term> d_operator(ModeKind kind, Spin spin, int site)
{
    const int j = site;
    const auto up = Spin::up;
    const auto dn = Spin::down;
    std::vector<Term> t;
    if (spin == Spin::down) {
        t = {{0.5 * I1, {c(up, j)}}, {0.5, {cdag(up, j)}}, {-0.5, {c(dn, j)}}, {0.5 * I1, {cdag(dn, j)}}};
    } else {
        t = {{0.5, {c(up, j)}}, {0.5 * I1, {cdag(up, j)}}, {-0.5 * I1, {c(dn, j)}}, {0.5, {cdag(dn, j)}}};
    }
    if (kind == ModeKind::create)
        for (auto& x : t) x = fock::adjoint(x);
    return t;
}

OperatorMatrix flux_gauge(int L, double theta_up, double theta_down)
{
    fock::Basis basis(L);
    OperatorMatrix g;
    g.L = L;
    g.matrix.resize(static_cast<Eigen::Index>(basis.size()), static_cast<Eigen::Index>(basis.size()));
    std::vector<Eigen::Triplet<Complex>> trip;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const auto s = basis.state(i);
        const double ph = 0.5 * (theta_up * s.n_up() + theta_down * s.n_down());
        trip.emplace_back(static_cast<int>(i), static_cast<int>(i), std::exp(I1 * ph));
    }
    g.matrix.setFromTriplets(trip.begin(), trip.end());
    return g;
}

OperatorMatrix extended_rotated(const ModelParams& p)
{
    const OperatorMatrix h = build_model(ModelKind::charge_pair_extended, p);
    const OperatorMatrix g = flux_gauge(p.L, p.theta_up, p.theta_down);
    const OperatorMatrix v = basis_rotation(p.L);
    OperatorMatrix x = h;
    x.matrix = v.matrix * g.matrix * h.matrix * SparseMatrix(g.matrix.adjoint()) * SparseMatrix(v.matrix.adjoint());
    x.matrix.prune([](Eigen::Index, Eigen::Index, const Complex& z) { return std::abs(z) > 1e-14; });
    return x;
}

fock::Sector rotated_frame_sector(fock::Sector d_sector, int L)
{
    return {L - d_sector.n_up, L - d_sector.n_down};
}

double extended_reduction_residual(const ModelParams& p)
{
    const int L = p.L;
    const OperatorMatrix x = extended_rotated(p);
    ModelParams q = p;
    q.theta_up = q.theta_down = q.h1 = q.h2 = 0.0;
    std::vector<Term> t = model_terms(ModelKind::charge_pair_transformed, q);
    // frame counts n are L - n in d-labels
    for (int j = 1; j <= L; ++j) {
        t.push_back({-p.h1 - p.h2, number(Spin::up, j).factors});
        t.push_back({p.h1 - p.h2, number(Spin::down, j).factors});
    }
    t.push_back({p.h2 * L, {}});
    const OperatorMatrix expected = fock::assemble_operator(L, t);
    return max_abs(SparseMatrix(x.matrix - expected.matrix));
}

// ---- spin chains ----------------------------------------------------------

namespace {

std::uint64_t spin_bit(const PauliFactor& f, int L)
{
    const int pos = (f.species == Species::sigma ? 0 : L) + f.site - 1;
    return std::uint64_t(1) << pos;
}

} // namespace

OperatorMatrix assemble_pauli(int L, const std::vector<PauliTerm>& terms)
{
    require(L >= 1 && L <= fock::max_sites, "spin chain size out of range");
    for (const auto& t : terms)
        for (const auto& f : t.factors) require(f.site >= 1 && f.site <= L, "Pauli factor site out of range");
    const std::uint64_t dim = std::uint64_t(1) << (2 * L);
    std::vector<Eigen::Triplet<Complex>> trip;
    trip.reserve(dim * terms.size() / 2 + 1);
    for (std::uint64_t col = 0; col < dim; ++col) {
        for (const auto& t : terms) {
            Complex amp = t.coefficient;
            std::uint64_t w = col;
            bool dead = false;
            for (auto it = t.factors.rbegin(); it != t.factors.rend() && !dead; ++it) {
                const std::uint64_t bit = spin_bit(*it, L);
                const bool upstate = w & bit;
                switch (it->op) {
                case PauliOp::plus:
                    if (upstate) dead = true;
                    else w |= bit;
                    break;
                case PauliOp::minus:
                    if (!upstate) dead = true;
                    else w &= ~bit;
                    break;
                case PauliOp::x:
                    w ^= bit;
                    break;
                case PauliOp::y:
                    amp *= upstate ? I1 : -I1;
                    w ^= bit;
                    break;
                case PauliOp::z:
                    if (!upstate) amp = -amp;
                    break;
                }
            }
            if (!dead) trip.emplace_back(static_cast<int>(w), static_cast<int>(col), amp);
        }
    }
    OperatorMatrix op;
    op.L = L;
    op.matrix.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    op.matrix.setFromTriplets(trip.begin(), trip.end());
    op.matrix.prune([](Eigen::Index, Eigen::Index, const Complex& v) { return v != Complex(0.0, 0.0); });
    return op;
}

int local_spin_index(std::uint64_t word, int L, int site)
{
    const bool s_up = (word >> (site - 1)) & 1u;
    const bool t_up = (word >> (L + site - 1)) & 1u;
    return 2 * (s_up ? 0 : 1) + (t_up ? 0 : 1);
}

std::uint64_t set_local_spin(std::uint64_t word, int L, int site, int local)
{
    const std::uint64_t sb = std::uint64_t(1) << (site - 1);
    const std::uint64_t tb = std::uint64_t(1) << (L + site - 1);
    word &= ~(sb | tb);
    if ((local & 2) == 0) word |= sb;
    if ((local & 1) == 0) word |= tb;
    return word;
}

std::vector<PauliTerm> spin_coupled_terms(int L, double U)
{
    std::vector<PauliTerm> t;
    for (auto sp : {Species::sigma, Species::tau}) {
        for (int j = 1; j <= L; ++j) {
            const int k = next_site(j, L);
            t.push_back({1.0, {{PauliOp::minus, sp, j}, {PauliOp::minus, sp, k}}});
            t.push_back({1.0, {{PauliOp::plus, sp, k}, {PauliOp::plus, sp, j}}});
        }
    }
    for (int j = 1; j <= L; ++j)
        t.push_back({U / 4, {{PauliOp::z, Species::sigma, j}, {PauliOp::z, Species::tau, j}}});
    return t;
}

std::vector<PauliTerm> jw_string_terms(int L, double U)
{
    require(L >= 2, "Jordan-Wigner image needs L >= 2");
    std::vector<PauliTerm> t;
    for (auto sp : {Species::sigma, Species::tau}) {
        for (int j = 1; j < L; ++j) {
            t.push_back({1.0, {{PauliOp::minus, sp, j}, {PauliOp::minus, sp, j + 1}}});
            t.push_back({1.0, {{PauliOp::plus, sp, j + 1}, {PauliOp::plus, sp, j}}});
        }
        PauliTerm a{-1.0, {{PauliOp::minus, sp, L}, {PauliOp::minus, sp, 1}}};
        PauliTerm b{1.0, {{PauliOp::plus, sp, 1}, {PauliOp::plus, sp, L}}};
        for (int k = 1; k < L; ++k) {
            a.factors.push_back({PauliOp::z, sp, k});
            b.factors.push_back({PauliOp::z, sp, k});
        }
        t.push_back(a);
        t.push_back(b);
    }
    for (int j = 1; j <= L; ++j)
        t.push_back({U / 4, {{PauliOp::z, Species::sigma, j}, {PauliOp::z, Species::tau, j}}});
    return t;
}

OperatorMatrix jw_sign_gauge(int L)
{
    const std::uint64_t dim = std::uint64_t(1) << (2 * L);
    // modes m = 1..2L in canonical order sit at bit m-1; even m carries a minus sign
    std::uint64_t odd_modes = 0;
    for (int b = 1; b < 2 * L; b += 2) odd_modes |= std::uint64_t(1) << b;
    std::vector<Eigen::Triplet<Complex>> trip;
    trip.reserve(dim);
    for (std::uint64_t w = 0; w < dim; ++w) {
        const double s = (std::popcount(w & odd_modes) & 1) ? -1.0 : 1.0;
        trip.emplace_back(static_cast<int>(w), static_cast<int>(w), s);
    }
    OperatorMatrix d;
    d.L = L;
    d.matrix.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    d.matrix.setFromTriplets(trip.begin(), trip.end());
    return d;
}

OperatorMatrix jordan_wigner_image(int L, double U)
{
    const OperatorMatrix hp = assemble_pauli(L, jw_string_terms(L, U));
    const OperatorMatrix d = jw_sign_gauge(L);
    OperatorMatrix out = hp;
    out.matrix = SparseMatrix(d.matrix * hp.matrix * d.matrix);
    return out;
}

OperatorMatrix sublattice_flip(int L)
{
    std::uint64_t mask = 0;
    for (int j = 2; j <= L; j += 2) mask |= (std::uint64_t(1) << (j - 1)) | (std::uint64_t(1) << (L + j - 1));
    const std::uint64_t dim = std::uint64_t(1) << (2 * L);
    std::vector<Eigen::Triplet<Complex>> trip;
    trip.reserve(dim);
    for (std::uint64_t w = 0; w < dim; ++w) trip.emplace_back(static_cast<int>(w ^ mask), static_cast<int>(w), 1.0);
    OperatorMatrix out;
    out.L = L;
    out.matrix.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    out.matrix.setFromTriplets(trip.begin(), trip.end());
    return out;
}

double sublattice_rotation_check(int L, double U)
{
    require(L >= 2, "sublattice rotation needs L >= 2");
    const ModelParams p{L, U};
    const OperatorMatrix hs = build_model(ModelKind::spin_coupled, p);
    const OperatorMatrix target = build_model(L % 2 == 0 ? ModelKind::spin_xx_even : ModelKind::spin_xx_odd, p);
    const OperatorMatrix w = sublattice_flip(L);
    SparseMatrix rotated = w.matrix * hs.matrix * SparseMatrix(w.matrix.adjoint());
    return max_abs(SparseMatrix(rotated - target.matrix));
}

} // namespace cpchain::models
