#include "cpchain/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "cpchain/errors.hpp"

namespace cpchain::spectra {

namespace {

void require_hermitian(const OperatorMatrix& h)
{
    const double scale = std::max(1.0, max_abs(h.matrix));
    require(hermiticity_defect(h) <= 1e-10 * scale, "spectrum: input matrix is not Hermitian");
}

// orthonormalise the columns of w against q[0..n) and among themselves
void orthonormalise(DenseMatrix& w, const DenseMatrix& q, Eigen::Index n, std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    for (int pass = 0; pass < 2; ++pass) {
        if (n > 0) {
            auto qn = q.leftCols(n);
            w -= qn * (qn.adjoint() * w);
        }
    }
    for (Eigen::Index c = 0; c < w.cols(); ++c) {
        for (int attempt = 0; attempt < 4; ++attempt) {
            for (int pass = 0; pass < 2; ++pass) {
                if (n > 0) {
                    auto qn = q.leftCols(n);
                    w.col(c) -= qn * (qn.adjoint() * w.col(c));
                }
                for (Eigen::Index p = 0; p < c; ++p) w.col(c) -= w.col(p) * w.col(p).dot(w.col(c));
            }
            const double nrm = w.col(c).norm();
            if (nrm > 1e-10) {
                w.col(c) /= nrm;
                break;
            }
            // exhausted direction: restart with a random vector
            for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, c) = Complex(g(rng), g(rng));
        }
    }
}

} // namespace

std::vector<int> degeneracy_groups(const std::vector<double>& e)
{
    std::vector<int> groups;
    std::size_t i = 0;
    while (i < e.size()) {
        std::size_t j = i + 1;
        while (j < e.size() && std::abs(e[j] - e[i]) <= 1e-9 * std::max(1.0, std::abs(e[i]))) ++j;
        groups.push_back(static_cast<int>(j - i));
        i = j;
    }
    return groups;
}

LanczosResult lanczos_lowest(const SparseMatrix& h, int k, std::uint64_t seed, double tol)
{
    const Eigen::Index n = h.rows();
    require(k >= 1 && k <= n, "lanczos: requested level count out of range");
    const Eigen::Index block = std::min<Eigen::Index>(std::max(k, 4), n);
    const Eigen::Index max_basis = n;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;

    DenseMatrix q(n, std::min<Eigen::Index>(max_basis, 64));
    DenseMatrix hq(n, q.cols());
    Eigen::Index m = 0;

    DenseMatrix w(n, block);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index c = 0; c < block; ++c) w(i, c) = Complex(g(rng), g(rng));

    LanczosResult res;
    Eigen::Index next_check = std::max<Eigen::Index>(2 * k + 20, 40);
    while (true) {
        const Eigen::Index add = std::min(block, max_basis - m);
        w.conservativeResize(Eigen::NoChange, add);
        orthonormalise(w, q, m, rng);
        if (m + add > q.cols()) {
            const Eigen::Index cap = std::min<Eigen::Index>(max_basis, std::max(2 * q.cols(), m + add));
            q.conservativeResize(Eigen::NoChange, cap);
            hq.conservativeResize(Eigen::NoChange, cap);
        }
        q.middleCols(m, add) = w;
        hq.middleCols(m, add) = h * w;
        m += add;
        w = hq.middleCols(m - add, add);

        if (m < next_check && m < max_basis) continue;
        next_check = m + std::max<Eigen::Index>(block * 5, 20);

        // Rayleigh-Ritz on the full stored basis
        DenseMatrix t = q.leftCols(m).adjoint() * hq.leftCols(m);
        t = 0.5 * (t + t.adjoint()).eval();
        Eigen::SelfAdjointEigenSolver<DenseMatrix> es(t);
        const int kk = static_cast<int>(std::min<Eigen::Index>(k, m));
        DenseMatrix y = q.leftCols(m) * es.eigenvectors().leftCols(kk);
        DenseMatrix hy = hq.leftCols(m) * es.eigenvectors().leftCols(kk);
        bool ok = kk == k;
        std::vector<double> r(kk);
        for (int i = 0; i < kk; ++i) {
            r[i] = (hy.col(i) - es.eigenvalues()(i) * y.col(i)).norm();
            if (r[i] > tol) ok = false;
        }
        if (ok || m >= max_basis) {
            if (!ok) throw SolverError("lanczos: residual above tolerance after exhausting the space");
            res.values.assign(es.eigenvalues().data(), es.eigenvalues().data() + kk);
            res.vectors = y;
            res.residuals = r;
            return res;
        }
    }
}

SpectrumReport spectrum(const OperatorMatrix& h, const SpectrumOptions& opt)
{
    require_hermitian(h);
    SpectrumReport rep;
    rep.sector = h.sector;
    const Eigen::Index n = h.dimension();
    if (n == 0) return rep;
    const bool iterative = opt.force_iterative || n > dense_limit;
    if (!iterative) {
        DenseMatrix d = h.dense();
        Eigen::SelfAdjointEigenSolver<DenseMatrix> es(d, Eigen::EigenvaluesOnly);
        rep.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
        if (opt.lowest && *opt.lowest < n) rep.eigenvalues.resize(static_cast<std::size_t>(*opt.lowest));
    } else {
        require(opt.lowest.has_value(), "spectrum: dimension above the dense limit needs a lowest-k count");
        auto lr = lanczos_lowest(h.matrix, *opt.lowest, opt.seed, opt.residual_tol);
        rep.eigenvalues = lr.values;
    }
    std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end());
    rep.degeneracies = degeneracy_groups(rep.eigenvalues);
    return rep;
}

MatchReport compare_spectra(const SpectrumReport& a, const SpectrumReport& b, double tol)
{
    require(a.eigenvalues.size() == b.eigenvalues.size(), "compare_spectra: dimension mismatch (" +
                                                              std::to_string(a.eigenvalues.size()) + " vs " +
                                                              std::to_string(b.eigenvalues.size()) + ")");
    std::vector<double> x = a.eigenvalues, y = b.eigenvalues;
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    MatchReport r;
    for (std::size_t i = 0; i < x.size(); ++i) r.max_deviation = std::max(r.max_deviation, std::abs(x[i] - y[i]));
    r.match = r.max_deviation <= tol;
    return r;
}

double commutator_norm(const OperatorMatrix& a, const OperatorMatrix& b)
{
    require(a.dimension() == b.dimension(), "commutator_norm: dimension mismatch");
    SparseMatrix c = a.matrix * b.matrix - b.matrix * a.matrix;
    return max_abs(c);
}

SpectrumReport transformed_spectrum_union(const models::ModelParams& p)
{
    SpectrumReport rep;
    rep.model = models::to_string(models::ModelKind::charge_pair_transformed);
    rep.params = p;
    for (int nu = 0; nu <= p.L; ++nu) {
        for (int nd = 0; nd <= p.L; ++nd) {
            auto block = models::build_transformed_sector(p, {nu, nd});
            auto s = spectrum(block);
            rep.eigenvalues.insert(rep.eigenvalues.end(), s.eigenvalues.begin(), s.eigenvalues.end());
        }
    }
    std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end());
    rep.degeneracies = degeneracy_groups(rep.eigenvalues);
    return rep;
}

double sector_ground_energy(const models::ModelParams& p, fock::Sector sector)
{
    auto block = models::build_transformed_sector(p, sector);
    SpectrumOptions opt;
    opt.lowest = 1;
    return spectrum(block, opt).eigenvalues.front();
}

std::string to_string(ReferenceState r)
{
    switch (r) {
    case ReferenceState::table1_plus: return "table1_plus";
    case ReferenceState::table1_minus: return "table1_minus";
    case ReferenceState::table1_ferro: return "table1_ferro";
    case ReferenceState::table10_plus: return "table10_plus";
    case ReferenceState::table10_minus: return "table10_minus";
    }
    return "unknown";
}

std::optional<ReferenceState> parse_reference_state(const std::string& s)
{
    for (auto r : {ReferenceState::table1_plus, ReferenceState::table1_minus, ReferenceState::table1_ferro,
                   ReferenceState::table10_plus, ReferenceState::table10_minus}) {
        if (to_string(r) == s) return r;
    }
    return std::nullopt;
}

double reference_energy(ReferenceState which, int L, double U)
{
    const double e = L * U / 4.0;
    switch (which) {
    case ReferenceState::table1_plus:
    case ReferenceState::table1_minus:
    case ReferenceState::table10_plus:
        return e;
    default:
        return -e;
    }
}

ComplexVector reference_state(ReferenceState which, int L, int branch_sign)
{
    require(branch_sign == 1 || branch_sign == -1, "branch sign must be +1 or -1");
    using fock::cdag;
    using fock::Spin;
    const Complex I1(0.0, 1.0);
    const double s = branch_sign;
    if (which == ReferenceState::table10_plus || which == ReferenceState::table10_minus) {
        require(L % 2 == 1, to_string(which) + " requires L odd, got L=" + std::to_string(L));
        require(L <= fock::max_sites, "site count too large");
        // product over sites of (e_a + s p_j e_b) in the spin basis
        const int a = which == ReferenceState::table10_plus ? 0 : 1;
        const int b = which == ReferenceState::table10_plus ? 3 : 2;
        const Eigen::Index dim = Eigen::Index(1) << (2 * L);
        ComplexVector v = ComplexVector::Zero(dim);
        for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << L); ++mask) {
            std::uint64_t w = 0;
            Complex amp = 1.0;
            for (int j = 1; j <= L; ++j) {
                const bool pick_b = (mask >> (j - 1)) & 1u;
                w = models::set_local_spin(w, L, j, pick_b ? b : a);
                if (pick_b) amp *= s * std::exp(I1 * std::numbers::pi * (2.0 * j - 1.0) / 2.0);
            }
            v(static_cast<Eigen::Index>(w)) += amp;
        }
        return v;
    }
    fock::StateVector v = fock::vacuum(L);
    for (int j = L; j >= 1; --j) {
        std::vector<fock::Term> factor;
        if (which == ReferenceState::table1_ferro) {
            factor = {{1.0, {cdag(Spin::up, j)}}, {s * I1, {cdag(Spin::down, j)}}};
        } else {
            const double sg = which == ReferenceState::table1_plus ? 1.0 : -1.0;
            (void)s;
            factor = {{1.0, {}}, {sg, {cdag(Spin::up, j), cdag(Spin::down, j)}}};
        }
        v = fock::apply_terms(factor, v);
    }
    return v.amplitudes;
}

double reference_state_residual(ReferenceState which, int L, double U, int branch_sign)
{
    const ComplexVector v = reference_state(which, L, branch_sign);
    const bool spin = which == ReferenceState::table10_plus || which == ReferenceState::table10_minus;
    const models::ModelParams p{L, U};
    const OperatorMatrix h =
        models::build_model(spin ? models::ModelKind::spin_xx_odd : models::ModelKind::charge_pair, p);
    const double e = reference_energy(which, L, U);
    return (h.matrix * v - e * v).norm() / v.norm();
}

OperatorMatrix translation_operator(int L)
{
    using fock::cdag;
    using fock::Spin;
    fock::Basis basis(L);
    std::vector<Eigen::Triplet<Complex>> trip;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const auto st = basis.state(i);
        // re-create the state with every particle moved one site forward
        fock::Term t;
        for (int j = 1; j <= L; ++j)
            if (st.occupied(Spin::up, j)) t.factors.push_back(cdag(Spin::up, j % L + 1));
        for (int j = 1; j <= L; ++j)
            if (st.occupied(Spin::down, j)) t.factors.push_back(cdag(Spin::down, j % L + 1));
        auto out = fock::apply_terms({t}, fock::vacuum(L));
        for (Eigen::Index r = 0; r < out.amplitudes.size(); ++r)
            if (out.amplitudes(r) != Complex(0.0, 0.0))
                trip.emplace_back(static_cast<int>(r), static_cast<int>(i), out.amplitudes(r));
    }
    OperatorMatrix tr;
    tr.L = L;
    tr.matrix.resize(static_cast<Eigen::Index>(basis.size()), static_cast<Eigen::Index>(basis.size()));
    tr.matrix.setFromTriplets(trip.begin(), trip.end());
    return tr;
}

double momentum_phase(const ComplexVector& v, const OperatorMatrix& translation)
{
    return std::arg(v.dot(translation.matrix * v));
}

} // namespace cpchain::spectra
