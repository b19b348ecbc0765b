#include "cpchain/ybx.hpp"

#include <bit>
#include <cmath>

#include "cpchain/errors.hpp"
#include "cpchain/models.hpp"

namespace cpchain::ybx {

namespace {

using Eigen::Index;

Eigen::Matrix2d pz() { return (Eigen::Matrix2d() << 1, 0, 0, -1).finished(); }
Eigen::Matrix2d pplus() { return (Eigen::Matrix2d() << 0, 1, 0, 0).finished(); }
Eigen::Matrix2d pminus() { return (Eigen::Matrix2d() << 0, 0, 1, 0).finished(); }

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b)
{
    Eigen::MatrixXd r(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j) r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return r;
}

// qubits ordered (sigma_0, tau_0, sigma_j, tau_j)
Eigen::MatrixXd qubits(const Eigen::Matrix2d& s0, const Eigen::Matrix2d& t0, const Eigen::Matrix2d& sj,
                       const Eigen::Matrix2d& tj)
{
    return kron(kron(kron(s0, t0), sj), tj);
}

Eigen::MatrixXd zz_aux()
{
    const Eigen::Matrix2d I = Eigen::Matrix2d::Identity();
    return qubits(pz(), pz(), I, I);
}

Eigen::MatrixXd zz_site()
{
    const Eigen::Matrix2d I = Eigen::Matrix2d::Identity();
    return qubits(I, I, pz(), pz());
}

Eigen::VectorXd diag_exp(const Eigen::MatrixXd& diag_matrix, double scale, double shift)
{
    Eigen::VectorXd v(diag_matrix.rows());
    for (Index i = 0; i < v.size(); ++i) v(i) = std::exp(scale * (diag_matrix(i, i) + shift));
    return v;
}

double max_abs_dense(const DenseMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

DenseMatrix check_curve(const CurvePoint& p, const DenseMatrix& m)
{
    require(std::abs(p.residual()) <= 1e-10, "point is not on the quartic curve");
    return m;
}

} // namespace

VertexWeights weights(double lambda) { return {1.0, 0.0, std::cos(lambda), std::sin(lambda)}; }

double CurvePoint::residual() const
{
    const double r2 = x * x + y * y;
    return r2 * r2 - U * x * y - 1.0;
}

double coupling_h(double lambda, double U) { return 0.5 * std::asinh(0.25 * U * std::sin(2 * lambda)); }

CurvePoint curve_point(double lambda, double U)
{
    const double e = std::exp(coupling_h(lambda, U));
    return {std::cos(lambda) * e, std::sin(lambda) * e, U};
}

DenseMatrix block_lax(double lambda, Species s)
{
    const Eigen::Matrix2d I = Eigen::Matrix2d::Identity();
    auto op = [&](const Eigen::Matrix2d& a, const Eigen::Matrix2d& b) {
        return s == Species::sigma ? qubits(a, I, b, I) : qubits(I, a, I, b);
    };
    Eigen::MatrixXd m = 0.5 * (Eigen::MatrixXd::Identity(16, 16) + op(pz(), pz())) +
                        std::cos(lambda) * (op(pplus(), pminus()) + op(pminus(), pplus())) +
                        std::sin(lambda) * (op(pplus(), pplus()) + op(pminus(), pminus()));
    return m.cast<Complex>();
}

DenseMatrix coupled_lax(double lambda, double U)
{
    const Eigen::VectorXd e = diag_exp(zz_aux(), 0.5 * coupling_h(lambda, U), 1.0);
    const DenseMatrix core = block_lax(lambda, Species::sigma) * block_lax(lambda, Species::tau);
    return e.cast<Complex>().asDiagonal() * core * e.cast<Complex>().asDiagonal();
}

DenseMatrix shastry_r(double l1, double l2, double U)
{
    const double dh = coupling_h(l1, U) - coupling_h(l2, U);
    const DenseMatrix a = block_lax(l1 - l2, Species::sigma) * block_lax(l1 - l2, Species::tau);
    const DenseMatrix b = block_lax(l1 + l2, Species::sigma) * block_lax(l1 + l2, Species::tau) *
                          zz_aux().cast<Complex>();
    return std::cos(l1 + l2) * std::cosh(dh) * a + std::cos(l1 - l2) * std::sinh(dh) * b;
}

DenseMatrix shastry_r_gauged(double l1, double l2, double U)
{
    const double h1 = coupling_h(l1, U), h2 = coupling_h(l2, U);
    const Eigen::MatrixXd z1 = zz_aux(), z2 = zz_site();
    Eigen::VectorXd g(16);
    for (Index i = 0; i < 16; ++i) g(i) = std::exp(0.5 * (h1 * z1(i, i) + h2 * z2(i, i)));
    const Eigen::VectorXcd gc = g.cast<Complex>();
    const Eigen::VectorXcd gi = g.cwiseInverse().cast<Complex>();
    return gc.asDiagonal() * shastry_r(l1, l2, U) * gi.asDiagonal();
}

DenseMatrix embed_pair(const DenseMatrix& op, int a, int b)
{
    require(op.rows() == 16 && op.cols() == 16, "embed_pair expects a 16x16 operator");
    require(a != b && a >= 0 && a < 3 && b >= 0 && b < 3, "factor indices must be distinct in [0,3)");
    const int c = 3 - a - b;
    DenseMatrix r = DenseMatrix::Zero(64, 64);
    for (int row = 0; row < 64; ++row) {
        const int x[3] = {row / 16, (row / 4) % 4, row % 4};
        for (int col = 0; col < 64; ++col) {
            const int y[3] = {col / 16, (col / 4) % 4, col % 4};
            if (x[c] != y[c]) continue;
            r(row, col) = op(4 * x[a] + x[b], 4 * y[a] + y[b]);
        }
    }
    return r;
}

double ybe_residual_spin(double l1, double l2, double U, bool printed_r)
{
    const DenseMatrix r = embed_pair(printed_r ? shastry_r(l1, l2, U) : shastry_r_gauged(l1, l2, U), 0, 1);
    const DenseMatrix a = embed_pair(coupled_lax(l1, U), 0, 2);
    const DenseMatrix b = embed_pair(coupled_lax(l2, U), 1, 2);
    return max_abs_dense(r * a * b - b * a * r);
}

DenseMatrix transfer_matrix(double lambda, double U, int L)
{
    require(L >= 1 && L <= 4, "transfer_matrix supports 1 <= L <= 4");
    const DenseMatrix lax = coupled_lax(lambda, U);
    // m[(a, out), (b, in)] after absorbing sites 1..j; site 1 is the most significant digit
    Index dim = 1;
    std::vector<DenseMatrix> blocks(16, DenseMatrix::Zero(1, 1));   // blocks[4 a + b] is out x in
    for (int a = 0; a < 4; ++a) blocks[4 * a + a](0, 0) = 1.0;
    for (int j = 0; j < L; ++j) {
        std::vector<DenseMatrix> next(16, DenseMatrix::Zero(dim * 4, dim * 4));
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
                const DenseMatrix& m = blocks[4 * a + b];
                for (int c = 0; c < 4; ++c) {
                    DenseMatrix& dst = next[4 * a + c];
                    for (int so = 0; so < 4; ++so)
                        for (int si = 0; si < 4; ++si) {
                            const Complex w = lax(4 * b + so, 4 * c + si);
                            if (w == Complex(0.0, 0.0)) continue;
                            for (Index o = 0; o < dim; ++o)
                                for (Index i = 0; i < dim; ++i) dst(o * 4 + so, i * 4 + si) += m(o, i) * w;
                        }
                }
            }
        blocks = std::move(next);
        dim *= 4;
    }
    DenseMatrix t = DenseMatrix::Zero(dim, dim);
    for (int a = 0; a < 4; ++a) t += blocks[4 * a + a];
    // site-major digits to the assemble_pauli word layout
    std::vector<Index> word(dim);
    for (Index s = 0; s < dim; ++s) {
        std::uint64_t w = 0;
        Index rest = s;
        for (int site = L; site >= 1; --site) {
            w = models::set_local_spin(w, L, site, static_cast<int>(rest % 4));
            rest /= 4;
        }
        word[s] = static_cast<Index>(w);
    }
    DenseMatrix out(dim, dim);
    for (Index r = 0; r < dim; ++r)
        for (Index c = 0; c < dim; ++c) out(word[r], word[c]) = t(r, c);
    return out;
}

double transfer_commutator(double l1, double l2, double U, int L)
{
    const DenseMatrix a = transfer_matrix(l1, U, L);
    const DenseMatrix b = transfer_matrix(l2, U, L);
    return max_abs_dense(a * b - b * a);
}

DenseMatrix transfer_log_derivative(double U, int L, double step)
{
    auto central = [&](double h) {
        return DenseMatrix((transfer_matrix(h, U, L) - transfer_matrix(-h, U, L)) / (2 * h));
    };
    const DenseMatrix d1 = central(step);
    const DenseMatrix d2 = central(0.5 * step);
    const DenseMatrix deriv = (4.0 * d2 - d1) / 3.0;
    return transfer_matrix(0.0, U, L).partialPivLu().solve(deriv);
}

HamiltonianMatch transfer_hamiltonian_match(double U, int L)
{
    const DenseMatrix d = transfer_log_derivative(U, L);
    const DenseMatrix hs = models::assemble_pauli(L, models::spin_coupled_terms(L, U)).dense();
    HamiltonianMatch m;
    const DenseMatrix diff = d - hs;
    m.offset = (diff.trace() / double(diff.rows())).real();
    m.deviation = max_abs_dense(diff - m.offset * DenseMatrix::Identity(diff.rows(), diff.cols()));
    return m;
}

GradedMatrix graded_permutation()
{
    GradedMatrix g{DenseMatrix::Zero(16, 16)};
    for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) g.entries(4 * j + k, 4 * k + j) = (parities[j] && parities[k]) ? -1.0 : 1.0;
    return g;
}

namespace {

DenseMatrix lax_entries(double x, double y)
{
    const double w1 = x * x + y * y;
    require(w1 > 0.0, "graded Lax needs x^2 + y^2 > 0");
    const double w2 = x * y / w1, w3 = -y * y / w1, w4 = -x * x / w1;
    DenseMatrix m = DenseMatrix::Zero(16, 16);
    auto set = [&m](int r, int c, double v) { m(r, c) = v; };
    set(0, 0, w1), set(0, 5, -y), set(0, 10, -y), set(0, 15, -y * y);
    set(1, 4, x), set(1, 14, -x * y);
    set(2, 8, x), set(2, 13, x * y);
    set(3, 12, x * x);
    set(4, 1, x), set(4, 11, w2);
    set(5, 0, y), set(5, 5, -1), set(5, 10, w3), set(5, 15, -y);
    set(6, 9, w4);
    set(7, 8, w2), set(7, 13, x);
    set(8, 2, x), set(8, 7, -w2);
    set(9, 6, w4);
    set(10, 0, y), set(10, 5, w3), set(10, 10, -1), set(10, 15, -y);
    set(11, 4, -w2), set(11, 14, x);
    set(12, 3, x * x);
    set(13, 2, -x * y), set(13, 7, x);
    set(14, 1, x * y), set(14, 11, x);
    set(15, 0, -y * y), set(15, 5, y), set(15, 10, y), set(15, 15, w1);
    return m;
}

} // namespace

GradedMatrix graded_lax(const CurvePoint& p) { return {check_curve(p, lax_entries(p.x, p.y))}; }

GradedMatrix graded_lax_twist(double lambda, double U)
{
    const double mt[16] = {1, 1, -1, -1, 1, 1, -1, -1, 1, -1, 1, -1, 1, -1, 1, -1};
    const double mb[16] = {1, 1, 1, 1, 1, -1, 1, -1, -1, 1, -1, 1, -1, -1, -1, -1};
    Eigen::VectorXcd a(16), b(16);
    for (int i = 0; i < 16; ++i) a(i) = mt[i], b(i) = mb[i];
    return {a.asDiagonal() * coupled_lax(lambda, U) * b.asDiagonal()};
}

GradedREntries graded_r_entries(const CurvePoint& p1, const CurvePoint& p2)
{
    const double x1 = p1.x, y1 = p1.y, x2 = p2.x, y2 = p2.y;
    const double n1 = x1 * x1 + y1 * y1, n2 = x2 * x2 + y2 * y2;
    const double den = x1 * x1 * x2 * x2 - y1 * y1 * y2 * y2;
    require(n1 != 0.0 && n2 != 0.0 && den != 0.0, "graded R entries are singular at these points");
    GradedREntries e;
    e.a = y1 * y2 / n1 + x1 * x2 / n2;
    e.b = -x1 * y2 / n1 + y1 * x2 / n2;
    e.b_bar = y1 * x2 / n1 - x1 * y2 / n2;
    e.d = (x1 * y1 - x2 * y2) / den;
    e.g = -x1 * x2 / n1 - y1 * y2 / n2;
    e.h = (x1 * x2 * n1 - y1 * y2 * n2) / den;
    e.q = (y1 * y2 * n1 - x1 * x2 * n2) / den;
    return e;
}

GradedMatrix graded_r(const CurvePoint& p1, const CurvePoint& p2)
{
    require(std::abs(p1.residual()) <= 1e-10 && std::abs(p2.residual()) <= 1e-10 && p1.U == p2.U,
            "graded_r needs two points on the same curve");
    const GradedREntries e = graded_r_entries(p1, p2);
    DenseMatrix m = DenseMatrix::Zero(16, 16);
    auto set = [&m](int r, int c, double v) { m(r, c) = v; };
    set(0, 0, e.h), set(0, 5, -e.d), set(0, 10, -e.d), set(0, 15, e.a - e.h);
    set(1, 4, 1), set(1, 14, -e.b);
    set(2, 8, 1), set(2, 13, e.b);
    set(3, 12, e.a);
    set(4, 1, 1), set(4, 11, e.b_bar);
    set(5, 0, e.d), set(5, 5, e.q), set(5, 10, e.q - e.g), set(5, 15, -e.d);
    set(6, 9, e.g);
    set(7, 8, e.b_bar), set(7, 13, 1);
    set(8, 2, 1), set(8, 7, -e.b_bar);
    set(9, 6, e.g);
    set(10, 0, e.d), set(10, 5, e.q - e.g), set(10, 10, e.q), set(10, 15, -e.d);
    set(11, 4, -e.b_bar), set(11, 14, 1);
    set(12, 3, e.a);
    set(13, 2, -e.b), set(13, 7, 1);
    set(14, 1, e.b), set(14, 11, 1);
    set(15, 0, e.a - e.h), set(15, 5, e.d), set(15, 10, e.d), set(15, 15, e.h);
    return {m};
}

DenseMatrix graded_embed(const DenseMatrix& op, int a, int b, GradedSign sign)
{
    require(op.rows() == 16 && op.cols() == 16, "graded_embed expects a 16x16 operator");
    require(a != b && a >= 0 && a < 3 && b >= 0 && b < 3, "factor indices must be distinct in [0,3)");
    const int c = 3 - a - b;
    const auto& p = parities;
    DenseMatrix r = DenseMatrix::Zero(64, 64);
    for (int io = 0; io < 4; ++io)
        for (int ko = 0; ko < 4; ++ko)
            for (int ii = 0; ii < 4; ++ii)
                for (int ki = 0; ki < 4; ++ki) {
                    Complex v = op(4 * io + ko, 4 * ii + ki);
                    if (v == Complex(0.0, 0.0)) continue;
                    if (sign == GradedSign::B && ((p[ko] + p[ki]) * p[ii]) % 2) v = -v;
                    for (int rest = 0; rest < 4; ++rest) {
                        int in[3], out[3];
                        in[a] = ii, in[b] = ki, in[c] = rest;
                        out[a] = io, out[b] = ko, out[c] = rest;
                        int par[3];
                        for (int t = 0; t < 3; ++t) par[t] = (p[out[t]] + p[in[t]]) % 2;
                        // operator parts on factors 1, 2 pass the input states of the factors before them
                        const int s = (par[1] * p[in[0]] + par[2] * (p[in[0]] + p[in[1]])) % 2;
                        r(16 * out[0] + 4 * out[1] + out[2], 16 * in[0] + 4 * in[1] + in[2]) += s ? -v : v;
                    }
                }
    return r;
}

double ybe_residual_graded(const CurvePoint& p1, const CurvePoint& p2)
{
    const DenseMatrix pg = graded_permutation().entries;
    const DenseMatrix r = pg * graded_r(p1, p2).entries;
    const DenseMatrix l1 = pg * graded_lax(p1).entries;
    const DenseMatrix l2 = pg * graded_lax(p2).entries;
    const DenseMatrix lhs = embed_pair(r, 1, 2) * embed_pair(l1, 0, 1) * embed_pair(l2, 1, 2);
    const DenseMatrix rhs = embed_pair(l2, 0, 1) * embed_pair(l1, 1, 2) * embed_pair(r, 0, 1);
    return max_abs_dense(lhs - rhs);
}

double ybe_residual_graded_tensor(const CurvePoint& p1, const CurvePoint& p2, GradedSign sign)
{
    const DenseMatrix r = graded_embed(graded_r(p1, p2).entries, 0, 1, sign);
    const DenseMatrix a = graded_embed(graded_lax(p1).entries, 0, 2, sign);
    const DenseMatrix b = graded_embed(graded_lax(p2).entries, 1, 2, sign);
    return max_abs_dense(r * a * b - b * a * r);
}

DenseMatrix density_expansion(double U, double step)
{
    const DenseMatrix pg = graded_permutation().entries;
    auto path = [U](double e) { return lax_entries(1.0 + 0.25 * U * e, e); };
    auto central = [&](double h) { return DenseMatrix((path(h) - path(-h)) / (2 * h)); };
    const DenseMatrix d = (4.0 * central(0.5 * step) - central(step)) / 3.0;
    return pg * d;
}

namespace {

// annihilator of mode m in (1 up, 1 down, 2 up, 2 down) on the two-site basis 4 a + b
DenseMatrix two_site_annihilator(int mode)
{
    DenseMatrix m = DenseMatrix::Zero(16, 16);
    for (int col = 0; col < 16; ++col) {
        const int a = col / 4, b = col % 4;
        int occ[4] = {a & 1, (a >> 1) & 1, b & 1, (b >> 1) & 1};
        if (!occ[mode]) continue;
        int before = 0;
        for (int i = 0; i < mode; ++i) before += occ[i];
        occ[mode] = 0;
        const int row = 4 * (occ[0] + 2 * occ[1]) + (occ[2] + 2 * occ[3]);
        m(row, col) = (before % 2) ? -1.0 : 1.0;
    }
    return m;
}

} // namespace

DenseMatrix printed_density(double U)
{
    const DenseMatrix c1u = two_site_annihilator(0), c1d = two_site_annihilator(1);
    const DenseMatrix c2u = two_site_annihilator(2), c2d = two_site_annihilator(3);
    const DenseMatrix I = DenseMatrix::Identity(16, 16);
    auto n = [](const DenseMatrix& c) { return DenseMatrix(c.adjoint() * c); };
    DenseMatrix h = c1u * c2u + c2u.adjoint() * c1u.adjoint() + c1d * c2d + c2d.adjoint() * c1d.adjoint();
    h += 0.5 * U * (n(c1u) - 0.5 * I) * (n(c1d) - 0.5 * I);
    h += 0.5 * U * (n(c2u) - 0.5 * I) * (n(c2d) - 0.5 * I);
    h += 0.25 * U * I;
    return h;
}

std::vector<fock::Term> two_site_terms(const DenseMatrix& m, int j, int k)
{
    require(m.rows() == 16 && m.cols() == 16, "two_site_terms expects a 16x16 matrix");
    require(j != k, "two_site_terms needs two distinct sites");
    using fock::Spin;
    const fock::ModeFactor modes[4] = {fock::cdag(Spin::up, j), fock::cdag(Spin::down, j), fock::cdag(Spin::up, k),
                                       fock::cdag(Spin::down, k)};
    auto mono = [&](int index) {
        const int bits[4] = {index / 4 & 1, (index / 4 >> 1) & 1, index % 4 & 1, (index % 4 >> 1) & 1};
        std::vector<fock::ModeFactor> f;
        for (int i = 0; i < 4; ++i)
            if (bits[i]) f.push_back(modes[i]);
        return f;
    };
    // two-site vacuum projector as a sum over subsets of number operators
    std::vector<fock::Term> pvac;
    for (int s = 0; s < 16; ++s) {
        fock::Term t;
        t.coefficient = (std::popcount(unsigned(s)) % 2) ? -1.0 : 1.0;
        for (int i = 0; i < 4; ++i) {
            if (!(s >> i & 1)) continue;
            t.factors.push_back(modes[i]);
            t.factors.push_back({fock::ModeKind::annihilate, modes[i].spin, modes[i].site});
        }
        pvac.push_back(std::move(t));
    }
    std::vector<fock::Term> out;
    for (int r = 0; r < 16; ++r)
        for (int c = 0; c < 16; ++c) {
            if (m(r, c) == Complex(0.0, 0.0)) continue;
            const auto left = mono(r);
            const fock::Term right = fock::adjoint(fock::Term{1.0, mono(c)});
            for (const auto& pv : pvac) {
                fock::Term t;
                t.coefficient = m(r, c) * pv.coefficient;
                t.factors = left;
                t.factors.insert(t.factors.end(), pv.factors.begin(), pv.factors.end());
                t.factors.insert(t.factors.end(), right.factors.begin(), right.factors.end());
                out.push_back(std::move(t));
            }
        }
    return out;
}

double density_ring_deviation(double U, int L)
{
    require(L >= 3, "ring sum needs L >= 3");
    DenseMatrix h = density_expansion(U);
    // drop finite-difference dust so the term list stays short
    for (Index i = 0; i < h.size(); ++i)
        if (std::abs(h(i)) < 1e-13) h(i) = 0.0;
    std::vector<fock::Term> terms;
    for (int j = 1; j <= L; ++j) {
        auto t = two_site_terms(h, j, j % L + 1);
        terms.insert(terms.end(), t.begin(), t.end());
    }
    const DenseMatrix ring = fock::assemble_operator(L, terms).dense();
    models::ModelParams p;
    p.L = L;
    p.U = U;
    const DenseMatrix hc = models::build_model(models::ModelKind::charge_pair, p).dense();
    const DenseMatrix diff = ring - 0.25 * L * U * DenseMatrix::Identity(ring.rows(), ring.cols()) - hc;
    return max_abs_dense(diff);
}

} // namespace cpchain::ybx
