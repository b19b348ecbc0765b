#include "cpchain/bethe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "cpchain/errors.hpp"

namespace cpchain::bethe {

namespace {

constexpr double pi = std::numbers::pi;

double to_double(const Rational& r) { return double(r.numerator()) / double(r.denominator()); }

// Neumaier summation
struct Accumulator {
    double sum = 0.0;
    double comp = 0.0;
    void add(double x)
    {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) comp += (sum - t) + x;
        else comp += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

bool finite(const Eigen::VectorXd& v) { return v.allFinite(); }

} // namespace

std::string to_string(Parity p) { return p == Parity::even ? "even" : "odd"; }

std::string to_string(StateClass s)
{
    switch (s) {
    case StateClass::ground: return "ground";
    case StateClass::charge_excitation: return "charge_excitation";
    case StateClass::spin_excitation: return "spin_excitation";
    case StateClass::first_excitation: return "first_excitation";
    }
    return "unknown";
}

BetheConfig quantum_numbers(StateClass state, int L, double U)
{
    require(L >= 2, "Bethe states need L >= 2");
    BetheConfig c;
    c.L = L;
    c.U = U;
    const Rational Lr(L);
    if (L % 2 == 0) {
        require(L % 4 == 2, "even-parity states need L = 2 (mod 4), got L=" + std::to_string(L));
        require(state != StateClass::first_excitation, "first_excitation is defined only for odd L");
        c.parity = Parity::even;
        Rational q1_top, q2_low;
        switch (state) {
        case StateClass::ground:
            c.sector = {L / 2, L / 2};
            q1_top = Lr / 2;
            q2_low = -(Lr - 2) / 4;
            break;
        case StateClass::charge_excitation:
            c.sector = {L / 2, L / 2 - 1};
            q1_top = (Lr - 1) / 2;
            q2_low = -(Lr - 2) / 4;
            break;
        default:
            c.sector = {L / 2 + 1, L / 2 - 1};
            q1_top = (Lr - 1) / 2;
            q2_low = -(Lr - 4) / 4;
            break;
        }
        for (int j = 1; j <= c.particles(); ++j) c.q1.push_back(q1_top - j + 1);
        for (int j = 1; j <= c.rapidities(); ++j) c.q2.push_back(q2_low + j - 1);
        return c;
    }
    require(state != StateClass::spin_excitation, "spin_excitation is defined only for even L");
    c.parity = Parity::odd;
    switch (state) {
    case StateClass::ground:
        c.sector = {(L + 1) / 2, (L - 1) / 2};
        for (int j = 1; j <= c.particles(); ++j) c.q1.push_back(Lr / 2 - j + 1);
        for (int j = 1; j <= c.rapidities(); ++j) c.q2.push_back(-(Lr - 1) / 4 + j - 1);
        break;
    case StateClass::first_excitation:
        c.sector = {(L + 1) / 2, (L - 1) / 2};
        for (int j = 1; j <= c.particles(); ++j) c.q1.push_back(-Lr / 2 + j - 1);
        for (int j = 1; j <= c.rapidities(); ++j) c.q2.push_back((Lr - 1) / 4 - j + 1);
        break;
    default:
        c.sector = {(L - 1) / 2, (L - 1) / 2};
        for (int j = 1; j <= c.particles(); ++j) c.q1.push_back((Lr - 2) / 2 - j + 1);
        for (int j = 1; j <= c.rapidities(); ++j) c.q2.push_back(-(Lr - 3) / 4 + j - 1);
        break;
    }
    return c;
}

Rational effective_q1(const BetheConfig& c, std::size_t j)
{
    return c.parity == Parity::odd ? c.q1[j] - Rational(1, 4) : c.q1[j];
}

Rational effective_q2(const BetheConfig& c, std::size_t j)
{
    return c.parity == Parity::odd ? c.q2[j] + Rational(1, 2) : c.q2[j];
}

namespace {

void check_config(const BetheConfig& c)
{
    require(c.U > 0.0, "Bethe solver needs U > 0");
    require(static_cast<int>(c.q1.size()) == c.particles(), "q1 length must equal N_up + N_down");
    require(static_cast<int>(c.q2.size()) == c.rapidities(), "q2 length must equal N_down");
    require(c.sector.n_up >= c.sector.n_down && c.particles() <= c.L,
            "sector must satisfy N_up >= N_down and N_up + N_down <= L");
    require((c.L % 2 == 0) == (c.parity == Parity::even), "parity flag does not match L");
}

struct Workspace {
    std::vector<double> phase1, phase2;   // 2 pi q_eff
};

Workspace prepare(const BetheConfig& c)
{
    Workspace w;
    for (std::size_t j = 0; j < c.q1.size(); ++j) w.phase1.push_back(2 * pi * to_double(effective_q1(c, j)));
    for (std::size_t j = 0; j < c.q2.size(); ++j) w.phase2.push_back(2 * pi * to_double(effective_q2(c, j)));
    return w;
}

Eigen::VectorXd residual_impl(const std::vector<double>& k, const std::vector<double>& mu, const BetheConfig& c,
                              const Workspace& ws)
{
    const int n = static_cast<int>(k.size());
    const int m = static_cast<int>(mu.size());
    const double a = c.U / 4, b = c.U / 2;
    std::vector<double> s(n);
    for (int j = 0; j < n; ++j) s[j] = std::sin(k[j]);
    Eigen::VectorXd r(n + m);
    for (int j = 0; j < n; ++j) {
        Accumulator acc;
        acc.add(c.L * k[j]);
        acc.add(-ws.phase1[j]);
        for (int l = 0; l < m; ++l) acc.add(2 * std::atan((s[j] - mu[l]) / a));
        r(j) = acc.value();
    }
    for (int i = 0; i < m; ++i) {
        Accumulator acc;
        for (int l = 0; l < n; ++l) acc.add(2 * std::atan((mu[i] - s[l]) / a));
        acc.add(-ws.phase2[i]);
        for (int l = 0; l < m; ++l)
            if (l != i) acc.add(-2 * std::atan((mu[i] - mu[l]) / b));
        r(n + i) = acc.value();
    }
    return r;
}

// Newton step from the analytic Jacobian; the k-k block is diagonal so the
// k's are eliminated and only an M x M system is factorised
bool newton_step(const std::vector<double>& k, const std::vector<double>& mu, const Eigen::VectorXd& r,
                 const BetheConfig& c, Eigen::VectorXd& dk, Eigen::VectorXd& dmu)
{
    const int n = static_cast<int>(k.size());
    const int m = static_cast<int>(mu.size());
    const double a = c.U / 4, b = c.U / 2;
    Eigen::MatrixXd w(n, m);
    Eigen::VectorXd cosk(n), d(n);
    for (int j = 0; j < n; ++j) {
        const double sj = std::sin(k[j]);
        cosk(j) = std::cos(k[j]);
        double sum = 0.0;
        for (int l = 0; l < m; ++l) {
            const double x = (sj - mu[l]) / a;
            w(j, l) = 2.0 / (a * (1.0 + x * x));
            sum += w(j, l);
        }
        d(j) = c.L + cosk(j) * sum;
    }
    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        double diag = w.col(i).sum();
        for (int l = 0; l < m; ++l) {
            if (l == i) continue;
            const double y = (mu[i] - mu[l]) / b;
            const double v = 2.0 / (b * (1.0 + y * y));
            diag -= v;
            e(i, l) = v;
        }
        e(i, i) = diag;
    }
    const Eigen::VectorXd r1 = r.head(n), r2 = r.tail(m);
    if (d.cwiseAbs().minCoeff() > 1e-6 * c.L) {
        const Eigen::VectorXd f = cosk.cwiseQuotient(d);
        Eigen::MatrixXd s = e - w.transpose() * f.asDiagonal() * w;
        Eigen::VectorXd rhs = -r2 - w.transpose() * f.cwiseProduct(r1);
        dmu = m > 0 ? Eigen::VectorXd(s.partialPivLu().solve(rhs)) : Eigen::VectorXd(0);
        dk = (-r1 + w * dmu).cwiseQuotient(d);
    } else {
        Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n + m, n + m);
        j.topLeftCorner(n, n) = d.asDiagonal();
        j.topRightCorner(n, m) = -w;
        j.bottomLeftCorner(m, n) = -(cosk.asDiagonal() * w).transpose();
        j.bottomRightCorner(m, m) = e;
        Eigen::FullPivLU<Eigen::MatrixXd> lu(j);
        if (!lu.isInvertible()) return false;
        Eigen::VectorXd x = lu.solve(-r);
        dk = x.head(n);
        dmu = x.tail(m);
    }
    return finite(dk) && finite(dmu);
}

} // namespace

Eigen::VectorXd bethe_residual(const BetheRoots& roots, const BetheConfig& config)
{
    require(static_cast<int>(roots.k.size()) == config.particles() &&
                static_cast<int>(roots.mu.size()) == config.rapidities(),
            "bethe_residual: root counts do not match the configuration");
    return residual_impl(roots.k, roots.mu, config, prepare(config));
}

double effective_tolerance(const BetheConfig& c, double tol)
{
    // L k_j is of order pi L and is summed with up to N arctangents of order pi
    const double scale = pi * (c.L + c.particles() + c.rapidities());
    return std::max(tol, 4.0 * std::numeric_limits<double>::epsilon() * scale);
}

BetheRoots initial_guess(const BetheConfig& c)
{
    check_config(c);
    const Workspace ws = prepare(c);
    const int n = c.particles(), m = c.rapidities();
    const double a = c.U / 4;
    BetheRoots r;
    r.k.resize(n);
    for (int j = 0; j < n; ++j) r.k[j] = ws.phase1[j] / c.L;
    std::vector<double> s(n);
    for (int j = 0; j < n; ++j) s[j] = std::sin(r.k[j]);
    r.mu.resize(m);
    for (int i = 0; i < m; ++i) {
        // isolated second-level equation, monotone in mu
        auto f = [&](double x, double& df) {
            double v = -ws.phase2[i];
            df = 0.0;
            for (int l = 0; l < n; ++l) {
                const double t = (x - s[l]) / a;
                v += 2 * std::atan(t);
                df += 2.0 / (a * (1.0 + t * t));
            }
            return v;
        };
        double lo = -1.0, hi = 1.0, dlo = 0.0, dhi = 0.0;
        while (f(lo, dlo) > 0 && lo > -1e12) lo *= 2;
        while (f(hi, dhi) < 0 && hi < 1e12) hi *= 2;
        double x = 0.5 * (lo + hi);
        for (int it = 0; it < 200; ++it) {
            double df = 0.0;
            const double v = f(x, df);
            if (v > 0) hi = x;
            else lo = x;
            double nx = df > 0 ? x - v / df : 0.5 * (lo + hi);
            if (!(nx > lo && nx < hi)) nx = 0.5 * (lo + hi);
            if (std::abs(nx - x) <= 1e-15 * std::max(1.0, std::abs(x))) {
                x = nx;
                break;
            }
            x = nx;
        }
        r.mu[i] = x;
    }
    return r;
}

BetheRoots solve_from(const BetheConfig& c, BetheRoots cur, const SolveOptions& opt)
{
    check_config(c);
    const Workspace ws = prepare(c);
    const int n = c.particles(), m = c.rapidities();
    require(static_cast<int>(cur.k.size()) == n && static_cast<int>(cur.mu.size()) == m,
            "solve_from: start has wrong root counts");
    const double tol = effective_tolerance(c, opt.tol);

    Eigen::VectorXd r = residual_impl(cur.k, cur.mu, c, ws);
    double rmax = r.cwiseAbs().maxCoeff();
    double rnorm = r.norm();
    int it = 0;
    int stalls = 0;
    for (; it < opt.max_iterations && rmax > tol; ++it) {
        Eigen::VectorXd dk, dmu;
        if (!newton_step(cur.k, cur.mu, r, c, dk, dmu)) {
            throw SolverError("Bethe Jacobian singular at L=" + std::to_string(c.L) + ", U=" + std::to_string(c.U) +
                              "; try continuation in U");
        }
        double t = 1.0;
        bool accepted = false;
        std::vector<double> k2(n), mu2(m);
        Eigen::VectorXd r2;
        for (int h = 0; h < 30; ++h) {
            for (int j = 0; j < n; ++j) k2[j] = cur.k[j] + t * dk(j);
            for (int i = 0; i < m; ++i) mu2[i] = cur.mu[i] + t * dmu(i);
            r2 = residual_impl(k2, mu2, c, ws);
            if (finite(r2) && r2.norm() < rnorm) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            // no decrease possible: at the rounding floor or stuck
            if (++stalls > 2) break;
            continue;
        }
        cur.k = k2;
        cur.mu = mu2;
        r = r2;
        rnorm = r.norm();
        rmax = r.cwiseAbs().maxCoeff();
    }
    cur.residual_norm = rmax;
    cur.iterations = it;
    if (!(rmax <= tol)) {
        std::ostringstream os;
        os << "Bethe solver did not converge at L=" << c.L << ", U=" << c.U << " after " << it
           << " iterations; last max residual " << rmax;
        throw SolverError(os.str());
    }
    return cur;
}

BetheRoots solve(const BetheConfig& c, const SolveOptions& opt)
{
    check_config(c);
    try {
        return solve_from(c, initial_guess(c), opt);
    } catch (const SolverError&) {
        if (!opt.allow_continuation || c.U >= 20.0) throw;
    }
    // continuation in decreasing U from U = 20
    BetheConfig cc = c;
    cc.U = 20.0;
    SolveOptions inner = opt;
    inner.allow_continuation = false;
    BetheRoots cur = solve_from(cc, initial_guess(cc), inner);
    const int steps = 40;
    const double ratio = std::pow(c.U / 20.0, 1.0 / steps);
    for (int s = 1; s <= steps; ++s) {
        cc.U = s == steps ? c.U : 20.0 * std::pow(ratio, s);
        cur = solve_from(cc, cur, inner);
    }
    return cur;
}

double energy(const BetheRoots& roots, const BetheConfig& c, double h1, double h2)
{
    Accumulator acc;
    for (double k : roots.k) acc.add(-2 * std::cos(k));
    const int n = c.particles();
    acc.add(0.5 * c.U * (0.5 * c.L - n));
    acc.add(h1 * (c.sector.n_up - c.sector.n_down));
    acc.add(h2 * (n - c.L));
    return acc.value();
}

double charge_gap(int L, double U, Parity parity)
{
    require((L % 2 == 0) == (parity == Parity::even),
            "charge_gap: L=" + std::to_string(L) + " does not have " + to_string(parity) + " parity");
    const auto g = quantum_numbers(StateClass::ground, L, U);
    const auto x = quantum_numbers(StateClass::charge_excitation, L, U);
    return energy(solve(x), x) - energy(solve(g), g);
}

std::vector<L2Row> l2_closed_forms(double U)
{
    std::vector<L2Row> rows;
    auto formula = [U](const std::vector<Complex>& z, int n) {
        // cos k = (e^{ik} + e^{-ik}) / 2
        Complex s = 0.0;
        for (auto x : z) s += 0.5 * (x + 1.0 / x);
        return (-2.0 * s).real() + 0.5 * U * (1.0 - n);
    };
    const Complex I1(0.0, 1.0);
    {
        L2Row r{{0, 0}, U / 2, 0.0, "empty set", {}, {}};
        r.energy_from_roots = formula(r.exp_ik, 0);
        rows.push_back(r);
    }
    {
        L2Row r{{1, 0}, 0.0, 0.0, "k1 = +-pi/2", {std::exp(I1 * (pi / 2))}, {}};
        r.energy_from_roots = formula(r.exp_ik, 1);
        rows.push_back(r);
    }
    {
        L2Row r{{2, 0}, -U / 2, 0.0, "k1 = pi/2, k2 = -pi/2", {std::exp(I1 * (pi / 2)), std::exp(-I1 * (pi / 2))}, {}};
        r.energy_from_roots = formula(r.exp_ik, 2);
        rows.push_back(r);
    }
    {
        const Complex root = std::sqrt(Complex(U * U - 16.0, 0.0));
        L2Row r{{1, 1}, U / 2, 0.0, "e^{ik} = (-U -+ sqrt(U^2-16))/4, mu = 0",
                {(-U - root) / 4.0, (-U + root) / 4.0}, {0.0}};
        r.energy_from_roots = formula(r.exp_ik, 2);
        rows.push_back(r);
    }
    {
        L2Row r{{1, 1}, -U / 2, 0.0, "k1 = 0, k2 = pi, mu = 0", {1.0, -1.0}, {0.0}};
        r.energy_from_roots = formula(r.exp_ik, 2);
        rows.push_back(r);
    }
    return rows;
}

std::vector<double> heisenberg_limit_roots(int L, const std::vector<Rational>& q)
{
    const int m = static_cast<int>(q.size());
    std::vector<double> lam(m);
    // start from the decoupled equation L atan(2 lambda) = pi q
    for (int i = 0; i < m; ++i) lam[i] = 0.5 * std::tan(pi * to_double(q[i]) / L);
    auto res = [&](const std::vector<double>& x) {
        Eigen::VectorXd r(m);
        for (int i = 0; i < m; ++i) {
            Accumulator acc;
            acc.add(L * std::atan(2 * x[i]));
            acc.add(-pi * to_double(q[i]));
            for (int l = 0; l < m; ++l)
                if (l != i) acc.add(-std::atan(x[i] - x[l]));
            r(i) = acc.value();
        }
        return r;
    };
    Eigen::VectorXd r = res(lam);
    for (int it = 0; it < 200 && r.cwiseAbs().maxCoeff() > 1e-13; ++it) {
        Eigen::MatrixXd j = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) {
            j(i, i) = 2.0 * L / (1 + 4 * lam[i] * lam[i]);
            for (int l = 0; l < m; ++l) {
                if (l == i) continue;
                const double v = 1.0 / (1 + (lam[i] - lam[l]) * (lam[i] - lam[l]));
                j(i, i) -= v;
                j(i, l) += v;
            }
        }
        Eigen::VectorXd dx = j.partialPivLu().solve(-r);
        double t = 1.0;
        std::vector<double> nx(m);
        Eigen::VectorXd nr;
        for (int h = 0; h < 30; ++h) {
            for (int i = 0; i < m; ++i) nx[i] = lam[i] + t * dx(i);
            nr = res(nx);
            if (nr.norm() < r.norm()) break;
            t *= 0.5;
        }
        lam = nx;
        r = nr;
    }
    if (!(r.cwiseAbs().maxCoeff() <= 1e-10)) throw SolverError("Heisenberg limit equations did not converge");
    return lam;
}

double strong_coupling_check(int L, Rational n, double U)
{
    require(L % 2 == 1, "strong_coupling_check needs L odd");
    require(U >= 50.0, "strong_coupling_check needs U >= 50");
    require(n.denominator() == 2 && n > 0, "n must be a positive half-integer");
    const Rational mr = Rational(L, 2) - n;
    require(mr.denominator() == 1 && mr >= 1, "sector N_down = L/2 - n must be a positive integer");
    const int m = static_cast<int>(mr.numerator());

    BetheConfig c;
    c.L = L;
    c.U = U;
    c.parity = Parity::odd;
    c.sector = {L - m, m};
    for (int j = 1; j <= L; ++j) c.q1.push_back(Rational(L, 2) - j + 1);
    // symmetric effective second-level numbers -(M-1)/2 + j - 1
    for (int j = 1; j <= m; ++j) c.q2.push_back(-Rational(m - 1, 2) + j - 1 - Rational(1, 2));
    const BetheRoots roots = solve(c);

    std::vector<Rational> q;
    for (std::size_t j = 0; j < c.q2.size(); ++j) q.push_back(effective_q2(c, j));
    const std::vector<double> lam = heisenberg_limit_roots(L, q);
    double dev = 0.0;
    for (int i = 0; i < m; ++i) dev = std::max(dev, std::abs(2 * roots.mu[i] / U - lam[i]));
    return dev;
}

} // namespace cpchain::bethe
