#include "cpchain/liebwu.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "cpchain/errors.hpp"

namespace cpchain::liebwu {

namespace {

constexpr double pi = std::numbers::pi;

double j_series(int n, double x)
{
    const double h = 0.5 * x;
    double term = n == 0 ? 1.0 : h;
    double sum = term;
    for (int k = 1; k < 200; ++k) {
        term *= -h * h / (double(k) * double(k + n));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

// J_n(x) = (1/pi) int_0^pi cos(n t - x sin t) dt; trapezoid is spectrally accurate here
double j_integral(int n, double x)
{
    const int m = 64 + static_cast<int>(x);
    double sum = 0.5 * (1.0 + std::cos(n * pi));
    for (int i = 1; i < m; ++i) {
        const double t = pi * i / m;
        sum += std::cos(n * t - x * std::sin(t));
    }
    return sum / m;
}

// Hankel expansion for large x
double j_asymptotic(int n, double x)
{
    const double mu = 4.0 * n * n;
    double p = 1.0, q = 0.0;
    double term = 1.0;
    double last = 1e300;
    for (int k = 1; k < 60; ++k) {
        term *= (mu - (2.0 * k - 1) * (2.0 * k - 1)) / (k * 8.0 * x);
        if (std::abs(term) > last) break;
        last = std::abs(term);
        if (k % 2 == 1) q += (k % 4 == 1 ? 1.0 : -1.0) * term;
        else p += (k % 4 == 2 ? -1.0 : 1.0) * term;
        if (last < 1e-18) break;
    }
    const double chi = x - (0.5 * n + 0.25) * pi;
    return std::sqrt(2.0 / (pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

double i_series(int n, double x)
{
    const double h = 0.5 * x;
    double term = n == 0 ? 1.0 : h;
    double sum = term;
    for (int k = 1; k < 400; ++k) {
        term *= h * h / (double(k) * double(k + n));
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return sum;
}

double i_asymptotic(int n, double x)
{
    const double mu = 4.0 * n * n;
    double sum = 1.0, term = 1.0, last = 1e300;
    for (int k = 1; k < 80; ++k) {
        term *= -(mu - (2.0 * k - 1) * (2.0 * k - 1)) / (k * 8.0 * x);
        if (std::abs(term) > last) break;
        last = std::abs(term);
        sum += term;
        if (last < 1e-18) break;
    }
    return std::exp(x) / std::sqrt(2 * pi * x) * sum;
}

const std::vector<std::pair<double, double>>& gauss_legendre(int n)
{
    static thread_local int cached = 0;
    static thread_local std::vector<std::pair<double, double>> rule;
    if (cached == n) return rule;
    rule.clear();
    for (int i = 1; i <= n; ++i) {
        double x = std::cos(pi * (i - 0.25) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double dp = n * (x * p1 - p0) / (x * x - 1);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                double q0 = 1.0, q1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double q2 = ((2.0 * k - 1) * x * q1 - (k - 1.0) * q0) / k;
                    q0 = q1;
                    q1 = q2;
                }
                const double d = n * (x * q1 - q0) / (x * x - 1);
                rule.emplace_back(x, 2.0 / ((1 - x * x) * d * d));
                break;
            }
        }
    }
    cached = n;
    return rule;
}

double j0j1_over_x(double x) { return x == 0.0 ? 0.5 : bessel(BesselKind::J0, x) * bessel(BesselKind::J1, x) / x; }
double j1_over_x(double x) { return x == 0.0 ? 0.5 : bessel(BesselKind::J1, x) / x; }

void check_u(double U) { require(U > 0.0 && std::isfinite(U), "U must be positive and finite"); }

} // namespace

std::string to_string(BesselKind k)
{
    switch (k) {
    case BesselKind::J0: return "J0";
    case BesselKind::J1: return "J1";
    case BesselKind::I0: return "I0";
    case BesselKind::I1: return "I1";
    }
    return "?";
}

double bessel(BesselKind kind, double x)
{
    require(std::isfinite(x) && x >= 0.0, "bessel argument must be finite and >= 0");
    switch (kind) {
    case BesselKind::J0:
    case BesselKind::J1: {
        const int n = kind == BesselKind::J0 ? 0 : 1;
        if (x < 8.0) return j_series(n, x);
        if (x < 40.0) return j_integral(n, x);
        return j_asymptotic(n, x);
    }
    case BesselKind::I0:
    case BesselKind::I1: {
        const int n = kind == BesselKind::I0 ? 0 : 1;
        return x <= 30.0 ? i_series(n, x) : i_asymptotic(n, x);
    }
    }
    return 0.0;
}

double damped_integral(double (*f)(double), double U, const QuadratureSpec& q)
{
    check_u(U);
    require(q.panel_width > 0 && q.nodes >= 2, "quadrature needs positive panel width and >= 2 nodes");
    double cut = q.upper_cut;
    if (cut <= 0.0) cut = 2.0 / U * (-std::log(q.relative_tol / std::max(U, 1.0)));
    const auto& rule = gauss_legendre(q.nodes);
    const int panels = std::max(1, static_cast<int>(std::ceil(cut / q.panel_width)));
    const double w = cut / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double a = p * w;
        double s = 0.0;
        for (const auto& [t, wt] : rule) {
            const double x = a + 0.5 * w * (t + 1.0);
            const double e = std::exp(-0.5 * U * x);
            s += wt * f(x) * e / (1.0 + e);
        }
        total += 0.5 * w * s;
    }
    return total;
}

double ground_energy_density(double U, const QuadratureSpec& q)
{
    check_u(U);
    return -4.0 * damped_integral(j0j1_over_x, U, q) - U / 4.0;
}

double gap_infinite(double U, const QuadratureSpec& q)
{
    check_u(U);
    return 4.0 * damped_integral(j1_over_x, U, q) + U / 2.0 - 2.0;
}

double spin_velocity(double U)
{
    check_u(U);
    const double z = 2 * pi / U;
    if (z > 700.0) return 2.0 * (1.0 - 0.5 / z - 0.125 / (z * z));   // ratio of asymptotic series
    return 2.0 * bessel(BesselKind::I1, z) / bessel(BesselKind::I0, z);
}

} // namespace cpchain::liebwu
