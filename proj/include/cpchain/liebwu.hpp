#pragma once

#include <string>

namespace cpchain::liebwu {

enum class BesselKind { J0, J1, I0, I1 };

std::string to_string(BesselKind k);

double bessel(BesselKind kind, double x);

struct QuadratureSpec {
    double upper_cut = 0.0;        // 0 picks the cut from the exponential damping
    double relative_tol = 1e-16;   // damping level at the cut
    double panel_width = 1.0;
    int nodes = 20;                // Gauss-Legendre points per panel
};

// integral_0^cut f(x) / (e^{Ux/2} + 1) dx on fixed panels
double damped_integral(double (*f)(double), double U, const QuadratureSpec& q = {});

double ground_energy_density(double U, const QuadratureSpec& q = {});
double gap_infinite(double U, const QuadratureSpec& q = {});
double spin_velocity(double U);

} // namespace cpchain::liebwu
