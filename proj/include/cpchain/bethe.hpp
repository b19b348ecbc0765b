#pragma once

#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "cpchain/fock.hpp"

namespace cpchain::bethe {

using Rational = boost::rational<long long>;

enum class Parity { even, odd };
enum class StateClass { ground, charge_excitation, spin_excitation, first_excitation };

std::string to_string(Parity p);
std::string to_string(StateClass s);

struct BetheConfig {
    int L = 2;
    double U = 1.0;
    fock::Sector sector;
    std::vector<Rational> q1;   // one per momentum, N_up + N_down
    std::vector<Rational> q2;   // one per spin rapidity, N_down
    Parity parity = Parity::even;

    int particles() const { return sector.n_up + sector.n_down; }
    int rapidities() const { return sector.n_down; }
};

struct BetheRoots {
    std::vector<double> k;
    std::vector<double> mu;
    double residual_norm = 0.0;
    int iterations = 0;
};

// q-numbers of the tabulated real-root states
BetheConfig quantum_numbers(StateClass state, int L, double U);

// branch numbers actually entering the log equations (odd L carries -1/4 and +1/2 shifts)
Rational effective_q1(const BetheConfig& c, std::size_t j);
Rational effective_q2(const BetheConfig& c, std::size_t j);

// stacked residuals of the two logarithmic equation sets
Eigen::VectorXd bethe_residual(const BetheRoots& roots, const BetheConfig& config);

struct SolveOptions {
    double tol = 1e-12;
    int max_iterations = 200;
    bool allow_continuation = true;
};

// tolerance actually enforced: tol, or the rounding floor of the equation terms if larger
double effective_tolerance(const BetheConfig& config, double tol);

// decoupled strong-coupling start
BetheRoots initial_guess(const BetheConfig& config);

BetheRoots solve(const BetheConfig& config, const SolveOptions& opt = {});
BetheRoots solve_from(const BetheConfig& config, BetheRoots start, const SolveOptions& opt = {});

double energy(const BetheRoots& roots, const BetheConfig& config, double h1 = 0.0, double h2 = 0.0);

// Delta_ev or Delta_od
double charge_gap(int L, double U, Parity parity);

struct L2Row {
    fock::Sector sector;
    double energy = 0.0;              // closed form
    double energy_from_roots = 0.0;   // energy formula on the listed roots
    std::string roots;
    std::vector<Complex> exp_ik;
    std::vector<double> mu;
};

std::vector<L2Row> l2_closed_forms(double U);

// solve the twisted Heisenberg limit  L atan(2 lambda_j) = pi q_j + sum_{l != j} atan(lambda_j - lambda_l)
std::vector<double> heisenberg_limit_roots(int L, const std::vector<Rational>& q);

// sector N = L, N_up - N_down = 2n, L odd; max |2 mu / U - lambda|
double strong_coupling_check(int L, Rational n, double U);

} // namespace cpchain::bethe
