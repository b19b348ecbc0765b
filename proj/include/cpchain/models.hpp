#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cpchain/fock.hpp"

namespace cpchain::models {

enum class ModelKind {
    hubbard,
    charge_pair,
    charge_pair_transformed,
    charge_pair_extended,
    spin_coupled,
    spin_xx_even,
    spin_xx_odd,
    charge_pair_jw,
};

std::string to_string(ModelKind k);
std::optional<ModelKind> parse_model(const std::string& name);
bool is_spin_model(ModelKind k);

struct ModelParams {
    int L = 2;
    double U = 0.0;
    double theta_up = 0.0;
    double theta_down = 0.0;
    double h1 = 0.0;
    double h2 = 0.0;
};

// Fermionic kinds only; the transformed model is written in d-fermions which
// share the c-fermion mode conventions.
std::vector<fock::Term> model_terms(ModelKind kind, const ModelParams& p);

OperatorMatrix build_model(ModelKind kind, const ModelParams& p);

// (N_up, N_down) block of the transformed model
OperatorMatrix build_transformed_sector(const ModelParams& p, fock::Sector sector);

enum class GeneratorKind {
    S_x, S_y, S_z,
    R_x, R_y, R_z,
    S_x_staggered, S_z_staggered,
    R_y_staggered, R_z_staggered,
};

std::string to_string(GeneratorKind g);
std::vector<fock::Term> generator_terms(GeneratorKind g, int L);
OperatorMatrix symmetry_generator(GeneratorKind g, int L);

// on-site 4x4 V_j in the local order |0>, up, down, up-down
Eigen::Matrix4cd local_rotation();

// fermionic expansion of a 4x4 on-site matrix acting at one site
std::vector<fock::Term> local_operator_terms(const Eigen::Matrix4cd& m, int site);

// product of V_j over all sites
OperatorMatrix basis_rotation(int L);

// d-operators in terms of c, c^dagger, as linear combinations
std::vector<fock::Term> d_operator(fock::ModeKind kind, fock::Spin spin, int site);

// diagonal unitary exp(i sum_a theta_a N_a / 2) that moves the fluxes of the extended model
OperatorMatrix flux_gauge(int L, double theta_up, double theta_down);

// V G H G^+ V^+: the extended model with fluxes gauged away, in the frame
// where basis_rotation maps the charge pair model onto the transformed one
OperatorMatrix extended_rotated(const ModelParams& p);

// Occupations in that frame are particle-hole conjugate to the d-labels:
// d-sector (n_up, n_down) is frame sector (L - n_up, L - n_down).
fock::Sector rotated_frame_sector(fock::Sector d_sector, int L);

// max |X - expected| with X = extended_rotated(p) and expected the transformed
// model plus h1 (N_up - N_down) + h2 (N - L) in d-labels
double extended_reduction_residual(const ModelParams& p);

// ---- spin chains ----------------------------------------------------------

// Spin basis word: bit j-1 set when sigma_j is up, bit L+j-1 set when tau_j is up.
enum class Species { sigma, tau };
enum class PauliOp { plus, minus, x, y, z };

struct PauliFactor {
    PauliOp op;
    Species species;
    int site;
};

struct PauliTerm {
    Complex coefficient{1.0, 0.0};
    std::vector<PauliFactor> factors;
};

OperatorMatrix assemble_pauli(int L, const std::vector<PauliTerm>& terms);

// local state index 0..3 for (up,up), (up,down), (down,up), (down,down) of (sigma_j, tau_j)
int local_spin_index(std::uint64_t word, int L, int site);
std::uint64_t set_local_spin(std::uint64_t word, int L, int site, int local);

std::vector<PauliTerm> spin_coupled_terms(int L, double U);
std::vector<PauliTerm> jw_string_terms(int L, double U);

// the Pauli-string form of the charge pair chain, carried to the Fock basis
OperatorMatrix jordan_wigner_image(int L, double U);

// sign gauge between the printed Jordan-Wigner strings and canonical ordering
OperatorMatrix jw_sign_gauge(int L);

// even-site spin flip W
OperatorMatrix sublattice_flip(int L);
double sublattice_rotation_check(int L, double U);

} // namespace cpchain::models
