#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cpchain/models.hpp"

namespace cpchain::spectra {

constexpr Eigen::Index dense_limit = 4096;

struct SpectrumReport {
    std::vector<double> eigenvalues;
    std::vector<int> degeneracies;
    std::optional<fock::Sector> sector;
    std::string model;
    models::ModelParams params;
};

struct SpectrumOptions {
    std::optional<int> lowest;      // only the lowest k levels
    bool force_iterative = false;   // use the Lanczos path even below dense_limit
    std::uint64_t seed = 12345;     // Lanczos start block
    double residual_tol = 1e-8;
};

SpectrumReport spectrum(const OperatorMatrix& h, const SpectrumOptions& opt = {});

// group sorted levels closer than 1e-9 relative
std::vector<int> degeneracy_groups(const std::vector<double>& sorted);

// lowest k eigenpairs of a Hermitian sparse matrix, block Lanczos with full reorthogonalisation
struct LanczosResult {
    std::vector<double> values;
    DenseMatrix vectors;
    std::vector<double> residuals;
};
LanczosResult lanczos_lowest(const SparseMatrix& h, int k, std::uint64_t seed = 12345, double tol = 1e-8);

struct MatchReport {
    bool match = false;
    double max_deviation = 0.0;
};

MatchReport compare_spectra(const SpectrumReport& a, const SpectrumReport& b, double tol);

double commutator_norm(const OperatorMatrix& a, const OperatorMatrix& b);

// union over all (N_up, N_down) blocks of the transformed model
SpectrumReport transformed_spectrum_union(const models::ModelParams& p);

// lowest level of one block of the transformed model
double sector_ground_energy(const models::ModelParams& p, fock::Sector sector);

enum class ReferenceState { table1_plus, table1_minus, table1_ferro, table10_plus, table10_minus };

std::string to_string(ReferenceState r);
std::optional<ReferenceState> parse_reference_state(const std::string& s);

// the printed eigenvalue +-LU/4 of the product state
double reference_energy(ReferenceState which, int L, double U);

// product state with the printed +- branch selected by branch_sign
ComplexVector reference_state(ReferenceState which, int L, int branch_sign = 1);

// |H v - E v| / |v|
double reference_state_residual(ReferenceState which, int L, double U, int branch_sign = 1);

// one-site fermionic translation c(j) -> c(j+1)
OperatorMatrix translation_operator(int L);

// arg <v|T|v> for a normalised vector
double momentum_phase(const ComplexVector& v, const OperatorMatrix& translation);

} // namespace cpchain::spectra
