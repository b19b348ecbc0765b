#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "cpchain/fock.hpp"

namespace cpchain::ybx {

// symmetric eight-vertex weights
struct VertexWeights {
    double a = 1.0, b = 0.0, c = 1.0, d = 0.0;
    double free_fermion_residual() const { return a * a + b * b - c * c - d * d; }
};

// b = 0 family: a = 1, c = cos, d = sin
VertexWeights weights(double lambda);

struct CurvePoint {
    double x = 1.0, y = 0.0, U = 0.0;
    double residual() const;   // (x^2+y^2)^2 - U x y - 1
};

double coupling_h(double lambda, double U);
CurvePoint curve_point(double lambda, double U);

// 16x16 operators on aux (x) site; each 4-dim factor is (sigma, tau) with index 2 s + t, 0 = up
enum class Species { sigma, tau };
DenseMatrix block_lax(double lambda, Species s);
DenseMatrix coupled_lax(double lambda, double U);

// the two-term R as printed
DenseMatrix shastry_r(double lambda1, double lambda2, double U);
// exp((h1 z1 + h2 z2)/2) R exp(-(h1 z1 + h2 z2)/2): the intertwiner of the symmetric coupled Lax
DenseMatrix shastry_r_gauged(double lambda1, double lambda2, double U);

// 16x16 operator on factors (a, b) of a triple product, ungraded
DenseMatrix embed_pair(const DenseMatrix& op, int a, int b);

// R12 L13 L23 - L23 L13 R12, max norm; printed_r selects the untransformed R
double ybe_residual_spin(double lambda1, double lambda2, double U, bool printed_r = false);

// transfer matrix on the spin-word basis used by models::assemble_pauli
DenseMatrix transfer_matrix(double lambda, double U, int L);
double transfer_commutator(double lambda1, double lambda2, double U, int L);

// T(0)^{-1} T'(0) by central differences with one Richardson step
DenseMatrix transfer_log_derivative(double U, int L, double step = 1e-3);

struct HamiltonianMatch {
    double deviation = 0.0;   // max |dlogT - H_s - c I|
    double offset = 0.0;      // fitted c
};
HamiltonianMatch transfer_hamiltonian_match(double U, int L);

// graded objects, parities (0,1,1,0) on each 4-dim factor
constexpr std::array<int, 4> parities{0, 1, 1, 0};

struct GradedMatrix {
    DenseMatrix entries;
};

GradedMatrix graded_permutation();
GradedMatrix graded_lax(const CurvePoint& p);
// M coupled_lax Mbar with the printed diagonal twists
GradedMatrix graded_lax_twist(double lambda, double U);
GradedMatrix graded_r(const CurvePoint& p1, const CurvePoint& p2);

struct GradedREntries {
    double a, b, b_bar, d, g, h, q;
};
GradedREntries graded_r_entries(const CurvePoint& p1, const CurvePoint& p2);

// the two standard sign placements for embedding into a graded triple product
enum class GradedSign { A, B };
DenseMatrix graded_embed(const DenseMatrix& op, int a, int b, GradedSign sign);

// check form with P^(g) R and P^(g) L
double ybe_residual_graded(const CurvePoint& p1, const CurvePoint& p2);
double ybe_residual_graded_tensor(const CurvePoint& p1, const CurvePoint& p2, GradedSign sign);

// H_{j,j+1} from L^(g) along x = 1 + U e / 4, y = e
DenseMatrix density_expansion(double U, double step = 1e-3);
// the printed two-body density on the local fermion basis of two sites
DenseMatrix printed_density(double U);

// a 16x16 two-site matrix as fermion monomials on sites (j, k), j's modes first
std::vector<fock::Term> two_site_terms(const DenseMatrix& m, int j, int k);

// ring sum of the extracted density minus (L U / 4) identity vs the charge pair chain
double density_ring_deviation(double U, int L);

} // namespace cpchain::ybx
