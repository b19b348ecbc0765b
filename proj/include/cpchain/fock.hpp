#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace cpchain {

using Complex = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<Complex>;
using DenseMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

namespace fock {

constexpr int max_sites = 12;

enum class Spin { up, down };
enum class ModeKind { create, annihilate };

// particle numbers per spin species
struct Sector {
    int n_up = 0;
    int n_down = 0;
    bool operator==(const Sector&) const = default;
};

// Occupations of the 2L modes. Canonical mode order: up modes by site, then
// down modes by site. Site j (1-based) is bit j-1 of each word.
struct FockState {
    std::uint32_t up_bits = 0;
    std::uint32_t down_bits = 0;
    int L = 0;

    std::uint64_t word() const { return std::uint64_t(up_bits) | (std::uint64_t(down_bits) << L); }
    static FockState from_word(std::uint64_t w, int L);
    bool occupied(Spin s, int site) const;
    int n_up() const;
    int n_down() const;
    bool operator==(const FockState&) const = default;
};

std::vector<FockState> enumerate_basis(int L, std::optional<Sector> sector = std::nullopt);

struct ModeResult {
    int sign = 1;
    FockState state;
};

std::optional<ModeResult> apply_mode(const FockState& state, ModeKind kind, Spin spin, int site);

struct ModeFactor {
    ModeKind kind;
    Spin spin;
    int site;
};

// coefficient * f[0] f[1] ... f[n-1]; the rightmost factor acts first
struct Term {
    Complex coefficient{1.0, 0.0};
    std::vector<ModeFactor> factors;
};

inline ModeFactor cdag(Spin s, int site) { return {ModeKind::create, s, site}; }
inline ModeFactor c(Spin s, int site) { return {ModeKind::annihilate, s, site}; }

// hermitian conjugate of a product
Term adjoint(const Term& t);

// Index map for a full or sector-restricted basis.
class Basis {
public:
    Basis(int L, std::optional<Sector> sector = std::nullopt);

    int sites() const { return L_; }
    const std::optional<Sector>& sector() const { return sector_; }
    std::size_t size() const { return words_.size(); }
    std::uint64_t word(std::size_t i) const { return words_[i]; }
    FockState state(std::size_t i) const { return FockState::from_word(words_[i], L_); }
    std::optional<std::size_t> index_of(std::uint64_t word) const;

private:
    int L_;
    std::optional<Sector> sector_;
    std::vector<std::uint64_t> words_;
};

} // namespace fock

// Complex square matrix over the chain space or a sector of it. Storage is
// always sparse; dense() is available for small dimensions.
struct OperatorMatrix {
    SparseMatrix matrix;
    int L = 0;
    std::optional<fock::Sector> sector;

    Eigen::Index dimension() const { return matrix.rows(); }
    DenseMatrix dense() const { return DenseMatrix(matrix); }
};

namespace fock {

OperatorMatrix assemble_operator(int L, const std::vector<Term>& terms,
                                 std::optional<Sector> sector = std::nullopt);

// block of a full-space operator on one sector; entries leaving the sector are ignored
OperatorMatrix restrict_to_sector(const OperatorMatrix& full, Sector sector);

struct StateVector {
    ComplexVector amplitudes;
    int L = 0;
    std::optional<Sector> sector;
};

StateVector vacuum(int L);
// sum of terms applied to v; sector of the result is dropped
StateVector apply_terms(const std::vector<Term>& terms, const StateVector& v);

} // namespace fock

double max_abs(const SparseMatrix& m);
double max_abs(const DenseMatrix& m);
double hermiticity_defect(const OperatorMatrix& a);

} // namespace cpchain
