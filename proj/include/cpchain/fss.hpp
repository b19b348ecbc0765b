#pragma once

#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cpchain/bethe.hpp"

namespace cpchain::fss {

struct FssSeries {
    std::vector<std::pair<int, double>> points;   // (L, value), L increasing
    std::string label;
};

enum class ExtrapolationMode { power_law, log_corrected };

struct ExtrapolationOptions {
    double omega = 1.0;          // leading exponent, h = 1/L
    double omega_spread = 0.25;  // neighbours used for the uncertainty
};

struct ExtrapolationResult {
    double limit = 0.0;
    double uncertainty = 0.0;
    ExtrapolationMode mode = ExtrapolationMode::power_law;
    double omega = 1.0;
    int points = 0;
};

// Bethe energies memoised by (state, L, U); safe to share between threads
class EnergyCache {
public:
    double energy(bethe::StateClass state, int L, double U);
    // solve the missing entries on up to `jobs` threads
    void prefetch(const std::vector<std::tuple<bethe::StateClass, int, double>>& wanted, int jobs);
    std::size_t size() const;

    // called after each fresh solve with its wall time in seconds
    using Progress = std::function<void(bethe::StateClass, int, double, double)>;
    void set_progress(Progress p) { progress_ = std::move(p); }

private:
    Progress progress_;
    mutable std::mutex mutex_;
    std::map<std::tuple<int, int, double>, double> table_;
};

double central_charge_estimator(int L, double U, EnergyCache* cache = nullptr);

// the two pairs a size can be combined with
enum class Pairing { lag8, consecutive };
std::string to_string(Pairing p);
Pairing parse_pairing(const std::string& s);

// the two sizes whose energies feed the estimate reported at each entry of `sizes`
std::vector<std::pair<int, int>> estimator_pairs(const std::vector<int>& sizes, Pairing pairing);

// X_j from two sizes: the log amplitude is eliminated between them
double two_step_estimate(int L1, double E1, int L2, double E2, double U, double e_inf, double xi);

// the single-size quantity before elimination, (L / 2 pi xi)(E - e_inf L) + 1/12
double bare_estimate(int L, double E, double e_inf, double xi);

FssSeries scaling_dimension_series(int j, const std::vector<int>& sizes, double U, Pairing pairing = Pairing::lag8,
                                   EnergyCache* cache = nullptr);

bethe::Rational predicted_dimension(bethe::Rational n, bethe::Rational m);

ExtrapolationResult extrapolate(const FssSeries& series, ExtrapolationMode mode,
                                const ExtrapolationOptions& opt = {});

// Bulirsch-Stoer table on h = 1/L with exponent omega; returns the apex
double bst(const std::vector<std::pair<int, double>>& points, double omega);

double leading_fss_check(int j, const std::vector<int>& sizes, double U, Pairing pairing = Pairing::lag8,
                         EnergyCache* cache = nullptr);

std::string to_string(ExtrapolationMode m);
ExtrapolationMode parse_extrapolation_mode(const std::string& s);

} // namespace cpchain::fss
