#include "cpchain/fss.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numbers>
#include <thread>

#include <Eigen/Dense>

#include "cpchain/errors.hpp"
#include "cpchain/liebwu.hpp"

namespace cpchain::fss {

namespace {

constexpr double pi = std::numbers::pi;

double solve_energy(bethe::StateClass state, int L, double U)
{
    const auto c = bethe::quantum_numbers(state, L, U);
    return bethe::energy(bethe::solve(c), c);
}

double energy_of(EnergyCache* cache, bethe::StateClass state, int L, double U)
{
    return cache ? cache->energy(state, L, U) : solve_energy(state, L, U);
}

double log_scale(int L, double U)
{
    return std::log(L * liebwu::bessel(liebwu::BesselKind::I0, 2 * pi / U));
}

} // namespace

double EnergyCache::energy(bethe::StateClass state, int L, double U)
{
    const auto key = std::make_tuple(static_cast<int>(state), L, U);
    {
        std::lock_guard lock(mutex_);
        auto it = table_.find(key);
        if (it != table_.end()) return it->second;
    }
    const auto t0 = std::chrono::steady_clock::now();
    const double e = solve_energy(state, L, U);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::lock_guard lock(mutex_);
    table_.emplace(key, e);
    if (progress_) progress_(state, L, U, secs);
    return e;
}

void EnergyCache::prefetch(const std::vector<std::tuple<bethe::StateClass, int, double>>& wanted, int jobs)
{
    // largest systems first so the slow solves start early
    auto order = wanted;
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) { return std::get<1>(a) > std::get<1>(b); });
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex fail_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < order.size(); i = next++) {
            try {
                energy(std::get<0>(order[i]), std::get<1>(order[i]), std::get<2>(order[i]));
            } catch (...) {
                std::lock_guard lock(fail_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const int n = std::max(1, std::min<int>(jobs, static_cast<int>(order.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < n; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

std::size_t EnergyCache::size() const
{
    std::lock_guard lock(mutex_);
    return table_.size();
}

double central_charge_estimator(int L, double U, EnergyCache* cache)
{
    require(L % 4 == 2, "central charge estimator needs L = 2 (mod 4)");
    const double e0 = energy_of(cache, bethe::StateClass::ground, L, U);
    const double xi = liebwu::spin_velocity(U);
    const double einf = liebwu::ground_energy_density(U);
    return 6.0 * L / (pi * xi) * (-e0 + einf * L);
}

std::string to_string(Pairing p) { return p == Pairing::lag8 ? "lag8" : "consecutive"; }

Pairing parse_pairing(const std::string& s)
{
    if (s == "lag8") return Pairing::lag8;
    if (s == "consecutive") return Pairing::consecutive;
    throw PreconditionError("unknown pairing '" + s + "' (expected lag8 or consecutive)");
}

std::vector<std::pair<int, int>> estimator_pairs(const std::vector<int>& sizes, Pairing pairing)
{
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        require(sizes[i] % 2 == 1, "scaling dimensions need odd sizes, got " + std::to_string(sizes[i]));
        require(i == 0 || sizes[i] > sizes[i - 1], "sizes must be strictly increasing");
    }
    std::vector<std::pair<int, int>> out;
    if (pairing == Pairing::lag8) {
        require(!sizes.empty(), "need at least one size");
        for (int L : sizes) {
            require(L - 8 >= 3, "lag-8 pairing needs L >= 11");
            out.emplace_back(L - 8, L);
        }
    } else {
        require(sizes.size() >= 2, "consecutive pairing needs at least two sizes");
        for (std::size_t i = 1; i < sizes.size(); ++i) out.emplace_back(sizes[i - 1], sizes[i]);
    }
    return out;
}

double bare_estimate(int L, double E, double e_inf, double xi)
{
    return L / (2 * pi * xi) * (E - e_inf * L) + 1.0 / 12.0;
}

double two_step_estimate(int L1, double E1, int L2, double E2, double U, double e_inf, double xi)
{
    require(L1 != L2, "two-step estimate needs two different sizes");
    const double b1 = bare_estimate(L1, E1, e_inf, xi);
    const double b2 = bare_estimate(L2, E2, e_inf, xi);
    const double u1 = 1.0 / log_scale(L1, U);
    const double u2 = 1.0 / log_scale(L2, U);
    return (b2 * u1 - b1 * u2) / (u1 - u2);
}

FssSeries scaling_dimension_series(int j, const std::vector<int>& sizes, double U, Pairing pairing,
                                   EnergyCache* cache)
{
    require(j == 0 || j == 1, "j must be 0 or 1");
    const auto state = j == 0 ? bethe::StateClass::ground : bethe::StateClass::first_excitation;
    const double xi = liebwu::spin_velocity(U);
    const double einf = liebwu::ground_energy_density(U);
    FssSeries s;
    s.label = "X_" + std::to_string(j) + " U=" + std::to_string(U) + " pairing=" + to_string(pairing);
    for (auto [l1, l2] : estimator_pairs(sizes, pairing)) {
        const double e1 = energy_of(cache, state, l1, U);
        const double e2 = energy_of(cache, state, l2, U);
        s.points.emplace_back(l2, two_step_estimate(l1, e1, l2, e2, U, einf, xi));
    }
    return s;
}

bethe::Rational predicted_dimension(bethe::Rational n, bethe::Rational m)
{
    require(n.denominator() == 2 && n > 0, "n must be a positive half-integer");
    require(m.denominator() == 2, "m must be a half-integer");
    const bethe::Rational d = m - bethe::Rational(1, 2);
    return n * n / 2 + d * d / 2;
}

double bst(const std::vector<std::pair<int, double>>& points, double omega)
{
    const std::size_t n = points.size();
    require(n >= 1, "bst needs data");
    std::vector<double> h(n);
    for (std::size_t i = 0; i < n; ++i) h[i] = 1.0 / points[i].first;
    std::vector<double> prev(n + 1, 0.0), cur(n);
    for (std::size_t i = 0; i < n; ++i) cur[i] = points[i].second;
    // prev is column k-2, cur column k-1; both indexed by m
    for (std::size_t k = 1; k < n; ++k) {
        std::vector<double> next(n - k);
        for (std::size_t m = 0; m + k < n; ++m) {
            const double up = cur[m + 1];
            const double diff = up - cur[m];
            const double back = up - prev[m + 1];
            if (diff == 0.0) {
                next[m] = up;
                continue;
            }
            const double ratio = std::pow(h[m] / h[m + k], omega);
            const double denom = ratio * (1.0 - (back == 0.0 ? 0.0 : diff / back)) - 1.0;
            next[m] = denom == 0.0 ? up : up + diff / denom;
        }
        prev.assign(cur.begin(), cur.end());
        cur = next;
    }
    return cur[0];
}

namespace {

double log_fit(const std::vector<std::pair<int, double>>& pts)
{
    const auto n = static_cast<Eigen::Index>(pts.size());
    Eigen::MatrixXd a(n, 3);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double L = pts[i].first;
        a(i, 0) = 1.0;
        a(i, 1) = 1.0 / std::log(L);
        a(i, 2) = 1.0 / L;
        y(i) = pts[i].second;
    }
    return a.colPivHouseholderQr().solve(y)(0);
}

} // namespace

ExtrapolationResult extrapolate(const FssSeries& series, ExtrapolationMode mode, const ExtrapolationOptions& opt)
{
    const auto& p = series.points;
    require(p.size() >= 3, "extrapolation needs at least 3 points");
    for (std::size_t i = 1; i < p.size(); ++i) require(p[i].first > p[i - 1].first, "sizes must increase");
    ExtrapolationResult r;
    r.mode = mode;
    r.omega = opt.omega;
    r.points = static_cast<int>(p.size());
    const std::vector<std::pair<int, double>> head(p.begin(), p.end() - 1);
    const std::vector<std::pair<int, double>> tail(p.begin() + 1, p.end());
    double spread = 0.0;
    if (mode == ExtrapolationMode::power_law) {
        r.limit = bst(p, opt.omega);
        for (double w : {opt.omega - opt.omega_spread, opt.omega + opt.omega_spread})
            if (w > 0) spread = std::max(spread, std::abs(bst(p, w) - r.limit));
        spread = std::max(spread, std::abs(bst(head, opt.omega) - r.limit));
    } else {
        r.limit = log_fit(p);
        if (p.size() > 3) {
            spread = std::max(spread, std::abs(log_fit(head) - r.limit));
            spread = std::max(spread, std::abs(log_fit(tail) - r.limit));
        } else {
            spread = std::abs(p.back().second - r.limit);
        }
    }
    r.uncertainty = std::max(spread, 1e-15 * std::max(1.0, std::abs(r.limit)));
    return r;
}

double leading_fss_check(int j, const std::vector<int>& sizes, double U, Pairing pairing, EnergyCache* cache)
{
    const FssSeries s = scaling_dimension_series(j, sizes, U, pairing, cache);
    const double target = j == 0 ? 0.125 : 0.625;
    return std::abs(extrapolate(s, ExtrapolationMode::power_law).limit - target);
}

std::string to_string(ExtrapolationMode m) { return m == ExtrapolationMode::power_law ? "power-law" : "log-corrected"; }

ExtrapolationMode parse_extrapolation_mode(const std::string& s)
{
    if (s == "power-law" || s == "power_law") return ExtrapolationMode::power_law;
    if (s == "log-corrected" || s == "log_corrected") return ExtrapolationMode::log_corrected;
    throw PreconditionError("unknown extrapolation mode '" + s + "'");
}

} // namespace cpchain::fss
