#pragma once

#include <optional>
#include <string>
#include <vector>

namespace cpchain::reference {

// published finite-size sequences, columns U = 2, 3, 4
struct PublishedTable {
    std::string name;
    std::string quantity;
    std::vector<int> sizes;
    std::vector<double> couplings;
    std::vector<std::vector<double>> values;        // values[column][row]
    std::vector<std::string> extrapolated;          // as printed, e.g. "0.08645(1)"
    std::vector<std::vector<bool>> suspect;         // cells treated as misprints
};

const PublishedTable& gap_even();          // charge gap, L = 2 mod 4
const PublishedTable& central_charge();
const PublishedTable& gap_odd();           // charge gap, L odd
const PublishedTable& dimension_ground();  // X_0
const PublishedTable& dimension_first();   // X_1

// printed thermodynamic gap for U in {2,3,4}
std::optional<double> printed_gap_infinite(double U);

std::optional<std::size_t> column_of(const PublishedTable& t, double U);

// parse "0.08645(1)" into value and uncertainty
struct Uncertain {
    double value = 0.0;
    double uncertainty = 0.0;
};
Uncertain parse_uncertain(const std::string& s);

} // namespace cpchain::reference
