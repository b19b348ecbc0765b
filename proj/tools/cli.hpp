#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace cpchain::cli {

inline constexpr const char* tool_version = "1.0.0";

using Cell = std::variant<std::string, long long, double, bool>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

struct Output {
    Table table;
    nlohmann::json parameters = nlohmann::json::object();
    nlohmann::json deviations = nlohmann::json::array();
    std::uint64_t seed = 0;
};

// one header row, %.12g for reals
std::string to_csv(const Table& t);
nlohmann::json to_json(const Output& o, const std::string& command_line, double wall_seconds);

std::uint64_t fnv1a(const std::string& bytes);

std::vector<int> parse_sizes(const std::string& s);

// exit codes: 0 success, 1 solver failure, 2 usage error
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace cpchain::cli
