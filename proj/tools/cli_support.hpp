#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace kpz::cli {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ConfigEntry {
    std::string key;
    std::string value;
    int line = 0;
};

// Plain `key = value` lines; blank lines and lines starting with '#' are skipped.
// Malformed lines and repeated keys throw ConfigError naming the line.
std::vector<ConfigEntry> parse_config(const std::string& text, const std::string& origin = "config");
std::vector<ConfigEntry> load_config(const std::filesystem::path& path);

// Integer range "lo:hi" or "lo:hi:step", inclusive.
std::vector<std::int64_t> parse_int_range(const std::string& text);
// Comma-separated list of doubles.
std::vector<double> parse_double_list(const std::string& text);
std::vector<std::int64_t> parse_int_list(const std::string& text);

// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

struct Manifest {
    std::vector<std::string> command_line;
    std::string command;
    std::string seed;  // verbatim
    nlohmann::json parameters;
    double wall_time = 0.0;
    std::vector<std::filesystem::path> outputs;
};

std::filesystem::path manifest_path(const std::filesystem::path& out);
void write_manifest(const std::filesystem::path& out, const Manifest& m);

std::string version();

}  // namespace kpz::cli
