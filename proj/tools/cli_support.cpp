#include "cli_support.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <iomanip>
#include <regex>
#include <set>
#include <sstream>

namespace kpz::cli {

std::vector<ConfigEntry> parse_config(const std::string& text, const std::string& origin) {
    static const std::regex line_re(R"(^\s*([A-Za-z][A-Za-z0-9_-]*)\s*=\s*(\S(?:.*\S)?)\s*$)");
    std::vector<ConfigEntry> out;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string line;
    for (int n = 1; std::getline(in, line); ++n) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        std::smatch m;
        if (!std::regex_match(line, m, line_re))
            throw ConfigError(origin + ":" + std::to_string(n) + ": expected 'key = value', got '" + line + "'");
        if (!seen.insert(m[1]).second)
            throw ConfigError(origin + ":" + std::to_string(n) + ": key '" + m[1].str() + "' given twice");
        out.push_back({m[1], m[2], n});
    }
    return out;
}

std::vector<ConfigEntry> load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.string());
}

namespace {

std::int64_t to_int(const std::string& s) {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument("not an integer: '" + s + "'");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) parts.push_back(cur);
    if (!s.empty() && s.back() == sep) parts.emplace_back();
    return parts;
}

}  // namespace

std::vector<std::int64_t> parse_int_range(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() < 2 || parts.size() > 3) throw std::invalid_argument("range must be lo:hi or lo:hi:step");
    try {
        const auto lo = to_int(parts[0]), hi = to_int(parts[1]);
        const auto step = parts.size() == 3 ? to_int(parts[2]) : 1;
        if (step <= 0 || hi < lo) throw std::invalid_argument("");
        std::vector<std::int64_t> v;
        for (auto x = lo; x <= hi; x += step) v.push_back(x);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("bad range '" + text + "'");
    }
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> v;
    for (const auto& p : split(text, ',')) {
        std::size_t used = 0;
        double d = 0;
        try {
            d = std::stod(p, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (p.empty() || used != p.size()) throw std::invalid_argument("bad number '" + p + "' in '" + text + "'");
        v.push_back(d);
    }
    return v;
}

std::vector<std::int64_t> parse_int_list(const std::string& text) {
    std::vector<std::int64_t> v;
    for (const auto& p : split(text, ',')) {
        try {
            v.push_back(to_int(p));
        } catch (const std::exception&) {
            throw std::invalid_argument("bad integer '" + p + "' in '" + text + "'");
        }
    }
    return v;
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read '" + path.string() + "' for hashing");
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string data = ss.str();
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 failed");
    std::ostringstream hex;
    for (unsigned i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return hex.str();
}

std::filesystem::path manifest_path(const std::filesystem::path& out) {
    return std::filesystem::path(out.string() + ".manifest.json");
}

void write_manifest(const std::filesystem::path& out, const Manifest& m) {
    nlohmann::json outputs = nlohmann::json::array();
    for (const auto& p : m.outputs) outputs.push_back({{"path", p.string()}, {"sha256", sha256_file(p)}});
    const nlohmann::json j{{"tool", "kpzlab"},
                           {"version", version()},
                           {"command", m.command},
                           {"command_line", m.command_line},
                           {"seed", m.seed},
                           {"parameters", m.parameters},
                           {"wall_time_seconds", m.wall_time},
                           {"outputs", outputs}};
    std::ofstream f(manifest_path(out), std::ios::binary);
    if (!f) throw std::runtime_error("cannot write manifest for '" + out.string() + "'");
    f << j.dump(2) << '\n';
}

std::string version() { return KPZLAB_VERSION; }

}  // namespace kpz::cli
