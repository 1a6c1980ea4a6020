#include "cli/config.hpp"

#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace isingrg::cli {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto piece = comma == std::string::npos ? text.substr(start)
                                                      : text.substr(start, comma - start);
        parts.push_back(trim(piece));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return parts;
}

}  // namespace

double parse_double(const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: key '" + key + "' has non-numeric value '" + text +
                                    "'");
    }
}

long long parse_int(const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: key '" + key + "' has non-integer value '" + text +
                                    "'");
    }
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    std::map<std::string, std::string> values;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                        " of '" + path + "' is not key=value");
        const std::string key = trim(stripped.substr(0, eq));
        if (key.empty())
            throw std::invalid_argument("config: empty key at line " + std::to_string(line_no));
        values[key] = trim(stripped.substr(eq + 1));
    }
    return values;
}

RawConfig parse_cli(int argc, const char* const* argv) {
    if (argc < 2)
        throw std::invalid_argument(
            "usage: ising-rg <command> [--config PATH] [--key value ...]");
    RawConfig raw;
    raw.command = argv[1];

    std::map<std::string, std::string> overrides;
    std::string config_path;
    for (int a = 2; a < argc; ++a) {
        std::string key = argv[a];
        if (key.rfind("--", 0) != 0)
            throw std::invalid_argument("config: expected --key, got '" + key + "'");
        key = key.substr(2);
        if (a + 1 >= argc) throw std::invalid_argument("config: missing value for --" + key);
        const std::string value = argv[++a];
        if (key == "config")
            config_path = value;
        else
            overrides[key] = value;
    }
    if (!config_path.empty()) raw.values = parse_config_file(config_path);
    for (const auto& [k, v] : overrides) raw.values[k] = v;
    return raw;
}

const std::string& ConfigView::raw(const std::string& key) {
    consumed_.insert(key);
    return values_.at(key);
}

std::string ConfigView::get_string(const std::string& key, const std::string& fallback) {
    consumed_.insert(key);
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

std::string ConfigView::require_string(const std::string& key) {
    if (!has(key)) throw std::invalid_argument("config: missing required key '" + key + "'");
    return raw(key);
}

double ConfigView::get_double(const std::string& key, double fallback) {
    consumed_.insert(key);
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : parse_double(key, it->second);
}

double ConfigView::require_double(const std::string& key) {
    return parse_double(key, require_string(key));
}

long long ConfigView::get_int(const std::string& key, long long fallback) {
    consumed_.insert(key);
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : parse_int(key, it->second);
}

long long ConfigView::require_int(const std::string& key) {
    return parse_int(key, require_string(key));
}

std::vector<double> ConfigView::get_double_list(const std::string& key,
                                                const std::vector<double>& fallback) {
    consumed_.insert(key);
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::vector<double> out;
    for (const std::string& piece : split_list(it->second)) out.push_back(parse_double(key, piece));
    return out;
}

std::vector<int> ConfigView::get_int_list(const std::string& key,
                                          const std::vector<int>& fallback) {
    consumed_.insert(key);
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::vector<int> out;
    for (const std::string& piece : split_list(it->second))
        out.push_back(static_cast<int>(parse_int(key, piece)));
    return out;
}

void ConfigView::finish() const {
    for (const auto& [key, value] : values_)
        if (consumed_.count(key) == 0)
            throw std::invalid_argument("config: unknown key '" + key + "'");
}

}  // namespace isingrg::cli
