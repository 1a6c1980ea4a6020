#pragma once

// Flat key=value configuration: a plain-text file plus --key value overrides
// from the command line. Values stay strings until a command asks for them,
// and every key must be consumed so typos fail loudly.

#include <map>
#include <set>
#include <string>
#include <vector>

namespace isingrg::cli {

struct RawConfig {
    std::string command;
    std::map<std::string, std::string> values;
};

std::map<std::string, std::string> parse_config_file(const std::string& path);

// argv: <command> [--config PATH] [--key value ...]
RawConfig parse_cli(int argc, const char* const* argv);

class ConfigView {
  public:
    explicit ConfigView(const std::map<std::string, std::string>& values) : values_(values) {}

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string get_string(const std::string& key, const std::string& fallback);
    std::string require_string(const std::string& key);
    double get_double(const std::string& key, double fallback);
    double require_double(const std::string& key);
    long long get_int(const std::string& key, long long fallback);
    long long require_int(const std::string& key);
    std::vector<double> get_double_list(const std::string& key,
                                        const std::vector<double>& fallback);
    std::vector<int> get_int_list(const std::string& key, const std::vector<int>& fallback);

    // Throws if any key was never consumed.
    void finish() const;

  private:
    const std::string& raw(const std::string& key);

    const std::map<std::string, std::string>& values_;
    std::set<std::string> consumed_;
};

double parse_double(const std::string& key, const std::string& text);
long long parse_int(const std::string& key, const std::string& text);

}  // namespace isingrg::cli
