#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "isingrg/rgflow.hpp"

using namespace isingrg;
using namespace isingrg::cli;

namespace {

RawConfig make(const std::string& command,
               std::initializer_list<std::pair<std::string, std::string>> kv) {
    RawConfig raw;
    raw.command = command;
    for (const auto& [k, v] : kv) raw.values[k] = v;
    return raw;
}

std::vector<std::vector<double>> csv_rows(const std::string& doc) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(doc);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (header) {
            header = false;
            continue;
        }
        std::vector<double> row;
        std::istringstream fields(line);
        std::string field;
        while (std::getline(fields, field, ',')) row.push_back(std::stod(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

int run_catching(const RawConfig& raw) {
    try {
        return run_command(raw).exit_code;
    } catch (...) {
        return exit_code_for_current_exception();
    }
}

}  // namespace

TEST_CASE("correlation command emits the distance grid") {
    const CommandOutcome out = run_command(make("correlation", {{"K", "1"}, {"d_max", "5"}}));
    CHECK(out.exit_code == 0);
    const auto rows = csv_rows(out.document);
    REQUIRE(rows.size() == 6);
    CHECK(rows[0][3] == 1.0);
    CHECK(rows[3][3] == doctest::Approx(0.4417441517311526).epsilon(1e-13));

    const CommandOutcome flat = run_command(make("correlation", {{"K", "0"}, {"d_max", "3"}}));
    const auto zero_rows = csv_rows(flat.document);
    CHECK(zero_rows[0][3] == 1.0);
    for (std::size_t r = 1; r < zero_rows.size(); ++r) CHECK(zero_rows[r][3] == 0.0);
}

TEST_CASE("observable command, periodic with oracle") {
    const CommandOutcome out = run_command(make(
        "observable",
        {{"K", "0.5"}, {"f2", "2,1"}, {"g2", "3,1"}, {"d", "3"}, {"oracle", "18"}}));
    CHECK(out.exit_code == 0);
    CHECK(out.document.find("oracle_check = PASS") != std::string::npos);

    const CommandOutcome trivial =
        run_command(make("observable", {{"K", "0.7"}, {"f2", "1,1"}, {"g2", "1,1"}, {"d", "2"}}));
    const auto rows = csv_rows(trivial.document);
    CHECK(rows[0][3] == 0.0);  // s column
}

TEST_CASE("observable command, fixed boundaries") {
    const CommandOutcome out = run_command(
        make("observable", {{"K", "0.5"}, {"f2", "2,1"}, {"g2", "2,1"},
                            {"boundary", "+-"}, {"i", "2"}, {"j", "5"}, {"format", "json"}}));
    CHECK(out.exit_code == 0);
    const auto doc = nlohmann::json::parse(out.document);
    REQUIRE(doc["rows"].size() == 4);
    CHECK(doc["summary"].contains("M11"));
    CHECK(doc["summary"].contains("R_hat2"));
    // Column equality across the two boundary pairs sharing a left spin.
    CHECK(double(doc["rows"][0][2]) == double(doc["rows"][2][2]));
    CHECK(double(doc["rows"][1][2]) == double(doc["rows"][3][2]));
}

TEST_CASE("unsupported regime and validation exit codes") {
    CHECK(run_catching(make("observable",
                            {{"K", "0.5"}, {"h", "0.2"}, {"f2", "2,1"}, {"g2", "2,1"},
                             {"d", "2"}})) == 2);
    CHECK(run_catching(make("correlation", {{"K", "oops"}})) == 2);
    CHECK(run_catching(make("correlation", {{"K", "1"}, {"typo_key", "3"}})) == 2);
    CHECK(run_catching(make("nonsense", {})) == 2);
    // Resource class: enumeration too large.
    CHECK(run_catching(make("observable", {{"K", "0.5"},
                                           {"f2", "2,1"},
                                           {"g2", "2,1"},
                                           {"d", "3"},
                                           {"oracle", "30"}})) == 3);
}

TEST_CASE("rg-flow command matches the library trajectory") {
    const CommandOutcome out =
        run_command(make("rg-flow", {{"K0", "1"}, {"n", "10"}, {"format", "csv"}}));
    CHECK(out.exit_code == 0);
    const auto rows = csv_rows(out.document);
    REQUIRE(rows.size() == 11);
    const RgTrajectory traj = rg_trajectory(1.0, 10);
    for (std::size_t m = 0; m < rows.size(); ++m)
        CHECK(rows[m][1] == doctest::Approx(traj.k_values[m]).epsilon(1e-15));

    const CommandOutcome frozen = run_command(make("rg-flow", {{"K0", "0"}, {"n", "5"}}));
    for (const auto& row : csv_rows(frozen.document)) {
        CHECK(row[1] == 0.0);
        CHECK(row[2] == 0.0);
    }

    const CommandOutcome json_out =
        run_command(make("rg-flow", {{"K0", "1"}, {"n", "12"}, {"format", "json"}}));
    const auto doc = nlohmann::json::parse(json_out.document);
    CHECK(double(doc["summary"]["rate_correlation"]) <= std::log(0.7));
}

TEST_CASE("spectrum command") {
    const CommandOutcome quiet =
        run_command(make("spectrum", {{"gamma", "1"}, {"m", "2"}, {"format", "json"}}));
    const auto doc = nlohmann::json::parse(quiet.document);
    CHECK(double(doc["rows"][0][1]) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(double(doc["rows"][1][1])) <= 1e-12);
    CHECK(double(doc["summary"]["horizon"]) == 1.0);

    const CommandOutcome drift = run_command(make("spectrum", {{"gamma", "0"}, {"m", "3"}}));
    CHECK(csv_rows(drift.document).size() == 8);
}

TEST_CASE("evolve command emits a converging gap column") {
    const CommandOutcome out = run_command(make("evolve", {{"N", "10"},
                                                           {"T", "80"},
                                                           {"schedule", "constant"},
                                                           {"K", "0"},
                                                           {"sites", "1,4"},
                                                           {"f2", "2,1"},
                                                           {"g2", "2,1"},
                                                           {"init", "gibbs"},
                                                           {"init_K", "1"},
                                                           {"format", "json"}}));
    CHECK(out.exit_code == 0);
    const auto doc = nlohmann::json::parse(out.document);
    CHECK(double(doc["summary"]["final_gap"]) <= 1e-9);

    const CommandOutcome geo = run_command(make("evolve", {{"N", "8"},
                                                           {"T", "40"},
                                                           {"schedule", "geometric"},
                                                           {"K0", "0.5"},
                                                           {"q", "0.5"},
                                                           {"sites", "1,4"},
                                                           {"f2", "2,1"},
                                                           {"g2", "2,1"}}));
    const auto rows = csv_rows(geo.document);
    REQUIRE(rows.size() == 40);
    const double gap_early = rows[1].back();
    const double gap_mid = rows[19].back();
    const double gap_late = rows[39].back();
    CHECK(gap_mid < gap_early);
    CHECK(gap_late < gap_mid);

    CHECK(run_catching(make("evolve", {{"N", "16"},
                                       {"T", "5"},
                                       {"schedule", "constant"},
                                       {"K", "0"},
                                       {"sites", "1,4"},
                                       {"f2", "2,1"},
                                       {"g2", "2,1"}})) == 3);
}

TEST_CASE("simulate command is byte-deterministic and self-checking") {
    const auto config = make("simulate", {{"N", "32"},
                                          {"T", "12"},
                                          {"replicas", "4000"},
                                          {"seed", "7"},
                                          {"schedule", "geometric"},
                                          {"K0", "0.5"},
                                          {"q", "0.5"},
                                          {"sites", "1,4"},
                                          {"f2", "2,1"},
                                          {"g2", "2,1"},
                                          {"format", "json"}});
    const CommandOutcome a = run_command(config);
    const CommandOutcome b = run_command(config);
    CHECK(a.document == b.document);
    CHECK(a.exit_code == 0);
    const auto doc = nlohmann::json::parse(a.document);
    CHECK(doc["notes"]["verdict"] == "PASS");

    // JSON numbers survive a parse/serialize round trip.
    CHECK(nlohmann::json::parse(doc.dump()) == doc);
}

TEST_CASE("simulate honors the budget override from the environment") {
    const auto config = make("simulate", {{"N", "32"},
                                          {"T", "12"},
                                          {"replicas", "4000"},
                                          {"seed", "7"},
                                          {"schedule", "constant"},
                                          {"K", "0.1"},
                                          {"sites", "1,4"},
                                          {"f2", "2,1"},
                                          {"g2", "2,1"}});
    setenv("ISING_RG_BUDGET", "100", 1);
    CHECK(run_catching(config) == 3);
    unsetenv("ISING_RG_BUDGET");
    CHECK(run_catching(config) == 0);
}

TEST_CASE("free-energy command") {
    const CommandOutcome out =
        run_command(make("free-energy", {{"K", "1"}, {"N", "30"}, {"format", "json"}}));
    CHECK(out.exit_code == 0);
    const auto doc = nlohmann::json::parse(out.document);
    CHECK(double(doc["summary"]["free_energy"]) == doctest::Approx(1.1269280110429725));
    REQUIRE(doc["rows"].size() == 4);
    for (const auto& row : doc["rows"]) CHECK(double(row[3]) <= 0.03);
}

TEST_CASE("config file parsing and overrides") {
    const std::string path = "/tmp/isingrg_test_config.txt";
    {
        std::ofstream f(path);
        f << "# comment line\n"
          << "K = 1\n"
          << "d_max = 4   # trailing comment\n"
          << "\n";
    }
    const char* argv[] = {"ising-rg", "correlation", "--config", path.c_str(), "--d_max", "2"};
    const RawConfig raw = parse_cli(6, argv);
    CHECK(raw.command == "correlation");
    CHECK(raw.values.at("K") == "1");
    CHECK(raw.values.at("d_max") == "2");  // override wins
    const CommandOutcome out = run_command(raw);
    CHECK(csv_rows(out.document).size() == 3);

    CHECK_THROWS_AS(parse_config_file("/nonexistent/path.cfg"), std::invalid_argument);
    const char* bad_argv[] = {"ising-rg", "correlation", "--K"};
    CHECK_THROWS_AS(parse_cli(3, bad_argv), std::invalid_argument);
}
