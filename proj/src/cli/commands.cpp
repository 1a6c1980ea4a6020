#include "cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <utility>
#include <vector>

#include <json.hpp>

#include "isingrg/enumeration.hpp"
#include "isingrg/errors.hpp"
#include "isingrg/montecarlo.hpp"
#include "isingrg/rgflow.hpp"
#include "isingrg/ring.hpp"

namespace isingrg::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// One emitted document: echoed parameters, a rectangular table, scalar
// summary values and string notes (verdicts).
struct Document {
    std::string command;
    std::vector<std::pair<std::string, std::string>> params;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::pair<std::string, double>> summary;
    std::vector<std::pair<std::string, std::string>> notes;

    void param(const std::string& key, double v) { params.emplace_back(key, fmt(v)); }
    void param(const std::string& key, const std::string& v) { params.emplace_back(key, v); }
    void add(const std::string& key, double v) { summary.emplace_back(key, v); }
    void note(const std::string& key, const std::string& v) { notes.emplace_back(key, v); }
};

std::string to_csv(const Document& doc) {
    std::string out;
    for (std::size_t c = 0; c < doc.columns.size(); ++c) {
        if (c) out += ',';
        out += doc.columns[c];
    }
    out += '\n';
    for (const auto& row : doc.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += fmt(row[c]);
        }
        out += '\n';
    }
    out += "# command = " + doc.command + '\n';
    for (const auto& [k, v] : doc.params) out += "# " + k + " = " + v + '\n';
    for (const auto& [k, v] : doc.summary) out += "# " + k + " = " + fmt(v) + '\n';
    for (const auto& [k, v] : doc.notes) out += "# " + k + " = " + v + '\n';
    return out;
}

std::string to_json(const Document& doc) {
    ordered_json j;
    j["command"] = doc.command;
    ordered_json params = ordered_json::object();
    for (const auto& [k, v] : doc.params) params[k] = v;
    j["params"] = std::move(params);
    j["columns"] = doc.columns;
    ordered_json rows = ordered_json::array();
    for (const auto& row : doc.rows) rows.push_back(row);
    j["rows"] = std::move(rows);
    ordered_json summary = ordered_json::object();
    for (const auto& [k, v] : doc.summary) summary[k] = v;
    j["summary"] = std::move(summary);
    ordered_json notes = ordered_json::object();
    for (const auto& [k, v] : doc.notes) notes[k] = v;
    j["notes"] = std::move(notes);
    return j.dump(2) + "\n";
}

CommandOutcome render(const Document& doc, ConfigView& view, bool checks_passed) {
    const std::string format = view.get_string("format", "csv");
    const std::string output = view.get_string("output", "-");
    view.finish();
    CommandOutcome out;
    out.exit_code = checks_passed ? 0 : 1;
    out.output_path = output;
    if (format == "csv")
        out.document = to_csv(doc);
    else if (format == "json")
        out.document = to_json(doc);
    else
        throw std::invalid_argument("config: format must be csv or json");
    return out;
}

ObservableFn observable_from(ConfigView& view, const std::string& key) {
    const std::vector<double> v = view.get_double_list(key, {1.0, 1.0});
    if (v.size() != 2)
        throw std::invalid_argument("config: key '" + key + "' needs two values (plus, minus)");
    return {v[0], v[1]};
}

Schedule schedule_from(ConfigView& view) {
    const std::string kind = view.get_string("schedule", "constant");
    if (kind == "constant") return Schedule::constant(view.require_double("K"));
    if (kind == "geometric")
        return Schedule::geometric(view.require_double("K0"), view.get_double("q", 0.5));
    if (kind == "rgt") return Schedule::rgt_iterated(view.require_double("K0"));
    throw std::invalid_argument("config: schedule must be constant, geometric or rgt");
}

// Observable table over the observed sites: an explicit 2^m list, or the
// two-site product table built from f2 and g2.
std::vector<double> table_from(ConfigView& view, std::size_t n_sites_observed) {
    if (view.has("table")) {
        const std::vector<double> table = view.get_double_list("table", {});
        if (table.size() != (std::size_t{1} << n_sites_observed))
            throw std::invalid_argument("config: table length must be 2^(number of sites)");
        return table;
    }
    if (n_sites_observed != 2)
        throw std::invalid_argument(
            "config: an explicit table is required unless exactly two sites are observed");
    return two_site_table(observable_from(view, "f2"), observable_from(view, "g2"));
}

void append_schedule_params(Document& doc, const Schedule& s) {
    switch (s.kind()) {
        case Schedule::Kind::constant:
            doc.param("schedule", std::string("constant"));
            doc.param("K", s.base_coupling());
            break;
        case Schedule::Kind::geometric:
            doc.param("schedule", std::string("geometric"));
            doc.param("K0", s.base_coupling());
            doc.param("q", s.ratio());
            break;
        case Schedule::Kind::rgt_iterated:
            doc.param("schedule", std::string("rgt"));
            doc.param("K0", s.base_coupling());
            break;
    }
}

CommandOutcome cmd_correlation(ConfigView& view) {
    const double K = view.require_double("K");
    const double h = view.get_double("h", 0.0);
    const long long d_max = view.get_int("d_max", 10);
    if (d_max < 0 || d_max > 10000)
        throw std::invalid_argument("config: d_max must be in [0, 10000]");
    const Coupling c{K, h, 0.0};

    Document doc;
    doc.command = "correlation";
    doc.param("K", K);
    doc.param("h", h);
    doc.columns = {"K", "h", "d", "value"};
    for (long long d = 0; d <= d_max; ++d)
        doc.rows.push_back({K, h, static_cast<double>(d),
                            correlation_two_point(c, static_cast<int>(d))});
    return render(doc, view, true);
}

CommandOutcome cmd_observable(ConfigView& view) {
    const double K = view.require_double("K");
    const double h = view.get_double("h", 0.0);
    const Coupling c{K, h, 0.0};
    const ObservableFn f = observable_from(view, "f2");
    const ObservableFn g = observable_from(view, "g2");
    const std::string boundary = view.get_string("boundary", "periodic");
    const long long oracle_n = view.get_int("oracle", 0);
    bool passed = true;

    Document doc;
    doc.command = "observable";
    doc.param("K", K);
    doc.param("h", h);
    doc.param("f2", fmt(f.v_plus) + "," + fmt(f.v_minus));
    doc.param("g2", fmt(g.v_plus) + "," + fmt(g.v_minus));
    doc.param("boundary", boundary);

    if (boundary == "periodic") {
        const long long d = view.require_int("d");
        const TwoPointObservable closed = two_point_observable(c, f, g, static_cast<int>(d));
        doc.columns = {"d", "s_hat", "s_tilde", "s"};
        std::vector<double> row{static_cast<double>(d), closed.s_hat, closed.s_tilde, closed.s};
        if (oracle_n > 0) {
            const TwoPointObservable enumd =
                finite_ring_observable(c, f, g, 1, 1 + static_cast<int>(d),
                                       static_cast<int>(oracle_n));
            const double tol =
                5.0 * std::pow(std::tanh(K), static_cast<double>(oracle_n - d));
            const double err = std::abs(closed.s - enumd.s);
            doc.columns.insert(doc.columns.end(),
                               {"oracle_s_hat", "oracle_s_tilde", "oracle_s", "abs_err_s",
                                "tolerance"});
            row.insert(row.end(), {enumd.s_hat, enumd.s_tilde, enumd.s, err, tol});
            passed = err <= tol;
            doc.note("oracle_check", passed ? "PASS" : "FAIL");
        }
        doc.rows.push_back(std::move(row));
        return render(doc, view, passed);
    }

    if (boundary != "fixed" && boundary != "++" && boundary != "+-" && boundary != "-+" &&
        boundary != "--")
        throw std::invalid_argument(
            "config: boundary must be periodic, fixed, or one of ++ +- -+ --");
    const long long i = view.require_int("i");
    const long long j = view.require_int("j");
    const BoundaryLimitSet set =
        boundary_limit_observables(c, f, g, static_cast<int>(i), static_cast<int>(j));
    static constexpr int kS0[4] = {+1, -1, +1, -1};
    static constexpr int kSN1[4] = {+1, +1, -1, -1};
    doc.columns = {"s0", "sN1", "s_hat", "s_tilde", "s"};
    const bool with_oracle = oracle_n > 0;
    if (with_oracle) doc.columns.insert(doc.columns.end(), {"oracle_s_hat", "oracle_s", "abs_err_s"});
    const double tol = view.get_double("tolerance", 1e-2);
    double max_err = 0.0;
    for (int k = 0; k < 4; ++k) {
        std::vector<double> row{static_cast<double>(kS0[k]), static_cast<double>(kSN1[k]),
                                set.s_hat[static_cast<std::size_t>(k)],
                                set.s_tilde[static_cast<std::size_t>(k)],
                                set.s_hat[static_cast<std::size_t>(k)] -
                                    set.s_tilde[static_cast<std::size_t>(k)]};
        if (with_oracle) {
            const TwoPointObservable enumd = finite_open_chain_observable(
                c, f, g, static_cast<int>(i), static_cast<int>(j), static_cast<int>(oracle_n),
                kS0[k], kSN1[k]);
            const double err = std::abs(row[4] - enumd.s);
            max_err = std::max(max_err, err);
            row.insert(row.end(), {enumd.s_hat, enumd.s, err});
        }
        doc.rows.push_back(std::move(row));
    }
    doc.add("M11", set.M11);
    doc.add("M21", set.M21);
    doc.add("L11", set.L11);
    doc.add("L21", set.L21);
    doc.add("R11", set.R11);
    doc.add("R21", set.R21);
    doc.add("R_hat1", set.R_hat1);
    doc.add("R_hat2", set.R_hat2);
    if (with_oracle) {
        doc.add("max_abs_err_s", max_err);
        doc.add("tolerance", tol);
        passed = max_err <= tol;
        doc.note("oracle_check", passed ? "PASS" : "FAIL");
    }
    return render(doc, view, passed);
}

CommandOutcome cmd_rg_flow(ConfigView& view) {
    const double k0 = view.require_double("K0");
    const long long n = view.get_int("n", 12);
    if (n < 0 || n > 60) throw std::invalid_argument("config: n must be in [0, 60]");
    const long long dx = view.get_int("dx", 1);
    if (dx < 1) throw std::invalid_argument("config: dx must be >= 1");
    const ObservableFn f = observable_from(view, "f2");
    const ObservableFn g = observable_from(view, "g2");
    const double z = view.get_double("z", 1.0);
    const long long fit_from = view.get_int("fit_from", 4);

    const RgTrajectory traj = rg_trajectory(k0, static_cast<int>(n));
    const RemainderSeries corr =
        correlation_remainder(k0, 0, static_cast<int>(dx), static_cast<int>(n), z);
    const ObservableRemainders obs =
        observable_remainders(k0, f, g, 0, static_cast<int>(dx), static_cast<int>(n), z);

    Document doc;
    doc.command = "rg-flow";
    doc.param("K0", k0);
    doc.param("dx", static_cast<double>(dx));
    doc.param("z", z);
    doc.param("f2", fmt(f.v_plus) + "," + fmt(f.v_minus));
    doc.param("g2", fmt(g.v_plus) + "," + fmt(g.v_minus));
    doc.columns = {"n", "K_n", "S_n", "O_hat_n", "O_tilde_n", "O_n"};
    for (long long m = 0; m <= n; ++m) {
        const auto mi = static_cast<std::size_t>(m);
        doc.rows.push_back({static_cast<double>(m), traj.k_values[mi], corr.values[mi],
                            obs.hat.values[mi], obs.tilde.values[mi], obs.full.values[mi]});
    }
    const auto add_rate = [&](const char* key, const RemainderSeries& series) {
        try {
            doc.add(key, decay_rate_fit(series, static_cast<int>(fit_from)));
        } catch (const std::domain_error&) {
            doc.note(key, "unavailable (fewer than three usable points)");
        }
    };
    add_rate("rate_correlation", corr);
    add_rate("rate_hat", obs.hat);
    add_rate("rate_tilde", obs.tilde);
    return render(doc, view, true);
}

CommandOutcome cmd_spectrum(ConfigView& view) {
    DynamicsParams params;
    params.gamma = view.get_double("gamma", 0.0);
    params.noise_scale = view.get_double("noise_scale", 1.0);
    const long long m = view.get_int("m", 2);
    if (m < 1 || m > 8) throw std::invalid_argument("config: m must be in [1, 8]");
    const double epsilon = view.get_double("epsilon", 1e-10);
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("config: epsilon must be in (0, 1)");

    const TransferDeterminedMatrix mat = build_transfer_determined(params, static_cast<int>(m));
    const std::vector<double> eig = spectrum_check(mat);
    double subdominant = 0.0;
    for (std::size_t k = 1; k < eig.size(); ++k) subdominant = std::max(subdominant, std::abs(eig[k]));
    const double horizon =
        subdominant > 0.0 ? std::ceil(std::log(epsilon) / std::log(subdominant)) : 1.0;

    Document doc;
    doc.command = "spectrum";
    doc.param("gamma", params.gamma);
    doc.param("noise_scale", params.noise_scale);
    doc.param("m", static_cast<double>(m));
    doc.param("epsilon", epsilon);
    doc.columns = {"index", "eigenvalue"};
    for (std::size_t k = 0; k < eig.size(); ++k)
        doc.rows.push_back({static_cast<double>(k), eig[k]});
    doc.add("subdominant_modulus", subdominant);
    doc.add("horizon", horizon);
    return render(doc, view, true);
}

RingDistribution initial_distribution(ConfigView& view, int n_sites) {
    const std::string init = view.get_string("init", "gibbs");
    if (init == "gibbs") return gibbs_initial_distribution(view.get_double("init_K", 1.0), n_sites);
    if (init == "all_plus") return point_mass_all_plus(n_sites);
    if (init == "uniform") return uniform_ring_distribution(n_sites);
    throw std::invalid_argument("config: init must be gibbs, all_plus or uniform");
}

CommandOutcome cmd_evolve(ConfigView& view) {
    const long long n = view.require_int("N");
    const long long steps = view.require_int("T");
    if (steps < 1 || steps > 100000) throw std::invalid_argument("config: T must be in [1, 100000]");
    DynamicsParams params;
    params.gamma = view.get_double("gamma", 0.0);
    params.noise_scale = view.get_double("noise_scale", 1.0);
    const Schedule schedule = schedule_from(view);
    const std::vector<int> sites = view.get_int_list("sites", {});
    if (sites.empty()) throw std::invalid_argument("config: missing required key 'sites'");
    const std::vector<double> table = table_from(view, sites.size());
    RingDistribution init = initial_distribution(view, static_cast<int>(n));

    const EvolveResult res = exact_ring_evolve(params, schedule, std::move(init),
                                               static_cast<int>(steps), sites, table);

    Document doc;
    doc.command = "evolve";
    doc.param("N", static_cast<double>(n));
    doc.param("T", static_cast<double>(steps));
    doc.param("gamma", params.gamma);
    doc.param("noise_scale", params.noise_scale);
    append_schedule_params(doc, schedule);
    doc.columns = {"t", "K_t", "s_hat", "s_tilde", "s", "mean", "gap"};
    for (const EvolveRow& row : res.rows)
        doc.rows.push_back({static_cast<double>(row.t), row.coupling, row.s_hat, row.s_tilde,
                            row.s, row.mean, std::abs(row.s - res.limit_s)});
    doc.add("limit_s_hat", res.limit_s_hat);
    doc.add("limit_s_tilde", res.limit_s_tilde);
    doc.add("limit_s", res.limit_s);
    doc.add("limit_mean", res.limit_mean);
    doc.add("final_gap", std::abs(res.rows.back().s - res.limit_s));
    return render(doc, view, true);
}

CommandOutcome cmd_simulate(ConfigView& view) {
    McConfig cfg;
    cfg.n_sites = static_cast<int>(view.require_int("N"));
    cfg.steps = static_cast<int>(view.require_int("T"));
    cfg.replicas = view.require_int("replicas");
    cfg.seed = static_cast<std::uint64_t>(view.require_int("seed"));
    cfg.sites = view.get_int_list("sites", {});
    cfg.f_table = table_from(view, cfg.sites.size());
    const std::string init = view.get_string("init", "gibbs");
    if (init == "gibbs")
        cfg.init = McInit::gibbs;
    else if (init == "all_plus")
        cfg.init = McInit::all_plus;
    else
        throw std::invalid_argument("config: init must be gibbs or all_plus");
    cfg.init_coupling = view.get_double("init_K", 1.0);
    cfg.checkpoint_stride = static_cast<int>(view.get_int("checkpoint_stride", 0));
    cfg.budget = view.get_double("budget", kDefaultMcBudget);
    if (const char* env = std::getenv("ISING_RG_BUDGET"))
        cfg.budget = parse_double("ISING_RG_BUDGET", env);

    DynamicsParams params;
    params.gamma = view.get_double("gamma", 0.0);
    params.noise_scale = view.get_double("noise_scale", 1.0);
    const Schedule schedule = schedule_from(view);

    const McResult res = mc_simulate(params, schedule, cfg);

    Document doc;
    doc.command = "simulate";
    doc.param("N", static_cast<double>(cfg.n_sites));
    doc.param("T", static_cast<double>(cfg.steps));
    doc.param("replicas", static_cast<double>(cfg.replicas));
    doc.param("seed", static_cast<double>(cfg.seed));
    doc.param("gamma", params.gamma);
    doc.param("noise_scale", params.noise_scale);
    doc.param("init", init);
    append_schedule_params(doc, schedule);
    doc.columns = {"t",       "K_t",       "s_hat", "s_hat_err", "s_tilde", "s_tilde_err",
                   "s",       "s_err",     "mean",  "mean_err",  "connected", "connected_err"};
    for (const McCheckpoint& cp : res.checkpoints)
        doc.rows.push_back({static_cast<double>(cp.t), cp.coupling, cp.s_hat.value,
                            cp.s_hat.std_error, cp.s_tilde.value, cp.s_tilde.std_error,
                            cp.s.value, cp.s.std_error, cp.mean.value, cp.mean.std_error,
                            cp.connected.value, cp.connected.std_error});
    doc.add("limit_s_hat", res.limit_s_hat);
    doc.add("limit_s_tilde", res.limit_s_tilde);
    doc.add("limit_s", res.limit_s);
    doc.add("limit_mean", res.limit_mean);

    const McCheckpoint& last = res.checkpoints.back();
    const double dev_s = std::abs(last.s.value - res.limit_s);
    const bool pass_s = last.s.std_error == 0.0 ? dev_s == 0.0 : dev_s <= 3.0 * last.s.std_error;
    doc.add("final_abs_dev_s", dev_s);
    doc.note("verdict_s", pass_s ? "PASS" : "FAIL");
    bool pass_conn = true;
    if (cfg.sites.size() >= 2) {
        pass_conn = std::abs(last.connected.value) <= 3.0 * last.connected.std_error;
        doc.note("verdict_connected", pass_conn ? "PASS" : "FAIL");
    }
    const bool passed = pass_s && pass_conn;
    doc.note("verdict", passed ? "PASS" : "FAIL");
    return render(doc, view, passed);
}

CommandOutcome cmd_free_energy(ConfigView& view) {
    const double K = view.require_double("K");
    const Coupling c{K, 0.0, 0.0};
    const double free_energy = free_energy_density(c);

    Document doc;
    doc.command = "free-energy";
    doc.param("K", K);
    doc.add("free_energy", free_energy);
    const long long n = view.get_int("N", 0);
    doc.columns = {"s0", "sN1", "log_z_over_len", "gap"};
    if (n > 0) {
        static constexpr int kS0[4] = {+1, -1, +1, -1};
        static constexpr int kSN1[4] = {+1, +1, -1, -1};
        for (int k = 0; k < 4; ++k) {
            const double z = fixed_boundary_partition(c, static_cast<int>(n), kS0[k], kSN1[k]);
            const double density = std::log(z) / static_cast<double>(n + 1);
            doc.rows.push_back({static_cast<double>(kS0[k]), static_cast<double>(kSN1[k]), density,
                                std::abs(density - free_energy)});
        }
    }
    return render(doc, view, true);
}

}  // namespace

CommandOutcome run_command(const RawConfig& raw) {
    ConfigView view(raw.values);
    if (raw.command == "correlation") return cmd_correlation(view);
    if (raw.command == "observable") return cmd_observable(view);
    if (raw.command == "rg-flow") return cmd_rg_flow(view);
    if (raw.command == "spectrum") return cmd_spectrum(view);
    if (raw.command == "evolve") return cmd_evolve(view);
    if (raw.command == "simulate") return cmd_simulate(view);
    if (raw.command == "free-energy") return cmd_free_energy(view);
    throw std::invalid_argument(
        "unknown command '" + raw.command +
        "' (expected correlation, observable, rg-flow, spectrum, evolve, simulate, free-energy)");
}

int exit_code_for_current_exception() {
    try {
        throw;
    } catch (const resource_error&) {
        return 3;
    } catch (const numeric_error&) {
        return 4;
    } catch (const std::exception&) {
        return 2;
    }
}

}  // namespace isingrg::cli
