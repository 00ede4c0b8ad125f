#include <cstdint>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rsreg/experiment.hpp"

namespace {

// Exit codes: 0 success, 1 usage error, 2 data error, 3 internal solver failure.
constexpr int kUsageError = 1;
constexpr int kDataError = 2;
constexpr int kSolverError = 3;

int cmd_run(const std::string& plan_path, const std::string& out_path) {
    rsreg::ExperimentPlan plan;
    try {
        plan = rsreg::parse_experiment_plan(rsreg::read_key_value_file(plan_path));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDataError;
    }
    try {
        const auto rows = rsreg::run_experiment_to_file(plan, out_path);
        std::size_t failed = 0;
        for (const auto& r : rows)
            if (!r.error.empty()) ++failed;
        std::cerr << rows.size() << " rows written";
        if (failed) std::cerr << " (" << failed << " with per-row errors)";
        std::cerr << '\n';
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kSolverError;
    }
}

int cmd_fit(const std::string& csv_path, const std::string& config_path,
            const std::string& intercept, long known_o) {
    rsreg::PipelineConfig cfg;
    try {
        if (!config_path.empty())
            cfg = rsreg::parse_pipeline_config(rsreg::read_key_value_file(config_path));
        if (intercept == "sqrt") cfg.intercept.kind = rsreg::InterceptMethodKind::sqrt_slope;
        else if (intercept == "mom") cfg.intercept.kind = rsreg::InterceptMethodKind::mom;
        else if (!intercept.empty()) throw std::invalid_argument("--intercept must be sqrt or mom");
        if (known_o >= 0) {
            cfg.intercept.known_o = static_cast<std::size_t>(known_o);
            cfg.intercept.known_o_upper = static_cast<std::size_t>(known_o);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    }
    try {
        const auto res = rsreg::fit_from_csv(csv_path, cfg);
        if (res.dropped_last_row)
            std::cerr << "warning: dropped 1 row (odd row count, pair differencing needs an even"
                         " count); proceeding with "
                      << res.rows_used << '\n';
        rsreg::print_fit_report(std::cout, res.fit);
        return 0;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDataError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kSolverError;
    }
}

int cmd_ratefit(const std::string& results_path, const std::string& x_name,
                const std::string& y_name) {
    try {
        const rsreg::CsvTable table = rsreg::read_csv(results_path, false);
        // The sweep column is always written as `sweep_value`; accept the
        // sweep variable's name as an alias.
        std::size_t xc;
        try {
            xc = table.column_index(x_name);
        } catch (const std::invalid_argument&) {
            xc = table.column_index("sweep_value");
        }
        const std::size_t yc = table.column_index(y_name);

        std::map<double, rsreg::Vector> groups;
        for (const auto& row : table.rows) groups[row[xc]].push_back(row[yc]);
        if (groups.size() < 3)
            throw std::invalid_argument("need at least 3 distinct sweep values");
        std::vector<std::pair<double, double>> points;
        for (auto& [x, errs] : groups) points.emplace_back(x, rsreg::median_of(std::move(errs)));

        const rsreg::RateFitReport rep = rsreg::rate_fit(points);
        std::cout << "points = " << points.size() << '\n';
        for (const auto& [x, med] : points)
            std::cout << "median(" << y_name << " | " << x_name << "=" << x << ") = " << med
                      << '\n';
        std::cout << "slope = " << rep.slope << '\n';
        std::cout << "intercept = " << rep.intercept << '\n';
        std::cout << "r_squared = " << rep.r_squared << '\n';
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDataError;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rsreg: robust sparse regression experiments"};
    app.require_subcommand(1);

    std::string plan_path, out_path;
    auto* run = app.add_subcommand("run", "run a Monte-Carlo sweep from a plan file");
    run->add_option("plan", plan_path, "plan file (key = value)")->required();
    run->add_option("--out", out_path, "output CSV path (overrides plan's output)");

    std::string csv_path, config_path, intercept;
    long known_o = -1;
    auto* fit = app.add_subcommand("fit", "fit a CSV dataset (y column + features)");
    fit->add_option("data", csv_path, "data CSV")->required();
    fit->add_option("--config", config_path, "pipeline config file");
    fit->add_option("--intercept", intercept, "intercept method: sqrt or mom");
    fit->add_option("--known-o", known_o, "known outlier count for the intercept stage");

    std::string results_path, x_name = "n", y_name = "l2_error";
    auto* ratefit = app.add_subcommand("ratefit", "fit a power-law exponent to sweep results");
    ratefit->add_option("results", results_path, "results CSV from `rsreg run`")->required();
    ratefit->add_option("--x", x_name, "sweep variable name (default n)");
    ratefit->add_option("--y", y_name, "error column (default l2_error)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsageError;
    }

    if (run->parsed()) return cmd_run(plan_path, out_path);
    if (fit->parsed()) return cmd_fit(csv_path, config_path, intercept, known_o);
    return cmd_ratefit(results_path, x_name, y_name);
}
