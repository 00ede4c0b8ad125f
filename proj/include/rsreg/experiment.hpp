#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rsreg/pipeline.hpp"
#include "rsreg/synth.hpp"

namespace rsreg {

enum class SweepVariable { n, o, s, sigma_star, c_ini };
enum class EstimatorKind { adaptive, slope_ls };

std::string to_string(SweepVariable v);

struct ExperimentPlan {
    SweepVariable sweep_variable = SweepVariable::n;
    Vector sweep_values;  // nonempty, strictly increasing
    int replications = 1;
    SynthConfig base;
    PipelineConfig pipeline;
    EstimatorKind estimator = EstimatorKind::adaptive;
    std::string output_path;

    void validate() const;
};

struct ExperimentRow {
    double sweep_value = 0.0;
    int rep = 0;
    std::uint64_t seed = 0;
    double l2_error = 0.0;
    double sigma_norm_error = 0.0;
    double mu_error = 0.0;
    double varsigma_final = 0.0;
    int iterations = 0;
    std::int64_t wall_ms = 0;
    std::string error;  // empty on success
};

/// One row per (sweep value, replication), in that order. Replications run
/// in parallel (RSREG_THREADS caps the worker count, default all cores);
/// output order and content are independent of scheduling. Per-row failures
/// are recorded in the error column and do not abort the run.
std::vector<ExperimentRow> run_experiment(const ExperimentPlan& plan);

void write_experiment_csv(std::ostream& os, const ExperimentPlan& plan,
                          const std::vector<ExperimentRow>& rows);

/// Convenience: run and write plan.output_path (or the override, if nonempty).
std::vector<ExperimentRow> run_experiment_to_file(const ExperimentPlan& plan,
                                                  const std::string& path_override = "");

/// Baseline for comparisons: SLOPE least squares with the fixed penalty
/// c_lambda * c_h * c_ini (no Huber loss, no scale iteration) on the
/// differenced data, intercept by the plain mean residual.
FitResult slope_ls_estimate(const Dataset& data, const PipelineConfig& cfg);

struct RateFitReport {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    Vector per_point_medians;
};

/// OLS of log(error) on log(x); slope is the fitted exponent.
RateFitReport rate_fit(const std::vector<std::pair<double, double>>& points);

enum class RateRegime { heavy_unknown, heavy_known, subgauss_unknown, subgauss_known, mom_known };

/// Theoretical rate expression (without its unknowable leading constant);
/// diagnostic overlay only.
double predicted_rate(const TheoryParams& theory, std::size_t n, std::size_t d, RateRegime regime,
                      double moment_order_M = 3.0);

double median_of(Vector values);

// ---- file formats ------------------------------------------------------

/// Flat key = value file; '#' starts a comment. Unknown keys are errors
/// (checked by the consuming builder).
std::map<std::string, std::string> read_key_value_file(const std::string& path);

ExperimentPlan parse_experiment_plan(std::map<std::string, std::string> kv);
PipelineConfig parse_pipeline_config(std::map<std::string, std::string> kv,
                                     const std::string& prefix = "");

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<Vector> rows;

    std::size_t column_index(const std::string& name) const;  // throws if absent
};

/// CSV with a header row. In strict mode a non-numeric cell is an error that
/// names the data row and column (1-based); in lenient mode it becomes NaN
/// (for result files, whose error column holds text).
CsvTable read_csv(const std::string& path, bool strict = true);
CsvTable read_csv(std::istream& is, const std::string& name, bool strict = true);

/// Dataset from a table with a `y` column; remaining columns are features.
Dataset dataset_from_table(const CsvTable& table);

void write_dataset_csv(std::ostream& os, const Dataset& data);

struct FitCommandResult {
    FitResult fit;
    std::size_t rows_used = 0;
    bool dropped_last_row = false;
};

/// Ingests a data CSV and runs adaptive_estimate. An odd row count drops the
/// last row (reported via dropped_last_row).
FitCommandResult fit_from_csv(const std::string& csv_path, const PipelineConfig& cfg);

void print_fit_report(std::ostream& os, const FitResult& fit);

}  // namespace rsreg
