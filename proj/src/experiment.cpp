#include "rsreg/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <limits>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace rsreg {

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

unsigned worker_count() {
    if (const char* env = std::getenv("RSREG_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

void apply_sweep(SweepVariable var, double value, SynthConfig& base, PipelineConfig& pipe) {
    switch (var) {
        case SweepVariable::n: base.n_pairs = static_cast<std::size_t>(value); break;
        case SweepVariable::o: base.outliers.o = static_cast<std::size_t>(value); break;
        case SweepVariable::s: base.s = static_cast<std::size_t>(value); break;
        case SweepVariable::sigma_star: base.noise.sigma_star = value; break;
        case SweepVariable::c_ini: pipe.c_ini = value; break;
    }
}

double parse_number(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("cannot parse number for " + what + ": '" + s + "'");
    }
}

Vector parse_number_list(const std::string& s, const std::string& what) {
    Vector out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(parse_number(tok, what));
    if (out.empty()) throw std::invalid_argument(what + " must be a nonempty list");
    return out;
}

// Pulls a key out of the map (so leftovers can be flagged as unknown).
class KvReader {
  public:
    explicit KvReader(std::map<std::string, std::string>& kv) : kv_(kv) {}

    bool take(const std::string& key, std::string& out) {
        auto it = kv_.find(key);
        if (it == kv_.end()) return false;
        out = it->second;
        kv_.erase(it);
        return true;
    }
    bool take_number(const std::string& key, double& out) {
        std::string s;
        if (!take(key, s)) return false;
        out = parse_number(s, key);
        return true;
    }
    bool take_count(const std::string& key, std::size_t& out) {
        double v;
        if (!take_number(key, v)) return false;
        if (v < 0 || v != std::floor(v))
            throw std::invalid_argument(key + " must be a nonnegative integer");
        out = static_cast<std::size_t>(v);
        return true;
    }

  private:
    std::map<std::string, std::string>& kv_;
};

NoiseFamily parse_family(const std::string& s) {
    if (s == "gaussian") return NoiseFamily::gaussian;
    if (s == "student_t") return NoiseFamily::student_t;
    if (s == "pareto_symmetric") return NoiseFamily::pareto_symmetric;
    if (s == "none") return NoiseFamily::none;
    throw std::invalid_argument("unknown noise family '" + s + "'");
}

void parse_synth_into(KvReader& r, const std::string& p, SynthConfig& cfg) {
    r.take_count(p + "n_pairs", cfg.n_pairs);
    r.take_count(p + "d", cfg.d);
    r.take_count(p + "s", cfg.s);
    r.take_number(p + "beta_scale", cfg.beta_scale);
    r.take_number(p + "mu_star", cfg.mu_star);
    std::size_t seed;
    if (r.take_count(p + "seed", seed)) cfg.seed = seed;

    std::string s;
    if (r.take(p + "cov.shape", s)) {
        if (s == "identity") cfg.covariate_cov.shape = CovShape::identity;
        else if (s == "diagonal") cfg.covariate_cov.shape = CovShape::diagonal;
        else if (s == "equicorrelated") cfg.covariate_cov.shape = CovShape::equicorrelated;
        else throw std::invalid_argument("unknown covariance shape '" + s + "'");
    }
    if (r.take(p + "cov.values", s))
        cfg.covariate_cov.diag_values = parse_number_list(s, p + "cov.values");
    r.take_number(p + "cov.rho_c", cfg.covariate_cov.rho_c);

    if (r.take(p + "noise.family", s)) cfg.noise.family = parse_family(s);
    r.take_number(p + "noise.sigma_star", cfg.noise.sigma_star);
    r.take_number(p + "noise.dof", cfg.noise.dof);
    r.take_number(p + "noise.tail_index", cfg.noise.tail_index);
    r.take_number(p + "noise.moment_order", cfg.noise.moment_order_M);
    if (cfg.noise.family == NoiseFamily::none) cfg.noise.sigma_star = 0.0;

    r.take_count(p + "outliers.o", cfg.outliers.o);
    if (r.take(p + "outliers.placement", s)) {
        if (s == "random_uniform") cfg.outliers.placement = OutlierPlacement::random_uniform;
        else if (s == "first_o") cfg.outliers.placement = OutlierPlacement::first_o;
        else if (s == "adversarial_leverage")
            cfg.outliers.placement = OutlierPlacement::adversarial_leverage;
        else throw std::invalid_argument("unknown outlier placement '" + s + "'");
    }
    if (r.take(p + "outliers.mode", s)) {
        if (s == "sqrt_n_scaled") cfg.outliers.magnitude_mode = OutlierMagnitudeMode::sqrt_n_scaled;
        else if (s == "absolute") cfg.outliers.magnitude_mode = OutlierMagnitudeMode::absolute;
        else throw std::invalid_argument("unknown outlier mode '" + s + "'");
    }
    r.take_number(p + "outliers.theta", cfg.outliers.theta_value);
    r.take_number(p + "outliers.value", cfg.outliers.absolute_value);
    if (r.take(p + "outliers.sign", s)) {
        if (s == "positive") cfg.outliers.sign = OutlierSign::positive;
        else if (s == "alternating") cfg.outliers.sign = OutlierSign::alternating;
        else if (s == "random") cfg.outliers.sign = OutlierSign::random;
        else throw std::invalid_argument("unknown outlier sign '" + s + "'");
    }
}

void parse_pipeline_into(KvReader& r, const std::string& p, PipelineConfig& cfg) {
    r.take_number(p + "c_ini", cfg.c_ini);
    r.take_number(p + "c_h", cfg.c_h);
    std::string s;
    if (r.take(p + "c_lambda", s)) {
        if (s == "auto") {
            cfg.c_lambda.mode = CLambdaMode::auto_from_data;
        } else {
            cfg.c_lambda.mode = CLambdaMode::explicit_value;
            cfg.c_lambda.value = parse_number(s, p + "c_lambda");
        }
    }
    r.take_number(p + "c_lambda_multiplier", cfg.c_lambda.multiplier);
    double v;
    if (r.take_number(p + "n_iter", v)) cfg.n_iter = static_cast<int>(v);
    r.take_number(p + "scale_rtol", cfg.scale_rtol);
    std::size_t c;
    if (r.take_count(p + "block_count", c)) cfg.block_count_override = c;

    if (r.take(p + "intercept.method", s)) {
        if (s == "sqrt_slope") cfg.intercept.kind = InterceptMethodKind::sqrt_slope;
        else if (s == "mom") cfg.intercept.kind = InterceptMethodKind::mom;
        else throw std::invalid_argument("unknown intercept method '" + s + "'");
    }
    if (r.take(p + "intercept.regime", s)) {
        if (s == "heavy") cfg.intercept.regime = IotaRegime::heavy;
        else if (s == "subgaussian") cfg.intercept.regime = IotaRegime::subgaussian;
        else throw std::invalid_argument("unknown intercept regime '" + s + "'");
    }
    r.take_number(p + "intercept.moment_order", cfg.intercept.moment_order_M);
    if (r.take_count(p + "intercept.known_o", c)) cfg.intercept.known_o = c;
    r.take_count(p + "intercept.known_o_upper", cfg.intercept.known_o_upper);
    r.take_number(p + "intercept.c_iota", cfg.intercept.solver.c_iota);
    if (r.take_number(p + "intercept.max_outer", v)) cfg.intercept.solver.max_outer = static_cast<int>(v);
    r.take_number(p + "intercept.rel_tol", cfg.intercept.solver.rel_tol);

    if (r.take_number(p + "solver.max_iters", v)) cfg.solver.max_iters = static_cast<int>(v);
    r.take_number(p + "solver.rel_obj_tol", cfg.solver.rel_obj_tol);
    if (r.take(p + "solver.step_rule", s)) {
        if (s == "fixed") cfg.solver.step_rule = StepRule::fixed_inverse_lipschitz;
        else if (s == "backtracking") cfg.solver.step_rule = StepRule::backtracking;
        else throw std::invalid_argument("unknown step rule '" + s + "'");
    }

    TheoryParams th;
    bool have_theory = false;
    have_theory |= r.take_number(p + "theory.rho", th.rho);
    have_theory |= r.take_number(p + "theory.kappa", th.kappa);
    have_theory |= r.take_number(p + "theory.L", th.L);
    have_theory |= r.take_count(p + "theory.s", th.s);
    have_theory |= r.take_count(p + "theory.o", th.o);
    have_theory |= r.take_number(p + "theory.delta", th.delta);
    if (have_theory) cfg.theory = th;
}

void reject_unknown(const std::map<std::string, std::string>& kv) {
    if (!kv.empty()) throw std::invalid_argument("unknown key '" + kv.begin()->first + "'");
}

}  // namespace

std::string to_string(SweepVariable v) {
    switch (v) {
        case SweepVariable::n: return "n";
        case SweepVariable::o: return "o";
        case SweepVariable::s: return "s";
        case SweepVariable::sigma_star: return "sigma_star";
        default: return "c_ini";
    }
}

void ExperimentPlan::validate() const {
    if (replications < 1) throw std::invalid_argument("replications must be >= 1");
    if (sweep_values.empty()) throw std::invalid_argument("sweep_values must be nonempty");
    for (std::size_t i = 1; i < sweep_values.size(); ++i)
        if (!(sweep_values[i] > sweep_values[i - 1]))
            throw std::invalid_argument("sweep_values must be strictly increasing");
    base.validate();
}

FitResult slope_ls_estimate(const Dataset& data, const PipelineConfig& cfg) {
    const Dataset norm = normalize_pairs(data);
    double c_lambda;
    try {
        c_lambda = cfg.c_lambda.mode == CLambdaMode::explicit_value
                       ? cfg.c_lambda.value
                       : auto_c_lambda(norm, cfg.c_lambda.multiplier,
                                       cfg.theory ? cfg.theory->L : 1.0);
    } catch (const std::invalid_argument&) {
        c_lambda = cfg.c_lambda.multiplier;
    }
    const SlopeWeights lam = lambda_weights(data.d(), norm.m());
    // Same n-scaled penalty convention as the adaptive pipeline, with the
    // scale frozen at c_ini (no Huber loss, no scale iteration).
    const double penalty = c_lambda * cfg.c_h * cfg.c_ini * static_cast<double>(norm.m());
    HuberFit fit = solve_penalized_least_squares(norm, penalty, lam, cfg.solver);

    FitResult out;
    out.beta_hat = std::move(fit.beta);
    out.varsigma_trace = {cfg.c_ini};
    out.iterations_used = 1;
    out.solver_diagnostics.push_back({"slope_ls", fit.diag.objective,
                                      to_string(fit.diag.termination), fit.diag.iterations});
    const Vector pred = matvec(data.X, out.beta_hat);
    double mean = 0.0;
    for (std::size_t i = 0; i < data.m(); ++i) mean += data.y[i] - pred[i];
    out.mu_hat = mean / static_cast<double>(data.m());
    return out;
}

std::vector<ExperimentRow> run_experiment(const ExperimentPlan& plan) {
    plan.validate();
    const std::size_t total = plan.sweep_values.size() * static_cast<std::size_t>(plan.replications);
    std::vector<ExperimentRow> rows(total);

    const auto task = [&](std::size_t idx) {
        const std::size_t vi = idx / plan.replications;
        const int rep = static_cast<int>(idx % plan.replications);
        ExperimentRow& row = rows[idx];
        row.sweep_value = plan.sweep_values[vi];
        row.rep = rep;
        row.seed = replication_seed(plan.base.seed, static_cast<std::uint64_t>(rep));
        const auto start = std::chrono::steady_clock::now();
        try {
            SynthConfig synth = plan.base;
            PipelineConfig pipe = plan.pipeline;
            apply_sweep(plan.sweep_variable, row.sweep_value, synth, pipe);
            synth.seed = row.seed;
            const SynthInstance inst = make_instance(synth);
            const FitResult fit = plan.estimator == EstimatorKind::adaptive
                                      ? adaptive_estimate(inst.data, pipe)
                                      : slope_ls_estimate(inst.data, pipe);
            const ErrorMetrics em = error_metrics(fit, inst.truth, inst.sigma);
            row.l2_error = em.l2_error;
            row.sigma_norm_error = em.sigma_norm_error;
            row.mu_error = em.mu_error;
            row.varsigma_final = fit.varsigma_trace.back();
            row.iterations = fit.iterations_used;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        row.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - start)
                          .count();
    };

    const unsigned workers = std::min<unsigned>(worker_count(), total);
    if (workers <= 1) {
        for (std::size_t i = 0; i < total; ++i) task(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1)) task(i);
            });
        for (auto& t : pool) t.join();
    }
    return rows;
}

void write_experiment_csv(std::ostream& os, const ExperimentPlan& plan,
                          const std::vector<ExperimentRow>& rows) {
    os << "sweep_value,rep,seed,l2_error,sigma_norm_error,mu_error,varsigma_final,iterations,"
          "wall_ms,error\n";
    for (const auto& r : rows) {
        os << format_double(r.sweep_value) << ',' << r.rep << ',' << r.seed << ','
           << format_double(r.l2_error) << ',' << format_double(r.sigma_norm_error) << ','
           << format_double(r.mu_error) << ',' << format_double(r.varsigma_final) << ','
           << r.iterations << ',' << r.wall_ms << ',' << r.error << '\n';
    }
    const auto family = [](NoiseFamily f) {
        switch (f) {
            case NoiseFamily::gaussian: return "gaussian";
            case NoiseFamily::student_t: return "student_t";
            case NoiseFamily::pareto_symmetric: return "pareto_symmetric";
            default: return "none";
        }
    };
    const auto placement = [](OutlierPlacement p) {
        switch (p) {
            case OutlierPlacement::random_uniform: return "random_uniform";
            case OutlierPlacement::first_o: return "first_o";
            default: return "adversarial_leverage";
        }
    };
    const auto sign = [](OutlierSign s) {
        switch (s) {
            case OutlierSign::positive: return "positive";
            case OutlierSign::alternating: return "alternating";
            default: return "random";
        }
    };
    const auto shape = [](CovShape s) {
        switch (s) {
            case CovShape::identity: return "identity";
            case CovShape::diagonal: return "diagonal";
            default: return "equicorrelated";
        }
    };
    const SynthConfig& b = plan.base;
    const PipelineConfig& p = plan.pipeline;
    os << "# plan: sweep_variable=" << to_string(plan.sweep_variable) << " sweep_values=";
    for (std::size_t i = 0; i < plan.sweep_values.size(); ++i)
        os << (i ? ";" : "") << format_double(plan.sweep_values[i]);
    os << " replications=" << plan.replications
       << " estimator=" << (plan.estimator == EstimatorKind::adaptive ? "adaptive" : "slope_ls")
       << " base.seed=" << b.seed << " base.n_pairs=" << b.n_pairs << " base.d=" << b.d
       << " base.s=" << b.s << " base.beta_scale=" << format_double(b.beta_scale)
       << " base.mu_star=" << format_double(b.mu_star)
       << " base.cov.shape=" << shape(b.covariate_cov.shape)
       << " base.noise.family=" << family(b.noise.family)
       << " base.noise.sigma_star=" << format_double(b.noise.sigma_star)
       << " base.outliers.o=" << b.outliers.o
       << " base.outliers.placement=" << placement(b.outliers.placement)
       << " base.outliers.mode="
       << (b.outliers.magnitude_mode == OutlierMagnitudeMode::sqrt_n_scaled ? "sqrt_n_scaled"
                                                                            : "absolute")
       << " base.outliers.theta=" << format_double(b.outliers.theta_value)
       << " base.outliers.sign=" << sign(b.outliers.sign)
       << " pipeline.c_ini=" << format_double(p.c_ini)
       << " pipeline.c_h=" << format_double(p.c_h) << " pipeline.c_lambda="
       << (p.c_lambda.mode == CLambdaMode::auto_from_data ? std::string("auto")
                                                          : format_double(p.c_lambda.value))
       << " pipeline.c_lambda_multiplier=" << format_double(p.c_lambda.multiplier)
       << " pipeline.n_iter=" << p.n_iter
       << " pipeline.scale_rtol=" << format_double(p.scale_rtol) << " pipeline.intercept.method="
       << (p.intercept.kind == InterceptMethodKind::sqrt_slope ? "sqrt_slope" : "mom")
       << " pipeline.intercept.regime="
       << (p.intercept.regime == IotaRegime::heavy ? "heavy" : "subgaussian");
    if (p.intercept.known_o) os << " pipeline.intercept.known_o=" << *p.intercept.known_o;
    os << '\n';
}

std::vector<ExperimentRow> run_experiment_to_file(const ExperimentPlan& plan,
                                                  const std::string& path_override) {
    std::vector<ExperimentRow> rows = run_experiment(plan);
    const std::string& path = path_override.empty() ? plan.output_path : path_override;
    if (path.empty()) throw std::invalid_argument("no output path given");
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open output file '" + path + "'");
    write_experiment_csv(os, plan, rows);
    return rows;
}

RateFitReport rate_fit(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3) throw std::invalid_argument("need at least 3 points");
    const std::size_t k = points.size();
    Vector lx(k), ly(k);
    RateFitReport rep;
    for (std::size_t i = 0; i < k; ++i) {
        if (!(points[i].first > 0.0) || !(points[i].second > 0.0))
            throw std::invalid_argument("rate fit needs positive x and errors");
        lx[i] = std::log(points[i].first);
        ly[i] = std::log(points[i].second);
        rep.per_point_medians.push_back(points[i].second);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < k; ++i) mx += lx[i], my += ly[i];
    mx /= static_cast<double>(k);
    my /= static_cast<double>(k);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("all x values coincide");
    rep.slope = sxy / sxx;
    rep.intercept = my - rep.slope * mx;
    double ssres = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double e = ly[i] - (rep.intercept + rep.slope * lx[i]);
        ssres += e * e;
    }
    rep.r_squared = syy == 0.0 ? 1.0 : std::clamp(1.0 - ssres / syy, 0.0, 1.0);
    return rep;
}

double predicted_rate(const TheoryParams& theory, std::size_t n, std::size_t d, RateRegime regime,
                      double moment_order_M) {
    theory.validate();
    if (theory.o >= n) throw std::invalid_argument("requires o < n");
    const double dn = static_cast<double>(n);
    const double ratio = static_cast<double>(theory.o) / dn;
    double outlier_term = 0.0;
    if (theory.o > 0) {
        const double log_no = std::log(dn / static_cast<double>(theory.o));
        switch (regime) {
            case RateRegime::heavy_unknown:
                outlier_term = std::pow(ratio, 1.0 - 2.0 / moment_order_M);
                break;
            case RateRegime::heavy_known:
                outlier_term = std::pow(ratio, 1.0 - 1.0 / moment_order_M);
                break;
            case RateRegime::subgauss_unknown:
                outlier_term = ratio * log_no;
                break;
            case RateRegime::subgauss_known:
                outlier_term = ratio * std::sqrt(log_no);
                break;
            case RateRegime::mom_known:
                outlier_term = std::sqrt(ratio);
                break;
        }
    }
    const double sparsity_term =
        theory.rho / theory.kappa *
        std::sqrt((1.0 + std::log(static_cast<double>(d) / static_cast<double>(theory.s))) / dn);
    const double conf_term = std::sqrt(std::log(1.0 / theory.delta) / dn);
    return sparsity_term + outlier_term + conf_term;
}

double median_of(Vector values) {
    if (values.empty()) throw std::invalid_argument("median of empty set");
    std::sort(values.begin(), values.end());
    const std::size_t k = values.size();
    return k % 2 == 1 ? values[k / 2] : 0.5 * (values[k / 2 - 1] + values[k / 2]);
}

std::map<std::string, std::string> read_key_value_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot open file '" + path + "'");
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    const auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(is, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": expected key = value");
        if (!kv.emplace(key, val).second)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": duplicate key '" +
                                        key + "'");
    }
    return kv;
}

ExperimentPlan parse_experiment_plan(std::map<std::string, std::string> kv) {
    ExperimentPlan plan;
    KvReader r(kv);
    std::string s;
    if (r.take("sweep_variable", s)) {
        if (s == "n") plan.sweep_variable = SweepVariable::n;
        else if (s == "o") plan.sweep_variable = SweepVariable::o;
        else if (s == "s") plan.sweep_variable = SweepVariable::s;
        else if (s == "sigma_star") plan.sweep_variable = SweepVariable::sigma_star;
        else if (s == "c_ini") plan.sweep_variable = SweepVariable::c_ini;
        else throw std::invalid_argument("unknown sweep variable '" + s + "'");
    }
    if (r.take("sweep_values", s)) plan.sweep_values = parse_number_list(s, "sweep_values");
    double v;
    if (r.take_number("replications", v)) plan.replications = static_cast<int>(v);
    if (r.take("estimator", s)) {
        if (s == "adaptive") plan.estimator = EstimatorKind::adaptive;
        else if (s == "slope_ls") plan.estimator = EstimatorKind::slope_ls;
        else throw std::invalid_argument("unknown estimator '" + s + "'");
    }
    r.take("output", plan.output_path);
    parse_synth_into(r, "base.", plan.base);
    parse_pipeline_into(r, "pipeline.", plan.pipeline);
    reject_unknown(kv);
    plan.validate();
    return plan;
}

PipelineConfig parse_pipeline_config(std::map<std::string, std::string> kv,
                                     const std::string& prefix) {
    PipelineConfig cfg;
    KvReader r(kv);
    parse_pipeline_into(r, prefix, cfg);
    reject_unknown(kv);
    return cfg;
}

std::size_t CsvTable::column_index(const std::string& name) const {
    for (std::size_t j = 0; j < columns.size(); ++j)
        if (columns[j] == name) return j;
    throw std::invalid_argument("CSV has no column named '" + name + "'");
}

namespace {

// Splits on commas keeping empty fields, including a trailing one.
std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

}  // namespace

CsvTable read_csv(std::istream& is, const std::string& name, bool strict) {
    CsvTable table;
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument(name + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    for (auto& cell : split_fields(line)) table.columns.push_back(cell);
    if (table.columns.size() == 1 && table.columns[0].empty())
        throw std::invalid_argument(name + ": empty header");

    std::size_t data_row = 0;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        ++data_row;
        const std::vector<std::string> cells = split_fields(line);
        if (cells.size() != table.columns.size())
            throw std::invalid_argument(name + ": row " + std::to_string(data_row) + " has " +
                                        std::to_string(cells.size()) + " cells, expected " +
                                        std::to_string(table.columns.size()));
        Vector row;
        row.reserve(cells.size());
        for (std::size_t col = 0; col < cells.size(); ++col) {
            try {
                row.push_back(parse_number(cells[col], "cell"));
            } catch (const std::exception&) {
                if (strict)
                    throw std::invalid_argument(name + ": non-numeric cell at row " +
                                                std::to_string(data_row) + ", column " +
                                                std::to_string(col + 1));
                row.push_back(std::numeric_limits<double>::quiet_NaN());
            }
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

CsvTable read_csv(const std::string& path, bool strict) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot open file '" + path + "'");
    return read_csv(is, path, strict);
}

Dataset dataset_from_table(const CsvTable& table) {
    const std::size_t yc = table.column_index("y");
    const std::size_t d = table.columns.size() - 1;
    if (d == 0) throw std::invalid_argument("CSV needs at least one feature column besides y");
    Dataset data;
    data.y.resize(table.rows.size());
    data.X = Matrix(table.rows.size(), d);
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        data.y[i] = table.rows[i][yc];
        std::size_t jj = 0;
        for (std::size_t j = 0; j < table.columns.size(); ++j)
            if (j != yc) data.X(i, jj++) = table.rows[i][j];
    }
    return data;
}

void write_dataset_csv(std::ostream& os, const Dataset& data) {
    os << "y";
    for (std::size_t j = 0; j < data.d(); ++j) os << ",x" << (j + 1);
    os << '\n';
    for (std::size_t i = 0; i < data.m(); ++i) {
        os << format_double(data.y[i]);
        for (std::size_t j = 0; j < data.d(); ++j) os << ',' << format_double(data.X(i, j));
        os << '\n';
    }
}

FitCommandResult fit_from_csv(const std::string& csv_path, const PipelineConfig& cfg) {
    Dataset data = dataset_from_table(read_csv(csv_path));
    FitCommandResult res;
    if (data.m() % 2 != 0) {
        data.y.pop_back();
        Matrix trimmed(data.X.rows() - 1, data.X.cols());
        for (std::size_t i = 0; i < trimmed.rows(); ++i)
            for (std::size_t j = 0; j < trimmed.cols(); ++j) trimmed(i, j) = data.X(i, j);
        data.X = std::move(trimmed);
        res.dropped_last_row = true;
    }
    res.rows_used = data.m();
    res.fit = adaptive_estimate(data, cfg);
    return res;
}

void print_fit_report(std::ostream& os, const FitResult& fit) {
    os << "mu_hat = " << format_double(fit.mu_hat) << '\n';
    os << "beta_hat =";
    for (double b : fit.beta_hat) os << ' ' << format_double(b);
    os << '\n';
    os << "iterations_used = " << fit.iterations_used << '\n';
    os << "varsigma_trace =";
    for (double v : fit.varsigma_trace) os << ' ' << format_double(v);
    os << '\n';
    for (const auto& d : fit.solver_diagnostics)
        os << "stage " << d.stage << ": objective=" << format_double(d.objective)
           << " termination=" << d.termination << " iterations=" << d.iterations << '\n';
}

}  // namespace rsreg
