#include "osgpcp/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "osgpcp/errors.hpp"
#include "osgpcp/osgp.hpp"

namespace osgpcp {

namespace {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string slot_context(std::size_t t, const std::exception& e) {
    return "slot " + std::to_string(t) + ": " + e.what();
}

struct MethodColumns {
    bool TraceRow::*covered;
    double TraceRow::*size;
};

MethodColumns method_columns(const std::string& method) {
    if (method == "bayes") return {&TraceRow::bayes_cov, &TraceRow::bayes_size};
    if (method == "standard_cp") return {&TraceRow::scp_cov, &TraceRow::scp_size};
    if (method == "osgpcp") return {&TraceRow::acp_cov, &TraceRow::acp_size};
    throw InputError("unknown method '" + method + "' (expected bayes, standard_cp or osgpcp)");
}

}  // namespace

const char* const kTraceHeader =
    "t,y_true,bayes_lo,bayes_hi,bayes_cov,bayes_size,scp_lo,scp_hi,scp_cov,scp_size,"
    "acp_lo,acp_hi,acp_cov,acp_size,acp_empty,q_t,eta_t,reset";

std::string to_string(EtaMode mode) {
    return mode == EtaMode::Constant ? "constant" : "decaying_with_reset";
}

std::string to_string(Dataset dataset) {
    switch (dataset) {
        case Dataset::Iid: return "iid";
        case Dataset::Shift: return "shift";
        case Dataset::Csv: return "csv";
    }
    return "unknown";
}

void ExperimentConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("config: alpha must lie in (0, 1)");
    if (num_features == 0) throw InputError("config: feature count D must be >= 1");
    if (!(eta_const > 0.0)) throw InputError("config: constant learning rate must be positive");
    if (!(clip_bound > 0.0)) throw InputError("config: clip bound B must be positive");
    if (window == 0 || consecutive == 0) throw InputError("config: window and consecutive count must be >= 1");
    if (warmup == 0 && !fixed_hyperparams) {
        throw InputError("config: warm-up of 0 requires fixed hyperparameters");
    }
    if (fixed_hyperparams) fixed_hyperparams->validate();
}

Stream load_dataset(const ExperimentConfig& config) {
    switch (config.dataset) {
        case Dataset::Iid: return gen_iid(config.n, config.seed_data);
        case Dataset::Shift: return gen_shift(config.n, config.seed_data, config.shift_slot);
        case Dataset::Csv:
            return load_csv(config.csv_path, config.csv_features, config.csv_target,
                            CsvOptions{config.csv_delimiter});
    }
    throw InputError("config: unknown dataset");
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    return run_experiment(config, load_dataset(config));
}

ExperimentResult run_experiment(const ExperimentConfig& config, const Stream& stream) {
    config.validate();
    if (config.warmup >= stream.size()) {
        throw InputError("config: warm-up (" + std::to_string(config.warmup) +
                         ") must be shorter than the stream (" + std::to_string(stream.size()) + ")");
    }

    ExperimentResult result;
    result.config = config;
    result.stream_length = stream.size();
    result.input_dim = static_cast<std::size_t>(stream.front().x.size());

    // Phase 1: fit on the warm-up records, then replay them through the online model.
    if (config.fixed_hyperparams) {
        result.hyperparams = *config.fixed_hyperparams;
        result.log_evidence = std::numeric_limits<double>::quiet_NaN();
    } else {
        TrainingBuffer buffer;
        for (std::size_t i = 0; i < config.warmup; ++i) buffer.add(stream[i].x, stream[i].y);
        const FitResult fit = fit_hyperparams(buffer, config.search);
        result.hyperparams = fit.params;
        result.log_evidence = fit.log_evidence;
    }
    const KernelHyperparams& hp = result.hyperparams;
    const double sn2 = hp.sigma_n2;

    const RFMap rf = sample_frequencies(hp, config.num_features, result.input_dim, config.seed_features);
    PosteriorState posterior = init_state(hp, config.num_features);
    // Standard CP keeps raw scores: the quantile of clipped scores is the clipped
    // raw quantile, which would inflate the set whenever the raw quantile is negative.
    ScoreHistory history;

    for (std::size_t i = 0; i < config.warmup; ++i) {
        const auto& rec = stream[i];
        try {
            const Eigen::VectorXd phi = feature_map(rec.x, rf);
            history.add(nll_score_raw(predict(posterior, phi, sn2), rec.y));
            update_in_place(posterior, phi, rec.y, sn2);
        } catch (const InputError& e) {
            throw InputError(slot_context(rec.t, e));
        }
    }

    AdaptiveState acp;
    acp.alpha = config.alpha;
    acp.bound = config.clip_bound;
    acp.eta_mode = config.eta_mode;
    acp.eta_const = config.eta_const;
    acp.detector = ChangePointDetector(config.window, config.consecutive);
    // Clamping the raw quantile equals the quantile of the clipped scores.
    acp.q = config.warmup > 0 ? std::clamp(standard_cp_quantile(history, config.alpha), 0.0, config.clip_bound)
                              : config.clip_bound / 2.0;
    acp.validate();
    result.q0 = acp.q;

    // Phase 2: predict, build all sets from one predictive, then consume the label.
    result.rows.reserve(stream.size() - config.warmup);
    for (std::size_t i = config.warmup; i < stream.size(); ++i) {
        const auto& rec = stream[i];
        try {
            const Eigen::VectorXd phi = feature_map(rec.x, rf);
            const PredictiveGaussian pred = predict(posterior, phi, sn2);

            const IntervalSet bayes = bayes_credible_set(pred, 1.0 - config.alpha);
            const IntervalSet scp = invert_score(pred, standard_cp_quantile(history, config.alpha));
            const double q_t = acp.q;
            const IntervalSet adaptive = invert_score(pred, q_t);

            TraceRow row;
            row.t = rec.t;
            row.y_true = rec.y;
            row.bayes_lo = bayes.lower();
            row.bayes_hi = bayes.upper();
            row.bayes_cov = bayes.contains(rec.y);
            row.bayes_size = bayes.size();
            row.scp_lo = scp.lower();
            row.scp_hi = scp.upper();
            row.scp_cov = scp.contains(rec.y);
            row.scp_size = scp.size();
            row.acp_lo = adaptive.lower();
            row.acp_hi = adaptive.upper();
            row.acp_cov = adaptive.contains(rec.y);
            row.acp_size = adaptive.size();
            row.acp_empty = adaptive.empty;
            row.q_t = q_t;

            history.add(nll_score_raw(pred, rec.y));
            const AdaptiveStepReport step = adaptive_step(acp, row.acp_cov, row.acp_size);
            row.eta_t = step.eta;
            row.reset = step.reset_fired;
            update_in_place(posterior, phi, rec.y, sn2);

            result.rows.push_back(row);
        } catch (const InputError& e) {
            throw InputError(slot_context(rec.t, e));
        } catch (const NumericalError& e) {
            throw NumericalError(slot_context(rec.t, e));
        }
    }
    return result;
}

std::vector<double> running_coverage(const std::vector<TraceRow>& rows, const std::string& method) {
    const MethodColumns cols = method_columns(method);
    if (rows.empty()) {
        throw InputError("running_coverage: no trace rows");
    }
    std::vector<double> out;
    out.reserve(rows.size());
    std::size_t hits = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        hits += rows[i].*cols.covered ? 1 : 0;
        out.push_back(static_cast<double>(hits) / static_cast<double>(i + 1));
    }
    return out;
}

void write_trace(const std::vector<TraceRow>& rows, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open trace file for writing: " + path.string());
    }
    out << kTraceHeader << '\n';
    const auto d = [](double v) { return format_double(v); };
    for (const auto& r : rows) {
        out << r.t << ',' << d(r.y_true) << ',' << d(r.bayes_lo) << ',' << d(r.bayes_hi) << ','
            << int(r.bayes_cov) << ',' << d(r.bayes_size) << ',' << d(r.scp_lo) << ',' << d(r.scp_hi) << ','
            << int(r.scp_cov) << ',' << d(r.scp_size) << ',' << d(r.acp_lo) << ',' << d(r.acp_hi) << ','
            << int(r.acp_cov) << ',' << d(r.acp_size) << ',' << int(r.acp_empty) << ',' << d(r.q_t) << ','
            << d(r.eta_t) << ',' << int(r.reset) << '\n';
    }
    if (!out) {
        throw IoError("failed writing trace file: " + path.string());
    }
}

std::vector<TraceRow> read_trace(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open trace file: " + path.string());
    }
    std::string line;
    if (!std::getline(in, line) || line != kTraceHeader) {
        throw InputError("trace file has an unexpected header: " + path.string());
    }
    std::vector<TraceRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<double> v;
        std::istringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            char* end = nullptr;
            const double x = std::strtod(cell.c_str(), &end);
            if (cell.empty() || end != cell.c_str() + cell.size()) {
                throw InputError("trace file line " + std::to_string(line_no) + ": non-numeric cell '" +
                                 cell + "'");
            }
            v.push_back(x);
        }
        if (v.size() != 18) {
            throw InputError("trace file line " + std::to_string(line_no) + ": expected 18 columns");
        }
        TraceRow r;
        r.t = static_cast<std::size_t>(v[0]);
        r.y_true = v[1];
        r.bayes_lo = v[2];
        r.bayes_hi = v[3];
        r.bayes_cov = v[4] != 0.0;
        r.bayes_size = v[5];
        r.scp_lo = v[6];
        r.scp_hi = v[7];
        r.scp_cov = v[8] != 0.0;
        r.scp_size = v[9];
        r.acp_lo = v[10];
        r.acp_hi = v[11];
        r.acp_cov = v[12] != 0.0;
        r.acp_size = v[13];
        r.acp_empty = v[14] != 0.0;
        r.q_t = v[15];
        r.eta_t = v[16];
        r.reset = v[17] != 0.0;
        rows.push_back(r);
    }
    return rows;
}

std::filesystem::path sidecar_path(const std::filesystem::path& trace_path) {
    return std::filesystem::path(trace_path.string() + ".json");
}

std::vector<MethodSummary> summarize(const std::vector<TraceRow>& rows) {
    std::vector<MethodSummary> out;
    for (const std::string method : {"bayes", "standard_cp", "osgpcp"}) {
        const MethodColumns cols = method_columns(method);
        MethodSummary s;
        s.method = method;
        std::size_t hits = 0, finite = 0;
        double size_sum = 0.0;
        for (const auto& r : rows) {
            hits += r.*cols.covered ? 1 : 0;
            const double size = r.*cols.size;
            if (std::isfinite(size)) {
                size_sum += size;
                ++finite;
            } else {
                ++s.infinite_sets;
            }
            if (method == "osgpcp" ? r.acp_empty : size == 0.0) ++s.empty_sets;
        }
        s.final_coverage = rows.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(rows.size());
        s.mean_size = finite ? size_sum / static_cast<double>(finite) : 0.0;
        out.push_back(s);
    }
    return out;
}

void write_sidecar(const ExperimentResult& result, const std::filesystem::path& path) {
    using nlohmann::json;
    const ExperimentConfig& c = result.config;
    json cfg = {
        {"dataset", to_string(c.dataset)},
        {"alpha", c.alpha},
        {"features_D", c.num_features},
        {"warmup", c.warmup},
        {"eta_mode", to_string(c.eta_mode)},
        {"eta_const", c.eta_const},
        {"window_W", c.window},
        {"consecutive_r", c.consecutive},
        {"clip_bound_B", c.clip_bound},
        {"seed_features", c.seed_features},
        {"seed_data", c.seed_data},
        {"stream_length", result.stream_length},
        {"input_dim", result.input_dim},
    };
    if (c.dataset == Dataset::Csv) {
        cfg["csv_path"] = c.csv_path.string();
        cfg["csv_features"] = c.csv_features;
        cfg["csv_target"] = c.csv_target;
    } else {
        cfg["n"] = c.n;
        if (c.dataset == Dataset::Shift) cfg["shift_slot"] = c.shift_slot;
    }
    json hp = {
        {"sigma_theta2", result.hyperparams.sigma_theta2},
        {"sigma_l2", result.hyperparams.sigma_l2},
        {"sigma_n2", result.hyperparams.sigma_n2},
        {"source", c.fixed_hyperparams ? "fixed" : "exact GP evidence maximization on the warm-up records"},
    };
    if (!c.fixed_hyperparams) hp["log_evidence"] = result.log_evidence;

    json metrics = json::object();
    for (const auto& s : summarize(result.rows)) {
        metrics[s.method] = {{"final_coverage", s.final_coverage},
                             {"mean_finite_size", s.mean_size},
                             {"infinite_sets", s.infinite_sets},
                             {"empty_sets", s.empty_sets}};
    }
    std::size_t resets = 0;
    for (const auto& r : result.rows) resets += r.reset ? 1 : 0;

    json doc = {
        {"config", cfg},
        {"hyperparams", hp},
        {"q0", result.q0},
        {"rows", result.rows.size()},
        {"resets", resets},
        {"metrics", metrics},
        {"conventions",
         {{"kernel", "sigma_theta2 * exp(-|x - x'|^2 / sigma_l2)"},
          {"coverage_excludes_warmup", true},
          {"first_trace_slot", c.warmup + 1},
          {"score", "negative predictive log-likelihood; adaptive q_0 clamped to [0, B], sets invert the raw score"},
          {"acceptance_bands", {{"coverage", {0.88, 0.92}}, {"reset_slot_window", {5000, 5200}}}}}},
    };
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open sidecar for writing: " + path.string());
    }
    out << doc.dump(2) << '\n';
    if (!out) {
        throw IoError("failed writing sidecar: " + path.string());
    }
}

}  // namespace osgpcp
