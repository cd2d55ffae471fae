#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "osgpcp/conformal.hpp"
#include "osgpcp/exact_gp.hpp"
#include "osgpcp/kernel.hpp"
#include "osgpcp/stream.hpp"

namespace osgpcp {

enum class Dataset { Iid, Shift, Csv };

struct ExperimentConfig {
    Dataset dataset = Dataset::Iid;
    /// Stream length for the synthetic datasets.
    std::size_t n = 10000;
    std::size_t shift_slot = 5000;
    std::filesystem::path csv_path;
    std::vector<std::string> csv_features{"open", "high", "low"};
    std::string csv_target = "close";
    char csv_delimiter = ',';

    double alpha = 0.1;
    std::size_t num_features = 200;
    std::size_t warmup = 100;
    EtaMode eta_mode = EtaMode::Constant;
    double eta_const = 0.05;
    std::size_t window = 15;
    std::size_t consecutive = 100;
    double clip_bound = 20.0;
    std::uint64_t seed_features = 1;
    std::uint64_t seed_data = 1;

    /// Skip evidence maximization and use these values (required when warmup == 0).
    std::optional<KernelHyperparams> fixed_hyperparams;
    SearchConfig search{};

    void validate() const;
};

/// One post-warm-up slot. Column order of the trace CSV follows the field order.
struct TraceRow {
    std::size_t t = 0;
    double y_true = 0.0;
    double bayes_lo = 0.0, bayes_hi = 0.0;
    bool bayes_cov = false;
    double bayes_size = 0.0;
    double scp_lo = 0.0, scp_hi = 0.0;
    bool scp_cov = false;
    double scp_size = 0.0;
    double acp_lo = 0.0, acp_hi = 0.0;
    bool acp_cov = false;
    double acp_size = 0.0;
    bool acp_empty = false;
    double q_t = 0.0;
    double eta_t = 0.0;
    bool reset = false;
};

struct ExperimentResult {
    ExperimentConfig config;
    KernelHyperparams hyperparams;
    /// NaN when hyperparameters were supplied rather than fitted.
    double log_evidence = 0.0;
    std::size_t input_dim = 0;
    std::size_t stream_length = 0;
    double q0 = 0.0;
    std::vector<TraceRow> rows;
};

/// Materializes the configured dataset.
Stream load_dataset(const ExperimentConfig& config);

/// Runs the warm-up fit and the online loop for all three predictors.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Same, on an explicit stream (the config's dataset fields are ignored).
ExperimentResult run_experiment(const ExperimentConfig& config, const Stream& stream);

/// Prefix mean of a method's covered flags. Methods: "bayes", "standard_cp", "osgpcp".
std::vector<double> running_coverage(const std::vector<TraceRow>& rows, const std::string& method);

extern const char* const kTraceHeader;

void write_trace(const std::vector<TraceRow>& rows, const std::filesystem::path& path);
std::vector<TraceRow> read_trace(const std::filesystem::path& path);

/// JSON sidecar with the resolved config, fitted hyperparameters and final metrics.
void write_sidecar(const ExperimentResult& result, const std::filesystem::path& path);

/// Conventional sidecar location for a trace: "<trace>.json".
std::filesystem::path sidecar_path(const std::filesystem::path& trace_path);

struct MethodSummary {
    std::string method;
    double final_coverage = 0.0;
    /// Mean over slots with a finite set size.
    double mean_size = 0.0;
    std::size_t infinite_sets = 0;
    std::size_t empty_sets = 0;
};

std::vector<MethodSummary> summarize(const std::vector<TraceRow>& rows);

std::string to_string(EtaMode mode);
std::string to_string(Dataset dataset);

}  // namespace osgpcp
