#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "wtpm/eval.hpp"
#include "wtpm/models.hpp"
#include "wtpm/weighting.hpp"

namespace wtpm {

enum class ModelKind { gm, gp };
enum class MissingnessKind { mcar, block };
enum class TruthSource { random_gaussian, random_dirichlet, file };
enum class OutputFormat { csv, json };

struct TpmSettings {
    int restarts = 25;
    int max_iters = 200;
    double tol = 1e-9;
};

struct MissingnessSpec {
    MissingnessKind kind = MissingnessKind::mcar;
    Eigen::VectorXd p;              // mcar: presence probability per dimension
    int n_full = 0;                 // block: count of fully observed samples
    std::vector<int> missing_dims;  // block: dimensions absent from partial samples
};

// One experiment: a model family, a truth source, a missingness pattern, a
// grid of sample counts (N for mcar, N_p for block), and a set of weighting
// strategies compared on identical datasets.
struct ExperimentConfig {
    ModelKind model = ModelKind::gm;
    int d = 0;
    int k = 0;
    TruthSource truth = TruthSource::random_gaussian;
    std::string truth_file;
    double sigma2 = 0.0;   // gm
    Eigen::VectorXd c;     // gp, length K
    double b = 1.0;        // gp
    MissingnessSpec missingness;
    std::vector<long long> n_grid;
    std::vector<WeightStrategy> strategies;
    int replications = 20;
    std::uint64_t base_seed = 0;
    TpmSettings tpm;
    std::int64_t min_count = kDefaultMinCount;
    bool holdout = false;
    double holdout_fraction = 0.2;
    bool measure_time = true;
    int threads = 0;  // 0: use WTPM_THREADS from the environment, else 1
    std::string output = "results.csv";

    static ExperimentConfig from_file(const std::string& path);
    static ExperimentConfig from_json_text(const std::string& text);
    void validate() const;

    // For mcar these are the dims with p_d == 1, for block the dims outside
    // missing_dims. Error metrics are always evaluated on these rows.
    std::vector<int> declared_complete_dims() const;
};

struct ResultRow {
    std::string strategy;
    long long grid_value = 0;
    int replication = 0;
    std::uint64_t seed = 0;
    double epsilon_c = std::numeric_limits<double>::quiet_NaN();
    std::optional<double> holdout_loglik;
    double wall_time_ms = 0.0;
    std::string status = "ok";
};

struct ResultsTable {
    std::vector<ResultRow> rows;
};

using TruthParams = std::variant<GMParams, GPParams>;

// Model draw for one replication; deterministic in rep_seed. When the truth
// source is a file, fixed_a short-circuits re-reading it.
TruthParams draw_truth(const ExperimentConfig& cfg, std::uint64_t rep_seed,
                       const Eigen::MatrixXd* fixed_a = nullptr);

// Values from the model sampler plus the configured mask, at one grid point.
MaskedDataset generate_dataset(const ExperimentConfig& cfg, const TruthParams& truth,
                               long long grid_value, std::uint64_t rep_seed);

// Runs the full sweep: every grid point × replication × strategy, with
// strategies inside a replication sharing one dataset. Failures are recorded
// per row in `status`, never thrown. Rows come back sorted by
// (strategy, grid_value, replication) and are deterministic for a given
// config regardless of thread count.
ResultsTable run_experiment(const ExperimentConfig& cfg);

// Dataset CSV: rows are dimensions, columns samples; "NA" or an empty cell
// marks an unobserved entry.
MaskedDataset load_csv(const std::string& path);
void write_csv_dataset(const MaskedDataset& ds, const std::string& path);

void write_results(const ResultsTable& rt, const std::string& path, OutputFormat format);
ResultsTable read_results_csv(const std::string& path);

struct SummaryRow {
    std::string strategy;
    long long grid_value = 0;
    int count = 0;  // rows with status == ok
    double epsilon_mean = std::numeric_limits<double>::quiet_NaN();
    double epsilon_std = std::numeric_limits<double>::quiet_NaN();
    int loglik_count = 0;
    double loglik_mean = std::numeric_limits<double>::quiet_NaN();
    double loglik_std = std::numeric_limits<double>::quiet_NaN();
};

// Per (strategy, grid point) mean and sample standard deviation over the
// replications that succeeded.
std::vector<SummaryRow> summarize(const ResultsTable& rt);
void write_summary_csv(const std::vector<SummaryRow>& rows, std::ostream& out);

}  // namespace wtpm
