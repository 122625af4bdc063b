#include "wtpm/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "wtpm/rng.hpp"

namespace wtpm {

namespace {

using nlohmann::json;

// substream tags for the per-replication seed
constexpr std::uint64_t kTruthTag = 1;
constexpr std::uint64_t kDataTag = 2;
constexpr std::uint64_t kMaskTag = 3;
constexpr std::uint64_t kSplitTag = 4;
constexpr std::uint64_t kTpmTag = 5;

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string sanitize_status(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return s;
}

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    cells.push_back(cur);
    return cells;
}

double parse_double_cell(const std::string& cell, int line, int col) {
    const std::string t = trim(cell);
    if (t.empty()) throw ParseError("empty numeric cell", line, col);
    if (t == "nan" || t == "-nan") return std::numeric_limits<double>::quiet_NaN();
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || errno == ERANGE)
        throw ParseError("cannot parse '" + t + "' as a number", line, col);
    return v;
}

Eigen::MatrixXd load_matrix_csv(const std::string& path) {
    const MaskedDataset ds = load_csv(path);
    if (!ds.mask.all()) throw InvalidInput(path + ": matrix file may not contain NA cells");
    return ds.values;
}

}  // namespace

std::vector<int> ExperimentConfig::declared_complete_dims() const {
    std::vector<int> dims;
    if (missingness.kind == MissingnessKind::mcar) {
        for (int i = 0; i < d; ++i)
            if (missingness.p(i) == 1.0) dims.push_back(i);
    } else {
        std::vector<bool> missing(d, false);
        for (int m : missingness.missing_dims) missing[m] = true;
        for (int i = 0; i < d; ++i)
            if (!missing[i]) dims.push_back(i);
    }
    return dims;
}

void ExperimentConfig::validate() const {
    if (d < 1) throw InvalidInput("config: d must be at least 1");
    if (k < 1 || k > d) throw InvalidInput("config: k must lie in [1, d]");
    if (model == ModelKind::gm) {
        if (!(sigma2 > 0.0)) throw InvalidInput("config: gm requires sigma2 > 0");
        if (truth == TruthSource::random_dirichlet)
            throw InvalidInput("config: gm uses random-gaussian or file truth");
    } else {
        if (c.size() != k) throw InvalidInput("config: gp requires c of length k");
        for (int i = 0; i < c.size(); ++i)
            if (!(c(i) > 0.0)) throw InvalidInput("config: gp c entries must be positive");
        if (!(b > 0.0)) throw InvalidInput("config: gp requires b > 0");
        if (truth == TruthSource::random_gaussian)
            throw InvalidInput("config: gp topics cannot be drawn from a gaussian");
    }
    if (truth == TruthSource::file && truth_file.empty())
        throw InvalidInput("config: truth 'file' requires truth_file");
    if (missingness.kind == MissingnessKind::mcar) {
        if (missingness.p.size() != d) throw InvalidInput("config: mcar p must have length d");
        for (int i = 0; i < d; ++i)
            if (!(missingness.p(i) > 0.0) || missingness.p(i) > 1.0)
                throw InvalidInput("config: mcar p entries must lie in (0, 1]");
    } else {
        if (missingness.n_full < 0) throw InvalidInput("config: block n_full must be >= 0");
        for (int m : missingness.missing_dims)
            if (m < 0 || m >= d) throw InvalidInput("config: block missing_dims out of range");
    }
    if (n_grid.empty()) throw InvalidInput("config: n_grid must be non-empty");
    for (long long n : n_grid) {
        if (missingness.kind == MissingnessKind::mcar && n < 1)
            throw InvalidInput("config: mcar grid values are sample counts >= 1");
        if (missingness.kind == MissingnessKind::block &&
            (n < 0 || n + missingness.n_full < 1))
            throw InvalidInput("config: block grid values must give at least one sample");
    }
    if (strategies.empty()) throw InvalidInput("config: strategies must be non-empty");
    if (replications < 1) throw InvalidInput("config: replications must be >= 1");
    if (tpm.restarts < 1 || tpm.max_iters < 1 || !(tpm.tol > 0.0))
        throw InvalidInput("config: bad tpm options");
    if (min_count < 1) throw InvalidInput("config: min_count must be >= 1");
    if (holdout) {
        if (model != ModelKind::gm)
            throw InvalidInput("config: holdout scoring is defined for gm only");
        if (!(holdout_fraction > 0.0) || !(holdout_fraction < 1.0))
            throw InvalidInput("config: holdout_fraction must lie in (0, 1)");
    }
    if (threads < 0) throw InvalidInput("config: threads must be >= 0");
    if (declared_complete_dims().empty())
        throw InvalidInput("config: at least one complete dimension is required");
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("config: ") + e.what());
    }
    ExperimentConfig cfg;
    try {
        const std::string model = j.at("model").get<std::string>();
        if (model == "gm") {
            cfg.model = ModelKind::gm;
        } else if (model == "gp") {
            cfg.model = ModelKind::gp;
        } else {
            throw InvalidInput("config: model must be gm or gp");
        }
        cfg.d = j.at("d").get<int>();
        cfg.k = j.at("k").get<int>();

        const std::string truth = j.value("truth", cfg.model == ModelKind::gm
                                                       ? "random-gaussian"
                                                       : "random-dirichlet");
        if (truth == "random-gaussian") {
            cfg.truth = TruthSource::random_gaussian;
        } else if (truth == "random-dirichlet") {
            cfg.truth = TruthSource::random_dirichlet;
        } else if (truth == "file") {
            cfg.truth = TruthSource::file;
        } else {
            throw InvalidInput("config: unknown truth source '" + truth + "'");
        }
        cfg.truth_file = j.value("truth_file", std::string());

        cfg.sigma2 = j.value("sigma2", 0.0);
        if (j.contains("c")) {
            if (j["c"].is_number()) {
                cfg.c = Eigen::VectorXd::Constant(cfg.k, j["c"].get<double>());
            } else {
                const auto vals = j["c"].get<std::vector<double>>();
                cfg.c = Eigen::Map<const Eigen::VectorXd>(vals.data(), vals.size());
            }
        }
        cfg.b = j.value("b", 1.0);

        const json& miss = j.at("missingness");
        const std::string kind = miss.at("type").get<std::string>();
        if (kind == "mcar") {
            cfg.missingness.kind = MissingnessKind::mcar;
            const auto p = miss.at("p").get<std::vector<double>>();
            cfg.missingness.p = Eigen::Map<const Eigen::VectorXd>(p.data(), p.size());
        } else if (kind == "block") {
            cfg.missingness.kind = MissingnessKind::block;
            cfg.missingness.n_full = miss.at("n_full").get<int>();
            cfg.missingness.missing_dims = miss.at("missing_dims").get<std::vector<int>>();
        } else {
            throw InvalidInput("config: missingness type must be mcar or block");
        }

        cfg.n_grid = j.at("n_grid").get<std::vector<long long>>();

        for (const auto& s : j.at("strategies").get<std::vector<std::string>>()) {
            const auto strat = strategy_from_cli(s);
            if (!strat) throw InvalidInput("config: unknown strategy '" + s + "'");
            cfg.strategies.push_back(*strat);
        }

        cfg.replications = j.value("replications", 20);
        cfg.base_seed = j.value("seed", static_cast<std::uint64_t>(0));
        if (j.contains("tpm")) {
            const json& t = j["tpm"];
            cfg.tpm.restarts = t.value("restarts", cfg.tpm.restarts);
            cfg.tpm.max_iters = t.value("max_iters", cfg.tpm.max_iters);
            cfg.tpm.tol = t.value("tol", cfg.tpm.tol);
        }
        cfg.min_count = j.value("min_count", kDefaultMinCount);
        cfg.holdout = j.value("holdout", false);
        cfg.holdout_fraction = j.value("holdout_fraction", 0.2);
        cfg.measure_time = j.value("measure_time", true);
        cfg.threads = j.value("threads", 0);
        cfg.output = j.value("output", std::string("results.csv"));
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

TruthParams draw_truth(const ExperimentConfig& cfg, std::uint64_t rep_seed,
                       const Eigen::MatrixXd* fixed_a) {
    Rng rng = Rng::substream(rep_seed, kTruthTag);
    Eigen::MatrixXd a;
    if (cfg.truth == TruthSource::file) {
        a = fixed_a ? *fixed_a : load_matrix_csv(cfg.truth_file);
        if (a.rows() != cfg.d || a.cols() != cfg.k)
            throw InvalidInput("truth file shape does not match (d, k)");
    } else if (cfg.truth == TruthSource::random_gaussian) {
        a.resize(cfg.d, cfg.k);
        for (int k = 0; k < cfg.k; ++k)
            for (int i = 0; i < cfg.d; ++i) a(i, k) = 10.0 * rng.normal();
    } else {
        a.resize(cfg.d, cfg.k);
        for (int k = 0; k < cfg.k; ++k) {
            double sum = 0.0;
            for (int i = 0; i < cfg.d; ++i) {
                a(i, k) = rng.exponential();
                sum += a(i, k);
            }
            a.col(k) /= sum;
        }
    }
    if (cfg.model == ModelKind::gm) {
        Eigen::VectorXd pi(cfg.k);
        double sum = 0.0;
        for (int k = 0; k < cfg.k; ++k) {
            pi(k) = rng.exponential();
            sum += pi(k);
        }
        pi /= sum;
        return GMParams(std::move(a), std::move(pi), cfg.sigma2);
    }
    if (cfg.truth == TruthSource::file) {
        for (int k = 0; k < cfg.k; ++k) a.col(k) /= a.col(k).sum();
    }
    return GPParams(std::move(a), cfg.c, cfg.b);
}

MaskedDataset generate_dataset(const ExperimentConfig& cfg, const TruthParams& truth,
                               long long grid_value, std::uint64_t rep_seed) {
    const std::uint64_t data_seed = substream_seed(rep_seed, kDataTag);
    const std::uint64_t mask_seed = substream_seed(rep_seed, kMaskTag);
    long long n_total;
    ObservationMask mask;
    if (cfg.missingness.kind == MissingnessKind::mcar) {
        n_total = grid_value;
        mask = mcar_mask(PresenceProbabilities(cfg.missingness.p), static_cast<int>(n_total),
                         mask_seed);
    } else {
        n_total = cfg.missingness.n_full + grid_value;
        mask = block_mask(cfg.missingness.n_full, static_cast<int>(grid_value),
                          cfg.missingness.missing_dims, cfg.d);
    }
    MaskedDataset sampled =
        cfg.model == ModelKind::gm
            ? sample_gm(std::get<GMParams>(truth), static_cast<int>(n_total), data_seed)
            : sample_gp(std::get<GPParams>(truth), static_cast<int>(n_total), data_seed);
    return MaskedDataset::make(std::move(sampled.values), std::move(mask));
}

namespace {

struct SplitDataset {
    MaskedDataset train;
    MaskedDataset test_complete;  // test columns restricted to the declared complete dims
};

SplitDataset holdout_split(const MaskedDataset& ds, const std::vector<int>& complete_dims,
                           double test_fraction, std::uint64_t split_seed) {
    const int n = ds.samples();
    const int n_test = static_cast<int>(std::floor(test_fraction * n));
    if (n_test < 1 || n_test >= n)
        throw InvalidInput("holdout split leaves an empty train or test set");
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    Rng rng(split_seed);
    for (int i = n - 1; i > 0; --i) {
        const int j = static_cast<int>(rng.uniform() * (i + 1));
        std::swap(order[i], order[j]);
    }
    const int n_train = n - n_test;
    Eigen::MatrixXd train_values(ds.dim(), n_train);
    ObservationMask train_mask(ds.dim(), n_train);
    for (int j = 0; j < n_train; ++j) {
        train_values.col(j) = ds.values.col(order[n_test + j]);
        train_mask.col(j) = ds.mask.col(order[n_test + j]);
    }
    const int dc = static_cast<int>(complete_dims.size());
    Eigen::MatrixXd test_values(dc, n_test);
    for (int j = 0; j < n_test; ++j)
        for (int i = 0; i < dc; ++i) test_values(i, j) = ds.values(complete_dims[i], order[j]);
    SplitDataset out;
    out.train = MaskedDataset::make(std::move(train_values), std::move(train_mask));
    out.test_complete = MaskedDataset::make(
        std::move(test_values), ObservationMask::Constant(dc, n_test, true));
    return out;
}

int resolve_threads(const ExperimentConfig& cfg) {
    if (cfg.threads > 0) return cfg.threads;
    if (const char* env = std::getenv("WTPM_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 1;
}

struct Cell {
    int grid_index;
    int replication;
};

}  // namespace

ResultsTable run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const std::vector<int> complete_dims = cfg.declared_complete_dims();
    const int n_strategies = static_cast<int>(cfg.strategies.size());

    // Shared load of a file truth so worker threads never touch the disk.
    Eigen::MatrixXd fixed_a;
    const bool have_fixed_a = cfg.truth == TruthSource::file;
    if (have_fixed_a) fixed_a = load_matrix_csv(cfg.truth_file);

    std::vector<Cell> cells;
    for (int g = 0; g < static_cast<int>(cfg.n_grid.size()); ++g)
        for (int r = 0; r < cfg.replications; ++r) cells.push_back(Cell{g, r});

    ResultsTable table;
    table.rows.resize(cells.size() * n_strategies);

    auto run_cell = [&](std::size_t cell_index) {
        const Cell cell = cells[cell_index];
        const long long grid_value = cfg.n_grid[cell.grid_index];
        const std::uint64_t rep_seed = cfg.base_seed + static_cast<std::uint64_t>(cell.replication);
        ResultRow* rows = &table.rows[cell_index * n_strategies];
        for (int s = 0; s < n_strategies; ++s) {
            rows[s].strategy = cli_name(cfg.strategies[s]);
            rows[s].grid_value = grid_value;
            rows[s].replication = cell.replication;
            rows[s].seed = rep_seed;
        }

        const auto t0 = std::chrono::steady_clock::now();
        Eigen::MatrixXd a_true;
        std::optional<MomentPair> moments;
        std::optional<MaskedDataset> test_complete;
        PresenceProbabilities p_hat(Eigen::VectorXd::Ones(1));
        double sigma2_hat = 0.0;
        try {
            const TruthParams truth = draw_truth(cfg, rep_seed, have_fixed_a ? &fixed_a : nullptr);
            a_true = cfg.model == ModelKind::gm ? std::get<GMParams>(truth).a
                                                : std::get<GPParams>(truth).a;
            MaskedDataset ds = generate_dataset(cfg, truth, grid_value, rep_seed);
            if (cfg.holdout) {
                SplitDataset split =
                    holdout_split(ds, complete_dims, cfg.holdout_fraction,
                                  substream_seed(rep_seed, kSplitTag));
                test_complete = std::move(split.test_complete);
                ds = std::move(split.train);
            }
            p_hat = estimate_rates(ds.mask);
            if (cfg.model == ModelKind::gm) {
                sigma2_hat = estimate_sigma2_complete(ds, cfg.k);
                moments = gm_moments(ds, cfg.k, sigma2_hat, cfg.min_count);
            } else {
                moments = gp_moments(ds, cfg.min_count);
            }
        } catch (const std::exception& e) {
            const std::string status = sanitize_status(e.what());
            for (int s = 0; s < n_strategies; ++s) rows[s].status = status;
            return;
        }
        const double shared_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();

        TpmOptions opts;
        opts.restarts = cfg.tpm.restarts;
        opts.max_iters = cfg.tpm.max_iters;
        opts.tol = cfg.tpm.tol;
        opts.rng_seed = substream_seed(rep_seed, kTpmTag);

        // The partial strategy drops the dimensions the design declares
        // incomplete, even in datasets where they happen to be fully
        // observed (e.g. block missingness with zero partial samples).
        Eigen::VectorXd declared_indicator = Eigen::VectorXd::Zero(cfg.d);
        for (int dim : complete_dims) declared_indicator(dim) = 1.0;

        for (int s = 0; s < n_strategies; ++s) {
            const auto t1 = std::chrono::steady_clock::now();
            try {
                const WeightVector w =
                    cfg.strategies[s] == WeightStrategy::partial
                        ? WeightVector{declared_indicator, WeightStrategy::partial}
                        : compute_weights(p_hat, cfg.strategies[s]);
                const MomentPair weighted = weight_moments(*moments, w);
                const SpectralResult sr = decompose(weighted, cfg.k, opts);
                if (cfg.model == ModelKind::gm) {
                    const GmRecovery rec = recover_gm(sr, w, sigma2_hat);
                    rows[s].epsilon_c = epsilon_c(rec.params.a, a_true, complete_dims);
                    if (test_complete) {
                        const int dc = static_cast<int>(complete_dims.size());
                        Eigen::MatrixXd a_c(dc, cfg.k);
                        for (int i = 0; i < dc; ++i)
                            a_c.row(i) = rec.params.a.row(complete_dims[i]);
                        const GMParams restricted(std::move(a_c), rec.params.pi,
                                                  rec.params.sigma2);
                        rows[s].holdout_loglik = gm_holdout_loglik(restricted, *test_complete);
                    }
                } else {
                    const GpRecovery rec = recover_gp(sr, w);
                    rows[s].epsilon_c = epsilon_c(rec.params.a, a_true, complete_dims);
                }
            } catch (const std::exception& e) {
                rows[s].status = sanitize_status(e.what());
            }
            if (cfg.measure_time) {
                const double own_ms = std::chrono::duration<double, std::milli>(
                                          std::chrono::steady_clock::now() - t1)
                                          .count();
                rows[s].wall_time_ms = shared_ms + own_ms;
            }
        }
    };

    const int n_threads = std::min<int>(resolve_threads(cfg), static_cast<int>(cells.size()));
    if (n_threads <= 1) {
        for (std::size_t i = 0; i < cells.size(); ++i) run_cell(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int t = 0; t < n_threads; ++t) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= cells.size()) break;
                    run_cell(i);
                }
            });
        }
        for (auto& t : pool) t.join();
    }

    std::sort(table.rows.begin(), table.rows.end(), [](const ResultRow& a, const ResultRow& b) {
        if (a.strategy != b.strategy) return a.strategy < b.strategy;
        if (a.grid_value != b.grid_value) return a.grid_value < b.grid_value;
        return a.replication < b.replication;
    });
    return table;
}

MaskedDataset load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open dataset file: " + path);
    std::vector<std::vector<double>> values;
    std::vector<std::vector<bool>> observed;
    std::string line;
    int line_no = 0;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const std::vector<std::string> cells = split_csv_line(line);
        if (width == 0) width = cells.size();
        if (cells.size() != width)
            throw ParseError("expected " + std::to_string(width) + " cells, found " +
                                 std::to_string(cells.size()),
                             line_no);
        std::vector<double> row(cells.size(), 0.0);
        std::vector<bool> obs(cells.size(), false);
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const std::string cell = trim(cells[c]);
            if (cell.empty() || cell == "NA") continue;
            row[c] = parse_double_cell(cell, line_no, static_cast<int>(c));
            obs[c] = true;
        }
        values.push_back(std::move(row));
        observed.push_back(std::move(obs));
    }
    if (values.empty()) throw ParseError("no data rows", line_no);
    const int d = static_cast<int>(values.size());
    const int n = static_cast<int>(width);
    Eigen::MatrixXd m(d, n);
    ObservationMask mask(d, n);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < n; ++j) {
            m(i, j) = values[i][j];
            mask(i, j) = observed[i][j];
        }
    }
    return MaskedDataset::make(std::move(m), std::move(mask));
}

void write_csv_dataset(const MaskedDataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write dataset file: " + path);
    for (int i = 0; i < ds.dim(); ++i) {
        for (int j = 0; j < ds.samples(); ++j) {
            if (j > 0) out << ',';
            if (ds.mask(i, j)) out << format_double(ds.values(i, j));
            else out << "NA";
        }
        out << '\n';
    }
    if (!out) throw IoError("failed writing dataset file: " + path);
}

void write_results(const ResultsTable& rt, const std::string& path, OutputFormat format) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write results file: " + path);
    if (format == OutputFormat::csv) {
        out << "strategy,grid_value,replication,seed,epsilon_c,holdout_loglik,wall_time_ms,"
               "status\n";
        for (const ResultRow& r : rt.rows) {
            out << r.strategy << ',' << r.grid_value << ',' << r.replication << ',' << r.seed
                << ',' << format_double(r.epsilon_c) << ',';
            if (r.holdout_loglik) out << format_double(*r.holdout_loglik);
            out << ',' << format_double(r.wall_time_ms) << ',' << r.status << '\n';
        }
    } else {
        json arr = json::array();
        for (const ResultRow& r : rt.rows) {
            json row;
            row["strategy"] = r.strategy;
            row["grid_value"] = r.grid_value;
            row["replication"] = r.replication;
            row["seed"] = r.seed;
            row["epsilon_c"] = r.epsilon_c;
            if (r.holdout_loglik) row["holdout_loglik"] = *r.holdout_loglik;
            else row["holdout_loglik"] = nullptr;
            row["wall_time_ms"] = r.wall_time_ms;
            row["status"] = r.status;
            arr.push_back(std::move(row));
        }
        out << arr.dump(2) << '\n';
    }
    if (!out) throw IoError("failed writing results file: " + path);
}

ResultsTable read_results_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open results file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty results file", 0);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "strategy,grid_value,replication,seed,epsilon_c,holdout_loglik,wall_time_ms,status")
        throw ParseError("unexpected header: " + line, 1);
    ResultsTable table;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() != 8) throw ParseError("expected 8 cells", line_no);
        ResultRow r;
        r.strategy = trim(cells[0]);
        r.grid_value = static_cast<long long>(parse_double_cell(cells[1], line_no, 1));
        r.replication = static_cast<int>(parse_double_cell(cells[2], line_no, 2));
        {
            const std::string s = trim(cells[3]);
            errno = 0;
            char* end = nullptr;
            r.seed = std::strtoull(s.c_str(), &end, 10);
            if (end != s.c_str() + s.size() || errno == ERANGE)
                throw ParseError("cannot parse seed '" + s + "'", line_no, 3);
        }
        r.epsilon_c = parse_double_cell(cells[4], line_no, 4);
        if (!trim(cells[5]).empty()) r.holdout_loglik = parse_double_cell(cells[5], line_no, 5);
        r.wall_time_ms = parse_double_cell(cells[6], line_no, 6);
        r.status = trim(cells[7]);
        table.rows.push_back(std::move(r));
    }
    return table;
}

namespace {

struct Welford {
    int n = 0;
    double mean = 0.0;
    double m2 = 0.0;
    void add(double x) {
        ++n;
        const double d1 = x - mean;
        mean += d1 / n;
        m2 += d1 * (x - mean);
    }
    double sample_std() const {
        return n >= 2 ? std::sqrt(m2 / (n - 1)) : std::numeric_limits<double>::quiet_NaN();
    }
};

}  // namespace

std::vector<SummaryRow> summarize(const ResultsTable& rt) {
    std::vector<SummaryRow> keys;
    std::vector<std::pair<Welford, Welford>> acc;  // (epsilon, loglik) per key
    for (const ResultRow& r : rt.rows) {
        if (r.status != "ok") continue;
        std::size_t idx = keys.size();
        for (std::size_t i = 0; i < keys.size(); ++i) {
            if (keys[i].strategy == r.strategy && keys[i].grid_value == r.grid_value) {
                idx = i;
                break;
            }
        }
        if (idx == keys.size()) {
            keys.push_back(SummaryRow{r.strategy, r.grid_value});
            acc.emplace_back();
        }
        acc[idx].first.add(r.epsilon_c);
        if (r.holdout_loglik) acc[idx].second.add(*r.holdout_loglik);
    }
    for (std::size_t i = 0; i < keys.size(); ++i) {
        keys[i].count = acc[i].first.n;
        keys[i].epsilon_mean =
            acc[i].first.n > 0 ? acc[i].first.mean : std::numeric_limits<double>::quiet_NaN();
        keys[i].epsilon_std = acc[i].first.sample_std();
        keys[i].loglik_count = acc[i].second.n;
        keys[i].loglik_mean =
            acc[i].second.n > 0 ? acc[i].second.mean : std::numeric_limits<double>::quiet_NaN();
        keys[i].loglik_std = acc[i].second.sample_std();
    }
    std::sort(keys.begin(), keys.end(), [](const SummaryRow& a, const SummaryRow& b) {
        if (a.strategy != b.strategy) return a.strategy < b.strategy;
        return a.grid_value < b.grid_value;
    });
    return keys;
}

void write_summary_csv(const std::vector<SummaryRow>& rows, std::ostream& out) {
    out << "strategy,grid_value,count,epsilon_c_mean,epsilon_c_std,loglik_count,loglik_mean,"
           "loglik_std\n";
    for (const SummaryRow& r : rows) {
        out << r.strategy << ',' << r.grid_value << ',' << r.count << ','
            << format_double(r.epsilon_mean) << ',' << format_double(r.epsilon_std) << ','
            << r.loglik_count << ',' << format_double(r.loglik_mean) << ','
            << format_double(r.loglik_std) << '\n';
    }
}

}  // namespace wtpm
