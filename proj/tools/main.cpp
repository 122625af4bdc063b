#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "wtpm/harness.hpp"
#include "wtpm/rng.hpp"

namespace {

using namespace wtpm;

OutputFormat format_for(const std::string& path, const std::string& flag) {
    if (flag == "csv") return OutputFormat::csv;
    if (flag == "json") return OutputFormat::json;
    if (!flag.empty()) throw InvalidInput("unknown output format: " + flag);
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") return OutputFormat::json;
    return OutputFormat::csv;
}

int cmd_run(const std::string& config_path, const std::optional<std::string>& output,
            const std::optional<std::uint64_t>& seed, const std::optional<int>& replications,
            const std::optional<int>& threads, const std::string& format) {
    ExperimentConfig cfg = ExperimentConfig::from_file(config_path);
    if (output) cfg.output = *output;
    if (seed) cfg.base_seed = *seed;
    if (replications) cfg.replications = *replications;
    if (threads) cfg.threads = *threads;
    cfg.validate();

    const ResultsTable table = run_experiment(cfg);
    write_results(table, cfg.output, format_for(cfg.output, format));

    int ok = 0;
    for (const ResultRow& r : table.rows)
        if (r.status == "ok") ++ok;
    std::cerr << "wrote " << table.rows.size() << " rows (" << ok << " ok) to " << cfg.output
              << "\n";
    return ok == 0 ? 2 : 0;
}

int cmd_summarize(const std::string& results_path) {
    const ResultsTable table = read_results_csv(results_path);
    write_summary_csv(summarize(table), std::cout);
    return 0;
}

int cmd_gen_data(const std::string& config_path, const std::optional<long long>& n_override,
                 int replication, const std::string& output, const std::string& truth_out) {
    ExperimentConfig cfg = ExperimentConfig::from_file(config_path);
    const long long grid_value = n_override ? *n_override : cfg.n_grid.front();
    const std::uint64_t rep_seed = cfg.base_seed + static_cast<std::uint64_t>(replication);
    const TruthParams truth = draw_truth(cfg, rep_seed);
    const MaskedDataset ds = generate_dataset(cfg, truth, grid_value, rep_seed);
    write_csv_dataset(ds, output);
    std::cerr << "wrote " << ds.dim() << "x" << ds.samples() << " dataset to " << output << "\n";
    if (!truth_out.empty()) {
        const Eigen::MatrixXd& a = cfg.model == ModelKind::gm ? std::get<GMParams>(truth).a
                                                              : std::get<GPParams>(truth).a;
        MaskedDataset truth_ds = MaskedDataset::make(
            a, ObservationMask::Constant(a.rows(), a.cols(), true));
        write_csv_dataset(truth_ds, truth_out);
        std::cerr << "wrote truth matrix to " << truth_out << "\n";
    }
    return 0;
}

int cmd_decompose(const std::string& data_path, const std::string& model_name, int k,
                  const std::string& strategy_name, std::uint64_t seed, std::int64_t min_count,
                  const std::string& output) {
    const auto strategy = strategy_from_cli(strategy_name);
    if (!strategy) throw InvalidInput("unknown strategy: " + strategy_name);
    const bool is_gm = model_name == "gm";
    if (!is_gm && model_name != "gp") throw InvalidInput("model must be gm or gp");

    const MaskedDataset ds = load_csv(data_path);
    const PresenceProbabilities p_hat = estimate_rates(ds.mask);
    const WeightVector w = compute_weights(p_hat, *strategy);

    TpmOptions opts;
    opts.rng_seed = seed;

    nlohmann::json out;
    out["model"] = model_name;
    out["k"] = k;
    out["strategy"] = strategy_name;
    out["d"] = ds.dim();
    out["n"] = ds.samples();
    out["p_hat"] = std::vector<double>(p_hat.vec().data(), p_hat.vec().data() + p_hat.dim());

    MomentPair moments = [&] {
        if (is_gm) {
            const double sigma2_hat = estimate_sigma2_complete(ds, k);
            out["sigma2"] = sigma2_hat;
            return gm_moments(ds, k, sigma2_hat, min_count);
        }
        return gp_moments(ds, min_count);
    }();

    const MomentPair weighted = weight_moments(moments, w);
    const SpectralResult sr = decompose(weighted, k, opts);

    auto matrix_rows = [](const Eigen::MatrixXd& m) {
        std::vector<std::vector<double>> rows;
        for (int i = 0; i < m.rows(); ++i)
            rows.emplace_back(m.row(i).begin(), m.row(i).end());
        return rows;
    };

    std::vector<double> eigenvalues;
    for (const EigenPair& p : sr.eigenpairs) eigenvalues.push_back(p.lambda);
    out["eigenvalues"] = eigenvalues;
    out["diagnostics"] = {{"restarts_used", sr.diagnostics.restarts_used},
                          {"iterations", sr.diagnostics.iterations},
                          {"residual_norms", sr.diagnostics.residual_norms}};

    if (is_gm) {
        const GmRecovery rec = recover_gm(sr, w, out["sigma2"].get<double>());
        out["means"] = matrix_rows(rec.params.a);
        out["pi"] = std::vector<double>(rec.params.pi.data(),
                                        rec.params.pi.data() + rec.params.pi.size());
        out["row_present"] = rec.row_present;
        out["row_low_confidence"] = rec.row_low_confidence;
    } else {
        const GpRecovery rec = recover_gp(sr, w);
        out["topics"] = matrix_rows(rec.params.a);
        out["c"] = std::vector<double>(rec.params.c.data(),
                                       rec.params.c.data() + rec.params.c.size());
        out["b"] = rec.params.b;
        out["s"] = std::vector<double>(rec.params.s.data(),
                                       rec.params.s.data() + rec.params.s.size());
        out["t"] = std::vector<double>(rec.params.t.data(),
                                       rec.params.t.data() + rec.params.t.size());
        out["mean_document_length"] = rec.params.l;
        out["row_present"] = rec.row_present;
        out["row_low_confidence"] = rec.row_low_confidence;
        out["column_had_negatives"] = rec.column_had_negatives;
    }

    if (output.empty()) {
        std::cout << out.dump(2) << "\n";
    } else {
        std::ofstream f(output);
        if (!f) throw IoError("cannot write " + output);
        f << out.dump(2) << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weighted tensor decomposition for latent-variable models with missing data"};
    app.require_subcommand(1);

    std::string config_path, results_path, data_path, output, truth_out, format;
    std::string model_name = "gm", strategy_name = "wtpm-p";
    std::optional<std::string> output_opt;
    std::optional<std::uint64_t> seed_opt;
    std::optional<int> replications_opt, threads_opt;
    std::optional<long long> n_opt;
    int replication = 0, k = 1;
    std::uint64_t seed = 0;
    std::int64_t min_count = wtpm::kDefaultMinCount;

    CLI::App* run = app.add_subcommand("run", "run an experiment sweep from a config file");
    run->add_option("config", config_path, "experiment config (JSON)")->required();
    run->add_option("--output", output_opt, "override the config output path");
    run->add_option("--seed", seed_opt, "override the base seed");
    run->add_option("--replications", replications_opt, "override the replication count");
    run->add_option("--threads", threads_opt, "worker thread count (0 = WTPM_THREADS or 1)");
    run->add_option("--format", format, "output format: csv or json");

    CLI::App* summ = app.add_subcommand("summarize", "aggregate a results CSV per strategy/grid");
    summ->add_option("results", results_path, "results CSV produced by run")->required();

    CLI::App* gen = app.add_subcommand("gen-data", "emit one synthetic dataset as CSV");
    gen->add_option("config", config_path, "experiment config (JSON)")->required();
    gen->add_option("--n", n_opt, "grid value (default: first entry of n_grid)");
    gen->add_option("--replication", replication, "replication index (default 0)");
    gen->add_option("--output", output, "dataset path")->required();
    gen->add_option("--truth-out", truth_out, "also write the truth matrix as CSV");

    CLI::App* dec = app.add_subcommand("decompose", "decompose a dataset CSV and print parameters");
    dec->add_option("data", data_path, "dataset CSV (rows = dimensions)")->required();
    dec->add_option("--model", model_name, "gm or gp")->required();
    dec->add_option("--k", k, "number of components")->required();
    dec->add_option("--strategy", strategy_name, "full, partial, wtpm-p or wtpm-sqrtp");
    dec->add_option("--seed", seed, "power-method seed");
    dec->add_option("--min-count", min_count, "minimum joint observations per moment entry");
    dec->add_option("--output", output, "write JSON here instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return cmd_run(config_path, output_opt, seed_opt, replications_opt, threads_opt,
                           format);
        if (summ->parsed()) return cmd_summarize(results_path);
        if (gen->parsed()) return cmd_gen_data(config_path, n_opt, replication, output, truth_out);
        if (dec->parsed())
            return cmd_decompose(data_path, model_name, k, strategy_name, seed, min_count, output);
    } catch (const wtpm::InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const wtpm::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const wtpm::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
