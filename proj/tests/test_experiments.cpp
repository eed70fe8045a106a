#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "vqclab/experiments.hpp"

using namespace vqclab;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

ExperimentConfig tiny_fig4() {
    ExperimentConfig config = default_config("fig4");
    config.n = 4;
    config.depth = 2;
    config.m_values = {1, 4};
    config.seeds = 3;
    config.jobs = 1;
    return config;
}

} // namespace

TEST_CASE("config round trip: parse(emit(config)) == config") {
    for (const char* name : {"fig4", "concentration", "tail", "spread", "gradients", "design"}) {
        ExperimentConfig config = default_config(name);
        config.master_seed = 123456789;
        config.epsilons = {0.125, 0.25};
        const ExperimentConfig reparsed = parse_config_text(config_to_kv(config), default_config(name));
        CHECK(reparsed == config);
    }
}

TEST_CASE("config parsing rejects junk") {
    CHECK_THROWS_AS(parse_config_text("nonsense_key = 3", default_config("fig4")), config_error);
    CHECK_THROWS_AS(parse_config_text("trials = banana", default_config("fig4")), config_error);
    CHECK_THROWS_AS(parse_config_text("format = png", default_config("fig4")), config_error);
    CHECK_NOTHROW(parse_config_text("# comment only\n\ntrials = 50", default_config("concentration")));
}

TEST_CASE("fig4: single-point datasets have zero variance") {
    ExperimentConfig config = tiny_fig4();
    config.m_values = {1};
    const ResultTable table = run_fig4(config);
    for (const ResultRow& row : table.rows)
        if (row.statistic == "output_variance") CHECK(row.value == 0.0);
}

TEST_CASE("fig4 emits per-seed and aggregate rows") {
    const ResultTable table = run_fig4(tiny_fig4());
    int per_seed = 0, aggregate = 0;
    for (const ResultRow& row : table.rows) {
        if (row.statistic == "output_variance") ++per_seed;
        if (row.statistic == "output_variance_mean") {
            ++aggregate;
            CHECK(row.seed == -1);
        }
    }
    CHECK(per_seed == 3 * 2 * 3); // models x m x seeds
    CHECK(aggregate == 3 * 2);
}

TEST_CASE("concentration: identity observable gives constant outputs") {
    ExperimentConfig config = default_config("concentration");
    config.n_min = 3;
    config.n_max = 4;
    config.trials = 50;
    config.observable = "I";
    config.jobs = 1;
    const ResultTable table = run_output_concentration(config);
    for (const ResultRow& row : table.rows) {
        if (row.statistic == "mean") CHECK(row.value == doctest::Approx(1.0).epsilon(1e-12));
        if (row.statistic == "variance") CHECK(row.value <= 1e-24);
    }
}

TEST_CASE("concentration: haar model matches the closed-form variance at n=6") {
    ExperimentConfig config = default_config("concentration");
    config.n_min = 6;
    config.n_max = 6;
    config.trials = 5000;
    config.models = {"haar"};
    config.jobs = 0;
    const ResultTable table = run_output_concentration(config);
    double variance = -1.0, ref = -1.0;
    for (const ResultRow& row : table.rows) {
        if (row.statistic == "variance") variance = row.value;
        if (row.statistic == "haar_variance_ref") ref = row.value;
    }
    CHECK(ref == doctest::Approx(1.0 / 65.0).epsilon(1e-12));
    CHECK(std::abs(variance - ref) <= 0.15 * ref);
}

TEST_CASE("tail probabilities: out-of-range epsilon never fires and n tightens the tail") {
    ExperimentConfig config = default_config("tail");
    config.n_min = 4;
    config.n_max = 8;
    config.trials = 5000;
    config.epsilons = {0.1, 0.2, 2.0};
    config.jobs = 0;
    const ResultTable table = run_tail_probability(config);

    auto freq = [&](int n, const std::string& stat) {
        for (const ResultRow& row : table.rows)
            if (row.n == n && row.statistic == stat) return row.value;
        REQUIRE(false);
        return -1.0;
    };
    for (int n = 4; n <= 8; ++n) CHECK(freq(n, "exceedance_eps2") == 0.0);
    CHECK(freq(8, "exceedance_eps0.2") < freq(4, "exceedance_eps0.2"));

    // monotone tightening with a strict drop across the sweep
    double prev = 2.0;
    for (int n = 4; n <= 8; ++n) {
        const double f = freq(n, "exceedance_eps0.1");
        CHECK(f <= prev + 0.02);
        prev = f;
    }
    CHECK(freq(8, "exceedance_eps0.1") < freq(4, "exceedance_eps0.1"));
}

TEST_CASE("spread scan emits per-seed rows and per-n means") {
    ExperimentConfig config = default_config("spread");
    config.n_min = 3;
    config.n_max = 4;
    config.seeds = 4;
    config.m = 8;
    config.jobs = 1;
    const ResultTable table = run_spread_scan(config);
    int rows_per_seed = 0, rows_mean = 0;
    for (const ResultRow& row : table.rows) {
        if (row.statistic == "max_spread") {
            ++rows_per_seed;
            CHECK(row.value >= 0.0);
        }
        if (row.statistic == "max_spread_mean") ++rows_mean;
    }
    CHECK(rows_per_seed == 2 * 4);
    CHECK(rows_mean == 2);
}

TEST_CASE("gradient scan: tensor-structured family keeps a flat slope") {
    ExperimentConfig config = default_config("gradients");
    config.n_min = 4;
    config.n_max = 8;
    config.trials = 400;
    config.models = {"tn-vqc"};
    config.jobs = 0;
    const ResultTable table = run_gradient_scan(config);
    double slope = 1e300;
    for (const ResultRow& row : table.rows)
        if (row.statistic == "log2_variance_slope") slope = row.value;
    CHECK(std::abs(slope) <= 0.2);
}

TEST_CASE("spread of identical outputs is exactly zero") {
    CHECK(max_pairwise_spread({0.42, 0.42, 0.42, 0.42}) == 0.0);
    CHECK(max_pairwise_spread({}) == 0.0);
}

TEST_CASE("gradient scan: deep HEA variance falls with n; slope row present") {
    ExperimentConfig config = default_config("gradients");
    config.n_min = 4;
    config.n_max = 6;
    config.trials = 120;
    config.models = {"hea"};
    config.jobs = 0;
    const ResultTable table = run_gradient_scan(config);
    double var4 = -1, var6 = -1, slope = 0, trace = -1;
    for (const ResultRow& row : table.rows) {
        if (row.statistic == "variance" && row.n == 4) var4 = row.value;
        if (row.statistic == "variance" && row.n == 6) var6 = row.value;
        if (row.statistic == "log2_variance_slope") slope = row.value;
        if (row.statistic == "generator_trace_max_abs") trace = std::max(trace, row.value);
    }
    CHECK(var4 > var6);
    CHECK(slope < 0.0);
    CHECK(trace >= 0.0);
    CHECK(trace <= 1e-9);
}

TEST_CASE("design diagnostics produce Haar references and OSR caps") {
    ExperimentConfig config = default_config("design");
    config.n_min = 3;
    config.n_max = 4;
    config.purity_samples = 60;
    config.frame_pairs = 150;
    config.smd_samples = 800;
    config.smd_n_max = 3;
    config.models = {"haar", "bounded-cut"};
    config.jobs = 0;
    const ResultTable table = run_design_diagnostics(config);

    bool saw_fp = false, saw_purity = false, saw_smd = false;
    for (const ResultRow& row : table.rows) {
        if (row.statistic == "frame_potential_2") {
            saw_fp = true;
            CHECK(row.value >= 2.0 - 3.0 * row.stderr_value);
        }
        if (row.statistic == "choi_purity_mean") saw_purity = true;
        if (row.statistic == "second_moment_distance") saw_smd = true;
        if (row.statistic == "osr_max" && row.model == "bounded-cut") CHECK(row.value <= 4.0);
    }
    CHECK(saw_fp);
    CHECK(saw_purity);
    CHECK(saw_smd);
}

TEST_CASE("fig4 deep sanity: cross-seed output variance tracks the Haar closed form") {
    // With depth >= 4n the per-seed outputs are near-constant in x, and their
    // spread across seeds plays the role of Var over parameter draws.
    ExperimentConfig config = default_config("fig4");
    config.n = 8;
    config.depth = 32; // 4n
    config.m_values = {4};
    config.seeds = 40;
    config.models = {"naive"};
    config.jobs = 0;
    const ResultTable table = run_fig4(config);

    std::vector<double> per_seed_means;
    for (const ResultRow& row : table.rows)
        if (row.statistic == "output_mean" && row.seed >= 0) per_seed_means.push_back(row.value);
    REQUIRE(per_seed_means.size() == 40);
    const double var = sample_variance(per_seed_means);
    const double ref = 1.0 / 257.0; // Tr(O^2)/(d(d+1)) with Tr(O)=0, Tr(O^2)=d
    CHECK(var >= ref / 10.0);
    CHECK(var <= ref * 10.0);
}

TEST_CASE("tail: log-frequency is decreasing and convex against 2^n at eps=0.1") {
    ExperimentConfig config = default_config("tail");
    config.n_min = 4;
    config.n_max = 9;
    config.trials = 5000;
    config.epsilons = {0.1};
    config.jobs = 0;
    const ResultTable table = run_tail_probability(config);
    std::vector<double> d_values, log_freq;
    for (const ResultRow& row : table.rows)
        if (row.statistic == "exceedance_eps0.1" && row.value > 0.0) {
            d_values.push_back(std::pow(2.0, row.n));
            log_freq.push_back(std::log(row.value));
        }
    REQUIRE(d_values.size() >= 4);
    for (std::size_t i = 0; i + 1 < log_freq.size(); ++i) CHECK(log_freq[i + 1] < log_freq[i]);
    // slopes between consecutive points become less negative: convex in 2^n,
    // up to Monte-Carlo noise on the densely spaced small-n end
    std::vector<double> slopes;
    for (std::size_t i = 0; i + 1 < log_freq.size(); ++i)
        slopes.push_back((log_freq[i + 1] - log_freq[i]) / (d_values[i + 1] - d_values[i]));
    for (std::size_t i = 0; i + 1 < slopes.size(); ++i)
        CHECK(slopes[i + 1] >= slopes[i] - 0.15 * std::abs(slopes[i]));
    CHECK(slopes.back() > slopes.front());
}

TEST_CASE("spread: tensor-structured model stays bounded below across the sweep") {
    ExperimentConfig config = default_config("spread");
    config.n_min = 4;
    config.n_max = 8;
    config.seeds = 6;
    config.m = 16;
    config.models = {"tn-vqc"};
    config.jobs = 0;
    const ResultTable table = run_spread_scan(config);
    double lo = 1e300, hi = 0.0;
    for (const ResultRow& row : table.rows)
        if (row.statistic == "max_spread_mean") {
            lo = std::min(lo, row.value);
            hi = std::max(hi, row.value);
        }
    CHECK(lo > 0.01);           // no collapse toward zero
    CHECK(lo >= 0.25 * hi);     // no monotone decay trend
}

TEST_CASE("CSV schema and determinism across reruns and job counts") {
    ExperimentConfig config = tiny_fig4();
    const std::string csv1 = table_to_csv(run_fig4(config));
    const std::string csv2 = table_to_csv(run_fig4(config));
    CHECK(csv1 == csv2);

    ExperimentConfig parallel = config;
    parallel.jobs = 2;
    const std::string csv3 = table_to_csv(run_fig4(parallel));
    CHECK(csv1 == csv3);

    CHECK(csv1.rfind("experiment,n,m,model,seed,statistic,value,stderr\n", 0) == 0);

    ExperimentConfig reseeded = config;
    reseeded.master_seed += 1;
    CHECK(table_to_csv(run_fig4(reseeded)) != csv1);
}

TEST_CASE("empty table serializes to a header-only CSV") {
    ResultTable empty;
    CHECK(table_to_csv(empty) == "experiment,n,m,model,seed,statistic,value,stderr\n");
}

TEST_CASE("emit_outputs writes files and byte-identical CSVs on rerun") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "vqclab_test_out";
    fs::remove_all(dir);

    ExperimentConfig config = tiny_fig4();
    config.out_dir = dir.string();
    config.format = "svg";
    const ResultTable table = run_fig4(config);
    const std::vector<std::string> written = emit_outputs(table, config);
    REQUIRE(written.size() == 3); // csv, svg, manifest

    const std::string csv_first = slurp(written[0]);
    const std::string svg = slurp(written[1]);
    CHECK(svg.find("<svg") != std::string::npos);
    // three series in the legend
    CHECK(svg.find("naive") != std::string::npos);
    CHECK(svg.find("tn-vqc") != std::string::npos);
    CHECK(svg.find("tensor-hyper") != std::string::npos);

    const std::string manifest = slurp(written[2]);
    CHECK(manifest.find("master_seed") != std::string::npos);

    emit_outputs(run_fig4(config), config);
    CHECK(slurp(written[0]) == csv_first);
    fs::remove_all(dir);
}

TEST_CASE("json output embeds the manifest and all rows") {
    ExperimentConfig config = tiny_fig4();
    config.m_values = {2};
    const ResultTable table = run_fig4(config);
    const std::string json_text = table_to_json(table);
    CHECK(json_text.find("\"rows\"") != std::string::npos);
    CHECK(json_text.find("\"manifest\"") != std::string::npos);
    CHECK(json_text.find("output_variance") != std::string::npos);
}
