#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "osgpcp/bench.hpp"
#include "osgpcp/errors.hpp"

using namespace osgpcp;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig c;
    c.n = 800;
    c.num_features = 40;
    c.seed_data = 3;
    c.seed_features = 3;
    return c;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::filesystem::path temp(const std::string& name) { return std::filesystem::temp_directory_path() / name; }

}  // namespace

TEST_CASE("running_coverage") {
    std::vector<TraceRow> rows(4);
    const bool flags[] = {true, false, true, true};
    for (int i = 0; i < 4; ++i) rows[static_cast<std::size_t>(i)].acp_cov = flags[i];
    const auto cov = running_coverage(rows, "osgpcp");
    REQUIRE(cov.size() == 4);
    CHECK(cov[0] == 1.0);
    CHECK(cov[1] == 0.5);
    CHECK(cov[2] == doctest::Approx(0.6667).epsilon(1e-4));
    CHECK(cov[3] == 0.75);

    for (auto& r : rows) r.bayes_cov = true;
    for (double v : running_coverage(rows, "bayes")) CHECK(v == 1.0);
    for (double v : running_coverage(rows, "standard_cp")) CHECK(v == 0.0);

    CHECK_THROWS_AS(running_coverage(rows, "ridge"), InputError);
    CHECK_THROWS_AS(running_coverage({}, "bayes"), InputError);
}

TEST_CASE("trace CSV") {
    const auto path = temp("osgpcp_empty_trace.csv");
    write_trace({}, path);
    CHECK(slurp(path) == std::string(kTraceHeader) + "\n");
    CHECK(read_trace(path).empty());

    const ExperimentResult res = run_experiment(small_config());
    write_trace(res.rows, path);
    const auto back = read_trace(path);
    REQUIRE(back.size() == res.rows.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        const auto& a = res.rows[i];
        const auto& b = back[i];
        CHECK(b.t == a.t);
        CHECK(std::abs(b.y_true - a.y_true) <= 1e-9);
        CHECK(std::abs(b.bayes_lo - a.bayes_lo) <= 1e-9);
        CHECK(std::abs(b.scp_hi - a.scp_hi) <= 1e-9);
        CHECK(b.acp_lo == a.acp_lo);  // includes +inf for empty sets
        CHECK(b.acp_cov == a.acp_cov);
        CHECK(b.acp_empty == a.acp_empty);
        CHECK(std::abs(b.q_t - a.q_t) <= 1e-9);
        CHECK(std::abs(b.eta_t - a.eta_t) <= 1e-9);
        CHECK(b.reset == a.reset);
    }
    std::filesystem::remove(path);
    CHECK_THROWS_AS(write_trace({}, "/nonexistent-dir/trace.csv"), IoError);
}

TEST_CASE("sidecar records the resolved config") {
    ExperimentConfig c = small_config();
    const ExperimentResult res = run_experiment(c);
    const auto path = temp("osgpcp_sidecar.json");
    write_sidecar(res, path);
    const auto doc = nlohmann::json::parse(slurp(path));
    CHECK(doc["config"]["alpha"].get<double>() == 0.1);
    CHECK(doc["config"]["features_D"].get<int>() == 40);
    CHECK(doc["config"]["eta_mode"] == "constant");
    CHECK(doc["hyperparams"]["sigma_n2"].get<double>() == res.hyperparams.sigma_n2);
    CHECK(doc["conventions"]["first_trace_slot"].get<int>() == 101);
    CHECK(doc["rows"].get<std::size_t>() == 700);
    std::filesystem::remove(path);
    CHECK(sidecar_path("out/trace.csv") == std::filesystem::path("out/trace.csv.json"));
}

TEST_CASE("experiment produces one row per post-warm-up slot") {
    const ExperimentResult res = run_experiment(small_config());
    REQUIRE(res.rows.size() == 700);
    CHECK(res.rows.front().t == 101);
    CHECK(res.rows.back().t == 800);
    CHECK(res.q0 >= 0.0);
    CHECK(res.q0 <= 20.0);
    CHECK(res.rows.front().q_t == res.q0);
    for (const auto& r : res.rows) {
        // All three sets are centred on the same predictive mean.
        const double bayes_mid = 0.5 * (r.bayes_lo + r.bayes_hi);
        CHECK(0.5 * (r.scp_lo + r.scp_hi) == doctest::Approx(bayes_mid).epsilon(1e-12));
        if (!r.acp_empty) CHECK(0.5 * (r.acp_lo + r.acp_hi) == doctest::Approx(bayes_mid).epsilon(1e-12));
        else CHECK(r.acp_size == 0.0);
        CHECK(r.eta_t == 0.05);
        CHECK_FALSE(r.reset);
    }
}

TEST_CASE("labels never leak into the slot's own prediction sets") {
    ExperimentConfig c = small_config();
    const Stream base = load_dataset(c);
    Stream probe = base;
    const std::size_t k = 450;  // 0-based index, slot 451
    probe[k].y += 1000.0;

    const auto a = run_experiment(c, base).rows;
    const auto b = run_experiment(c, probe).rows;
    const std::size_t row = k - c.warmup;
    for (std::size_t i = 0; i <= row; ++i) {
        CHECK(a[i].bayes_lo == b[i].bayes_lo);
        CHECK(a[i].scp_hi == b[i].scp_hi);
        CHECK(a[i].acp_lo == b[i].acp_lo);
        CHECK(a[i].q_t == b[i].q_t);
    }
    CHECK(a[row + 1].bayes_lo != b[row + 1].bayes_lo);
}

TEST_CASE("decaying mode schedule and determinism") {
    ExperimentConfig c = small_config();
    c.eta_mode = EtaMode::DecayingWithReset;
    const ExperimentResult r1 = run_experiment(c);
    CHECK(r1.rows[0].eta_t == 1.0);
    CHECK(r1.rows[31].eta_t == doctest::Approx(0.125));

    const auto p1 = temp("osgpcp_det1.csv"), p2 = temp("osgpcp_det2.csv");
    write_trace(r1.rows, p1);
    write_trace(run_experiment(c).rows, p2);
    CHECK(slurp(p1) == slurp(p2));
    std::filesystem::remove(p1);
    std::filesystem::remove(p2);
}

TEST_CASE("fixed hyperparameters allow a zero warm-up") {
    ExperimentConfig c = small_config();
    c.warmup = 0;
    CHECK_THROWS_AS(run_experiment(c), InputError);
    c.fixed_hyperparams = KernelHyperparams{0.5, 3.0, 0.01};
    const ExperimentResult res = run_experiment(c);
    CHECK(res.rows.size() == 800);
    CHECK(res.q0 == 10.0);
    CHECK(std::isnan(res.log_evidence));
    // No scores yet: standard CP starts with the full line.
    CHECK(std::isinf(res.rows.front().scp_size));
}

TEST_CASE("config validation") {
    ExperimentConfig c = small_config();
    c.alpha = 1.0;
    CHECK_THROWS_AS(run_experiment(c), InputError);
    c = small_config();
    c.num_features = 0;
    CHECK_THROWS_AS(run_experiment(c), InputError);
    c = small_config();
    c.warmup = 800;
    CHECK_THROWS_AS(run_experiment(c), InputError);
    c = small_config();
    c.dataset = Dataset::Csv;
    c.csv_path = "/nonexistent/file.csv";
    CHECK_THROWS_AS(run_experiment(c), CsvError);
}

TEST_CASE("summarize") {
    std::vector<TraceRow> rows(4);
    rows[0].acp_empty = true;
    rows[1].scp_size = std::numeric_limits<double>::infinity();
    rows[1].scp_cov = true;
    rows[2].scp_size = 2.0;
    rows[3].scp_size = 4.0;
    const auto s = summarize(rows);
    REQUIRE(s.size() == 3);
    CHECK(s[1].method == "standard_cp");
    CHECK(s[1].final_coverage == 0.25);
    CHECK(s[1].infinite_sets == 1);
    CHECK(s[1].mean_size == 2.0);
    CHECK(s[2].empty_sets == 1);
}
