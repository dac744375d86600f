#include <cmath>
#include <filesystem>
#include <stdexcept>

#include "doctest.h"

#include "bsglab/config.hpp"
#include "bsglab/experiments.hpp"

using namespace bsg;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / "bsglab_experiments_test") {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

ExperimentRecord run(const std::string& text) { return run_experiment(Config::parse(text)); }

}  // namespace

TEST_CASE("unknown experiment kinds are rejected with the full menu") {
    CHECK_THROWS_WITH_AS(run("experiment = frobnicate\n"), doctest::Contains("frobnicate"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(run("experiment = frobnicate\n"), doctest::Contains("mc-validate"),
                         std::invalid_argument);
    CHECK_THROWS_AS(run("n = 2\n"), std::invalid_argument);  // missing kind
}

TEST_CASE("pressure experiment snapshot, identity, and determinism") {
    std::string cfg = "experiment = pressure\nn = 2\nk = 3\nbeta = 0.7\nn_samples = 32\nseed = 9\n";
    ExperimentRecord rec = run(cfg);
    CHECK(rec.experiment == "pressure");
    CHECK(rec.experiment_id == "pressure-s9");
    CHECK(rec.pass);
    CHECK(rec.config.at("beta") == format_double(0.7));
    CHECK(rec.config.at("dist") == "rademacher");
    REQUIRE(rec.table.rows.size() == 1);
    CHECK(rec.table.number_at(0, "mean") > 0.0);
    ExperimentRecord again = run(cfg);
    CHECK(again.table.same_as(rec.table));
    CHECK(again.summary == rec.summary);
}

TEST_CASE("lemma experiment passes its bound on every sampled case") {
    ExperimentRecord rec = run("experiment = lemma\ncases = 25\nseed = 3\n");
    CHECK(rec.pass);
    CHECK(rec.table.rows.size() == 25);
    for (std::size_t r = 0; r < rec.table.rows.size(); ++r) {
        CAPTURE(r);
        CHECK(rec.table.text_at(r, "pass") == "true");
        CHECK(rec.table.number_at(r, "gap") <=
              rec.table.number_at(r, "bound") + 1e-9);
    }
}

TEST_CASE("theorem1 experiment emits one row per size with finite statistics") {
    ExperimentRecord rec = run(
        "experiment = theorem1\nsizes = 4, 6\nn_samples = 60\nbeta = 0.5\nseed = 2\n");
    REQUIRE(rec.table.rows.size() == 2);
    for (std::size_t r = 0; r < 2; ++r) {
        CHECK(rec.table.number_at(r, "bound") > 0.0);
        CHECK(rec.table.number_at(r, "se") > 0.0);
        CHECK(std::isfinite(rec.table.number_at(r, "gap")));
        CHECK(rec.table.number_at(r, "m") == 3.0);
    }
    CHECK(rec.table.number_at(1, "bound") < rec.table.number_at(0, "bound"));
}

TEST_CASE("theorem2 and scaling experiments expose decay diagnostics") {
    ExperimentRecord t2 = run(
        "experiment = theorem2\nsizes = 4, 8\nn_samples = 80\np = 2\nseed = 5\n");
    REQUIRE(t2.table.rows.size() == 2);
    CHECK(std::isfinite(t2.table.number_at(0, "c2_residual")));
    CHECK(std::isnan(t2.table.number_at(1, "c2_residual")));  // 4x4 exceeds the budget
    CHECK(t2.table.number_at(0, "bound_thm2") > 0.0);

    ExperimentRecord sc = run(
        "experiment = scaling\nsizes = 4, 8\nn_samples = 80\nseed = 5\n");
    REQUIRE(sc.table.rows.size() == 2);
    CHECK(sc.table.number_at(0, "var") > 0.0);
    CHECK(sc.summary.find("slope") != std::string::npos);
}

TEST_CASE("hopfield experiments run from configuration") {
    ExperimentRecord linf = run(
        "experiment = hopfield-linf\nshapes = 2x1, 3x2\nbetas = 0.3\nps = 2, 8\n");
    CHECK(linf.pass);
    CHECK(linf.table.rows.size() == 4);
    ExperimentRecord cmp = run(
        "experiment = hopfield-compare\nn = 2\nk = 1\nbetas = 0.4\nn_samples = 200\nseed = 8\n");
    CHECK(cmp.pass);
    REQUIRE(cmp.table.rows.size() == 1);
    CHECK(cmp.table.number_at(0, "diff") > 0.0);
}

TEST_CASE("mc-validate produces checks and an auxiliary energy curve") {
    ExperimentRecord rec = run(
        "experiment = mc-validate\nshapes = 3x3\nbeta = 0.3\nstep = 0.1\n"
        "sweeps = 640\nburn_in = 128\nstat_n = 2\nstat_k = 2\nseed = 4\n");
    REQUIRE(rec.table.rows.size() == 2);
    CHECK(rec.table.text_at(0, "check") == "ti_vs_exact");
    CHECK(rec.table.text_at(1, "check") == "stationarity");
    CHECK(rec.table.number_at(1, "estimate") < 1e-12);
    REQUIRE(rec.aux.count("energy_curve") == 1);
    CHECK(rec.aux.at("energy_curve").rows.size() == 4);  // beta = 0, 0.1, 0.2, 0.3
    CHECK(rec.aux.at("energy_curve").number_at(0, "energy") == 0.0);
}

TEST_CASE("records round trip through the filesystem") {
    TempDir dir;
    ExperimentRecord rec = run(
        "experiment = mc-validate\nshapes = 2x2\nbeta = 0.2\nstep = 0.1\n"
        "sweeps = 512\nburn_in = 64\nstat_n = 2\nstat_k = 2\nseed = 6\n");
    fs::path json = write_record(rec, dir.path);
    CHECK(json.filename() == "mc-validate-s6.record.json");
    CHECK(fs::exists(dir.path / "mc-validate-s6.csv"));
    CHECK(fs::exists(dir.path / "mc-validate-s6.energy_curve.csv"));

    ExperimentRecord back = read_record(json);
    CHECK(back.experiment == rec.experiment);
    CHECK(back.experiment_id == rec.experiment_id);
    CHECK(back.pass == rec.pass);
    CHECK(back.summary == rec.summary);
    CHECK(back.config == rec.config);
    CHECK(back.table.same_as(rec.table));
    REQUIRE(back.aux.count("energy_curve") == 1);
    CHECK(back.aux.at("energy_curve").same_as(rec.aux.at("energy_curve")));
}

TEST_CASE("emit projects plot files per kind and rejects mismatches") {
    TempDir dir;
    ExperimentRecord t1 = run(
        "experiment = theorem1\nsizes = 4, 6\nn_samples = 40\nseed = 2\n");
    fs::path gap_csv = emit_plotdata(t1, "gap_vs_size", dir.path);
    CHECK(gap_csv.filename() == "theorem1-s2.gap_vs_size.csv");
    Table gap = Table::read_csv(gap_csv);
    CHECK(gap.has_column("log_size"));
    CHECK(gap.has_column("log_abs_gap"));
    CHECK(gap.rows.size() == 2);
    CHECK(gap.number_at(0, "log_size") == doctest::Approx(std::log(4.0)));

    ExperimentRecord sc = run(
        "experiment = scaling\nsizes = 4, 8\nn_samples = 60\nseed = 5\n");
    Table mom = Table::read_csv(emit_plotdata(sc, "moment_vs_size", dir.path));
    CHECK(mom.has_column("log_moment"));

    ExperimentRecord linf = run(
        "experiment = hopfield-linf\nshapes = 2x1\nbetas = 0.3\nps = 2\n");
    Table pn = Table::read_csv(emit_plotdata(linf, "pnorm_vs_p", dir.path));
    CHECK(pn.has_column("linf"));

    ExperimentRecord mcv = run(
        "experiment = mc-validate\nshapes = 2x2\nbeta = 0.2\nstep = 0.1\n"
        "sweeps = 512\nburn_in = 64\nstat_n = 2\nstat_k = 2\nseed = 6\n");
    Table curve = Table::read_csv(emit_plotdata(mcv, "energy_vs_beta", dir.path));
    CHECK(curve.columns == std::vector<std::string>{"beta", "energy", "stderr"});

    CHECK_THROWS_WITH_AS(emit_plotdata(t1, "energy_vs_beta", dir.path),
                         doctest::Contains("gap_vs_size"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(emit_plotdata(t1, "nonsense", dir.path),
                         doctest::Contains("unknown kind"), std::invalid_argument);
}

TEST_CASE("default seed stamps the experiment id") {
    ExperimentRecord rec = run("experiment = pressure\nn = 1\nk = 1\nn_samples = 16\n");
    CHECK(rec.experiment_id == "pressure-s" + std::to_string(kDefaultSeed));
    CHECK(rec.config.at("seed") == std::to_string(kDefaultSeed));
}
