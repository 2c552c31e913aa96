#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "sykgw/errors.hpp"
#include "sykgw/experiments.hpp"
#include "sykgw/stats.hpp"

using namespace sykgw;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("sykgw_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

}  // namespace

TEST_CASE("summary statistics") {
    const auto s = summarize({1.0, 2.0, 3.0, 4.0});
    CHECK(s.mean == 2.5);
    CHECK(s.sigma == doctest::Approx(std::sqrt(5.0 / 3.0)).epsilon(1e-14));
    CHECK(s.std_error == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0).epsilon(1e-14));
    CHECK(s.n == 4);
    const auto one = summarize({0.7});
    CHECK(one.mean == 0.7);
    CHECK(one.sigma == 0.0);
    CHECK_THROWS_AS(summarize({}), InvalidArgument);

    // Sample variance against a direct two-pass computation.
    std::mt19937_64 rng(1);
    std::normal_distribution<double> nd(0.3, 2.0);
    std::vector<double> v(500);
    for (double& x : v) x = nd(rng);
    double m = 0.0, ss = 0.0;
    for (double x : v) m += x;
    m /= 500.0;
    for (double x : v) ss += (x - m) * (x - m);
    CHECK(summarize(v).sigma == doctest::Approx(std::sqrt(ss / 499.0)).epsilon(1e-12));
}

TEST_CASE("parabolic peak and log-log slope") {
    std::vector<double> t, f;
    for (int k = 0; k <= 20; ++k) {
        t.push_back(0.5 * k);
        f.push_back(3.0 - 0.7 * (0.5 * k - 4.3) * (0.5 * k - 4.3));
    }
    const auto p = quadratic_peak(t, f);
    CHECK(p.t == doctest::Approx(4.3).epsilon(1e-12));
    CHECK(p.value == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(p.index == 9);
    const auto edge = quadratic_peak({0.0, 1.0, 2.0}, {3.0, 2.0, 1.0});
    CHECK(edge.t == 0.0);
    CHECK(edge.value == 3.0);

    CHECK(loglog_slope({0.1, 0.05, 0.025}, {2e-3, 5e-4, 1.25e-4}) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK_THROWS_AS(loglog_slope({0.1, 0.2}, {0.0, 1.0}), InvalidArgument);
}

TEST_CASE("tables round-trip exactly") {
    const auto dir = scratch_dir("persist");
    Table t;
    t.columns = {"name", "x", "k"};
    t.rows.push_back(RowBuilder().add("a").add(0.1).add(3).done());
    t.rows.push_back(RowBuilder().add("b").add(-1.0 / 3.0).add(std::size_t{7}).done());
    t.rows.push_back(RowBuilder().add("c").add(std::nan("")).add(-2).done());
    const auto path = (dir / "t.tsv").string();
    write_table(path, t);
    const Table back = read_table(path);
    CHECK(back == t);
    CHECK(back.number(1, "x") == -1.0 / 3.0);
    CHECK(back.number(0, "x") == 0.1);
    CHECK(std::isnan(back.number(2, "x")));
    CHECK(back.at(1, "name") == "b");
    CHECK_THROWS_AS(back.number(0, "name"), InvalidArgument);
    CHECK_THROWS_AS(back.column("missing"), InvalidArgument);

    Table bad = t;
    bad.rows.push_back({"short"});
    CHECK_THROWS_AS(write_table((dir / "bad.tsv").string(), bad), InvalidArgument);
    Table tab = t;
    tab.rows[0][0] = "a\tb";
    CHECK_THROWS_AS(write_table((dir / "tab.tsv").string(), tab), InvalidArgument);

    {
        std::ofstream out(dir / "ragged.tsv");
        out << "a\tb\n1\t2\n3\n";
    }
    CHECK_THROWS_AS(read_table((dir / "ragged.tsv").string()), InvalidArgument);

    const std::string missing = (dir / "nope" / "x.tsv").string();
    try {
        read_table(missing);
        FAIL("expected an I/O error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find(missing) != std::string::npos);
    }
    fs::remove_all(dir);
}

TEST_CASE("configuration parsing") {
    CHECK(default_config(ExperimentKind::AmplitudeScan).n_avg == 20);
    CHECK(default_config(ExperimentKind::ReoptMap).n_avg == 5);
    CHECK(default_config(ExperimentKind::Scaling).n_avg == 50);
    CHECK(default_config(ExperimentKind::Convergence).n_avg == 3);
    CHECK(default_config(ExperimentKind::Otoc).t_grid.size() == 121);
    for (const char* name : {"amplitude-scan", "freq-scan", "chirp", "otoc", "reopt-map", "scaling", "convergence",
                             "calibrate"})
        CHECK(std::string(to_string(parse_experiment_kind(name))) == name);
    CHECK_THROWS_AS(parse_experiment_kind("nope"), InvalidArgument);

    const auto c = parse_config(ExperimentKind::Chirp,
                                R"({"n": 8, "t_grid": {"start": 1, "stop": 2, "step": 0.5}, "scheme": "lt",
                                    "otoc_pairs": [[0, 1]], "threads": 3})");
    CHECK(c.n == 8);
    CHECK(c.t_grid == std::vector<double>{1.0, 1.5, 2.0});
    CHECK(c.propagator.scheme == Scheme::LieTrotter);
    CHECK(c.threads == 3);
    CHECK(c.beta == 2.0);

    CHECK_THROWS_AS(parse_config(ExperimentKind::Chirp, R"({"bogus": 1})"), InvalidArgument);
    CHECK_THROWS_AS(parse_config(ExperimentKind::Chirp, R"({"n": "eight"})"), InvalidArgument);
    CHECK_THROWS_AS(parse_config(ExperimentKind::Chirp, R"({"n": 7})"), InvalidArgument);
    CHECK_THROWS_AS(parse_config(ExperimentKind::Chirp, R"({"experiment": "otoc"})"), InvalidArgument);
    CHECK_THROWS_AS(parse_config(ExperimentKind::Chirp, "[1, 2]"), InvalidArgument);
    CHECK_THROWS_AS(parse_config(ExperimentKind::Chirp, "{"), InvalidArgument);

    // The hash ignores where results go and how many threads compute them.
    auto a = default_config(ExperimentKind::Otoc);
    auto b = a;
    b.out_dir = "elsewhere";
    b.threads = 8;
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 16);
    b.beta = 2.5;
    CHECK(config_hash(a) != config_hash(b));
    // Round trip through the canonical form.
    CHECK(canonical_json(parse_config(ExperimentKind::Otoc, canonical_json(a))) == canonical_json(a));
}

TEST_CASE("small calibration run is deterministic") {
    auto cfg = parse_config(ExperimentKind::Calibrate,
                            R"({"n": 8, "n_avg": 2, "calibration_g": [3, 5], "calibration_t": [2, 3, 4]})");
    const auto r1 = run_experiment(cfg);
    cfg.threads = 2;
    const auto r2 = run_experiment(cfg);
    REQUIRE(r1.tables.size() == r2.tables.size());
    for (std::size_t k = 0; k < r1.tables.size(); ++k) CHECK(r1.tables[k] == r2.tables[k]);

    const Table& raw = r1.table("calibrate_raw");
    CHECK(raw.rows.size() == 12);
    for (const char* col : {"seed", "g", "t", "fidelity", "config_hash", "version"}) CHECK_NOTHROW(raw.column(col));
    CHECK(raw.at(0, "config_hash") == config_hash(cfg));
    CHECK(raw.at(0, "version") == artifact_version());

    // The summary optimum is the argmax of the seed-mean map.
    const Table& map = r1.table("calibrate_map");
    const Table& sum = r1.table("calibrate_summary");
    std::size_t best = 0;
    for (std::size_t i = 1; i < map.rows.size(); ++i)
        if (map.number(i, "f_mean") > map.number(best, "f_mean")) best = i;
    CHECK(sum.number(0, "g_opt") == map.number(best, "g"));
    CHECK(sum.number(0, "t_opt") == map.number(best, "t"));
    CHECK(sum.number(0, "f_opt_mean") == map.number(best, "f_mean"));

    const auto dir = scratch_dir("experiment");
    const auto paths = write_experiment(r1, dir.string());
    CHECK(fs::exists(dir / "calibrate_raw.tsv"));
    CHECK(fs::exists(dir / "calibrate_config.json"));
    CHECK(fs::exists(dir / "calibrate_timing.tsv"));
    CHECK(read_table((dir / "calibrate_summary.tsv").string()) == sum);
    CHECK(paths.size() == r1.tables.size() + 2);
    fs::remove_all(dir);
}
