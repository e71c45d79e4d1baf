#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "hawkes/io.hpp"

using namespace hawkes;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("hawkes_io_test_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

void write_raw(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    out << content;
}

} // namespace

TEST_CASE("plain format round-trips at full precision") {
    TempDir dir;
    std::mt19937_64 gen(19);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> ts = {1e-9};
    for (int i = 0; i < 200; ++i) ts.push_back(ts.back() + 1e-7 + unif(gen) * 1234.5678901234);
    const EventSeries series(ts);

    const fs::path file = dir.path / "events.txt";
    io::write_timestamps_plain(file, series);
    const auto back = io::read_timestamps_plain(file);
    CHECK(back.times() == series.times()); // bit-exact
}

TEST_CASE("plain format reads the documented example") {
    TempDir dir;
    const fs::path file = dir.path / "plain.txt";
    write_raw(file, "1.0\n2.5\n7.0\n");
    const auto series = io::read_timestamps_plain(file);
    CHECK(series.times() == std::vector<double>{1.0, 2.5, 7.0});
}

TEST_CASE("long format splits per series id") {
    TempDir dir;
    const fs::path file = dir.path / "long.csv";
    write_raw(file, "0,1.0\n1,1.5\n0,2.0\n");
    const auto result = io::read_timestamps_long(file);
    REQUIRE(result.series.size() == 2);
    CHECK(result.ids == std::vector<std::string>{"0", "1"});
    CHECK(result.series[0].times() == std::vector<double>{1.0, 2.0});
    CHECK(result.series[1].times() == std::vector<double>{1.5});

    SECTION("optional header") {
        write_raw(file, "series,t\n0,1.0\n0,2.0\n");
        CHECK(io::read_timestamps_long(file).series[0].size() == 2);
    }
    SECTION("numeric ids sort numerically") {
        write_raw(file, "10,1.0\n2,1.5\n");
        CHECK(io::read_timestamps_long(file).ids == std::vector<std::string>{"2", "10"});
    }
    SECTION("round trip") {
        const std::vector<EventSeries> series = {EventSeries({0.25, 1.5}),
                                                 EventSeries({0.125})};
        const fs::path out = dir.path / "out.csv";
        io::write_timestamps_long(out, series);
        const auto back = io::read_timestamps_long(out);
        REQUIRE(back.series.size() == 2);
        CHECK(back.series[0].times() == series[0].times());
        CHECK(back.series[1].times() == series[1].times());
    }
}

TEST_CASE("errors carry the offending line number") {
    TempDir dir;
    const fs::path file = dir.path / "bad.txt";

    write_raw(file, "2.0\n1.0\n");
    CHECK_THROWS_WITH(io::read_timestamps_plain(file),
                      Catch::Matchers::ContainsSubstring(":2:"));

    write_raw(file, "1.0\nnot_a_number\n");
    CHECK_THROWS_WITH(io::read_timestamps_plain(file),
                      Catch::Matchers::ContainsSubstring(":2:"));

    write_raw(file, "");
    CHECK_THROWS_WITH(io::read_timestamps_plain(file),
                      Catch::Matchers::ContainsSubstring("no timestamps"));

    CHECK_THROWS_WITH(io::read_timestamps_plain(dir.path / "missing.txt"),
                      Catch::Matchers::ContainsSubstring("cannot open"));
}

TEST_CASE("duplicates are rejected by default and jittered on request") {
    TempDir dir;
    const fs::path file = dir.path / "dups.txt";
    write_raw(file, "1.0\n1.0\n1.0\n2.0\n");

    CHECK_THROWS_WITH(io::read_timestamps_plain(file),
                      Catch::Matchers::ContainsSubstring("duplicate"));

    io::ReadOptions options;
    options.dedup_jitter_eps = 1e-9;
    std::size_t dedup = 0;
    const auto series = io::read_timestamps_plain(file, options, &dedup);
    CHECK(dedup == 2);
    REQUIRE(series.size() == 4);
    CHECK(series[0] == 1.0);
    CHECK(series[1] == 1.0 + 1e-9);
    CHECK(series[2] == 1.0 + 2e-9);

    SECTION("jitter cannot fix a genuinely decreasing file") {
        write_raw(file, "1.0\n0.5\n");
        CHECK_THROWS_WITH(io::read_timestamps_plain(file, options),
                          Catch::Matchers::ContainsSubstring("strictly increasing"));
    }
}

TEST_CASE("model files round-trip") {
    TempDir dir;
    const fs::path file = dir.path / "model.txt";

    SECTION("univariate") {
        io::write_model(file, Model1D{1.2, 0.6, 0.8, 2.0});
        const auto model = io::read_model(file);
        REQUIRE(model.dim() == 1);
        CHECK(model.lambda0[0] == 1.2);
        CHECK(model.alpha[0][0] == 0.6);
        CHECK(model.beta[0][0] == 0.8);
        CHECK(model.tau[0][0] == 2.0);
    }
    SECTION("multivariate with scalar latency") {
        const ModelMD model({0.6, 0.2}, {{0.5, 0.7}, {0.9, 0.3}}, {{1.4, 1.8}, {2.2, 1.0}},
                            250e-6);
        io::write_model(file, model);
        const auto back = io::read_model(file);
        CHECK(back.alpha == model.alpha);
        CHECK(back.beta == model.beta);
        CHECK(back.tau == model.tau);
    }
    SECTION("matrix latency") {
        const Matrix tau = {{0.0, 3.0}, {3.0, 0.0}};
        const ModelMD model({0.5, 0.5}, {{0.3, 0.4}, {0.4, 0.3}}, {{1.0, 1.0}, {1.0, 1.0}}, tau);
        io::write_model(file, model);
        CHECK(io::read_model(file).tau == tau);
    }
    SECTION("missing keys are reported") {
        write_raw(file, "dim=1\nlambda0=1.0\n");
        CHECK_THROWS_WITH(io::read_model(file), Catch::Matchers::ContainsSubstring("missing key"));
    }
}

TEST_CASE("atomic writes leave no partial target file") {
    TempDir dir;
    const fs::path missing_dir = dir.path / "nope" / "file.txt";
    CHECK_THROWS_AS(io::write_file_atomic(missing_dir, "payload"), std::runtime_error);
    CHECK_FALSE(fs::exists(missing_dir));

    const fs::path ok = dir.path / "ok.txt";
    io::write_file_atomic(ok, "payload");
    CHECK(fs::exists(ok));
    CHECK_FALSE(fs::exists(dir.path / "ok.txt.tmp"));
}

TEST_CASE("manifest writing preserves order") {
    TempDir dir;
    const fs::path file = dir.path / "manifest.txt";
    io::write_manifest(file, {{"command", "simulate"}, {"seed", "7"}, {"paths", "3"}});
    std::ifstream in(file);
    std::string l1, l2, l3;
    std::getline(in, l1);
    std::getline(in, l2);
    std::getline(in, l3);
    CHECK(l1 == "command=simulate");
    CHECK(l2 == "seed=7");
    CHECK(l3 == "paths=3");
}
