#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "hawkes/simulate.hpp"

using namespace hawkes;
using Catch::Matchers::WithinAbs;

namespace {

const Model1D kTable1{1.2, 0.6, 0.8, 0.0};

double mean_count(const PathSet& set, std::size_t node = 0) {
    double acc = 0.0;
    for (const auto& p : set.paths) acc += static_cast<double>(p.nodes[node].size());
    return acc / static_cast<double>(set.paths.size());
}

} // namespace

TEST_CASE("simulation refuses bad configurations") {
    CHECK_THROWS_AS(simulate_thinning(Model1D{1.0, 1.0, 1.0, 0.0}, {1000.0, 1, 0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(simulate_cluster(Model1D{1.0, 1.2, 1.0, 0.0}, {1000.0, 1, 0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(simulate_thinning(kTable1, {0.0, 1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(simulate_thinning(kTable1, {10.0, 0, 0}), std::invalid_argument);
}

TEST_CASE("paths are well-formed") {
    for (SimMethod method : {SimMethod::thinning, SimMethod::cluster}) {
        SimConfig config{200.0, 4, 99, method};
        const auto set = simulate(Model1D{1.2, 0.6, 0.8, 2.0}, config);
        REQUIRE(set.paths.size() == 4);
        for (const auto& path : set.paths) {
            REQUIRE(path.nodes.size() == 1);
            const auto& ts = path.nodes[0].times();
            for (std::size_t i = 0; i < ts.size(); ++i) {
                CHECK(ts[i] >= 0.0);
                CHECK(ts[i] <= 200.0);
                if (i > 0) CHECK(ts[i] > ts[i - 1]);
            }
        }
    }
}

TEST_CASE("alpha = 0 gives Poisson counts") {
    const Model1D poisson{2.0, 0.0, 1.0, 0.0};
    SimConfig config{1000.0, 100, 4242};
    for (SimMethod method : {SimMethod::thinning, SimMethod::cluster}) {
        config.method = method;
        const auto set = simulate(poisson, config);
        // mean count 2000, tolerance 3 * sqrt(2000/100)
        CHECK_THAT(mean_count(set), WithinAbs(2000.0, 3.0 * std::sqrt(2000.0 / 100.0)));
    }
}

TEST_CASE("empirical rate approaches the expected intensity, with and without latency") {
    for (double tau : {0.0, 2.0}) {
        Model1D model = kTable1;
        model.tau = tau;
        SimConfig config{2000.0, 10, 7};
        const auto thin = simulate_thinning(model, config);
        const auto clus = simulate_cluster(model, config);
        CHECK_THAT(empirical_rate(thin), WithinAbs(4.8, 0.25));
        CHECK_THAT(empirical_rate(clus), WithinAbs(4.8, 0.25));
    }
}

TEST_CASE("empirical rate bookkeeping") {
    PathSet set;
    set.dim = 1;
    set.config.end_time = 10.0;
    SimPath p1, p2;
    std::vector<double> a(10), b(5), c(15);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = 0.1 + static_cast<double>(i);
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = 0.2 + static_cast<double>(i);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = 0.3 + 0.5 * static_cast<double>(i);
    p1.nodes.emplace_back(a);
    set.paths = {p1};
    CHECK(empirical_rate(set) == 1.0);

    SimPath q1, q2;
    q1.nodes.emplace_back(b);
    q2.nodes.emplace_back(c);
    set.paths = {q1, q2};
    CHECK(empirical_rate(set) == 1.0);

    set.paths.clear();
    CHECK_THROWS_AS(empirical_rate(set), std::invalid_argument);
}

TEST_CASE("same seed reproduces identical paths, different seeds differ") {
    const Model1D model{1.2, 0.6, 0.8, 2.0};
    for (SimMethod method : {SimMethod::thinning, SimMethod::cluster}) {
        SimConfig config{500.0, 3, 31337, method};
        const auto a = simulate(model, config);
        const auto b = simulate(model, config);
        REQUIRE(a.paths.size() == b.paths.size());
        for (std::size_t p = 0; p < a.paths.size(); ++p)
            CHECK(a.paths[p].nodes[0].times() == b.paths[p].nodes[0].times());

        config.seed = 31338;
        const auto c = simulate(model, config);
        CHECK(a.paths[0].nodes[0].times() != c.paths[0].nodes[0].times());
    }
}

TEST_CASE("cluster genealogy: offspring mean and minimum delay") {
    const Model1D model{1.2, 0.6, 0.8, 2.0};
    ClusterTrace trace;
    const auto set = simulate_cluster(model, SimConfig{4000.0, 1, 2718}, &trace);
    REQUIRE(trace.parents[0] > 10000);
    const double mean_offspring =
        trace.spawned[0][0] / static_cast<double>(trace.parents[0]);
    CHECK_THAT(mean_offspring, WithinAbs(0.75, 0.015)); // 2% of 0.75
    CHECK(trace.min_delay[0][0] >= 2.0);
    (void)set;
}

TEST_CASE("latency beyond the horizon suppresses all self-excitation") {
    // with tau > T no event can influence another inside [0, T]
    const Model1D model{1.0, 0.9, 1.0, 5000.0};
    SimConfig config{2000.0, 10, 555};
    const auto thin = simulate_thinning(model, config);
    const auto clus = simulate_cluster(model, config);
    CHECK_THAT(empirical_rate(thin), WithinAbs(1.0, 0.05));
    CHECK_THAT(empirical_rate(clus), WithinAbs(1.0, 0.05));
}

TEST_CASE("thinning and cluster rates agree for a 2-D model") {
    const ModelMD model({0.6, 0.2}, {{0.5, 0.7}, {0.9, 0.3}}, {{1.4, 1.8}, {2.2, 1.0}}, 2.0);
    SimConfig config{2000.0, 8, 97};
    const auto thin = simulate_thinning(model, config);
    const auto clus = simulate_cluster(model, config);
    // expected rates solve (I - Gamma) r = lambda0: (1.7111, 1.2857)
    CHECK_THAT(empirical_rate(thin, 0), WithinAbs(1.7111, 0.09));
    CHECK_THAT(empirical_rate(thin, 1), WithinAbs(1.2857, 0.07));
    CHECK_THAT(empirical_rate(clus, 0), WithinAbs(1.7111, 0.09));
    CHECK_THAT(empirical_rate(clus, 1), WithinAbs(1.2857, 0.07));
}

TEST_CASE("matrix latency is honored per pair") {
    // cross kernel delayed by 3, self kernel immediate
    const Matrix tau = {{0.0, 3.0}, {3.0, 0.0}};
    const ModelMD model({0.5, 0.5}, {{0.3, 0.4}, {0.4, 0.3}}, {{1.0, 1.0}, {1.0, 1.0}}, tau);
    ClusterTrace trace;
    simulate_cluster(model, SimConfig{800.0, 2, 1234}, &trace);
    CHECK(trace.min_delay[0][1] >= 3.0);
    CHECK(trace.min_delay[1][0] >= 3.0);
    CHECK(trace.min_delay[0][0] < 3.0); // undelayed pair sees small delays
}

TEST_CASE("outputs do not depend on the worker-thread count") {
    const Model1D model{1.2, 0.6, 0.8, 2.0};
    SimConfig config{300.0, 6, 2468};
    const auto parallel = simulate_thinning(model, config);

    setenv("HAWKES_THREADS", "1", 1);
    const auto serial = simulate_thinning(model, config);
    unsetenv("HAWKES_THREADS");

    REQUIRE(parallel.paths.size() == serial.paths.size());
    for (std::size_t p = 0; p < parallel.paths.size(); ++p)
        CHECK(parallel.paths[p].nodes[0].times() == serial.paths[p].nodes[0].times());
}
