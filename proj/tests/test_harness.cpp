#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dicubic/harness.hpp"
#include "doctest.h"

using namespace dicubic;

namespace {

CubicPairSystem ones(int l, int m, int n) {
    return CubicPairSystem::validate(std::vector<i64>(l, 1), std::vector<i64>(l, 1),
                                     std::vector<i64>(m, 1), std::vector<i64>(n, 1));
}

ExperimentPlan quick_plan(CubicPairSystem sys, std::vector<i64> ladder) {
    ExperimentPlan plan(std::move(sys));
    plan.B_ladder = std::move(ladder);
    plan.prediction.series_cutoff = 30;
    plan.prediction.prime_cutoff = 11;
    plan.prediction.slab_samples = 20000;
    plan.cross_check_routes = false;
    return plan;
}

}  // namespace

TEST_CASE("plan validation") {
    ExperimentPlan plan = quick_plan(ones(1, 1, 1), {4, 2});
    CHECK_THROWS_AS(plan.validate(), ParamRange);
    plan.B_ladder = {};
    CHECK_THROWS_AS(plan.validate(), ParamRange);
    plan.B_ladder = {2, 4, 8};
    CHECK_NOTHROW(plan.validate());
}

TEST_CASE("builtin counterexample system") {
    CubicPairSystem cex = builtin_counterexample();
    CHECK(cex.a() == std::vector<i64>{49, 98, 147});
    CHECK(cex.b() == std::vector<i64>{49, 196, 196});
    CHECK(cex.c() == std::vector<i64>{1, 2, 7, 14});
    CHECK(cex.d() == std::vector<i64>{1, 2, 7, 14});
    CHECK(cex.classify() == SystemClass::A);
    CHECK(cex.q0star() == 7);
}

TEST_CASE("trivial system rows: exact closed form, out of classification") {
    ExperimentPlan plan = quick_plan(ones(1, 1, 1), {5, 10, 20});
    auto rows = run_verification(plan);
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows) {
        CHECK(r.count == i128(2 * r.B + 1));
        CHECK(r.cls == SystemClass::OutOfClassification);
        CHECK(r.flag == "out-of-classification");
    }
    CHECK(rows[2].doubling_defined);
    CHECK(rows[2].doubling == doctest::Approx(41.0 / 21.0));
    CHECK(!rows[0].doubling_defined);
}

TEST_CASE("counterexample rows: refuted, predictions zero, ratios undefined") {
    ExperimentPlan plan = quick_plan(builtin_counterexample(), {2, 4});
    auto rows = run_verification(plan);
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows) {
        CHECK(r.flag == "refuted@7");
        CHECK(r.prediction == 0.0);
        CHECK(!r.ratio_defined);
        CHECK(r.count > 0);  // the all-zero vector still counts
    }
}

TEST_CASE("doubling diagnostic approaches 2^{s-6} for the all-ones system") {
    ExperimentPlan plan = quick_plan(ones(3, 4, 4), {20, 40, 80});
    auto rows = run_verification(plan);
    REQUIRE(rows.size() == 3);
    CHECK(rows[1].doubling_defined);
    CHECK(rows[2].doubling_defined);
    CHECK(std::abs(rows[2].doubling - 32.0) <= 0.15 * 32.0);
    for (const auto& r : rows) {
        CHECK(r.ratio_defined);
        CHECK(r.ratio > 0);
    }
}

TEST_CASE("render: empty table gives header only, exact column order") {
    CHECK(render_verification({}, EmitFormat::Csv) ==
          "B,count,prediction,ratio,doubling,class,flag\n");
    std::string plot = render_verification({}, EmitFormat::Plotdata);
    CHECK(plot ==
          "B,count,prediction,ratio,doubling,log_B,log_count,log_prediction,"
          "class,flag\n");
}

TEST_CASE("render rows and plotdata columns") {
    VerificationRow r;
    r.B = 10;
    r.count = 21;
    r.prediction = 0.0;
    r.cls = SystemClass::OutOfClassification;
    std::string csv = render_verification({r}, EmitFormat::Csv);
    CHECK(csv.find("10,21,0,undefined,undefined,") != std::string::npos);
    std::string plot = render_verification({r}, EmitFormat::Plotdata);
    CHECK(plot.find(",undefined\n") == std::string::npos);  // flag column last, empty
    CHECK(plot.find("log_") != std::string::npos);
}

TEST_CASE("emit is deterministic and byte-identical across thread counts") {
    std::string paths[2] = {"/tmp/dicubic_test_emit_1.csv",
                            "/tmp/dicubic_test_emit_2.csv"};
    std::string blobs[2];
    int idx = 0;
    for (int threads : {1, 8}) {
        set_thread_count(threads);
        ExperimentPlan plan = quick_plan(ones(3, 4, 4), {4, 8});
        auto rows = run_verification(plan);
        emit(rows, EmitFormat::Csv, paths[idx]);
        std::ifstream in(paths[idx], std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        blobs[idx] = ss.str();
        std::remove(paths[idx].c_str());
        ++idx;
    }
    CHECK(blobs[0] == blobs[1]);
    CHECK(!blobs[0].empty());
}

TEST_CASE("emit failure raises IoFailure") {
    CHECK_THROWS_AS(emit({}, EmitFormat::Csv, "/nonexistent-dir/x.csv"), IoFailure);
}
