#pragma once

// Experiment orchestration: verification runs (exact counts vs predicted
// main term over a B ladder), deterministic CSV emission, and the built-in
// counterexample regression system.

#include <string>
#include <vector>

#include "dicubic/series.hpp"
#include "dicubic/systems.hpp"

namespace dicubic {

struct ExperimentPlan {
    explicit ExperimentPlan(CubicPairSystem s) : system(std::move(s)) {}
    CubicPairSystem system;
    std::vector<i64> B_ladder;  // strictly increasing
    bool do_count = true;
    bool do_prediction = true;
    Budgets budgets;
    PredictionOptions prediction;
    bool cross_check_routes = true;  // series route vs density route
    void validate() const;           // throws ParamRange on a bad ladder
};

struct VerificationRow {
    i64 B = 0;
    i128 count = 0;
    double prediction = 0;
    double ratio = 0;       // count / prediction
    bool ratio_defined = false;
    double doubling = 0;    // N(B) / N(B/2) when the previous rung is B/2
    bool doubling_defined = false;
    SystemClass cls = SystemClass::OutOfClassification;
    std::string flag;  // "", "refuted@p", "route-disagreement", "out-of-classification", "error:..."
};

// One row per ladder rung: exact MITM count, prediction C * B^{s-6} with C
// computed once, the ratio, and the doubling diagnostic against 2^{s-6}.
std::vector<VerificationRow> run_verification(const ExperimentPlan& plan);

// The insoluble system 49(1,2,3)x^3 / 49(1,4,4)x^3 with c = d = (1,2,7,14):
// everywhere locally obstructed only at p = 7.
CubicPairSystem builtin_counterexample();

enum class EmitFormat { Csv, Plotdata };

// Deterministic text for the table; plotdata appends log-log columns.
std::string render_verification(const std::vector<VerificationRow>& rows,
                                EmitFormat format);

void emit(const std::vector<VerificationRow>& rows, EmitFormat format,
          const std::string& path);

}  // namespace dicubic
