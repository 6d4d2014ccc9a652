#include "dicubic/harness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dicubic/counting.hpp"

namespace dicubic {

void ExperimentPlan::validate() const {
    if (B_ladder.empty()) throw ParamRange("B ladder is empty");
    for (size_t i = 0; i < B_ladder.size(); ++i) {
        if (B_ladder[i] < 1) throw ParamRange("B ladder entries must be >= 1");
        if (i && B_ladder[i] <= B_ladder[i - 1])
            throw ParamRange("B ladder must be strictly increasing");
    }
}

std::vector<VerificationRow> run_verification(const ExperimentPlan& plan) {
    plan.validate();
    const CubicPairSystem& sys = plan.system;
    const SystemClass cls = sys.classify();

    // The constant C is B-independent; compute it once through the default
    // (series) route and, optionally, re-derive it through the Euler-product
    // route.  Disagreement beyond combined residuals flags every row.
    double C = 0, C_residual = 0;
    bool refuted = false;
    i64 refuted_p = 0;
    std::string route_flag;
    if (plan.do_prediction) {
        PredictionOptions po = plan.prediction;
        po.route = PredictionRoute::Series;
        Prediction ps = predicted_count(sys, 1, po);
        C = ps.C;
        C_residual = ps.residual;
        refuted = ps.refuted;
        refuted_p = ps.refuted_p;
        if (!refuted && plan.cross_check_routes) {
            po.route = PredictionRoute::Density;
            Prediction pd = predicted_count(sys, 1, po);
            if (std::abs(ps.value - pd.value) > ps.residual + pd.residual)
                route_flag = "route-disagreement";
        }
    }

    std::vector<VerificationRow> rows;
    for (size_t i = 0; i < plan.B_ladder.size(); ++i) {
        VerificationRow row;
        row.B = plan.B_ladder[i];
        row.cls = cls;
        if (refuted)
            row.flag = "refuted@" + std::to_string(refuted_p);
        else if (!route_flag.empty())
            row.flag = route_flag;
        else if (cls == SystemClass::OutOfClassification)
            row.flag = "out-of-classification";

        if (plan.do_count) {
            try {
                row.count = count_solutions_mitm(sys, row.B, false, plan.budgets);
            } catch (const BudgetExceeded& e) {
                row.flag = std::string("error:") + e.what();
                rows.push_back(row);
                continue;  // partial table: later rungs may also fail, keep rows
            }
        }
        if (plan.do_prediction && !refuted) {
            row.prediction = C * std::pow(double(row.B), double(sys.s() - 6));
            if (row.prediction > 0) {
                row.ratio = double(row.count) / row.prediction;
                row.ratio_defined = true;
            }
        }
        if (i > 0 && plan.do_count && rows.back().B * 2 == row.B &&
            rows.back().count > 0) {
            row.doubling = double(row.count) / double(rows.back().count);
            row.doubling_defined = true;
        }
        rows.push_back(row);
    }
    (void)C_residual;
    return rows;
}

CubicPairSystem builtin_counterexample() {
    return CubicPairSystem::validate({49, 98, 147}, {49, 196, 196},
                                     {1, 2, 7, 14}, {1, 2, 7, 14});
}

namespace {
std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}
}  // namespace

std::string render_verification(const std::vector<VerificationRow>& rows,
                                EmitFormat format) {
    std::ostringstream os;
    os << "B,count,prediction,ratio,doubling";
    if (format == EmitFormat::Plotdata) os << ",log_B,log_count,log_prediction";
    os << ",class,flag\n";
    for (const auto& r : rows) {
        os << r.B << ',' << to_string_i128(r.count) << ','
           << fmt_double(r.prediction) << ','
           << (r.ratio_defined ? fmt_double(r.ratio) : "undefined") << ','
           << (r.doubling_defined ? fmt_double(r.doubling) : "undefined");
        if (format == EmitFormat::Plotdata) {
            os << ',' << fmt_double(std::log(double(r.B)));
            os << ','
               << (r.count > 0 ? fmt_double(std::log(double(r.count))) : "undefined");
            os << ','
               << (r.prediction > 0 ? fmt_double(std::log(r.prediction))
                                    : "undefined");
        }
        os << ',' << to_string(r.cls) << ',' << r.flag << '\n';
    }
    return os.str();
}

void emit(const std::vector<VerificationRow>& rows, EmitFormat format,
          const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoFailure("cannot open " + path + " for writing");
    out << render_verification(rows, format);
    if (!out) throw IoFailure("write failed for " + path);
}

}  // namespace dicubic
