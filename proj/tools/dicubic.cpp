// Command-line front end.  Every subcommand is a thin wrapper over one
// library call; all policy lives in the library.

#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <variant>

#include "CLI11.hpp"
#include "dicubic/arcs.hpp"
#include "dicubic/counting.hpp"
#include "dicubic/harness.hpp"
#include "dicubic/locsol.hpp"
#include "dicubic/series.hpp"
#include "dicubic/systems.hpp"

using namespace dicubic;

namespace {

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw IoFailure("cannot open " + out_path);
    f << text;
    if (!f) throw IoFailure("write failed for " + out_path);
}

// "kind:coeff:power" factors, comma separated; kind in {f,g,h}, power even
// (|.|^power splits into power/2 conjugate pairs).
std::vector<MeanValueFactor> parse_pattern(const std::string& text) {
    std::vector<MeanValueFactor> pattern;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        char kind;
        long long coeff, power;
        if (std::sscanf(item.c_str(), "%c:%lld:%lld", &kind, &coeff, &power) != 3 ||
            power <= 0 || power % 2 != 0)
            throw ParamRange("bad mean-value factor '" + item +
                             "' (want kind:coeff:even-power)");
        VarClass cls;
        switch (kind) {
            case 'f': cls = VarClass::Full; break;
            case 'g': cls = VarClass::Cutoff; break;
            case 'h': cls = VarClass::Smooth; break;
            default: throw ParamRange("bad factor kind; want f, g or h");
        }
        for (long long i = 0; i < power / 2; ++i) {
            pattern.push_back({coeff, +1, cls});
            pattern.push_back({coeff, -1, cls});
        }
    }
    if (pattern.empty()) throw ParamRange("empty mean-value pattern");
    return pattern;
}

std::vector<i64> parse_ladder(const std::string& text) {
    std::vector<i64> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoll(item));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"diagonal cubic pair toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_path, format = "csv", pattern_text, ladder_text;
    std::string method = "slab", route = "series";
    i64 B = 16, p = 0, X = 200, grid = 512, coeff = 1;
    int h_max = 3, threads = 0;
    i64 budget_tuples = 0, budget_bytes = 0;
    u64 seed = 1;
    double T = -1;
    bool smooth = false, brute = false;

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        auto* opt = cmd->add_option("--config", config_path, "system config file");
        if (needs_config) opt->required();
        cmd->add_option("--out", out_path, "output path (default stdout)");
        cmd->add_option("--threads", threads, "worker threads (0 = auto)");
        cmd->add_option("--budget-tuples", budget_tuples, "enumeration budget");
        cmd->add_option("--budget-bytes", budget_bytes, "table-entry budget");
        cmd->add_option("--seed", seed, "RNG seed");
    };

    auto* c_classify = app.add_subcommand("classify", "case classification and invariants");
    add_common(c_classify, true);

    auto* c_count = app.add_subcommand("count", "exact N(B)");
    add_common(c_count, true);
    c_count->add_option("--B", B, "box size")->required();
    c_count->add_flag("--smooth", smooth, "smooth/cutoff variable ranges");
    c_count->add_flag("--brute", brute, "direct enumeration instead of MITM");

    auto* c_rho = app.add_subcommand("rho", "representation histogram rho(u,v)");
    add_common(c_rho, true);
    c_rho->add_option("--B", B, "box size")->required();
    c_rho->add_flag("--smooth", smooth, "smooth/cutoff variable ranges");
    c_rho->add_option("--T", T, "also report the truncation partition at T");

    auto* c_density = app.add_subcommand("density", "local density v_p or v_infty");
    add_common(c_density, true);
    c_density->add_option("--p", p, "prime (omit for v_infty)");
    c_density->add_option("--h-max", h_max, "p-adic level cap");
    c_density->add_option("--method", method, "slab | oscillatory | checked (v_infty)");

    auto* c_series = app.add_subcommand("series", "singular series truncation S(X)");
    add_common(c_series, true);
    c_series->add_option("--X", X, "modulus cutoff");

    auto* c_predict = app.add_subcommand("predict", "predicted main term C * B^{s-6}");
    add_common(c_predict, true);
    c_predict->add_option("--B", B, "box size")->required();
    c_predict->add_option("--X", X, "series cutoff");
    c_predict->add_option("--route", route, "series | density");
    c_predict->add_option("--h-max", h_max, "p-adic level cap");

    auto* c_verify = app.add_subcommand("verify", "counts vs prediction over a B ladder");
    add_common(c_verify, true);
    c_verify->add_option("--B-ladder", ladder_text, "comma-separated B values")->required();
    c_verify->add_option("--format", format, "csv | plotdata");

    auto* c_scan = app.add_subcommand("scan", "minor-arc supremum scan of |g|");
    add_common(c_scan, false);
    c_scan->add_option("--B", B, "box size")->required();
    c_scan->add_option("--grid", grid, "grid points on [0,1)");
    c_scan->add_option("--coeff", coeff, "coefficient inside g");

    auto* c_mean = app.add_subcommand("meanvalue", "mean value of a Weyl-sum product");
    add_common(c_mean, false);
    c_mean->add_option("--B", B, "box size")->required();
    c_mean->add_option("--pattern", pattern_text, "factors kind:coeff:power, comma-separated")
        ->required();

    auto* c_cex = app.add_subcommand("counterexample", "built-in insoluble system");
    add_common(c_cex, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (threads > 0) set_thread_count(threads);
        Budgets budgets;
        if (budget_tuples > 0) budgets.work_tuples = budget_tuples;
        if (budget_bytes > 0) budgets.memory_entries = budget_bytes;

        auto load = [&]() { return CubicPairSystem::from_config_file(config_path); };
        std::ostringstream os;
        os.precision(17);

        if (c_classify->parsed()) {
            CubicPairSystem sys = load();
            os << "class = " << to_string(sys.classify()) << "\n"
               << "l m n = " << sys.l() << ' ' << sys.m() << ' ' << sys.n() << "\n"
               << "s = " << sys.s() << "\n"
               << "q0star = " << sys.q0star() << "\n"
               << "omega = " << sys.omega() << "\n";
        } else if (c_count->parsed()) {
            CubicPairSystem sys = load();
            i128 n = brute ? count_solutions_bruteforce(sys, B, smooth, budgets)
                           : count_solutions_mitm(sys, B, smooth, budgets);
            os << to_string_i128(n) << "\n";
        } else if (c_rho->parsed()) {
            CubicPairSystem sys = load();
            RepresentationHistogram h = rho_histogram(sys, B, smooth, budgets);
            if (T >= 0) {
                ExceptionalSetReport r = exceptional_sets(h, T);
                os << "T,size_x1,size_x2,xi0,xi1,xi2,zeta1,zeta2\n"
                   << r.T << ',' << r.size_x1 << ',' << r.size_x2 << ','
                   << to_string_i128(r.xi0) << ',' << to_string_i128(r.xi1) << ','
                   << to_string_i128(r.xi2) << ',' << to_string_i128(r.zeta1) << ','
                   << to_string_i128(r.zeta2) << "\n";
            } else {
                os << h.to_csv();
            }
        } else if (c_density->parsed()) {
            CubicPairSystem sys = load();
            DensityReport rep;
            if (p > 0) {
                rep = local_density(sys, p, h_max);
            } else {
                RealDensityOptions ropts;
                ropts.seed = seed;
                if (method == "checked")
                    rep = real_density_checked(sys, ropts);
                else
                    rep = real_density(sys,
                                       method == "oscillatory"
                                           ? RealDensityMethod::Oscillatory
                                           : RealDensityMethod::Slab,
                                       ropts);
            }
            os << rep.to_csv();
        } else if (c_series->parsed()) {
            CubicPairSystem sys = load();
            os << singular_series(sys, X).to_csv();
        } else if (c_predict->parsed()) {
            CubicPairSystem sys = load();
            PredictionOptions popts;
            popts.route = route == "density" ? PredictionRoute::Density
                                             : PredictionRoute::Series;
            popts.series_cutoff = X;
            popts.h_max = h_max;
            popts.seed = seed;
            Prediction pr = predicted_count(sys, B, popts);
            os << "C = " << pr.C << "\n"
               << "prediction = " << pr.value << "\n"
               << "residual = " << pr.residual << "\n";
            if (pr.refuted) os << "refuted_p = " << pr.refuted_p << "\n";
        } else if (c_verify->parsed()) {
            ExperimentPlan plan(load());
            plan.B_ladder = parse_ladder(ladder_text);
            plan.budgets = budgets;
            plan.prediction.seed = seed;
            auto rows = run_verification(plan);
            os << render_verification(rows, format == "plotdata"
                                                ? EmitFormat::Plotdata
                                                : EmitFormat::Csv);
        } else if (c_scan->parsed()) {
            MinorSupReport rep = minor_sup_scan(coeff, B, grid, 0.25, true);
            os << "# minor_points = " << rep.minor_points
               << ", sup_minor = " << rep.sup_minor
               << ", theta_at_sup = " << rep.theta_at_sup
               << ", B^{3/4} = " << rep.b_three_quarters << "\n"
               << rep.to_csv();
        } else if (c_mean->parsed()) {
            i128 n = mean_value_count(parse_pattern(pattern_text), B, 0.1, 0.25, budgets);
            os << to_string_i128(n) << "\n";
        } else if (c_cex->parsed()) {
            CubicPairSystem sys = builtin_counterexample();
            os << sys.to_config() << "class = " << to_string(sys.classify()) << "\n";
            auto res = check_padic_solubility(sys, 7, 3);
            if (std::holds_alternative<Refutation>(res))
                os << std::get<Refutation>(res).to_certificate();
            else
                os << "unexpected: witness found at p = 7\n";
        }

        write_output(os.str(), out_path);
        return 0;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 3;
    } catch (const Inconclusive& e) {
        std::cerr << "inconclusive: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
