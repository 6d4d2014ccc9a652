#pragma once

// Local solubility certification (p-adic witnesses / refutations by
// primitive-descent closure) and local density computation v_p, v_infty.

#include <complex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dicubic/systems.hpp"

namespace dicubic {

// A Hensel-liftable solution mod p^k.  Variables are ordered x-block,
// y-block, z-block; minor columns are global indices into that order.
struct PadicWitness {
    i64 p = 0;
    int k = 1;                  // lifting level: solution holds mod p^k
    std::vector<i64> solution;  // residues mod p^k
    int minor_col1 = 0, minor_col2 = 0;
    i64 minor_det = 0;      // det of the cited 2x2 Jacobian minor, mod p^k
    int minor_valuation = 0;  // gamma; 0 means unit minor
    std::string to_certificate() const;
};

// Exhaustive evidence that no primitive solution exists mod p^level.
struct Refutation {
    i64 p = 0;
    int level = 0;  // primitive-solution count vanishes mod p^level
    std::vector<std::pair<i64, std::string>> counts;  // (p^h, primitive count)
    std::string to_certificate() const;
};

using SolubilityResult = std::variant<PadicWitness, Refutation>;

// Returns a witness or a refutation; throws Inconclusive when the search
// exhausts k_max without either.
SolubilityResult check_padic_solubility(const CubicPairSystem& sys, i64 p,
                                        int k_max = 3);

// Independent re-check of a witness: congruences mod p^k and the Hensel
// margin (unit minor for p >= 5, valuation gamma with k >= 2*gamma+1 else).
bool verify_padic_witness(const CubicPairSystem& sys, const PadicWitness& w);

// Exact M(q): solutions of the pair of congruences with all s variables
// mod q, by per-equation convolution over (Z/q)^2.  q is capped (the DP
// holds q^2 states); throws ModulusBudgetExceeded beyond it.
i128 solution_count_mod(const CubicPairSystem& sys, i64 q, i64 state_cap = 2048);

// M(q) by the character-sum identity q^{-2} sum_{u,v} T(q,u,v) in doubles.
double solution_count_mod_charsum(const CubicPairSystem& sys, i64 q);

struct DensityReport {
    double value = 0;
    std::string method;  // character-sum | direct-count | slab | oscillatory
    std::vector<std::pair<double, double>> levels;  // (h or eps/X, estimate)
    bool converged = false;
    double residual = 0;
    std::string p_or_inf;  // "p" as digits, or "inf"
    std::string to_csv() const;  // rows (p_or_inf, method, level, value, residual, converged)
};

DensityReport local_density(const CubicPairSystem& sys, i64 p, int h_max = 4,
                            double tol = 1e-9, i64 modulus_budget = 100000);

enum class RealDensityMethod { Slab, Oscillatory };

struct RealDensityOptions {
    double box_scale = 1.0;  // integrate over [-scale, scale]^s
    std::vector<double> eps_ladder = {0.1, 0.05, 0.025, 0.0125};
    i64 base_samples = 50000;  // per rung, grown as eps^-2
    u64 seed = 1;
    double x_max = 16.0;       // oscillatory cutoff ladder tops out here
    double quad_arg_cap = 500.0;  // largest |theta| fed to the 1-D quadrature
};

DensityReport real_density(const CubicPairSystem& sys, RealDensityMethod method,
                           const RealDensityOptions& opts = {});

// Cross-checked v_infty: runs both methods, throws MethodsDisagree when they
// differ beyond combined residuals.
DensityReport real_density_checked(const CubicPairSystem& sys,
                                   const RealDensityOptions& opts = {});

// 1-D oscillatory kernels w(t) = int_{-1}^{1} e(t g^3) dg (real, even) and
// v(t) = int_{nu}^{1} e(t g^3) dg.
double w_integral(double t);
std::complex<double> v_integral(double t, double nu);

}  // namespace dicubic
