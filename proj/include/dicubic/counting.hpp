#pragma once

// Exact enumeration engine: N(B) by brute force and by meet-in-the-middle,
// smooth sets, representation histograms rho(u,v) with marginals, the
// truncation partition of the support, mean values of exponential-sum
// products via orthogonality, and the sum-of-three-cubes second moment.

#include <functional>
#include <unordered_map>
#include <vector>

#include "dicubic/systems.hpp"

namespace dicubic {

// A*_eta(B): 0, and every n with |n| in [1,B] whose prime factors are all
// <= floor(B^eta).
struct SmoothSet {
    i64 B = 0;
    i64 threshold = 0;                // floor(B^eta)
    std::vector<i64> positives;       // ascending members of A_eta(B)
    bool contains(i64 n) const;       // membership in A*_eta(B)
    i64 size_star() const { return 2 * static_cast<i64>(positives.size()) + 1; }
};

SmoothSet smooth_set(i64 B, double eta);

// Sparse histogram (u,v) -> rho(u,v) over the x-block, with marginals.
struct RepresentationHistogram {
    i64 B = 0;
    bool smooth_mode = false;
    i64 omega = 0;       // Omega = sum(|a_i|+|b_i|)
    i128 support_bound = 0;  // Omega * B^3
    std::unordered_map<u128, i64> rho;  // key = packed (u,v)
    std::unordered_map<i64, i64> rho1;  // u -> sum_v rho(u,v)
    std::unordered_map<i64, i64> rho2;  // v -> sum_u rho(u,v)
    i128 total = 0;                     // sum of all rho(u,v)

    static u128 pack(i64 u, i64 v);
    static void unpack(u128 key, i64& u, i64& v);
    // rows "u,v,rho" sorted lexicographically by (u,v)
    std::string to_csv() const;
};

struct ExceptionalSetReport {
    double T = 0;
    i64 size_x1 = 0, size_x2 = 0;  // |X_1(T)|, |X_2(T)| (key counts)
    i128 xi0 = 0, xi1 = 0, xi2 = 0;
    i128 zeta1 = 0, zeta2 = 0;
};

enum class VarClass { Full, Cutoff, Smooth };

struct MeanValueFactor {
    i64 coeff = 1;   // nonzero
    int sign = +1;   // +1 or -1
    VarClass cls = VarClass::Full;
};

// Variable ranges: Full = [-B,B]; Cutoff = (nu*B, B]; Smooth = A*_eta(B).
std::vector<i64> variable_range(VarClass cls, i64 B, double eta, double nu);

i128 count_solutions_bruteforce(const CubicPairSystem& sys, i64 B,
                                bool smooth_mode, const Budgets& budgets = {});

i128 count_solutions_mitm(const CubicPairSystem& sys, i64 B, bool smooth_mode,
                          const Budgets& budgets = {});

// Estimated enumeration work (tuples) and peak table entries for the MITM
// path; the harness uses these to pick the largest feasible B.
i128 mitm_work_estimate(const CubicPairSystem& sys, i64 B);
i128 mitm_memory_estimate(const CubicPairSystem& sys, i64 B);

RepresentationHistogram rho_histogram(const CubicPairSystem& sys, i64 B,
                                      bool smooth_mode, const Budgets& budgets = {});

ExceptionalSetReport exceptional_sets(const RepresentationHistogram& hist, double T);

i128 mean_value_count(const std::vector<MeanValueFactor>& pattern, i64 B,
                      double eta = 0.1, double nu = 0.25, const Budgets& budgets = {});

// sum_{1<=n<=x} r(n)^2, r(n) = ordered triples of non-negative cubes.
i128 r3_cubes_sum_squares(i64 x);

}  // namespace dicubic
