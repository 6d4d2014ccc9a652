#pragma once

// Cubic Gauss sums S(q,a), singular-series terms A(q) with the q^{-s}
// normalization, truncations S(X) with tail diagnostics, and the predicted
// main term C * B^{s-6}.

#include <complex>
#include <string>
#include <vector>

#include "dicubic/systems.hpp"

namespace dicubic {

// S(q,a) = sum_{r=1}^{q} e(a r^3 / q), via the cube-residue histogram mod q.
// Histograms are memoized per modulus (LRU, 1e4 entries).
std::complex<double> gauss_sum(i64 q, i64 a);

// Cube residue counts mod q: value -> multiplicity, as a dense vector.
const std::vector<i64>& cube_histogram(i64 q);

// S(q,t) for every t mod q; amortizes the per-call cache lookup away for
// hot loops over many arguments at a fixed modulus.
const std::vector<std::complex<double>>& gauss_sum_table(i64 q);

// A(q) = q^{-s} sum_{(u,v,q)=1} prod_i S(q, a_i u + b_i v)
//                               prod_j S(q, c_j u) prod_k S(q, d_k v).
// The imaginary part cancels by conjugate symmetry and is asserted small.
double A_of_q(const CubicPairSystem& sys, i64 q, i64 modulus_budget = 100000);

struct SeriesTruncation {
    i64 X = 0;
    std::vector<std::pair<i64, double>> terms;  // (q, A(q))
    double partial = 0;                         // S(X)
    double tail_estimate = 0;
    std::string to_csv() const;  // rows (q, A_q, partial_sum)
};

SeriesTruncation singular_series(const CubicPairSystem& sys, i64 X,
                                 i64 modulus_budget = 100000);

enum class PredictionRoute { Series, Density };

struct Prediction {
    double C = 0;         // product of local densities
    double value = 0;     // C * B^{s-6}
    double residual = 0;  // combined residual of the constituents
    PredictionRoute route = PredictionRoute::Series;
    bool refuted = false;  // some p-adic factor vanishes
    i64 refuted_p = 0;
};

struct PredictionOptions {
    PredictionRoute route = PredictionRoute::Series;
    i64 series_cutoff = 200;   // X for the series route
    i64 prime_cutoff = 50;     // P for the density route and solubility scan
    int h_max = 3;
    double vp_tol = 1e-9;
    i64 slab_samples = 200000;
    u64 seed = 1;
};

Prediction predicted_count(const CubicPairSystem& sys, i64 B,
                           const PredictionOptions& opts = {});

}  // namespace dicubic
