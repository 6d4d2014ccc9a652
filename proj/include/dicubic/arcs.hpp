#pragma once

// Weyl sums f, g, h, the product generating functions F, G, H, and the
// major / narrow arc dissection with membership witnesses and minor-arc
// supremum scans.

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "dicubic/systems.hpp"

namespace dicubic {

enum class WeylKind { F, G, H };  // f: |x|<=B, g: nu*B < x <= B, h: smooth

// e(theta * x^3) with the phase reduced exactly against a 2^-63 dyadic
// approximation of theta, so cubes up to ~1e12 lose no phase accuracy.
std::complex<double> unit_phase(double theta, i64 xcubed);

std::complex<double> weyl_sum(WeylKind kind, i64 coeff, double theta, i64 B,
                              double eta = 0.1, double nu = 0.25);

enum class GenKind { F, G, H };

std::complex<double> generating_value(const CubicPairSystem& sys, GenKind which,
                                      double alpha, double beta, i64 B);

struct MajorWitness {
    i64 q = 0;
    i64 a = 0;
};

// theta in M iff some q <= B^{3/4}, (a,q)=1, has |q*theta - a| <= B^{-9/4}.
std::optional<MajorWitness> is_major(double theta, i64 B);

struct NarrowWitness {
    i64 q = 0;
    i64 a = 0;
    i64 b = 0;
};

// (alpha,beta) in N iff some q <= Q = (log B)^{1/100}, (a,b,q)=1, has both
// |alpha - a/q| and |beta - b/q| <= Q * B^{-3}.
std::optional<NarrowWitness> is_narrow(double alpha, double beta, i64 B);

struct ScanPoint {
    double theta = 0;
    double abs_sum = 0;
    bool major = false;
    i64 q = 0, a = 0;
};

struct MinorSupReport {
    i64 B = 0;
    i64 grid_size = 0;
    i64 minor_points = 0;
    double sup_minor = 0;       // max |g(coeff*theta)| over minor grid points
    double theta_at_sup = 0;
    double b_three_quarters = 0;  // B^{3/4} for exponent diagnostics
    std::vector<ScanPoint> points;  // filled when keep_points is set
    std::string to_csv() const;     // rows (theta, |sum|, is_major, q, a)
};

MinorSupReport minor_sup_scan(i64 coeff, i64 B, i64 grid_size, double nu = 0.25,
                              bool keep_points = false);

}  // namespace dicubic
