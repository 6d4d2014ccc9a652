#pragma once

// Coefficient data model for a pair of diagonal cubic forms
//
//   a_1 x_1^3 + ... + a_l x_l^3 + c_1 y_1^3 + ... + c_m y_m^3 = 0
//   b_1 x_1^3 + ... + b_l x_l^3 + d_1 z_1^3 + ... + d_n z_n^3 = 0
//
// together with validation, the (l,m,n) case classification, and the
// structured-text config round-trip.

#include <optional>
#include <string>
#include <vector>

#include "dicubic/common.hpp"

namespace dicubic {

enum class SystemClass { A, B, C, D, E, F, G, OutOfClassification };

std::string to_string(SystemClass c);

// Constants of the arc dissection.  tau0^{-1} = 852 + 16*sqrt(2833).
struct DissectionConstants {
    double tau0;
    double tau;                          // tau0 / 10
    double major_q_exponent = 3.0 / 4;   // q <= B^{3/4}
    double major_width_exponent = 9.0 / 4;  // |q*alpha - a| <= B^{-9/4}
    double narrow_Q_exponent = 1.0 / 100;   // Q = (log B)^{1/100}

    static DissectionConstants standard();
};

class CubicPairSystem {
public:
    // Validates and constructs; throws ZeroCoefficient / BlockOrder /
    // ParamRange.  Coefficients are kept verbatim (no normalization).
    static CubicPairSystem validate(std::vector<i64> a, std::vector<i64> b,
                                    std::vector<i64> c, std::vector<i64> d,
                                    double eta = 0.1, double nu = 0.25);

    int l() const { return static_cast<int>(a_.size()); }
    int m() const { return static_cast<int>(c_.size()); }
    int n() const { return static_cast<int>(d_.size()); }
    int s() const { return l() + m() + n(); }
    int q0star() const;

    const std::vector<i64>& a() const { return a_; }
    const std::vector<i64>& b() const { return b_; }
    const std::vector<i64>& c() const { return c_; }
    const std::vector<i64>& d() const { return d_; }
    double eta() const { return eta_; }
    double nu() const { return nu_; }

    // Omega = sum_i (|a_i| + |b_i|); the x-block value pairs live in
    // [-Omega B^3, Omega B^3]^2.
    i64 omega() const;
    i64 omega_a() const;  // sum |a_i|
    i64 omega_b() const;  // sum |b_i|
    i64 omega_c() const;  // sum |c_j|
    i64 omega_d() const;  // sum |d_k|

    SystemClass classify() const;

    // key = value config, arrays space-separated.  Round-trips losslessly.
    std::string to_config() const;
    static CubicPairSystem from_config(const std::string& text);
    static CubicPairSystem from_config_file(const std::string& path);

private:
    CubicPairSystem() = default;
    std::vector<i64> a_, b_, c_, d_;
    double eta_ = 0.1;
    double nu_ = 0.25;
};

}  // namespace dicubic
