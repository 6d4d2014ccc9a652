#include "dicubic/arcs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "dicubic/counting.hpp"

namespace dicubic {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

// fractional part in [0,1), computed in long double
double frac01(double x) {
    long double f = x - std::floor(static_cast<long double>(x));
    if (f >= 1.0L) f -= 1.0L;
    if (f < 0.0L) f += 1.0L;
    return static_cast<double>(f);
}
}  // namespace

std::complex<double> unit_phase(double theta, i64 xcubed) {
    bool conj = xcubed < 0;
    u64 xc = conj ? static_cast<u64>(-xcubed) : static_cast<u64>(xcubed);
    // theta as a dyadic fraction T / 2^63; the product phase is then exact
    // mod 1, with total error <= |x^3| * 2^-64
    double f = frac01(theta);
    u64 T = static_cast<u64>(std::llround(f * 9223372036854775808.0)) &
            0x7fffffffffffffffull;
    u64 ph = static_cast<u64>((u128(T) * xc) & 0x7fffffffffffffffull);
    double angle = kTwoPi * (double(ph) * 0x1.0p-63);
    return {std::cos(angle), conj ? -std::sin(angle) : std::sin(angle)};
}

std::complex<double> weyl_sum(WeylKind kind, i64 coeff, double theta, i64 B,
                              double eta, double nu) {
    if (B < 1) throw ParamRange("weyl_sum requires B >= 1");
    double arg = frac01(double(coeff) * theta);
    std::complex<double> total(0.0, 0.0);
    auto cube = [](i64 x) { return x * x * x; };
    switch (kind) {
        case WeylKind::F:
            for (i64 x = -B; x <= B; ++x) total += unit_phase(arg, cube(x));
            break;
        case WeylKind::G: {
            i64 lo = static_cast<i64>(std::floor(nu * double(B)));
            for (i64 x = lo + 1; x <= B; ++x) total += unit_phase(arg, cube(x));
            break;
        }
        case WeylKind::H: {
            SmoothSet s = smooth_set(B, eta);
            total += 1.0;  // n = 0
            for (i64 n : s.positives)
                total += unit_phase(arg, cube(n)) + unit_phase(arg, cube(-n));
            break;
        }
    }
    return total;
}

std::complex<double> generating_value(const CubicPairSystem& sys, GenKind which,
                                      double alpha, double beta, i64 B) {
    std::complex<double> prod(1.0, 0.0);
    auto factor = [&](int idx, i64 coeff, double theta) {
        WeylKind k = idx < 2 ? WeylKind::H : WeylKind::G;
        prod *= weyl_sum(k, coeff, theta, B, sys.eta(), sys.nu());
    };
    switch (which) {
        case GenKind::F:
            for (int i = 0; i < sys.l(); ++i)
                factor(i, 1, double(sys.a()[i]) * alpha + double(sys.b()[i]) * beta);
            break;
        case GenKind::G:
            for (int j = 0; j < sys.m(); ++j) factor(j, sys.c()[j], alpha);
            break;
        case GenKind::H:
            for (int k = 0; k < sys.n(); ++k) factor(k, sys.d()[k], beta);
            break;
    }
    return prod;
}

namespace {
i64 floor_power(i64 B, double expo) {
    i64 t = static_cast<i64>(std::floor(std::pow(double(B), expo)));
    while (std::pow(double(t + 1), 1.0 / expo) <= double(B)) ++t;
    while (t > 1 && std::pow(double(t), 1.0 / expo) > double(B)) --t;
    return t;
}
}  // namespace

std::optional<MajorWitness> is_major(double theta, i64 B) {
    if (B < 2) throw ParamRange("is_major requires B >= 2");
    const i64 qmax = floor_power(B, 0.75);
    const long double width = std::pow(static_cast<long double>(B), -2.25L);
    long double t = frac01(theta);

    // Continued-fraction convergents; the best approximation with
    // denominator <= qmax is the last convergent inside that range.
    i64 p_prev = 1, q_prev = 0;  // p_{-1}/q_{-1}
    i64 p_cur = 0, q_cur = 1;    // p_0/q_0 = floor(theta)/1 with theta in [0,1)
    long double x = t;
    for (int iter = 0; iter < 64; ++iter) {
        long double err = fabsl(q_cur * static_cast<long double>(t) - p_cur);
        if (err <= width) {
            i64 g = std::gcd(p_cur, q_cur);
            return MajorWitness{q_cur / (g ? g : 1), p_cur / (g ? g : 1)};
        }
        if (x <= 0.0L) break;  // exact rational reached
        long double inv = 1.0L / x;
        i64 digit = static_cast<i64>(floorl(inv));
        x = inv - floorl(inv);
        i64 p_next = digit * p_cur + p_prev;
        i64 q_next = digit * q_cur + q_prev;
        if (q_next > qmax || q_next <= 0) break;
        p_prev = p_cur;
        q_prev = q_cur;
        p_cur = p_next;
        q_cur = q_next;
    }
    long double err = fabsl(q_cur * static_cast<long double>(t) - p_cur);
    if (q_cur <= qmax && err <= width) {
        i64 g = std::gcd(p_cur, q_cur);
        return MajorWitness{q_cur / (g ? g : 1), p_cur / (g ? g : 1)};
    }
    return std::nullopt;
}

std::optional<NarrowWitness> is_narrow(double alpha, double beta, i64 B) {
    if (B < 3) throw ParamRange("is_narrow requires B >= 3");
    const double Q = std::pow(std::log(double(B)), 0.01);
    const i64 qmax = std::max<i64>(1, static_cast<i64>(std::floor(Q)));
    const double box = Q * std::pow(double(B), -3.0);
    double va = frac01(alpha), vb = frac01(beta);
    for (i64 q = 1; q <= qmax; ++q) {
        for (i64 a = 0; a <= q; ++a) {
            for (i64 b = 0; b <= q; ++b) {
                if (std::gcd(std::gcd(a, b), q) != 1) continue;
                if (std::abs(va - double(a) / double(q)) <= box &&
                    std::abs(vb - double(b) / double(q)) <= box)
                    return NarrowWitness{q, a, b};
            }
        }
    }
    return std::nullopt;
}

MinorSupReport minor_sup_scan(i64 coeff, i64 B, i64 grid_size, double nu,
                              bool keep_points) {
    if (grid_size < 1) throw ParamRange("grid_size must be >= 1");
    MinorSupReport rep;
    rep.B = B;
    rep.grid_size = grid_size;
    rep.b_three_quarters = std::pow(double(B), 0.75);
    const double shift = 0.14159265358979323846;  // irrational grid offset (pi - 3)
    for (i64 j = 0; j < grid_size; ++j) {
        double theta = frac01((double(j) + shift) / double(grid_size));
        auto wit = is_major(theta, B);
        double mag = 0;
        bool want_value = !wit || keep_points;
        if (want_value)
            mag = std::abs(weyl_sum(WeylKind::G, coeff, theta, B, 0.1, nu));
        if (!wit) {
            ++rep.minor_points;
            if (mag > rep.sup_minor) {
                rep.sup_minor = mag;
                rep.theta_at_sup = theta;
            }
        }
        if (keep_points)
            rep.points.push_back({theta, mag, wit.has_value(), wit ? wit->q : 0,
                                  wit ? wit->a : 0});
    }
    if (rep.minor_points == 0)
        throw DegenerateGrid("no minor-arc points on the scan grid");
    return rep;
}

std::string MinorSupReport::to_csv() const {
    std::ostringstream os;
    os << "theta,abs_sum,is_major,q,a\n";
    os.precision(17);
    for (const auto& pt : points)
        os << pt.theta << ',' << pt.abs_sum << ',' << (pt.major ? 1 : 0) << ','
           << pt.q << ',' << pt.a << '\n';
    return os.str();
}

}  // namespace dicubic
