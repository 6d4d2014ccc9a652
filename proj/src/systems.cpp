#include "dicubic/systems.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace dicubic {

namespace {
std::atomic<int> g_threads{1};
}

int thread_count() { return g_threads.load(); }
void set_thread_count(int n) { g_threads.store(n < 1 ? 1 : n); }

std::string to_string_i128(i128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    u128 x = neg ? static_cast<u128>(-(v + 1)) + 1 : static_cast<u128>(v);
    std::string out;
    while (x > 0) {
        out.push_back(static_cast<char>('0' + static_cast<int>(x % 10)));
        x /= 10;
    }
    if (neg) out.push_back('-');
    std::reverse(out.begin(), out.end());
    return out;
}

std::string to_string(SystemClass c) {
    switch (c) {
        case SystemClass::A: return "A";
        case SystemClass::B: return "B";
        case SystemClass::C: return "C";
        case SystemClass::D: return "D";
        case SystemClass::E: return "E";
        case SystemClass::F: return "F";
        case SystemClass::G: return "G";
        default: return "OutOfClassification";
    }
}

DissectionConstants DissectionConstants::standard() {
    DissectionConstants k;
    k.tau0 = 1.0 / (852.0 + 16.0 * std::sqrt(2833.0));
    k.tau = k.tau0 / 10.0;
    return k;
}

namespace {
// Coefficient magnitude cap: keeps every block sum of cubes exactly
// representable in signed 128-bit arithmetic at B <= 1e4.
constexpr i64 kCoeffCap = i64(1) << 31;

void check_block(const std::vector<i64>& v, const char* name) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 0)
            throw ZeroCoefficient(std::string(name) + "[" + std::to_string(i + 1) +
                                  "] is zero");
        if (v[i] > kCoeffCap || v[i] < -kCoeffCap)
            throw ParamRange(std::string(name) + "[" + std::to_string(i + 1) +
                             "] exceeds magnitude cap 2^31");
    }
}
}  // namespace

CubicPairSystem CubicPairSystem::validate(std::vector<i64> a, std::vector<i64> b,
                                          std::vector<i64> c, std::vector<i64> d,
                                          double eta, double nu) {
    if (a.size() != b.size())
        throw ValidationError("a and b must have equal length l");
    if (c.size() < d.size())
        throw BlockOrder("block order violated: m < n");
    if (!(eta > 0.0 && eta <= 0.5))
        throw ParamRange("eta must lie in (0, 1/2]");
    if (!(nu > 0.0 && nu < 1.0))
        throw ParamRange("nu must lie in (0, 1)");
    check_block(a, "a");
    check_block(b, "b");
    check_block(c, "c");
    check_block(d, "d");
    CubicPairSystem sys;
    sys.a_ = std::move(a);
    sys.b_ = std::move(b);
    sys.c_ = std::move(c);
    sys.d_ = std::move(d);
    sys.eta_ = eta;
    sys.nu_ = nu;
    return sys;
}

int CubicPairSystem::q0star() const {
    int t = s();
    return std::min({t - l(), t - m(), t - n()});
}

namespace {
i64 abs_sum(const std::vector<i64>& v) {
    i64 t = 0;
    for (i64 x : v) t += x < 0 ? -x : x;
    return t;
}
}  // namespace

i64 CubicPairSystem::omega_a() const { return abs_sum(a_); }
i64 CubicPairSystem::omega_b() const { return abs_sum(b_); }
i64 CubicPairSystem::omega_c() const { return abs_sum(c_); }
i64 CubicPairSystem::omega_d() const { return abs_sum(d_); }
i64 CubicPairSystem::omega() const { return omega_a() + omega_b(); }

SystemClass CubicPairSystem::classify() const {
    const int L = l(), M = m(), N = n();
    auto is = [&](int x, int y, int z) { return L == x && M == y && N == z; };
    if (is(3, 4, 4) || is(3, 5, 4)) return SystemClass::A;
    if (is(4, 4, 3) || is(4, 4, 4) || is(4, 5, 3) || is(5, 4, 3)) return SystemClass::B;
    if (is(2, 5, 5)) return SystemClass::C;
    if (is(5, 5, 2)) return SystemClass::D;
    if (is(4, 5, 4) || is(5, 4, 4)) return SystemClass::E;
    if (is(3, 5, 5)) return SystemClass::F;
    if (is(5, 5, 3)) return SystemClass::G;
    return SystemClass::OutOfClassification;
}

namespace {
std::string join(const std::vector<i64>& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ' ';
        os << v[i];
    }
    return os.str();
}

// Shortest decimal that reparses to the same double.
std::string dtos(double x) {
    for (int prec = 1; prec <= 17; ++prec) {
        std::ostringstream os;
        os.precision(prec);
        os << x;
        if (std::strtod(os.str().c_str(), nullptr) == x) return os.str();
    }
    return std::to_string(x);
}
}  // namespace

std::string CubicPairSystem::to_config() const {
    std::ostringstream os;
    os << "l = " << l() << "\n"
       << "m = " << m() << "\n"
       << "n = " << n() << "\n"
       << "a = " << join(a_) << "\n"
       << "b = " << join(b_) << "\n"
       << "c = " << join(c_) << "\n"
       << "d = " << join(d_) << "\n"
       << "eta = " << dtos(eta_) << "\n"
       << "nu = " << dtos(nu_) << "\n";
    return os.str();
}

CubicPairSystem CubicPairSystem::from_config(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    auto ints = [&](const std::string& key) {
        std::vector<i64> out;
        auto it = kv.find(key);
        if (it == kv.end()) return out;
        std::istringstream is(it->second);
        i64 x;
        while (is >> x) out.push_back(x);
        return out;
    };
    auto real = [&](const std::string& key, double dflt) {
        auto it = kv.find(key);
        return it == kv.end() ? dflt : std::strtod(it->second.c_str(), nullptr);
    };
    auto a = ints("a"), b = ints("b"), c = ints("c"), d = ints("d");
    // Declared block sizes, when present, must match the arrays.
    auto check_size = [&](const std::string& key, std::size_t got) {
        auto it = kv.find(key);
        if (it != kv.end() && std::stoll(it->second) != static_cast<long long>(got))
            throw ValidationError("declared " + key + " does not match array length");
    };
    check_size("l", a.size());
    check_size("m", c.size());
    check_size("n", d.size());
    return validate(std::move(a), std::move(b), std::move(c), std::move(d),
                    real("eta", 0.1), real("nu", 0.25));
}

CubicPairSystem CubicPairSystem::from_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_config(ss.str());
}

}  // namespace dicubic
