#include "dicubic/series.hpp"

#include <cmath>
#include <functional>
#include <list>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace dicubic {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// LRU cache keyed by modulus.  Values are shared so evictions cannot
// invalidate tables still in use by a caller.
template <typename V>
class LruCache {
public:
    explicit LruCache(std::size_t cap) : cap_(cap) {}

    std::shared_ptr<const V> get(i64 q, const std::function<V(i64)>& make) {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = map_.find(q);
        if (it != map_.end()) {
            order_.splice(order_.begin(), order_, it->second.second);
            return it->second.first;
        }
        auto val = std::make_shared<const V>(make(q));
        order_.push_front(q);
        map_[q] = {val, order_.begin()};
        if (map_.size() > cap_) {
            map_.erase(order_.back());
            order_.pop_back();
        }
        return val;
    }

private:
    std::size_t cap_;
    std::mutex mu_;
    std::list<i64> order_;
    std::unordered_map<i64, std::pair<std::shared_ptr<const V>, std::list<i64>::iterator>> map_;
};

std::vector<i64> make_cube_histogram(i64 q) {
    std::vector<i64> counts(static_cast<std::size_t>(q), 0);
    for (i64 r = 0; r < q; ++r) {
        i64 c = static_cast<i64>((i128(r) * r % q) * r % q);
        ++counts[static_cast<std::size_t>(c)];
    }
    return counts;
}

LruCache<std::vector<i64>>& cube_cache() {
    static LruCache<std::vector<i64>> cache(10000);
    return cache;
}

// S(q,t) for all t mod q in one pass over the cube histogram.
std::vector<std::complex<double>> make_gauss_table(i64 q) {
    auto hist = cube_cache().get(q, make_cube_histogram);
    std::vector<std::complex<double>> table(static_cast<std::size_t>(q));
    for (i64 t = 0; t < q; ++t) {
        double re = 0, im = 0;
        for (i64 c = 0; c < q; ++c) {
            i64 cnt = (*hist)[static_cast<std::size_t>(c)];
            if (cnt == 0) continue;
            double phase = kTwoPi * double(static_cast<i64>(i128(t) * c % q)) / double(q);
            re += double(cnt) * std::cos(phase);
            im += double(cnt) * std::sin(phase);
        }
        table[static_cast<std::size_t>(t)] = {re, im};
    }
    return table;
}

LruCache<std::vector<std::complex<double>>>& gauss_cache() {
    static LruCache<std::vector<std::complex<double>>> cache(256);
    return cache;
}

std::shared_ptr<const std::vector<std::complex<double>>> gauss_table(i64 q) {
    return gauss_cache().get(q, make_gauss_table);
}

struct KahanSum {
    double sum = 0, carry = 0;
    void add(double x) {
        double y = x - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

}  // namespace

const std::vector<std::complex<double>>& gauss_sum_table(i64 q) {
    // Same pinning shim as cube_histogram below.
    static std::mutex mu;
    static std::unordered_map<i64, std::shared_ptr<const std::vector<std::complex<double>>>>
        pinned;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = pinned[q];
    if (!slot) slot = gauss_cache().get(q, make_gauss_table);
    return *slot;
}

const std::vector<i64>& cube_histogram(i64 q) {
    // Leaks one shared_ptr per distinct modulus requested through this
    // reference-returning shim; the table itself stays cached.
    static std::mutex mu;
    static std::unordered_map<i64, std::shared_ptr<const std::vector<i64>>> pinned;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = pinned[q];
    if (!slot) slot = cube_cache().get(q, make_cube_histogram);
    return *slot;
}

std::complex<double> gauss_sum(i64 q, i64 a) {
    if (q < 1) throw ParamRange("gauss_sum requires q >= 1");
    i64 t = a % q;
    if (t < 0) t += q;
    return (*gauss_table(q))[static_cast<std::size_t>(t)];
}

double A_of_q(const CubicPairSystem& sys, i64 q, i64 modulus_budget) {
    if (q < 1) throw ParamRange("A_of_q requires q >= 1");
    if (q > modulus_budget) throw ModulusBudgetExceeded("q exceeds modulus budget");
    if (q == 1) return 1.0;
    auto table = gauss_table(q);
    auto S = [&](i64 t) {
        t %= q;
        if (t < 0) t += q;
        return (*table)[static_cast<std::size_t>(t)];
    };
    const auto &a = sys.a(), &b = sys.b(), &c = sys.c(), &d = sys.d();
    KahanSum re, im;
    for (i64 u = 1; u <= q; ++u) {
        // precompute the u-only product once per row
        std::complex<double> pu(1.0, 0.0);
        for (i64 cj : c) pu *= S(cj * u);
        if (std::abs(pu) == 0.0 && !c.empty()) {
            // row cannot contribute unless the x-factors rescue it; they
            // cannot, the product is identically zero across v
            continue;
        }
        for (i64 v = 1; v <= q; ++v) {
            if (std::gcd(std::gcd(u, v), q) != 1) continue;
            std::complex<double> t = pu;
            for (std::size_t i = 0; i < a.size(); ++i) t *= S(a[i] * u + b[i] * v);
            for (i64 dk : d) t *= S(dk * v);
            re.add(t.real());
            im.add(t.imag());
        }
    }
    double scale = std::pow(double(q), -double(sys.s()));
    double real_part = re.sum * scale;
    double imag_part = im.sum * scale;
    if (std::abs(imag_part) > 1e-8 * (std::abs(real_part) + 1.0))
        throw MethodsDisagree("A(q) imaginary part failed to cancel");
    return real_part;
}

SeriesTruncation singular_series(const CubicPairSystem& sys, i64 X, i64 modulus_budget) {
    if (X < 1) throw ParamRange("singular_series requires X >= 1");
    SeriesTruncation out;
    out.X = X;
    KahanSum partial;
    for (i64 q = 1; q <= X; ++q) {
        double aq = A_of_q(sys, q, modulus_budget);
        out.terms.emplace_back(q, aq);
        partial.add(aq);
    }
    out.partial = partial.sum;
    // Tail model: dyadic block ell^1 masses decaying like X^{-1/4}.
    double block_mass = 0;
    for (const auto& [q, aq] : out.terms)
        if (q > X / 2) block_mass += std::abs(aq);
    double r = std::pow(2.0, -0.25);
    out.tail_estimate = block_mass * r / (1.0 - r);
    return out;
}

std::string SeriesTruncation::to_csv() const {
    std::ostringstream os;
    os << "q,A_q,partial_sum\n";
    os.precision(17);
    double run = 0;
    for (const auto& [q, aq] : terms) {
        run += aq;
        os << q << ',' << aq << ',' << run << '\n';
    }
    return os.str();
}

}  // namespace dicubic
