#include "dicubic/counting.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <memory>
#include <sstream>
#include <thread>

namespace dicubic {

namespace {

inline i128 cube(i64 x) { return i128(x) * x * x; }

// floor(B^eta) computed safely against rounding at integer boundaries.
i64 smooth_threshold(i64 B, double eta) {
    i64 t = static_cast<i64>(std::floor(std::pow(double(B), eta)));
    while (std::pow(double(t + 1), 1.0 / eta) <= double(B)) ++t;
    while (t > 1 && std::pow(double(t), 1.0 / eta) > double(B)) --t;
    return std::max<i64>(t, 1);
}

}  // namespace

bool SmoothSet::contains(i64 n) const {
    if (n == 0) return true;
    if (n < 0) n = -n;
    return std::binary_search(positives.begin(), positives.end(), n);
}

SmoothSet smooth_set(i64 B, double eta) {
    if (B < 1) throw ParamRange("smooth_set requires B >= 1");
    if (!(eta > 0.0 && eta <= 0.5)) throw ParamRange("eta must lie in (0, 1/2]");
    SmoothSet out;
    out.B = B;
    out.threshold = smooth_threshold(B, eta);
    // Divide out all primes <= threshold; n is smooth iff residual is 1.
    std::vector<i64> residual(static_cast<std::size_t>(B) + 1);
    for (i64 i = 0; i <= B; ++i) residual[i] = i;
    for (i64 p = 2; p <= out.threshold && p <= B; ++p) {
        if (residual[p] != p) continue;  // p has a smaller prime factor
        for (i64 k = p; k <= B; k += p) {
            while (residual[k] % p == 0) residual[k] /= p;
        }
    }
    for (i64 n = 1; n <= B; ++n)
        if (residual[n] == 1) out.positives.push_back(n);
    return out;
}

std::vector<i64> variable_range(VarClass cls, i64 B, double eta, double nu) {
    std::vector<i64> out;
    switch (cls) {
        case VarClass::Full:
            for (i64 x = -B; x <= B; ++x) out.push_back(x);
            break;
        case VarClass::Cutoff: {
            // (nu*B, B]: strict lower inequality, x > floor(nu*B).
            i64 lo = static_cast<i64>(std::floor(nu * double(B)));
            for (i64 x = lo + 1; x <= B; ++x) out.push_back(x);
            break;
        }
        case VarClass::Smooth: {
            SmoothSet s = smooth_set(B, eta);
            for (auto it = s.positives.rbegin(); it != s.positives.rend(); ++it)
                out.push_back(-*it);
            out.push_back(0);
            for (i64 n : s.positives) out.push_back(n);
            break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Block descriptions shared by brute force and MITM.

namespace {

struct BlockVar {
    i64 coeff1 = 0;  // weight in equation 1
    i64 coeff2 = 0;  // weight in equation 2
    std::vector<i64> range;
};

VarClass block_class(bool smooth_mode, int idx_in_block) {
    if (!smooth_mode) return VarClass::Full;
    return idx_in_block < 2 ? VarClass::Smooth : VarClass::Cutoff;
}

// x-block: coefficients (a_i, b_i); y-block: (c_j, 0); z-block: (0, d_k).
std::vector<BlockVar> make_block(const std::vector<i64>& w1, const std::vector<i64>& w2,
                                 i64 B, bool smooth_mode, double eta, double nu) {
    std::vector<BlockVar> out;
    std::size_t len = std::max(w1.size(), w2.size());
    for (std::size_t i = 0; i < len; ++i) {
        BlockVar v;
        v.coeff1 = i < w1.size() ? w1[i] : 0;
        v.coeff2 = i < w2.size() ? w2[i] : 0;
        v.range = variable_range(block_class(smooth_mode, static_cast<int>(i)), B, eta, nu);
        out.push_back(std::move(v));
    }
    return out;
}

i128 block_tuple_count(const std::vector<BlockVar>& block, std::size_t from,
                       std::size_t to) {
    i128 t = 1;
    for (std::size_t i = from; i < to; ++i) t *= static_cast<i64>(block[i].range.size());
    return t;
}

// Enumerate all (sum1, sum2) pairs of a block slice, calling f once per tuple.
template <typename F>
void enumerate_block(const std::vector<BlockVar>& block, std::size_t from, std::size_t to,
                     i128 sum1, i128 sum2, F&& f) {
    if (from == to) {
        f(sum1, sum2);
        return;
    }
    const BlockVar& v = block[from];
    for (i64 x : v.range) {
        i128 c = cube(x);
        enumerate_block(block, from + 1, to, sum1 + v.coeff1 * c, sum2 + v.coeff2 * c, f);
    }
}

// Collapse a one-equation block slice into a sorted (sum, count) list.
std::vector<std::pair<i64, i64>> half_sums(const std::vector<BlockVar>& block,
                                           std::size_t from, std::size_t to, int eq) {
    std::unordered_map<i64, i64> acc;
    enumerate_block(block, from, to, 0, 0, [&](i128 s1, i128 s2) {
        acc[static_cast<i64>(eq == 1 ? s1 : s2)] += 1;
    });
    std::vector<std::pair<i64, i64>> out(acc.begin(), acc.end());
    std::sort(out.begin(), out.end());
    return out;
}

// Dense signed-index table over [-bound, bound].
struct DenseTable {
    i64 bound = 0;
    std::unique_ptr<std::atomic<i64>[]> data;

    explicit DenseTable(i64 b) : bound(b) {
        std::size_t len = static_cast<std::size_t>(2 * b + 1);
        data = std::make_unique<std::atomic<i64>[]>(len);
        for (std::size_t i = 0; i < len; ++i) data[i].store(0, std::memory_order_relaxed);
    }
    void add(i64 v, i64 c) {
        data[static_cast<std::size_t>(v + bound)].fetch_add(c, std::memory_order_relaxed);
    }
    i64 get(i64 v) const {
        if (v < -bound || v > bound) return 0;
        return data[static_cast<std::size_t>(v + bound)].load(std::memory_order_relaxed);
    }
};

void parallel_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
    int nt = std::min<int>(thread_count(), static_cast<int>(n) > 0 ? static_cast<int>(n) : 1);
    if (nt <= 1 || n == 0) {
        body(0, n);
        return;
    }
    std::vector<std::thread> workers;
    std::size_t per = (n + nt - 1) / nt;
    for (int t = 0; t < nt; ++t) {
        std::size_t lo = t * per, hi = std::min(n, lo + per);
        if (lo >= hi) break;
        workers.emplace_back(body, lo, hi);
    }
    for (auto& w : workers) w.join();
}

}  // namespace

// ---------------------------------------------------------------------------
// Brute force: nested enumeration, checking equation 1 as soon as the x and
// y blocks are fixed and equation 2 at the z leaves.

i128 count_solutions_bruteforce(const CubicPairSystem& sys, i64 B, bool smooth_mode,
                                const Budgets& budgets) {
    if (B < 0) throw ParamRange("B must be non-negative");
    if (B == 0) return 1;  // only the zero vector
    auto xs = make_block(sys.a(), sys.b(), B, smooth_mode, sys.eta(), sys.nu());
    auto ys = make_block(sys.c(), {}, B, smooth_mode, sys.eta(), sys.nu());
    auto zs = make_block({}, sys.d(), B, smooth_mode, sys.eta(), sys.nu());

    i128 work = block_tuple_count(xs, 0, xs.size()) * block_tuple_count(ys, 0, ys.size());
    if (work > budgets.work_tuples)
        throw WorkBudgetExceeded("brute-force x*y enumeration exceeds tuple budget");

    i128 zwork = block_tuple_count(zs, 0, zs.size());
    i128 total = 0;
    i128 spent = work;
    enumerate_block(xs, 0, xs.size(), 0, 0, [&](i128 u, i128 v) {
        enumerate_block(ys, 0, ys.size(), 0, 0, [&](i128 ysum, i128) {
            if (u + ysum != 0) return;
            spent += zwork;
            if (spent > budgets.work_tuples)
                throw WorkBudgetExceeded("brute-force z enumeration exceeds tuple budget");
            enumerate_block(zs, 0, zs.size(), 0, 0, [&](i128, i128 zsum) {
                if (v + zsum == 0) ++total;
            });
        });
    });
    return total;
}

// ---------------------------------------------------------------------------
// Meet-in-the-middle:
//   N = sum_{x-tuple (u,v)} r_c(-u) * r_d(-v)
// with r_c, r_d the y/z representation counts, each built from two half
// histograms.  The z-table and the x-aggregate w(u) = sum rho(u,v) r_d(-v)
// are dense arrays; the y join then reads w at -(t1+t2).

namespace {

struct MitmPlan {
    std::vector<BlockVar> xs, ys, zs;
    std::size_t yh, zh;  // half split points
    i64 ubound = 0, dbound = 0;
};

MitmPlan mitm_plan(const CubicPairSystem& sys, i64 B, bool smooth_mode) {
    MitmPlan p;
    p.xs = make_block(sys.a(), sys.b(), B, smooth_mode, sys.eta(), sys.nu());
    p.ys = make_block(sys.c(), {}, B, smooth_mode, sys.eta(), sys.nu());
    p.zs = make_block({}, sys.d(), B, smooth_mode, sys.eta(), sys.nu());
    p.yh = (p.ys.size() + 1) / 2;
    p.zh = (p.zs.size() + 1) / 2;
    i128 ub = i128(sys.omega_a()) * cube(B);
    i128 db = i128(sys.omega_d()) * cube(B);
    if (ub > (i128(1) << 62) || db > (i128(1) << 62))
        throw MemoryBudgetExceeded("dense table index range exceeds 2^62");
    p.ubound = static_cast<i64>(ub);
    p.dbound = static_cast<i64>(db);
    return p;
}

}  // namespace

i128 mitm_work_estimate(const CubicPairSystem& sys, i64 B) {
    if (B <= 0) return 1;
    MitmPlan p = mitm_plan(sys, B, false);
    return block_tuple_count(p.xs, 0, p.xs.size()) +
           block_tuple_count(p.ys, 0, p.yh) + block_tuple_count(p.ys, p.yh, p.ys.size()) +
           block_tuple_count(p.zs, 0, p.zh) + block_tuple_count(p.zs, p.zh, p.zs.size());
}

i128 mitm_memory_estimate(const CubicPairSystem& sys, i64 B) {
    if (B <= 0) return 1;
    i128 ub = i128(sys.omega_a()) * cube(B);
    i128 db = i128(sys.omega_d()) * cube(B);
    return (2 * ub + 1) + (2 * db + 1);
}

i128 count_solutions_mitm(const CubicPairSystem& sys, i64 B, bool smooth_mode,
                          const Budgets& budgets) {
    if (B < 0) throw ParamRange("B must be non-negative");
    if (B == 0) return 1;
    MitmPlan p = mitm_plan(sys, B, smooth_mode);

    i128 work = block_tuple_count(p.xs, 0, p.xs.size()) +
                block_tuple_count(p.ys, 0, p.yh) +
                block_tuple_count(p.ys, p.yh, p.ys.size()) +
                block_tuple_count(p.zs, 0, p.zh) +
                block_tuple_count(p.zs, p.zh, p.zs.size());
    if (work > budgets.work_tuples)
        throw WorkBudgetExceeded("MITM enumeration exceeds tuple budget");
    if (i128(2 * p.ubound + 1) + i128(2 * p.dbound + 1) > budgets.memory_entries)
        throw MemoryBudgetExceeded("MITM dense tables exceed memory budget");

    // z-block representation counts r_d.
    DenseTable rd(p.dbound);
    {
        auto h1 = half_sums(p.zs, 0, p.zh, 2);
        auto h2 = half_sums(p.zs, p.zh, p.zs.size(), 2);
        parallel_chunks(h1.size(), [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i)
                for (const auto& [t2, c2] : h2) rd.add(h1[i].first + t2, h1[i].second * c2);
        });
    }

    // x-block aggregate w(u) = sum over x-tuples with first form u of r_d(-v).
    DenseTable w(p.ubound);
    {
        // Partition on the first x variable; empty x-block contributes (0,0).
        if (p.xs.empty()) {
            w.add(0, rd.get(0));
        } else {
            const auto& r0 = p.xs[0].range;
            parallel_chunks(r0.size(), [&](std::size_t lo, std::size_t hi) {
                for (std::size_t i = lo; i < hi; ++i) {
                    i128 c = cube(r0[i]);
                    enumerate_block(p.xs, 1, p.xs.size(), p.xs[0].coeff1 * c,
                                    p.xs[0].coeff2 * c, [&](i128 u, i128 v) {
                                        if (v >= -p.dbound && v <= p.dbound) {
                                            i64 r = rd.get(static_cast<i64>(-v));
                                            if (r != 0) w.add(static_cast<i64>(u), r);
                                        }
                                    });
                }
            });
        }
    }

    // y join: answer = sum over y half pairs of w(-(t1+t2)).
    auto h1 = half_sums(p.ys, 0, p.yh, 1);
    auto h2 = half_sums(p.ys, p.yh, p.ys.size(), 1);
    std::vector<i128> partial(h1.size() ? h1.size() : 1, 0);
    parallel_chunks(h1.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            i128 acc = 0;
            for (const auto& [t2, c2] : h2) {
                i64 t = -(h1[i].first + t2);
                if (t >= -p.ubound && t <= p.ubound) acc += i128(h1[i].second) * c2 * w.get(t);
            }
            partial[i] = acc;
        }
    });
    i128 total = 0;
    for (i128 v : partial) total += v;
    return total;
}

// ---------------------------------------------------------------------------
// Representation histogram over the x-block.

u128 RepresentationHistogram::pack(i64 u, i64 v) {
    return (u128(static_cast<u64>(u)) << 64) | u128(static_cast<u64>(v));
}

void RepresentationHistogram::unpack(u128 key, i64& u, i64& v) {
    u = static_cast<i64>(static_cast<u64>(key >> 64));
    v = static_cast<i64>(static_cast<u64>(key));
}

RepresentationHistogram rho_histogram(const CubicPairSystem& sys, i64 B,
                                      bool smooth_mode, const Budgets& budgets) {
    if (B < 1) throw ParamRange("rho_histogram requires B >= 1");
    RepresentationHistogram h;
    h.B = B;
    h.smooth_mode = smooth_mode;
    h.omega = sys.omega();
    h.support_bound = i128(h.omega) * cube(B);
    auto xs = make_block(sys.a(), sys.b(), B, smooth_mode, sys.eta(), sys.nu());
    i128 work = block_tuple_count(xs, 0, xs.size());
    if (work > budgets.work_tuples)
        throw WorkBudgetExceeded("x-block enumeration exceeds tuple budget");
    enumerate_block(xs, 0, xs.size(), 0, 0, [&](i128 u, i128 v) {
        i64 uu = static_cast<i64>(u), vv = static_cast<i64>(v);
        h.rho[RepresentationHistogram::pack(uu, vv)] += 1;
        h.rho1[uu] += 1;
        h.rho2[vv] += 1;
        ++h.total;
        if (static_cast<i128>(h.rho.size()) > budgets.memory_entries)
            throw MemoryBudgetExceeded("histogram exceeds entry budget");
    });
    return h;
}

std::string RepresentationHistogram::to_csv() const {
    std::vector<std::pair<i64, i64>> keys;
    keys.reserve(rho.size());
    for (const auto& [k, cnt] : rho) {
        (void)cnt;
        i64 u, v;
        unpack(k, u, v);
        keys.emplace_back(u, v);
    }
    std::sort(keys.begin(), keys.end());
    std::ostringstream os;
    os << "u,v,rho\n";
    for (const auto& [u, v] : keys)
        os << u << ',' << v << ',' << rho.at(pack(u, v)) << '\n';
    return os.str();
}

ExceptionalSetReport exceptional_sets(const RepresentationHistogram& hist, double T) {
    ExceptionalSetReport r;
    r.T = T;
    std::unordered_map<i64, i128> col1, col2;  // per-v column masses in X_1, X_2
    for (const auto& [key, cnt] : hist.rho) {
        i64 u, v;
        RepresentationHistogram::unpack(key, u, v);
        double r1 = static_cast<double>(hist.rho1.at(u));
        double r2 = static_cast<double>(hist.rho2.at(v));
        if (r2 > T) {
            ++r.size_x2;
            r.xi2 += cnt;
            col2[v] += cnt;
        } else if (r1 > T) {
            ++r.size_x1;
            r.xi1 += cnt;
            col1[v] += cnt;
        } else {
            r.xi0 += cnt;
        }
    }
    for (const auto& [v, mass] : col1) {
        (void)v;
        r.zeta1 += mass * mass;
    }
    for (const auto& [v, mass] : col2) {
        (void)v;
        r.zeta2 += mass * mass;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Mean values via orthogonality: number of tuples with
// sum_i sign_i * coeff_i * x_i^3 = 0, split meet-in-the-middle.

i128 mean_value_count(const std::vector<MeanValueFactor>& pattern, i64 B,
                      double eta, double nu, const Budgets& budgets) {
    if (pattern.size() < 2) throw ParamRange("pattern must have length >= 2");
    if (B < 1) throw ParamRange("mean_value_count requires B >= 1");
    int balance = 0;
    for (const auto& f : pattern) {
        if (f.coeff == 0) throw ZeroCoefficient("pattern coefficient is zero");
        balance += f.sign >= 0 ? 1 : -1;
    }
    if (balance != 0)
        throw ParamRange("pattern signs must balance conjugation (+/- pairs)");

    std::size_t half = (pattern.size() + 1) / 2;
    auto build = [&](std::size_t from, std::size_t to) {
        std::vector<BlockVar> block;
        for (std::size_t i = from; i < to; ++i) {
            BlockVar v;
            v.coeff1 = (pattern[i].sign >= 0 ? 1 : -1) * pattern[i].coeff;
            v.coeff2 = 0;
            v.range = variable_range(pattern[i].cls, B, eta, nu);
            block.push_back(std::move(v));
        }
        return block;
    };
    auto b1 = build(0, half);
    auto b2 = build(half, pattern.size());
    i128 work = block_tuple_count(b1, 0, b1.size()) + block_tuple_count(b2, 0, b2.size());
    if (work > budgets.work_tuples)
        throw WorkBudgetExceeded("mean-value half enumeration exceeds tuple budget");

    auto h1 = half_sums(b1, 0, b1.size(), 1);
    auto h2 = half_sums(b2, 0, b2.size(), 1);
    if (h2.size() < h1.size()) std::swap(h1, h2);  // iterate the smaller side
    std::unordered_map<i64, i64> big(h2.begin(), h2.end());
    i128 total = 0;
    for (const auto& [t, c] : h1) {
        auto it = big.find(-t);
        if (it != big.end()) total += i128(c) * it->second;
    }
    return total;
}

i128 r3_cubes_sum_squares(i64 x) {
    if (x <= 0) return 0;
    i64 top = static_cast<i64>(std::cbrt(double(x)));
    while (cube(top + 1) <= x) ++top;
    while (top > 0 && cube(top) > x) --top;
    std::vector<i64> r(static_cast<std::size_t>(x) + 1, 0);
    for (i64 u = 0; u <= top; ++u) {
        i128 cu = cube(u);
        for (i64 v = 0; v <= top; ++v) {
            i128 cuv = cu + cube(v);
            if (cuv > x) break;
            for (i64 w = 0; w <= top; ++w) {
                i128 n = cuv + cube(w);
                if (n > x) break;
                ++r[static_cast<std::size_t>(n)];
            }
        }
    }
    i128 total = 0;
    for (i64 n = 1; n <= x; ++n) total += i128(r[static_cast<std::size_t>(n)]) * r[static_cast<std::size_t>(n)];
    return total;
}

}  // namespace dicubic
