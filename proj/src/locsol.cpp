#include "dicubic/locsol.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>

#include "dicubic/series.hpp"

namespace dicubic {

namespace {

inline i64 mulmod(i64 a, i64 b, i64 q) {
    i64 r = static_cast<i64>(i128(a) * b % q);
    return r < 0 ? r + q : r;
}

inline i64 addmod(i64 a, i64 b, i64 q) {
    i64 r = (a + b) % q;
    return r < 0 ? r + q : r;
}

inline i64 cubemod(i64 x, i64 q) { return mulmod(mulmod(x, x, q), x, q); }

i64 powmod(i64 base, i64 exp, i64 q) {
    i64 r = 1 % q;
    base %= q;
    if (base < 0) base += q;
    while (exp > 0) {
        if (exp & 1) r = mulmod(r, base, q);
        base = mulmod(base, base, q);
        exp >>= 1;
    }
    return r;
}

// Inverse mod q of a residue coprime to q (extended Euclid).
i64 invmod(i64 a, i64 q) {
    i64 t = 0, newt = 1, r = q, newr = a % q;
    if (newr < 0) newr += q;
    while (newr != 0) {
        i64 quot = r / newr;
        t -= quot * newt;
        std::swap(t, newt);
        r -= quot * newr;
        std::swap(r, newr);
    }
    i64 out = t % q;
    return out < 0 ? out + q : out;
}

int valuation(i64 x, i64 p) {
    if (x == 0) return -1;  // "infinite"
    int v = 0;
    while (x % p == 0) {
        x /= p;
        ++v;
    }
    return v;
}

i128 ipow(i64 base, int exp) {
    i128 r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

bool is_prime(i64 p) {
    if (p < 2) return false;
    for (i64 d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// Exact M(q) by per-equation convolution over residues.

i128 solution_count_mod(const CubicPairSystem& sys, i64 q, i64 state_cap) {
    if (q < 1) throw ParamRange("solution_count_mod requires q >= 1");
    if (q == 1) return 1;
    if (q > state_cap)
        throw ModulusBudgetExceeded("q exceeds the exact-count state cap");
    if (double(sys.s()) * std::log2(double(q)) > 126.0)
        throw ModulusBudgetExceeded("q^s exceeds 128-bit headroom");

    const std::size_t Q = static_cast<std::size_t>(q);
    const auto& hist = cube_histogram(q);
    std::vector<std::pair<i64, i64>> cubes;  // (value, multiplicity)
    for (i64 c = 0; c < q; ++c)
        if (hist[static_cast<std::size_t>(c)] > 0)
            cubes.emplace_back(c, hist[static_cast<std::size_t>(c)]);

    // 1-D distribution of sum coeff_i * t_i^3 mod q.
    auto conv1 = [&](const std::vector<i64>& coeffs) {
        std::vector<i128> dist(Q, 0);
        dist[0] = 1;
        std::vector<i128> next(Q);
        for (i64 co : coeffs) {
            std::fill(next.begin(), next.end(), 0);
            for (const auto& [c, w] : cubes) {
                i64 shift = mulmod(co, c, q);
                for (std::size_t r = 0; r < Q; ++r) {
                    std::size_t rr = r + static_cast<std::size_t>(shift);
                    if (rr >= Q) rr -= Q;
                    next[rr] += dist[r] * w;
                }
            }
            std::swap(dist, next);
        }
        return dist;
    };

    // 2-D distribution over (eq1, eq2) residues for the x-block.
    std::vector<i128> dist2(Q * Q, 0);
    dist2[0] = 1;
    {
        std::vector<i128> next(Q * Q);
        for (int i = 0; i < sys.l(); ++i) {
            std::fill(next.begin(), next.end(), 0);
            for (const auto& [c, w] : cubes) {
                std::size_t du = static_cast<std::size_t>(mulmod(sys.a()[i], c, q));
                std::size_t dv = static_cast<std::size_t>(mulmod(sys.b()[i], c, q));
                for (std::size_t u = 0; u < Q; ++u) {
                    std::size_t uu = u + du;
                    if (uu >= Q) uu -= Q;
                    const i128* src = &dist2[u * Q];
                    i128* dst = &next[uu * Q];
                    for (std::size_t v = 0; v < Q; ++v) {
                        if (src[v] == 0) continue;
                        std::size_t vv = v + dv;
                        if (vv >= Q) vv -= Q;
                        dst[vv] += src[v] * w;
                    }
                }
            }
            std::swap(dist2, next);
        }
    }

    auto py = conv1(sys.c());
    auto pz = conv1(sys.d());
    i128 total = 0;
    for (std::size_t u = 0; u < Q; ++u) {
        std::size_t nu = u == 0 ? 0 : Q - u;
        for (std::size_t v = 0; v < Q; ++v) {
            i128 x = dist2[u * Q + v];
            if (x == 0) continue;
            std::size_t nv = v == 0 ? 0 : Q - v;
            total += x * py[nu] * pz[nv];
        }
    }
    return total;
}

double solution_count_mod_charsum(const CubicPairSystem& sys, i64 q) {
    if (q < 1) throw ParamRange("q >= 1 required");
    if (q == 1) return 1.0;
    const auto &a = sys.a(), &b = sys.b(), &c = sys.c(), &d = sys.d();
    const auto& table = gauss_sum_table(q);
    auto S = [&](i64 t) {
        t %= q;
        if (t < 0) t += q;
        return table[static_cast<std::size_t>(t)];
    };
    double re = 0, carry = 0;
    for (i64 u = 0; u < q; ++u) {
        std::complex<double> pu(1.0, 0.0);
        for (i64 cj : c) pu *= S(cj * u);
        for (i64 v = 0; v < q; ++v) {
            std::complex<double> t = pu;
            for (std::size_t i = 0; i < a.size(); ++i) t *= S(a[i] * u + b[i] * v);
            for (i64 dk : d) t *= S(dk * v);
            double x = t.real() - carry;
            double s = re + x;
            carry = (s - re) - x;
            re = s;
        }
    }
    return re / (double(q) * double(q));
}

// ---------------------------------------------------------------------------
// Witness search.

namespace {

// Map unit-cube residue -> smallest unit root, mod q (q = p^k).
std::unordered_map<i64, i64> unit_cube_roots(i64 q, i64 p) {
    std::unordered_map<i64, i64> roots;
    for (i64 y = 1; y < q; ++y) {
        if (y % p == 0) continue;
        i64 c = cubemod(y, q);
        roots.emplace(c, y);  // keeps the smallest root
    }
    return roots;
}

// Solve sum coeff_j * y_j^3 == 0 mod q with y_pivot a unit and coeff_pivot a
// unit mod p.  Deterministic pair scan first, then seeded random trials.
std::optional<std::pair<std::vector<i64>, int>> solve_diagonal_mod(
    const std::vector<i64>& coeffs, i64 q, i64 p) {
    const int t = static_cast<int>(coeffs.size());
    if (t == 0) return std::nullopt;
    auto roots = unit_cube_roots(q, p);
    std::vector<int> unit_pos;
    for (int j = 0; j < t; ++j)
        if (coeffs[j] % p != 0) unit_pos.push_back(j);
    if (unit_pos.empty()) return std::nullopt;

    auto attempt = [&](int pivot, const std::vector<i64>& others) -> std::optional<std::vector<i64>> {
        i64 rest = 0;
        for (int j = 0; j < t; ++j)
            if (j != pivot) rest = addmod(rest, mulmod(coeffs[j], cubemod(others[j], q), q), q);
        i64 need = mulmod(q - rest % q, invmod(coeffs[pivot] % q < 0 ? coeffs[pivot] % q + q : coeffs[pivot] % q, q), q);
        auto it = roots.find(need);
        if (it == roots.end()) return std::nullopt;
        std::vector<i64> sol = others;
        sol[pivot] = it->second;
        return sol;
    };

    // one other variable nonzero
    for (int pivot : unit_pos) {
        for (int j2 = 0; j2 < t; ++j2) {
            if (j2 == pivot) continue;
            for (i64 y = 0; y < q; ++y) {
                std::vector<i64> others(t, 0);
                others[j2] = y;
                if (auto sol = attempt(pivot, others)) return std::make_pair(*sol, pivot);
            }
        }
        if (t == 1) {
            std::vector<i64> others(t, 0);
            if (auto sol = attempt(pivot, others)) return std::make_pair(*sol, pivot);
        }
    }
    // random assignments of all non-pivot variables
    std::mt19937_64 rng(0x5eed0001ull ^ (u64(q) << 8) ^ u64(p));
    std::uniform_int_distribution<i64> pick(0, q - 1);
    for (int trial = 0; trial < 200000; ++trial) {
        int pivot = unit_pos[trial % unit_pos.size()];
        std::vector<i64> others(t, 0);
        for (int j = 0; j < t; ++j)
            if (j != pivot) others[j] = pick(rng);
        if (auto sol = attempt(pivot, others)) return std::make_pair(*sol, pivot);
    }
    return std::nullopt;
}

struct ColumnWeights {
    i64 w1 = 0, w2 = 0;  // coefficients of this variable in eq1, eq2
};

ColumnWeights column_weights(const CubicPairSystem& sys, int col) {
    if (col < sys.l()) return {sys.a()[col], sys.b()[col]};
    if (col < sys.l() + sys.m()) return {sys.c()[col - sys.l()], 0};
    return {0, sys.d()[col - sys.l() - sys.m()]};
}

std::pair<i64, i64> eval_system_mod(const CubicPairSystem& sys,
                                    const std::vector<i64>& vars, i64 q) {
    i64 e1 = 0, e2 = 0;
    for (int col = 0; col < sys.s(); ++col) {
        ColumnWeights w = column_weights(sys, col);
        i64 c = cubemod(vars[static_cast<std::size_t>(col)], q);
        e1 = addmod(e1, mulmod(w.w1, c, q), q);
        e2 = addmod(e2, mulmod(w.w2, c, q), q);
    }
    return {e1, e2};
}

// det of the Jacobian 2x2 minor at columns (c1, c2), mod q.
i64 minor_det_mod(const CubicPairSystem& sys, const std::vector<i64>& vars,
                  int c1, int c2, i64 q) {
    auto grad = [&](int col) -> std::pair<i64, i64> {
        ColumnWeights w = column_weights(sys, col);
        i64 sq = mulmod(vars[static_cast<std::size_t>(col)], vars[static_cast<std::size_t>(col)], q);
        return {mulmod(3 * w.w1 % q, sq, q), mulmod(3 * w.w2 % q, sq, q)};
    };
    auto [g11, g21] = grad(c1);
    auto [g12, g22] = grad(c2);
    i64 det = (mulmod(g11, g22, q) - mulmod(g12, g21, q)) % q;
    return det < 0 ? det + q : det;
}

int witness_level(i64 p) { return p == 3 ? 5 : 1; }

// Raise a witness with unit pivots (one y column, one z column) from level k
// to k_target by 1-D Hensel steps on the two pivot coordinates.
void lift_witness(const CubicPairSystem& sys, PadicWitness& w, int pivot_y_col,
                  int pivot_z_col, int k_target) {
    while (w.k < k_target) {
        i128 next_q = ipow(w.p, w.k + 1);
        if (next_q > (i128(1) << 60)) break;
        i64 qn = static_cast<i64>(next_q);
        i64 qk = static_cast<i64>(ipow(w.p, w.k));
        auto [e1, e2] = eval_system_mod(sys, w.solution, qn);
        // eq1 correction on the y pivot
        {
            i64 y = w.solution[static_cast<std::size_t>(pivot_y_col)];
            i64 cj = column_weights(sys, pivot_y_col).w1;
            i64 deriv = mulmod(mulmod(3 * cj % w.p, y, w.p), y, w.p);
            i64 t = mulmod((w.p - (e1 / qk) % w.p) % w.p, invmod(deriv, w.p), w.p);
            w.solution[static_cast<std::size_t>(pivot_y_col)] = addmod(y, t * qk % qn, qn);
        }
        // eq2 correction on the z pivot
        {
            i64 z = w.solution[static_cast<std::size_t>(pivot_z_col)];
            i64 dk = column_weights(sys, pivot_z_col).w2;
            i64 deriv = mulmod(mulmod(3 * dk % w.p, z, w.p), z, w.p);
            i64 t = mulmod((w.p - (e2 / qk) % w.p) % w.p, invmod(deriv, w.p), w.p);
            w.solution[static_cast<std::size_t>(pivot_z_col)] = addmod(z, t * qk % qn, qn);
        }
        ++w.k;
        auto [r1, r2] = eval_system_mod(sys, w.solution, qn);
        if (r1 != 0 || r2 != 0)
            throw Inconclusive("Hensel lift failed to reduce the residual");
    }
    i64 qk = static_cast<i64>(ipow(w.p, w.k));
    w.minor_det = minor_det_mod(sys, w.solution, w.minor_col1, w.minor_col2, qk);
    w.minor_valuation = w.minor_det == 0 ? w.k : valuation(w.minor_det, w.p);
}

}  // namespace

bool verify_padic_witness(const CubicPairSystem& sys, const PadicWitness& w) {
    if (w.k < 1 || static_cast<int>(w.solution.size()) != sys.s()) return false;
    i128 qk = ipow(w.p, w.k);
    if (qk > (i128(1) << 62)) return false;
    i64 q = static_cast<i64>(qk);
    auto [e1, e2] = eval_system_mod(sys, w.solution, q);
    if (e1 != 0 || e2 != 0) return false;
    i64 det = minor_det_mod(sys, w.solution, w.minor_col1, w.minor_col2, q);
    if (det == 0) return false;
    int gamma = valuation(det, w.p);
    return w.k >= 2 * gamma + 1;
}

SolubilityResult check_padic_solubility(const CubicPairSystem& sys, i64 p, int k_max) {
    if (!is_prime(p)) throw ParamRange("p must be prime");
    if (k_max < 1) throw ParamRange("k_max must be >= 1");
    const int kw = witness_level(p);
    const i64 qw = static_cast<i64>(ipow(p, kw));

    // Structured attempt: x = 0, the two single-block diagonal equations
    // solved independently, minor taken from one y and one z column.
    if (sys.m() > 0 && sys.n() > 0) {
        auto ysol = solve_diagonal_mod(sys.c(), qw, p);
        auto zsol = solve_diagonal_mod(sys.d(), qw, p);
        if (ysol && zsol) {
            PadicWitness w;
            w.p = p;
            w.k = kw;
            w.solution.assign(static_cast<std::size_t>(sys.s()), 0);
            for (int j = 0; j < sys.m(); ++j)
                w.solution[static_cast<std::size_t>(sys.l() + j)] = ysol->first[static_cast<std::size_t>(j)];
            for (int k = 0; k < sys.n(); ++k)
                w.solution[static_cast<std::size_t>(sys.l() + sys.m() + k)] = zsol->first[static_cast<std::size_t>(k)];
            w.minor_col1 = sys.l() + ysol->second;
            w.minor_col2 = sys.l() + sys.m() + zsol->second;
            w.minor_det = minor_det_mod(sys, w.solution, w.minor_col1, w.minor_col2, qw);
            w.minor_valuation = w.minor_det == 0 ? kw : valuation(w.minor_det, p);
            if (verify_padic_witness(sys, w)) {
                if (p != 3 && k_max > w.k)
                    lift_witness(sys, w, w.minor_col1, w.minor_col2, k_max);
                if (verify_padic_witness(sys, w)) return w;
            }
        }
    }

    // Random full-vector search at the witness level, any column pair.
    {
        std::mt19937_64 rng(0x5eed0002ull ^ (u64(p) << 16));
        std::uniform_int_distribution<i64> pick(0, qw - 1);
        const int trials = 200000;
        for (int trial = 0; trial < trials; ++trial) {
            std::vector<i64> vars(static_cast<std::size_t>(sys.s()));
            for (auto& v : vars) v = pick(rng);
            auto [e1, e2] = eval_system_mod(sys, vars, qw);
            if (e1 != 0 || e2 != 0) continue;
            for (int c1 = 0; c1 < sys.s(); ++c1) {
                for (int c2 = c1 + 1; c2 < sys.s(); ++c2) {
                    i64 det = minor_det_mod(sys, vars, c1, c2, qw);
                    if (det == 0) continue;
                    int gamma = valuation(det, p);
                    if (kw < 2 * gamma + 1) continue;
                    PadicWitness w;
                    w.p = p;
                    w.k = kw;
                    w.solution = vars;
                    w.minor_col1 = c1;
                    w.minor_col2 = c2;
                    w.minor_det = det;
                    w.minor_valuation = gamma;
                    if (verify_padic_witness(sys, w)) return w;
                }
            }
        }
    }

    // Refutation by primitive-descent closure: the primitive-solution count
    //   P(p^k) = M(p^k) - #{solutions with all variables divisible by p}
    // vanishing at some level is decisive.
    Refutation ref;
    ref.p = p;
    for (int k = 1; k <= k_max; ++k) {
        i128 qk = ipow(p, k);
        if (qk > 2048 || double(sys.s()) * std::log2(double(static_cast<i64>(qk))) > 126.0)
            break;
        i64 q = static_cast<i64>(qk);
        i128 M = solution_count_mod(sys, q);
        i128 nonprim;
        if (k <= 3) {
            nonprim = ipow(p, sys.s() * (k - 1));
        } else {
            nonprim = solution_count_mod(sys, static_cast<i64>(ipow(p, k - 3))) *
                      ipow(p, 2 * sys.s());
        }
        i128 prim = M - nonprim;
        ref.counts.emplace_back(q, to_string_i128(prim));
        if (prim == 0) {
            ref.level = k;
            return ref;
        }
    }
    throw Inconclusive("no witness found and descent did not close within k_max");
}

std::string PadicWitness::to_certificate() const {
    std::ostringstream os;
    os << "kind = witness\n"
       << "p = " << p << "\n"
       << "k = " << k << "\n"
       << "modulus = " << to_string_i128(ipow(p, k)) << "\n"
       << "solution =";
    for (i64 v : solution) os << ' ' << v;
    os << "\nminor_columns = " << minor_col1 + 1 << ' ' << minor_col2 + 1 << "\n"
       << "minor_det = " << minor_det << "\n"
       << "minor_valuation = " << minor_valuation << "\n";
    return os.str();
}

std::string Refutation::to_certificate() const {
    std::ostringstream os;
    os << "kind = refutation\n"
       << "p = " << p << "\n"
       << "closed_at_level = " << level << "\n";
    for (const auto& [q, prim] : counts)
        os << "primitive_count_mod_" << q << " = " << prim << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// Local density v_p.

DensityReport local_density(const CubicPairSystem& sys, i64 p, int h_max,
                            double tol, i64 modulus_budget) {
    if (!is_prime(p)) throw ParamRange("p must be prime");
    if (h_max < 1) throw ParamRange("h_max must be >= 1");
    DensityReport rep;
    rep.method = "character-sum";
    rep.p_or_inf = std::to_string(p);
    double prev = 1.0;  // h = 0 level
    for (int h = 1; h <= h_max; ++h) {
        i128 qk = ipow(p, h);
        if (qk > modulus_budget)
            throw ModulusBudgetExceeded("p^h exceeds modulus budget");
        i64 q = static_cast<i64>(qk);
        double M = solution_count_mod_charsum(sys, q);
        double level;
        bool exact_ok = q <= 2048 && double(sys.s()) * std::log2(double(q)) <= 126.0 &&
                        double(q) * double(q) * double(q) * sys.s() <= 4e9;
        if (exact_ok) {
            i128 Me = solution_count_mod(sys, q);
            double Med = static_cast<double>(Me);
            if (std::abs(M - Med) > 1e-6 * std::max(1.0, std::abs(Med)))
                throw MethodsDisagree("character-sum M(q) disagrees with direct count");
            if (Me == ipow(p, h * (sys.s() - 2)))
                level = 1.0;  // exact: M is the full power p^{h(s-2)}
            else
                level = double(static_cast<long double>(Me) /
                               std::pow(static_cast<long double>(p),
                                        static_cast<long double>(h * (sys.s() - 2))));
        } else {
            level = M / std::pow(double(p), double(h) * double(sys.s() - 2));
        }
        rep.levels.emplace_back(double(h), level);
        rep.residual = std::abs(level - prev);
        prev = level;
    }
    rep.value = prev;
    rep.converged = rep.levels.size() >= 2 &&
                    rep.residual <= tol * std::max(std::abs(rep.value), 1e-300);
    return rep;
}

// ---------------------------------------------------------------------------
// Real density v_infty.

namespace {

inline u64 splitmix64(u64 x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Counter-based uniform in [-scale, scale]: reproducible for any thread
// partitioning.
inline double counter_uniform(u64 seed, u64 sample, u64 slot, double scale) {
    u64 h = splitmix64(seed ^ splitmix64(sample * 0x100000001b3ull + slot));
    return scale * (2.0 * (double(h >> 11) * 0x1.0p-53) - 1.0);
}

// Length of {t in [-scale, scale] : lo <= coeff * t^3 <= hi}.
double pivot_interval_length(double coeff, double lo, double hi, double scale) {
    double a = lo / coeff, b = hi / coeff;
    if (a > b) std::swap(a, b);
    double t0 = std::cbrt(a), t1 = std::cbrt(b);
    double left = std::max(t0, -scale), right = std::min(t1, scale);
    return std::max(0.0, right - left);
}

struct SlabRung {
    double eps;
    double estimate;
    double std_error;
};

SlabRung slab_rung(const CubicPairSystem& sys, double eps, i64 samples,
                   const RealDensityOptions& opts) {
    const double sigma = opts.box_scale;
    const double tau = eps * sigma * sigma * sigma;
    const int l = sys.l(), m = sys.m(), n = sys.n(), s = sys.s();
    const bool conditional = m >= 1 && n >= 1;
    double sum = 0, sumsq = 0;
    for (i64 i = 0; i < samples; ++i) {
        double e1 = 0, e2 = 0;
        u64 slot = 0;
        auto draw = [&]() { return counter_uniform(opts.seed, u64(i), slot++, sigma); };
        for (int j = 0; j < l; ++j) {
            double x = draw();
            double c = x * x * x;
            e1 += double(sys.a()[j]) * c;
            e2 += double(sys.b()[j]) * c;
        }
        double val;
        if (conditional) {
            // integrate y_1 and z_1 out analytically
            for (int j = 1; j < m; ++j) {
                double y = draw();
                e1 += double(sys.c()[j]) * y * y * y;
            }
            for (int k = 1; k < n; ++k) {
                double z = draw();
                e2 += double(sys.d()[k]) * z * z * z;
            }
            double lam1 = pivot_interval_length(double(sys.c()[0]), -e1 - tau, -e1 + tau, sigma);
            double lam2 = pivot_interval_length(double(sys.d()[0]), -e2 - tau, -e2 + tau, sigma);
            val = lam1 * lam2 * std::pow(2.0 * sigma, double(s - 2)) / (4.0 * tau * tau);
        } else {
            for (int j = 0; j < m; ++j) {
                double y = draw();
                e1 += double(sys.c()[j]) * y * y * y;
            }
            for (int k = 0; k < n; ++k) {
                double z = draw();
                e2 += double(sys.d()[k]) * z * z * z;
            }
            bool hit = std::abs(e1) <= tau && std::abs(e2) <= tau;
            val = hit ? std::pow(2.0 * sigma, double(s)) / (4.0 * tau * tau) : 0.0;
        }
        sum += val;
        sumsq += val * val;
    }
    double mean = sum / double(samples);
    double var = std::max(0.0, sumsq / double(samples) - mean * mean);
    return {eps, mean, std::sqrt(var / double(samples))};
}

}  // namespace

double w_integral(double t) {
    // 2 * int_0^1 cos(2*pi*t*g^3) dg by composite Gauss-Legendre, panel
    // count tied to the oscillation count.
    static const double gl_x[4] = {0.06943184420297371, 0.33000947820757187,
                                   0.6699905217924281, 0.9305681557970262};
    static const double gl_w[4] = {0.1739274225687269, 0.3260725774312731,
                                   0.3260725774312731, 0.1739274225687269};
    double at = std::abs(t);
    int panels = std::max(8, static_cast<int>(std::ceil(6.0 * at)));
    if (panels > 4000000) throw QuadratureBudgetExceeded("w(t) argument too large");
    double h = 1.0 / double(panels);
    double acc = 0;
    for (int p = 0; p < panels; ++p) {
        double base = p * h;
        for (int i = 0; i < 4; ++i) {
            double g = base + h * gl_x[i];
            acc += gl_w[i] * std::cos(2.0 * M_PI * at * g * g * g);
        }
    }
    return 2.0 * acc * h;
}

std::complex<double> v_integral(double t, double nu) {
    static const double gl_x[4] = {0.06943184420297371, 0.33000947820757187,
                                   0.6699905217924281, 0.9305681557970262};
    static const double gl_w[4] = {0.1739274225687269, 0.3260725774312731,
                                   0.3260725774312731, 0.1739274225687269};
    double at = std::abs(t);
    int panels = std::max(8, static_cast<int>(std::ceil(6.0 * at)));
    if (panels > 4000000) throw QuadratureBudgetExceeded("v(t) argument too large");
    double h = (1.0 - nu) / double(panels);
    double re = 0, im = 0;
    for (int p = 0; p < panels; ++p) {
        double base = nu + p * h;
        for (int i = 0; i < 4; ++i) {
            double g = base + h * gl_x[i];
            double phase = 2.0 * M_PI * t * g * g * g;
            re += gl_w[i] * std::cos(phase);
            im += gl_w[i] * std::sin(phase);
        }
    }
    return {re * h, im * h};
}

namespace {

// Tabulated w with cubic Lagrange interpolation; w is even.
class WTable {
public:
    WTable(double tmax, double step) : step_(step) {
        std::size_t len = static_cast<std::size_t>(std::ceil(tmax / step)) + 4;
        vals_.resize(len);
        for (std::size_t i = 0; i < len; ++i) vals_[i] = w_integral(double(i) * step);
    }
    double operator()(double t) const {
        t = std::abs(t);
        double u = t / step_;
        std::size_t i = static_cast<std::size_t>(u);
        if (i + 3 >= vals_.size()) return 0.0;
        double f = u - double(i);
        // 4-point Lagrange on nodes i-1..i+2 (clamped at the origin)
        std::size_t i0 = i == 0 ? 0 : i - 1;
        double x = u - double(i0);
        const double y0 = vals_[i0], y1 = vals_[i0 + 1], y2 = vals_[i0 + 2], y3 = vals_[i0 + 3];
        (void)f;
        double c0 = -(x - 1) * (x - 2) * (x - 3) / 6.0;
        double c1 = x * (x - 2) * (x - 3) / 2.0;
        double c2 = -x * (x - 1) * (x - 3) / 2.0;
        double c3 = x * (x - 1) * (x - 2) / 6.0;
        return c0 * y0 + c1 * y1 + c2 * y2 + c3 * y3;
    }

private:
    double step_;
    std::vector<double> vals_;
};

double oscillatory_integral(const CubicPairSystem& sys, double X, const WTable& w) {
    // Composite 4-node Gauss-Legendre over cells of size <= 0.25.
    static const double gl_x[4] = {0.06943184420297371, 0.33000947820757187,
                                   0.6699905217924281, 0.9305681557970262};
    static const double gl_w[4] = {0.1739274225687269, 0.3260725774312731,
                                   0.3260725774312731, 0.1739274225687269};
    int cells = static_cast<int>(std::ceil(2.0 * X / 0.25));
    double h = 2.0 * X / double(cells);
    double acc = 0;
    for (int ci = 0; ci < cells; ++ci) {
        double x0 = -X + ci * h;
        for (int cj = 0; cj < cells; ++cj) {
            double y0 = -X + cj * h;
            for (int i = 0; i < 4; ++i) {
                double xi = x0 + h * gl_x[i];
                for (int j = 0; j < 4; ++j) {
                    double zt = y0 + h * gl_x[j];
                    double prod = 1.0;
                    for (std::size_t t = 0; t < sys.a().size(); ++t)
                        prod *= w(double(sys.a()[t]) * xi + double(sys.b()[t]) * zt);
                    for (i64 cj2 : sys.c()) prod *= w(double(cj2) * xi);
                    for (i64 dk : sys.d()) prod *= w(double(dk) * zt);
                    acc += gl_w[i] * gl_w[j] * prod;
                }
            }
        }
    }
    return acc * h * h;
}

}  // namespace

DensityReport real_density(const CubicPairSystem& sys, RealDensityMethod method,
                           const RealDensityOptions& opts) {
    DensityReport rep;
    rep.p_or_inf = "inf";
    if (method == RealDensityMethod::Slab) {
        rep.method = "slab";
        if (opts.eps_ladder.size() < 2)
            throw ParamRange("slab method needs at least two epsilon rungs");
        double eps0 = opts.eps_ladder.front();
        std::vector<SlabRung> rungs;
        for (double eps : opts.eps_ladder) {
            i64 n = static_cast<i64>(double(opts.base_samples) * (eps0 / eps) * (eps0 / eps));
            rungs.push_back(slab_rung(sys, eps, n, opts));
            rep.levels.emplace_back(eps, rungs.back().estimate);
        }
        const SlabRung& last = rungs[rungs.size() - 1];
        const SlabRung& prev = rungs[rungs.size() - 2];
        // linear Richardson in eps (rung ratio 2)
        rep.value = 2.0 * last.estimate - prev.estimate;
        rep.residual = std::abs(last.estimate - prev.estimate) +
                       3.0 * (last.std_error + prev.std_error);
        rep.converged = true;
        for (std::size_t i = 2; i < rungs.size(); ++i) {
            double d1 = std::abs(rungs[i].estimate - rungs[i - 1].estimate) +
                        3.0 * rungs[i].std_error;
            double d0 = std::abs(rungs[i - 1].estimate - rungs[i - 2].estimate);
            if (d1 > d0 + 6.0 * (rungs[i].std_error + rungs[i - 1].std_error))
                rep.converged = false;
        }
        return rep;
    }

    rep.method = "oscillatory";
    double coeff_reach = 0;
    for (std::size_t i = 0; i < sys.a().size(); ++i)
        coeff_reach = std::max(coeff_reach, double(std::abs(sys.a()[i])) + double(std::abs(sys.b()[i])));
    for (i64 cj : sys.c()) coeff_reach = std::max(coeff_reach, double(std::abs(cj)));
    for (i64 dk : sys.d()) coeff_reach = std::max(coeff_reach, double(std::abs(dk)));
    double tmax = coeff_reach * opts.x_max;
    if (tmax > opts.quad_arg_cap)
        throw QuadratureBudgetExceeded("oscillatory arguments exceed quadrature cap");
    WTable wt(tmax + 1.0, 0.01);
    double prev = 0;
    bool first = true;
    for (double X = 1.0; X <= opts.x_max + 1e-9; X *= 2.0) {
        double val = oscillatory_integral(sys, X, wt);
        rep.levels.emplace_back(X, val);
        if (!first) rep.residual = std::abs(val - prev);
        prev = val;
        first = false;
    }
    rep.value = prev;
    rep.converged = rep.levels.size() >= 3 &&
                    std::abs(rep.levels.back().second - rep.levels[rep.levels.size() - 2].second) <
                        std::abs(rep.levels[rep.levels.size() - 2].second -
                                 rep.levels[rep.levels.size() - 3].second) + 1e-12;
    return rep;
}

DensityReport real_density_checked(const CubicPairSystem& sys,
                                   const RealDensityOptions& opts) {
    DensityReport slab = real_density(sys, RealDensityMethod::Slab, opts);
    DensityReport osc = real_density(sys, RealDensityMethod::Oscillatory, opts);
    double avg = 0.5 * (std::abs(slab.value) + std::abs(osc.value));
    double gap = std::abs(slab.value - osc.value);
    if (gap > 0.02 * avg + slab.residual + osc.residual)
        throw MethodsDisagree("slab and oscillatory real densities disagree");
    DensityReport out = slab;
    out.method = "slab+oscillatory";
    out.residual = slab.residual + osc.residual + gap;
    out.levels.insert(out.levels.end(), osc.levels.begin(), osc.levels.end());
    return out;
}

std::string DensityReport::to_csv() const {
    std::ostringstream os;
    os << "p_or_inf,method,level,value,residual,converged\n";
    os.precision(17);
    for (const auto& [lvl, val] : levels)
        os << p_or_inf << ',' << method << ',' << lvl << ',' << val << ','
           << residual << ',' << (converged ? 1 : 0) << '\n';
    return os.str();
}

}  // namespace dicubic
