#include <cmath>

#include "dicubic/locsol.hpp"
#include "dicubic/series.hpp"

namespace dicubic {

namespace {
std::vector<i64> primes_up_to(i64 P) {
    std::vector<i64> out;
    for (i64 p = 2; p <= P; ++p) {
        bool prime = true;
        for (i64 d = 2; d * d <= p; ++d)
            if (p % d == 0) {
                prime = false;
                break;
            }
        if (prime) out.push_back(p);
    }
    return out;
}
}  // namespace

Prediction predicted_count(const CubicPairSystem& sys, i64 B, const PredictionOptions& opts) {
    Prediction out;
    out.route = opts.route;

    // A refuted prime kills the whole product.
    for (i64 p : primes_up_to(opts.prime_cutoff)) {
        try {
            auto res = check_padic_solubility(sys, p, opts.h_max);
            if (std::holds_alternative<Refutation>(res)) {
                out.refuted = true;
                out.refuted_p = p;
                out.C = 0.0;
                out.value = 0.0;
                return out;
            }
        } catch (const Inconclusive&) {
            // cannot certify either way at this prime; the density factors
            // below still contribute their finite-level estimates
        }
    }

    RealDensityOptions ropts;
    ropts.seed = opts.seed;
    ropts.base_samples = opts.slab_samples;
    DensityReport vinf = real_density(sys, RealDensityMethod::Slab, ropts);

    double finite = 1.0;
    double rel_residual = vinf.value > 0 ? vinf.residual / vinf.value : 1.0;
    if (opts.route == PredictionRoute::Series) {
        SeriesTruncation st = singular_series(sys, opts.series_cutoff);
        finite = st.partial;
        if (std::abs(finite) > 0) rel_residual += std::abs(st.tail_estimate / finite);
    } else {
        for (i64 p : primes_up_to(opts.prime_cutoff)) {
            // The character sum at level h costs O(p^{2h}); cap p^h so large
            // primes stop at a shallow level (their v_p converges as p^{-2}).
            int h_eff = 1;
            while (h_eff < opts.h_max) {
                i64 next = 1;
                for (int i = 0; i <= h_eff; ++i) next *= p;
                if (next > 20000) break;
                ++h_eff;
            }
            DensityReport vp = local_density(sys, p, h_eff, opts.vp_tol);
            finite *= vp.value;
            if (vp.value > 0) rel_residual += vp.residual / vp.value;
        }
    }

    out.C = vinf.value * finite;
    out.value = out.C * std::pow(double(B), double(sys.s() - 6));
    out.residual = std::abs(out.value) * rel_residual;
    return out;
}

}  // namespace dicubic
