// AVX2+FMA variants of the batch constitutive kernels. Vector exp/log follow
// the Cephes rational approximations; pow(|h|, b) = exp(b log |h|) with an
// explicit zero mask. Tails fall back to the scalar core.

#include "soilctl/kernels.hpp"
#include "soilctl/scalar_core.hpp"

#if defined(__x86_64__) && defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

namespace soilctl::kernels::detail {

namespace {

inline __m256d splat(double v) { return _mm256_set1_pd(v); }

inline __m256d vexp(__m256d x0) {
    const __m256d log2e = splat(1.4426950408889634073599);
    const __m256d c1 = splat(6.93359375e-1);
    const __m256d c2 = splat(-2.121944400546905827679e-4);

    __m256d x = _mm256_max_pd(_mm256_min_pd(x0, splat(709.0)), splat(-709.0));
    __m256d px = _mm256_round_pd(_mm256_fmadd_pd(x, log2e, splat(0.5)),
                                 _MM_FROUND_TO_NEG_INF | _MM_FROUND_NO_EXC);
    __m128i n32 = _mm256_cvtpd_epi32(px);
    x = _mm256_fnmadd_pd(px, c1, x);
    x = _mm256_fnmadd_pd(px, c2, x);

    const __m256d xx = _mm256_mul_pd(x, x);
    // P(xx), Q(xx)
    __m256d p = splat(1.26177193074810590878e-4);
    p = _mm256_fmadd_pd(p, xx, splat(3.02994407707441961300e-2));
    p = _mm256_fmadd_pd(p, xx, splat(9.99999999999999999910e-1));
    p = _mm256_mul_pd(p, x);
    __m256d q = splat(3.00198505138664455042e-6);
    q = _mm256_fmadd_pd(q, xx, splat(2.52448340349684104192e-3));
    q = _mm256_fmadd_pd(q, xx, splat(2.27265548208155028766e-1));
    q = _mm256_fmadd_pd(q, xx, splat(2.00000000000000000005e0));
    __m256d e = _mm256_div_pd(p, _mm256_sub_pd(q, p));
    e = _mm256_fmadd_pd(splat(2.0), e, splat(1.0));

    // e * 2^n
    __m256i n64 = _mm256_cvtepi32_epi64(n32);
    __m256i pow2 = _mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
    e = _mm256_mul_pd(e, _mm256_castsi256_pd(pow2));

    // saturate the extremes of the original argument
    e = _mm256_blendv_pd(e, _mm256_setzero_pd(), _mm256_cmp_pd(x0, splat(-709.0), _CMP_LT_OQ));
    return e;
}

// log for strictly positive normal inputs.
inline __m256d vlog(__m256d x) {
    const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFll);
    const __m256i half_bits = _mm256_set1_epi64x(0x3FE0000000000000ll);

    __m256i bits = _mm256_castpd_si256(x);
    __m256i exp_bits = _mm256_srli_epi64(bits, 52);
    // frexp exponent (m in [0.5, 1))
    alignas(32) long long eb[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(eb), exp_bits);
    __m256d ed = _mm256_set_pd(double(eb[3] - 1022), double(eb[2] - 1022), double(eb[1] - 1022),
                               double(eb[0] - 1022));

    __m256d m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, mant_mask), half_bits));

    const __m256d sqrth = splat(0.70710678118654752440);
    __m256d below = _mm256_cmp_pd(m, sqrth, _CMP_LT_OQ);
    ed = _mm256_add_pd(ed, _mm256_and_pd(below, splat(-1.0)));
    m = _mm256_blendv_pd(m, _mm256_add_pd(m, m), below);
    __m256d z = _mm256_sub_pd(m, splat(1.0));

    __m256d zz = _mm256_mul_pd(z, z);
    __m256d p = splat(1.01875663804580931796e-4);
    p = _mm256_fmadd_pd(p, z, splat(4.97494994976747001425e-1));
    p = _mm256_fmadd_pd(p, z, splat(4.70579119878881725854e0));
    p = _mm256_fmadd_pd(p, z, splat(1.44989225341610930846e1));
    p = _mm256_fmadd_pd(p, z, splat(1.79368678507819816313e1));
    p = _mm256_fmadd_pd(p, z, splat(7.70838733755885391666e0));
    __m256d q = _mm256_add_pd(z, splat(1.12873587189167450590e1));
    q = _mm256_fmadd_pd(q, z, splat(4.52279145837532221105e1));
    q = _mm256_fmadd_pd(q, z, splat(8.29875266912776603211e1));
    q = _mm256_fmadd_pd(q, z, splat(7.11544750618563894466e1));
    q = _mm256_fmadd_pd(q, z, splat(2.31251620126765340583e1));

    __m256d y = _mm256_mul_pd(_mm256_mul_pd(z, zz), _mm256_div_pd(p, q));
    y = _mm256_fnmadd_pd(ed, splat(2.121944400546905827679e-4), y);
    y = _mm256_fnmadd_pd(splat(0.5), zz, y);
    __m256d r = _mm256_add_pd(z, y);
    r = _mm256_fmadd_pd(ed, splat(0.693359375), r);
    return r;
}

// pow(a, b) for a >= 0 with pow(0, b) = 0 (b > 0 in this codebase).
inline __m256d vpow_abs(__m256d a, double b) {
    __m256d zero_mask = _mm256_cmp_pd(a, _mm256_setzero_pd(), _CMP_EQ_OQ);
    __m256d safe = _mm256_blendv_pd(a, splat(1.0), zero_mask);
    __m256d r = vexp(_mm256_mul_pd(splat(b), vlog(safe)));
    return _mm256_andnot_pd(zero_mask, r);
}

inline __m256d vabs(__m256d x) {
    return _mm256_andnot_pd(splat(-0.0), x);
}

template <typename ScalarTail, typename Vec4>
void run(const double* h, double* out, std::size_t n, Vec4&& v4, ScalarTail&& tail) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d x = _mm256_loadu_pd(h + i);
        _mm256_storeu_pd(out + i, v4(x));
    }
    for (; i < n; ++i) out[i] = tail(h[i]);
}

void hav_theta(const HaverkampParams& p, const double* h, double* out, std::size_t n) {
    const __m256d num = splat(p.alpha * (p.theta_S - p.theta_r));
    run(h, out, n,
        [&](__m256d x) {
            __m256d ab = vpow_abs(vabs(x), p.beta2);
            return _mm256_add_pd(_mm256_div_pd(num, _mm256_add_pd(splat(p.alpha), ab)),
                                 splat(p.theta_r));
        },
        [&](double x) { return scalar::haverkamp_theta(p, x); });
}

void hav_cond(const HaverkampParams& p, const double* h, double scale, double* out,
              std::size_t n) {
    const __m256d num = splat(scale * p.K_S * p.A_const);
    run(h, out, n,
        [&](__m256d x) {
            __m256d ab = vpow_abs(vabs(x), p.beta1);
            return _mm256_div_pd(num, _mm256_add_pd(splat(p.A_const), ab));
        },
        [&](double x) { return scale * scalar::haverkamp_conductivity(p, x); });
}

void hav_cap(const HaverkampParams& p, const double* h, double* out, std::size_t n) {
    const __m256d coef = splat(p.alpha * (p.theta_S - p.theta_r) * p.beta2);
    run(h, out, n,
        [&](__m256d x) {
            __m256d a = vabs(x);
            __m256d zero_mask = _mm256_cmp_pd(a, _mm256_setzero_pd(), _CMP_EQ_OQ);
            __m256d safe = _mm256_blendv_pd(a, splat(1.0), zero_mask);
            __m256d ab = vpow_abs(safe, p.beta2);
            __m256d denom = _mm256_add_pd(splat(p.alpha), ab);
            __m256d sign = _mm256_blendv_pd(splat(1.0), splat(-1.0),
                                            _mm256_cmp_pd(x, _mm256_setzero_pd(), _CMP_LT_OQ));
            __m256d r = _mm256_div_pd(_mm256_mul_pd(coef, _mm256_div_pd(ab, safe)),
                                      _mm256_mul_pd(denom, denom));
            r = _mm256_mul_pd(r, _mm256_sub_pd(_mm256_setzero_pd(), sign));
            return _mm256_andnot_pd(zero_mask, r);
        },
        [&](double x) { return scalar::haverkamp_capacity(p, x); });
}

void gar_theta(const GardnerParams& p, const double* h, double* out, std::size_t n) {
    run(h, out, n,
        [&](__m256d x) {
            return _mm256_fmadd_pd(splat(p.theta_S - p.theta_r),
                                   vexp(_mm256_mul_pd(splat(p.rho), x)), splat(p.theta_r));
        },
        [&](double x) { return scalar::gardner_theta(p, x); });
}

void gar_cond(const GardnerParams& p, const double* h, double scale, double* out, std::size_t n) {
    run(h, out, n,
        [&](__m256d x) {
            return _mm256_mul_pd(splat(scale * p.K_S), vexp(_mm256_mul_pd(splat(p.rho), x)));
        },
        [&](double x) { return scale * scalar::gardner_conductivity(p, x); });
}

void gar_cap(const GardnerParams& p, const double* h, double* out, std::size_t n) {
    run(h, out, n,
        [&](__m256d x) {
            return _mm256_mul_pd(splat(p.rho * (p.theta_S - p.theta_r)),
                                 vexp(_mm256_mul_pd(splat(p.rho), x)));
        },
        [&](double x) { return scalar::gardner_capacity(p, x); });
}

inline __m256d vstress(const FeddesParams& p, __m256d x) {
    __m256d dead = _mm256_or_pd(_mm256_cmp_pd(x, splat(p.h1), _CMP_GE_OQ),
                                _mm256_cmp_pd(x, splat(p.h4), _CMP_LE_OQ));
    __m256d wet = _mm256_cmp_pd(x, splat(p.h2), _CMP_GT_OQ);
    __m256d plateau = _mm256_cmp_pd(x, splat(p.h3), _CMP_GE_OQ);
    __m256d wet_ramp = _mm256_mul_pd(_mm256_sub_pd(x, splat(p.h1)), splat(1.0 / (p.h2 - p.h1)));
    __m256d dry_ramp = _mm256_mul_pd(_mm256_sub_pd(x, splat(p.h4)), splat(1.0 / (p.h3 - p.h4)));
    __m256d r = dry_ramp;
    r = _mm256_blendv_pd(r, splat(1.0), plateau);
    r = _mm256_blendv_pd(r, wet_ramp, wet);
    return _mm256_andnot_pd(dead, r);
}

void fed_uptake(const FeddesParams& p, const double* h, double* out, std::size_t n) {
    run(h, out, n, [&](__m256d x) { return _mm256_mul_pd(splat(p.S_max), vstress(p, x)); },
        [&](double x) { return scalar::feddes_uptake(p, x); });
}

void fed_deficit(const FeddesParams& p, const double* h, double* out, std::size_t n) {
    run(h, out, n,
        [&](__m256d x) {
            __m256d d = _mm256_sub_pd(splat(1.0), vstress(p, x));
            return _mm256_mul_pd(d, d);
        },
        [&](double x) { return scalar::feddes_deficit(p, x); });
}

const Ops avx2_table{hav_theta, hav_cond, hav_cap,    gar_theta,
                     gar_cond,  gar_cap,  fed_uptake, fed_deficit};

} // namespace

const Ops* avx2_ops() {
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return &avx2_table;
    return nullptr;
}

} // namespace soilctl::kernels::detail

#else

namespace soilctl::kernels::detail {
const Ops* avx2_ops() { return nullptr; }
} // namespace soilctl::kernels::detail

#endif
