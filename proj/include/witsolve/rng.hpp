#ifndef WITSOLVE_RNG_HPP
#define WITSOLVE_RNG_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

// Counter-based deterministic random numbers. Each draw is a pure function of
// (seed, stream, index), so samples can be generated in any order or from any
// thread and still come out identical.

namespace witsolve {

// murmur3 64-bit finalizer; bijective on uint64.
inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 33;
    z *= 0xff51afd7ed558ccdULL;
    z ^= z >> 33;
    z *= 0xc4ceb9fe1a85ec53ULL;
    z ^= z >> 33;
    return z;
}

// Raw 64-bit word for a (seed, stream, index) triple.
inline std::uint64_t counter_word(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    const std::uint64_t base = mix64(seed ^ (0xD6E8FEB86659FD93ULL * (stream + 1)));
    return mix64(base + 0x9E3779B97F4A7C15ULL * index);
}

// Uniform double in the open interval (0,1): 53 random bits plus a half-ulp
// offset, so 0 and 1 are never returned and the inverse CDF stays finite.
inline double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    const std::uint64_t w = counter_word(seed, stream, index);
    return static_cast<double>(w >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

// Inverse standard normal CDF, Wichura's algorithm AS 241 (PPND16 coefficient
// set, ~1e-16 relative accuracy over the full open interval).
inline double normal_icdf(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("normal_icdf: p must lie in (0,1)");
    const double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q *
               (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                     6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
                   1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
                 1.3314166789178437745e+2) * r + 3.3871328727963666080e+0) /
               (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                     3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
                   5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
                 4.2313330701600911252e+1) * r + 1.0);
    }
    double r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double x;
    if (r <= 5.0) {
        r -= 1.6;
        x = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
                3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
              4.63033784615654529590e+0) * r + 1.42343711074968357734e+0) /
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
              2.05319162663775882187e+0) * r + 1.0);
    } else {
        r -= 5.0;
        x = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
              5.46378491116411436990e+0) * r + 6.65790464350110377720e+0) /
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
    }
    return (q < 0.0) ? -x : x;
}

// One N(0, sd^2) draw addressed by (seed, stream, index).
inline double normal_draw(std::uint64_t seed, std::uint64_t stream, std::uint64_t index, double sd) {
    return sd * normal_icdf(uniform01(seed, stream, index));
}

} // namespace witsolve

#endif
