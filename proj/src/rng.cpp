#include "rsqtsm/rng.hpp"

#include <cmath>
#include <limits>

namespace rsqtsm::rng {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;  // golden ratio
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;  // sqrt(3) - 1

inline void round_once(Block& ctr, std::uint32_t k0, std::uint32_t k1) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * ctr[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ k0, lo1, hi0 ^ ctr[3] ^ k1, lo0};
}

inline double horner8(const double (&c)[8], double r) {
    double v = c[7];
    for (int i = 6; i >= 0; --i) v = v * r + c[i];
    return v;
}

}  // namespace

Block philox4x32(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    Block ctr = {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                 static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    std::uint32_t k0 = static_cast<std::uint32_t>(seed);
    std::uint32_t k1 = static_cast<std::uint32_t>(seed >> 32);
    for (int r = 0; r < 9; ++r) {
        round_once(ctr, k0, k1);
        k0 += kPhiloxW0;
        k1 += kPhiloxW1;
    }
    round_once(ctr, k0, k1);
    return ctr;
}

double to_uniform(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

double inverse_normal_cdf(double p) {
    // AS 241, PPND16. Central branch |p - 1/2| <= 0.425, two tail branches.
    static constexpr double a[8] = {
        3.3871328727963666080e+00, 1.3314166789178437745e+02, 1.9715909503065514427e+03,
        1.3731693765509461125e+04, 4.5921953931549871457e+04, 6.7265770927008700853e+04,
        3.3430575583588128105e+04, 2.5090809287301226727e+03};
    static constexpr double b[8] = {
        1.0,                       4.2313330701600911252e+01, 6.8718700749205790830e+02,
        5.3941960214247511077e+03, 2.1213794301586595867e+04, 3.9307895800092710610e+04,
        2.8729085735721942674e+04, 5.2264952788528545610e+03};
    static constexpr double c[8] = {
        1.42343711074968357734e+00, 4.63033784615654529590e+00, 5.76949722146069140550e+00,
        3.64784832476320460504e+00, 1.27045825245236838258e+00, 2.41780725177450611770e-01,
        2.27238449892691845833e-02, 7.74545014278341407640e-04};
    static constexpr double d[8] = {
        1.0,                        2.05319162663775882187e+00, 1.67638483018380384940e+00,
        6.89767334985100004550e-01, 1.48103976427480074590e-01, 1.51986665636164571966e-02,
        5.47593808499534494600e-04, 1.05075007164441684324e-09};
    static constexpr double e[8] = {
        6.65790464350110377720e+00, 5.46378491116411436990e+00, 1.78482653991729133580e+00,
        2.96560571828504891230e-01, 2.65321895265761230930e-02, 1.24266094738807843860e-03,
        2.71155556874348757815e-05, 2.01033439929228813265e-07};
    static constexpr double f[8] = {
        1.0,                        5.99832206555887937690e-01, 1.36929880922735805310e-01,
        1.48753612908506148525e-02, 7.86869131145613259100e-04, 1.84631831751005468180e-05,
        1.42151175831644588870e-07, 2.04426310338993978564e-15};

    const double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q * horner8(a, r) / horner8(b, r);
    }
    double r = (q < 0.0) ? p : 1.0 - p;
    if (!(r > 0.0)) {
        return (q < 0.0) ? -std::numeric_limits<double>::infinity()
                         : std::numeric_limits<double>::infinity();
    }
    r = std::sqrt(-std::log(r));
    double v;
    if (r <= 5.0) {
        r -= 1.6;
        v = horner8(c, r) / horner8(d, r);
    } else {
        r -= 5.0;
        v = horner8(e, r) / horner8(f, r);
    }
    return (q < 0.0) ? -v : v;
}

double uniform_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t i) {
    const Block blk = philox4x32(seed, stream, i >> 1);
    const std::uint64_t lo = (i & 1) ? (static_cast<std::uint64_t>(blk[3]) << 32 | blk[2])
                                     : (static_cast<std::uint64_t>(blk[1]) << 32 | blk[0]);
    return to_uniform(lo);
}

double normal_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t i) {
    return inverse_normal_cdf(uniform_at(seed, stream, i));
}

}  // namespace rsqtsm::rng
