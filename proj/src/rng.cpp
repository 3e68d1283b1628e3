#include "binrep/rng.hpp"

#include <cmath>
#include <string>

#include "binrep/dataset.hpp"
#include "binrep/special_functions.hpp"

namespace binrep {

RngStream::RngStream(std::uint64_t seed, std::uint64_t k1, std::uint64_t k2, std::uint64_t k3) {
    std::seed_seq seq{
        static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
        static_cast<std::uint32_t>(k1),   static_cast<std::uint32_t>(k1 >> 32),
        static_cast<std::uint32_t>(k2),   static_cast<std::uint32_t>(k2 >> 32),
        static_cast<std::uint32_t>(k3),   static_cast<std::uint32_t>(k3 >> 32)};
    engine_.seed(seq);
}

double RngStream::uniform() {
    // 53-bit mantissa shifted into (0,1): never returns an exact endpoint.
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

bool RngStream::bernoulli(double prob) {
    return uniform() < prob;
}

int RngStream::uniform_int(int lo, int hi) {
    const int span = hi - lo + 1;
    int v = lo + static_cast<int>(uniform() * span);
    if (v > hi) v = hi;
    return v;
}

double RngStream::beta(double a, double b) {
    return math::beta_quantile(a, b, uniform());
}

double RngStream::beta_truncated(double a, double b, double upper, const char* what) {
    const double mass = math::beta_cdf(a, b, upper);
    if (!(mass >= 1e-300)) {
        throw numerical_error(std::string("truncated beta draw for '") + what +
                              "': no mass below truncation point");
    }
    double x = math::beta_quantile(a, b, uniform() * mass);
    if (x >= upper) x = std::nextafter(upper, 0.0);
    if (x <= 0.0) x = std::nextafter(0.0, 1.0);
    return x;
}

}  // namespace binrep
