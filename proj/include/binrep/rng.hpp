#pragma once

#include <cstdint>
#include <random>

namespace binrep {

// Deterministic random stream. Every stochastic routine derives its own
// stream from (user seed, structural keys) so that results do not depend
// on thread scheduling and are bit-identical across runs.
//
// All variates are produced from raw 64-bit outputs; none of the
// implementation-defined std <random> distributions are used.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) : RngStream(seed, 0, 0, 0) {}
    RngStream(std::uint64_t seed, std::uint64_t k1, std::uint64_t k2 = 0, std::uint64_t k3 = 0);

    // Uniform on the open interval (0, 1).
    double uniform();
    double uniform(double lo, double hi);
    bool bernoulli(double prob);
    // Uniform integer on {lo, ..., hi} inclusive.
    int uniform_int(int lo, int hi);

    // Beta(a, b) draw by quantile transform.
    double beta(double a, double b);
    // Beta(a, b) conditioned on (0, upper). Throws numerical_error when the
    // distribution carries essentially no mass below `upper`.
    double beta_truncated(double a, double b, double upper, const char* what);

  private:
    std::mt19937_64 engine_;
};

}  // namespace binrep
