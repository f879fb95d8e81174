#pragma once

#include <cstdint>
#include <random>

namespace krongcrf {

/// Seeded random stream. The same (seed, stream) pair always reproduces the
/// same draws within one build; disjoint stream indices give independent
/// streams, which is how repetitions parallelize.
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t stream);

    std::mt19937_64& engine() { return engine_; }

    double normal(double mean = 0.0, double stddev = 1.0);
    double uniform(); // [0, 1)
    /// Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    /// Derived stream for a named sub-purpose; deterministic in (this, tag).
    RngStream substream(std::uint64_t tag) const;

  private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 engine_;
};

/// splitmix64 step; used to mix seeds and derive sub-stream keys.
std::uint64_t mix64(std::uint64_t x);

} // namespace krongcrf
