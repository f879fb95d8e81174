#include "krongcrf/rng.hpp"

namespace krongcrf {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), engine_(mix64(mix64(seed) ^ mix64(stream))) {}

double RngStream::normal(double mean, double stddev) {
    std::normal_distribution<double> dist(mean, stddev);
    return dist(engine_);
}

double RngStream::uniform() {
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    return dist(engine_);
}

std::uint64_t RngStream::below(std::uint64_t bound) {
    std::uniform_int_distribution<std::uint64_t> dist(0, bound - 1);
    return dist(engine_);
}

RngStream RngStream::substream(std::uint64_t tag) const {
    return RngStream(seed_, mix64(stream_ ^ mix64(tag)));
}

} // namespace krongcrf
