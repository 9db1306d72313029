#pragma once

#include <cstdint>
#include <optional>
#include <random>

namespace volkit::numerics {

/**
 * Deterministic random stream keyed by (seed, stream_id).
 *
 * The engine is std::mt19937_64 seeded through std::seed_seq, both of which
 * have fully specified output, and the normal/gamma transforms are our own, so
 * a given key produces the same bits on every conforming platform. One owner at
 * a time; moving a stream between threads is fine, sharing it is not.
 */
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    [[nodiscard]] std::uint64_t next_u64() { return engine_(); }

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    [[nodiscard]] double uniform();

    /// Standard normal (Marsaglia polar method).
    [[nodiscard]] double normal();

    /// Gamma(shape, 1) (Marsaglia-Tsang; boosted for shape < 1).
    [[nodiscard]] double gamma(double shape);

    /// +1 or -1 with equal probability.
    [[nodiscard]] double sign() { return (engine_() >> 63) != 0 ? 1.0 : -1.0; }

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] std::uint64_t stream_id() const noexcept { return stream_id_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
    std::optional<double> spare_normal_;
};

/// Convenience constructor mirroring the stream key.
[[nodiscard]] inline RngStream rng_stream(std::uint64_t seed, std::uint64_t stream_id) {
    return RngStream(seed, stream_id);
}

}  // namespace volkit::numerics
