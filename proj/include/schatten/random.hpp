#pragma once

#include <cstdint>
#include <limits>

namespace schatten {

/// Seeded, splittable random stream (xoshiro256** seeded through SplitMix64).
///
/// The state is a pure function of (seed, stream_id), so identical pairs give
/// bitwise-identical sequences on every platform. A stream has a single
/// consumer; parallel work asks for substream(k) instead of sharing.
class RandomStream {
public:
    using result_type = std::uint64_t;

    RandomStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }

    /// Child stream for chunk k; depends only on (seed, stream_id, k).
    RandomStream substream(std::uint64_t k) const;

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()() noexcept;

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform() noexcept;
    /// Uniform on (lo, hi).
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
    /// Exp(1).
    double exponential() noexcept;
    /// Gamma(shape, 1).
    double gamma(double shape);
    /// +1 or -1 with equal probability.
    double sign() noexcept { return ((*this)() >> 63) ? 1.0 : -1.0; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t s_[4];
};

/// SplitMix64 finaliser; also used to derive substream ids.
std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace schatten
