#include "schatten/random.hpp"

#include "schatten/errors.hpp"

#include <boost/random/gamma_distribution.hpp>

#include <cmath>

namespace schatten {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

std::uint64_t mix64(std::uint64_t x) noexcept {
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
    // Key the SplitMix64 sequence on both inputs so that neighbouring stream
    // ids land on unrelated xoshiro states.
    std::uint64_t state = mix64(seed + kGolden) ^ mix64(mix64(stream_id) + 0x632be59bd9b4e019ULL);
    for (auto& word : s_) {
        state += kGolden;
        word = mix64(state);
    }
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = kGolden;
}

RandomStream RandomStream::substream(std::uint64_t k) const {
    return RandomStream(seed_, mix64(stream_id_ ^ rotl(mix64(k + 1), 17)));
}

RandomStream::result_type RandomStream::operator()() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double RandomStream::uniform() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::exponential() noexcept { return -std::log(uniform()); }

double RandomStream::gamma(double shape) {
    if (!(shape > 0.0)) throw DomainError("RandomStream::gamma: shape must be positive");
    boost::random::gamma_distribution<double> dist(shape, 1.0);
    return dist(*this);
}

}  // namespace schatten
