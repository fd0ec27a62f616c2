#pragma once

#include <cstdint>
#include <limits>

namespace qrp {

/// Counter-based random stream. Each draw hashes (key, counter), so a stream
/// can be split into independent child streams by tag without consuming
/// draws from the parent.
class RngStream {
public:
    using result_type = std::uint64_t;

    RngStream() = default;
    explicit RngStream(std::uint64_t seed) : key_(mix(seed ^ 0x6a09e667f3bcc909ULL)) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return mix(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

    /// Child stream keyed by `tag`; the parent is left untouched.
    [[nodiscard]] RngStream substream(std::uint64_t tag) const {
        RngStream s;
        s.key_ = mix(key_ ^ mix(tag + 0xbb67ae8584caa73bULL));
        return s;
    }
    [[nodiscard]] RngStream substream(std::uint64_t tag, std::uint64_t index) const {
        return substream(tag).substream(index);
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : (*this)() % n; }

    [[nodiscard]] std::uint64_t key() const { return key_; }
    [[nodiscard]] std::uint64_t counter() const { return counter_; }

private:
    static constexpr std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_ = 0x853c49e6748fea9bULL;
    std::uint64_t counter_ = 0;
};

}  // namespace qrp
