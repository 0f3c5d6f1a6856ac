#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace sfns {

// Deterministic substream layout: every consumer of randomness owns a stream
// addressed by (seed, stream_id, substream). Monte Carlo replicas map to
// substream = replica index, so ensembles are order-independent and
// reproducible under any parallel schedule.
//
// Stream ids are partitioned by purpose to keep independent components of a
// run statistically decoupled even when they share the user seed.
namespace stream_id {
inline constexpr std::uint64_t fbm_mode = 0x100;       // + mode id
inline constexpr std::uint64_t drift_mc = 0x20000;     // Gaussian coefficient draws
inline constexpr std::uint64_t generic = 0x30000;      // tests, ad-hoc sampling
}  // namespace stream_id

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// One Gaussian/uniform stream. mt19937_64 is fully specified by the standard,
// so identical (seed, stream, substream) give identical output on every
// platform; the Box-Muller transform below avoids the
// implementation-defined std::normal_distribution.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream = 0)
        : gen_(mix(seed, stream, substream)) {}

    double uniform() {  // in [0, 1)
        return (gen_() >> 11) * 0x1.0p-53;
    }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double c = std::cos(6.283185307179586476925286766559 * u2);
        const double s = std::sin(6.283185307179586476925286766559 * u2);
        spare_ = r * s;
        have_spare_ = true;
        return r * c;
    }

    std::uint64_t next_u64() { return gen_(); }

private:
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream, std::uint64_t sub) {
        std::uint64_t h = splitmix64(seed);
        h = splitmix64(h ^ (0x9e3779b97f4a7c15ULL + stream));
        h = splitmix64(h ^ (0xc2b2ae3d27d4eb4fULL + sub));
        return h;
    }

    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace sfns
