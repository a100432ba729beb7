#pragma once

#include <cstdint>
#include <limits>

namespace schoolsim {

// All randomness is drawn from keyed counter-based substreams: a draw is a hash
// of (seed, stream, key1, key2, key3) rather than a step of a shared sequential
// generator.  Draws for one entity/day therefore never perturb draws for
// another, which keeps runs bit-reproducible under structural edits (adding a
// policy that consumes extra draws, restricting the attending set, fast paths
// that skip pairs whose transmission draw would be a guaranteed miss).

enum class Stream : std::uint64_t {
    Replication = 1,   // per-run seed derivation
    Contact = 2,       // (a, b, day*4+level) contact indicator
    Transmission = 3,  // (a, b, day*4+level) transmission indicator
    Disease = 4,       // (pupil) trajectory + noise sampling engine
    External = 5,      // (pupil, day) community introduction
    Noncovid = 6,      // (pupil, day) non-disease symptom indicator
    Lfd = 7,           // (pupil, day) LFD outcome
    Pcr = 8,           // (pupil, swab_day) PCR outcome
    Compliance = 9,    // (pupil) compliance probability engine
    ComplianceCoin = 10, // (pupil, day) per-request compliance indicator
    Effect = 11,       // (pupil) test-sensitivity random effect engine
    CalibPopulation = 12, // (population) trajectory seed for calibration
    CalibResample = 13,   // (population, resample) contact seed for calibration
    EtaSample = 14     // (trajectory index) cross-section draws
};

namespace detail {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline std::uint64_t splitmix64_mix(std::uint64_t z)
{
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

inline std::uint64_t hash_combine(std::uint64_t h, std::uint64_t x)
{
    return splitmix64_mix(h ^ (x + kGolden + (h << 6) + (h >> 2)));
}

} // namespace detail

inline std::uint64_t mix_key(std::uint64_t seed, Stream stream,
                             std::uint64_t k1 = 0, std::uint64_t k2 = 0,
                             std::uint64_t k3 = 0)
{
    std::uint64_t h = detail::splitmix64_mix(seed + detail::kGolden);
    h = detail::hash_combine(h, static_cast<std::uint64_t>(stream));
    h = detail::hash_combine(h, k1);
    h = detail::hash_combine(h, k2);
    h = detail::hash_combine(h, k3);
    return h;
}

// Uniform in [0, 1) with 53 random bits.
inline double to_unit(std::uint64_t h)
{
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

inline double keyed_uniform(std::uint64_t seed, Stream stream,
                            std::uint64_t k1 = 0, std::uint64_t k2 = 0,
                            std::uint64_t k3 = 0)
{
    return to_unit(detail::splitmix64_mix(mix_key(seed, stream, k1, k2, k3)));
}

// Sequential generator for multi-draw sampling (trajectories, Beta draws,
// noise vectors).  Seeded from a key so each entity owns its own sequence.
// Satisfies UniformRandomBitGenerator for the <random> distributions.
struct SplitMix64 {
    using result_type = std::uint64_t;

    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t s) : state(s) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max()
    {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()()
    {
        state += detail::kGolden;
        return detail::splitmix64_mix(state);
    }
};

inline SplitMix64 keyed_engine(std::uint64_t seed, Stream stream,
                               std::uint64_t k1 = 0, std::uint64_t k2 = 0,
                               std::uint64_t k3 = 0)
{
    return SplitMix64(mix_key(seed, stream, k1, k2, k3));
}

inline std::uint64_t run_seed(std::uint64_t base_seed, int replication)
{
    return mix_key(base_seed, Stream::Replication,
                   static_cast<std::uint64_t>(replication));
}

} // namespace schoolsim
