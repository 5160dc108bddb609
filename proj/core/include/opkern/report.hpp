#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace opk {

inline constexpr const char* kVersion = "0.1.0";

/* FNV-1a, used to fingerprint command inputs in certificates. Not
 * cryptographic. */
std::uint64_t fnv1a64(std::string_view data, std::uint64_t state = 14695981039346656037ull);
std::string digest_hex(std::uint64_t h);

/* Deterministic seeded generator shared by every randomized check, so that
 * reports are reproducible across platforms (std:: distributions are not). */
struct SplitMix64 {
    std::uint64_t state = 0;

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    std::uint64_t below(std::uint64_t bound) { return bound == 0 ? 0 : next() % bound; }
    std::int64_t range(std::int64_t lo, std::int64_t hi) {  // inclusive
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }
};

/* Deterministic run certificate. Serialization never includes wall-clock
 * timing unless asked: certificates must be byte-identical across reruns and
 * worker counts for a fixed command and seed. */
struct Certificate {
    std::vector<std::string> command;
    std::string version = kVersion;
    std::string inputs_digest;
    std::uint64_t seed = 0;
    std::string result_json;  // canonical JSON object
    double timing_seconds = 0.0;
};

std::string serialize_certificate(const Certificate& c, bool include_timing = false);

}  // namespace opk
