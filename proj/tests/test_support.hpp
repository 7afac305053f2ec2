#pragma once

#include <cstdlib>
#include <random>
#include <string>

// CCL_SEED pins the generators of the randomized property tests.
inline std::mt19937_64 make_rng(std::uint64_t salt = 0) {
    std::uint64_t seed = 0x9e3779b97f4a7c15ull;
    if (const char* env = std::getenv("CCL_SEED")) seed = std::strtoull(env, nullptr, 10);
    return std::mt19937_64(seed ^ salt);
}

inline std::string scratch_path(const std::string& name) {
    return "ccl_test_" + name;
}
