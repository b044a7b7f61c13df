#pragma once

#include <charconv>
#include <cstdint>
#include <string>

namespace pb {

// splitmix64 step; decorrelates derived seeds from a master seed so that
// per-task RNG streams are independent and reproducible.
inline std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream)
{
    return mix64(master + 0x9e3779b97f4a7c15ull * (stream + 1));
}

// Shortest decimal form that parses back to the identical double; keeps
// serialized files both human-readable and bit-exact under round trips.
inline std::string format_double(double v)
{
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

} // namespace pb
