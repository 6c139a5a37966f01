#pragma once

#include <cstddef>
#include <functional>

namespace tropic {

/// Order-dependent hash mixing (splitmix-style avalanche).
inline std::size_t hash_mix(std::size_t seed, std::size_t v) {
  std::size_t x = seed + 0x9e3779b97f4a7c15ull + v;
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebull;
  x ^= x >> 31;
  return x;
}

template <class T>
std::size_t hash_mix_value(std::size_t seed, T const& v) {
  return hash_mix(seed, std::hash<T>{}(v));
}

}  // namespace tropic
