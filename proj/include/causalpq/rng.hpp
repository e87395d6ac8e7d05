#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace causalpq {

// All randomness in the library flows from explicit 64-bit seeds. Child
// streams are derived from a root seed and a path of integer labels
// (phase, node, trial, ...) so that any single unit of work can be
// re-run in isolation:
//
//   child = derive_seed(root, {label_0, label_1, ...})
//
// Derivation chains the splitmix64 finalizer over root and each label.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t root,
                                 std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = splitmix64(root);
  for (std::uint64_t label : path) {
    s = splitmix64(s ^ splitmix64(label + 0x632be59bd9b4e019ULL));
  }
  return s;
}

using Rng = std::mt19937_64;

// Uniform double in [0, 1) from the high 53 bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace causalpq
