#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace supcogarch {

using Rng = std::mt19937_64;

// Purpose tags mixed into derived seeds so that independent random inputs of
// one simulation never share a stream.
enum class Stream : std::uint64_t {
  Driver = 1,      // Lévy path of one driver (keyed further by atom index)
  Choice = 2,      // i.i.d. mixture draws of the supCOGARCH 3 jump mechanism
  Replication = 3  // one Monte Carlo replication (keyed by replication index)
};

// One step of the splitmix64 generator; used purely as a 64-bit mixer.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed-splitting rule. The child seed is
//   s_0 = splitmix64(root),  s_{j+1} = splitmix64(s_j ^ key_j),
// folded over the keys in order. A replication, an atom or a purpose tag is
// a key, so a child stream depends only on (root, keys) and never on which
// thread or in which order it is consumed.
constexpr std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t s = splitmix64(root);
  for (std::uint64_t k : keys) s = splitmix64(s ^ k);
  return s;
}

constexpr std::uint64_t derive_seed(std::uint64_t root, Stream tag, std::uint64_t index = 0) {
  return derive_seed(root, {static_cast<std::uint64_t>(tag), index});
}

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

}  // namespace supcogarch
