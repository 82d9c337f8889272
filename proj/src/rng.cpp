#include "telet/rng.hpp"

namespace telet {

namespace {

// FNV-1a over the stream name.
std::uint64_t hash_name(std::string_view name) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : name) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

Rng make_stream(std::uint64_t seed, std::string_view name, std::uint64_t index) {
  const std::uint64_t h = hash_name(name);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

Rng make_stream(std::uint64_t seed, std::string_view name) { return make_stream(seed, name, 0); }

std::uint64_t derive_seed(std::uint64_t seed, std::string_view name, std::uint64_t index) {
  Rng rng = make_stream(seed, name, index);
  return rng();
}

}  // namespace telet
