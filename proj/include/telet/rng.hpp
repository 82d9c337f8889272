// Named random streams derived from a single run seed.
#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace telet {

using Rng = std::mt19937_64;

/// Independent generator for the stream `name` under `seed`. Two calls with
/// the same arguments produce identical sequences; different names yield
/// unrelated sequences.
Rng make_stream(std::uint64_t seed, std::string_view name);

/// Same as make_stream but with a numeric sub-index (e.g. a trial number).
Rng make_stream(std::uint64_t seed, std::string_view name, std::uint64_t index);

/// Derived 64-bit seed, for handing to components that take a plain seed.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view name, std::uint64_t index = 0);

}  // namespace telet
