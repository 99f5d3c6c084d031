#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <variant>

#include "apc/sieve.hpp"

// Binary cache files for sieve segments and weight series.
//
//   "APC1" | u32 version | u64 start | u64 len | u8 kind | payload | u64 FNV-1a(payload)
//
// All integers little-endian. Payload: len u32 spf entries (kind 1), or one
// WeightKind byte followed by len IEEE doubles (kind 2).
namespace apc::cache {

inline constexpr std::uint32_t kFormatVersion = 1;

enum class PayloadKind : std::uint8_t { SpfSegment = 1, Series = 2 };

using Payload = std::variant<sieve::SieveSegment, sieve::WeightedSeries>;

std::uint64_t fnv1a(std::span<const std::uint8_t> bytes) noexcept;

void save_cache(const std::filesystem::path& path, const Payload& payload);

/// Throws FormatError (magic, short header, unknown kind), VersionError, or
/// ChecksumError (truncated payload, trailing bytes, digest mismatch).
Payload load_cache(const std::filesystem::path& path);

}  // namespace apc::cache
