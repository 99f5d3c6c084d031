#include "apc/cache.hpp"

#include <bit>
#include <cstring>
#include <fmt/format.h>
#include <fstream>
#include <iterator>
#include <vector>

#include "apc/errors.hpp"

namespace apc::cache {

namespace {

constexpr std::uint8_t kMagic[4] = {'A', 'P', 'C', '1'};
constexpr std::size_t kHeaderSize = 4 + 4 + 8 + 8 + 1;

template <class T>
void put_le(std::vector<std::uint8_t>& out, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

template <class T>
T get_le(const std::uint8_t* p) {
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(p[i]) << (8 * i);
  return v;
}

}  // namespace

std::uint64_t fnv1a(std::span<const std::uint8_t> bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void save_cache(const std::filesystem::path& path, const Payload& payload) {
  std::vector<std::uint8_t> payload_bytes;
  std::uint64_t start = 0, len = 0;
  PayloadKind kind{};
  if (const auto* seg = std::get_if<sieve::SieveSegment>(&payload)) {
    kind = PayloadKind::SpfSegment;
    start = static_cast<std::uint64_t>(seg->start());
    len = static_cast<std::uint64_t>(seg->len());
    payload_bytes.reserve(len * 4);
    for (std::uint32_t v : seg->raw()) put_le(payload_bytes, v);
  } else {
    const auto& w = std::get<sieve::WeightedSeries>(payload);
    kind = PayloadKind::Series;
    start = static_cast<std::uint64_t>(w.start);
    len = static_cast<std::uint64_t>(w.len());
    payload_bytes.reserve(1 + len * 8);
    payload_bytes.push_back(static_cast<std::uint8_t>(w.kind));
    for (double v : w.values) put_le(payload_bytes, std::bit_cast<std::uint64_t>(v));
  }

  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  out.reserve(kHeaderSize + payload_bytes.size() + 8);
  put_le(out, kFormatVersion);
  put_le(out, start);
  put_le(out, len);
  out.push_back(static_cast<std::uint8_t>(kind));
  out.insert(out.end(), payload_bytes.begin(), payload_bytes.end());
  put_le(out, fnv1a(payload_bytes));

  // Write beside the target and rename, so readers never see a partial file.
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(fmt::format("cannot open {} for writing", tmp.string()));
    f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
    if (!f) throw Error(fmt::format("write failed for {}", tmp.string()));
  }
  std::filesystem::rename(tmp, path);
}

Payload load_cache(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(fmt::format("cannot open cache file {}", path.string()));
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                        std::istreambuf_iterator<char>());
  const std::string name = path.string();
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw FormatError(fmt::format("{}: not an APC1 cache file (bad magic)", name));
  }
  if (bytes.size() < 8) throw FormatError(fmt::format("{}: header truncated", name));
  const auto version = get_le<std::uint32_t>(bytes.data() + 4);
  if (version != kFormatVersion) {
    throw VersionError(
        fmt::format("{}: cache format version {} (supported: {})", name, version, kFormatVersion));
  }
  if (bytes.size() < kHeaderSize) throw FormatError(fmt::format("{}: header truncated", name));
  const auto start = get_le<std::uint64_t>(bytes.data() + 8);
  const auto len = get_le<std::uint64_t>(bytes.data() + 16);
  const auto kind = static_cast<PayloadKind>(bytes[24]);

  std::uint64_t payload_size = 0;
  switch (kind) {
    case PayloadKind::SpfSegment: payload_size = len * 4; break;
    case PayloadKind::Series: payload_size = 1 + len * 8; break;
    default:
      throw FormatError(fmt::format("{}: unknown payload kind {}", name, int{bytes[24]}));
  }
  if (len > (std::uint64_t{1} << 40) || bytes.size() != kHeaderSize + payload_size + 8) {
    throw ChecksumError(fmt::format("{}: expected {} payload bytes plus checksum, file has {}",
                                    name, payload_size, bytes.size() - kHeaderSize));
  }
  const std::span<const std::uint8_t> body(bytes.data() + kHeaderSize, payload_size);
  const auto stored = get_le<std::uint64_t>(bytes.data() + kHeaderSize + payload_size);
  if (fnv1a(body) != stored) throw ChecksumError(fmt::format("{}: checksum mismatch", name));

  if (kind == PayloadKind::SpfSegment) {
    std::vector<std::uint32_t> raw(len);
    for (std::uint64_t i = 0; i < len; ++i) raw[i] = get_le<std::uint32_t>(body.data() + 4 * i);
    return sieve::SieveSegment(static_cast<sieve::i64>(start), std::move(raw));
  }
  sieve::WeightedSeries w;
  w.start = static_cast<sieve::i64>(start);
  w.kind = static_cast<sieve::WeightKind>(body[0]);
  w.values.resize(len);
  for (std::uint64_t i = 0; i < len; ++i) {
    w.values[i] = std::bit_cast<double>(get_le<std::uint64_t>(body.data() + 1 + 8 * i));
  }
  return w;
}

}  // namespace apc::cache
