#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

namespace tsed::io {

// Fixed-width little-endian encoding, independent of host byte order.
void write_u32(std::ostream& out, std::uint32_t value);
void write_u64(std::ostream& out, std::uint64_t value);
void write_i64(std::ostream& out, std::int64_t value);
void write_f64(std::ostream& out, double value);

std::uint32_t read_u32(std::istream& in);
std::uint64_t read_u64(std::istream& in);
std::int64_t read_i64(std::istream& in);
double read_f64(std::istream& in);

/// 64-bit FNV-1a.
class Fnv1a64 {
 public:
  void update(std::span<const std::byte> bytes);
  void update(std::string_view text);
  std::uint64_t digest() const { return state_; }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

std::uint64_t hash_file(const std::filesystem::path& path);
std::string to_hex(std::uint64_t value);

/// Writes `<path>.fnv64` holding the hex digest of `path`'s bytes.
void write_checksum_sidecar(const std::filesystem::path& path);
/// Throws FormatError when the sidecar is missing or does not match.
void verify_checksum_sidecar(const std::filesystem::path& path);

}  // namespace tsed::io
