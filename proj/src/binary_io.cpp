#include "tsed/binary_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "tsed/error.hpp"

namespace tsed::io {

namespace {

template <class T>
void write_le(std::ostream& out, T value) {
  std::array<unsigned char, sizeof(T)> bytes;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<unsigned char>(value >> (8 * i));
  }
  out.write(reinterpret_cast<const char*>(bytes.data()), bytes.size());
}

template <class T>
T read_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes;
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
    throw FormatError("unexpected end of binary data");
  }
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    value |= static_cast<T>(bytes[i]) << (8 * i);
  }
  return value;
}

}  // namespace

void write_u32(std::ostream& out, std::uint32_t value) { write_le(out, value); }
void write_u64(std::ostream& out, std::uint64_t value) { write_le(out, value); }
void write_i64(std::ostream& out, std::int64_t value) {
  write_le(out, static_cast<std::uint64_t>(value));
}
void write_f64(std::ostream& out, double value) {
  write_le(out, std::bit_cast<std::uint64_t>(value));
}

std::uint32_t read_u32(std::istream& in) { return read_le<std::uint32_t>(in); }
std::uint64_t read_u64(std::istream& in) { return read_le<std::uint64_t>(in); }
std::int64_t read_i64(std::istream& in) { return static_cast<std::int64_t>(read_le<std::uint64_t>(in)); }
double read_f64(std::istream& in) { return std::bit_cast<double>(read_le<std::uint64_t>(in)); }

void Fnv1a64::update(std::span<const std::byte> bytes) {
  for (std::byte b : bytes) {
    state_ ^= static_cast<std::uint64_t>(b);
    state_ *= 0x100000001b3ULL;
  }
}

void Fnv1a64::update(std::string_view text) { update(std::as_bytes(std::span(text.data(), text.size()))); }

std::uint64_t hash_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  Fnv1a64 hash;
  std::array<char, 1 << 16> buffer;
  while (in) {
    in.read(buffer.data(), buffer.size());
    hash.update(std::string_view(buffer.data(), static_cast<std::size_t>(in.gcount())));
  }
  return hash.digest();
}

std::string to_hex(std::uint64_t value) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string text(16, '0');
  for (int i = 15; i >= 0; --i) {
    text[static_cast<std::size_t>(i)] = kDigits[value & 0xf];
    value >>= 4;
  }
  return text;
}

namespace {
std::filesystem::path sidecar_path(const std::filesystem::path& path) {
  return std::filesystem::path(path.string() + ".fnv64");
}
}  // namespace

void write_checksum_sidecar(const std::filesystem::path& path) {
  std::ofstream out(sidecar_path(path));
  out << to_hex(hash_file(path)) << '\n';
  if (!out) throw ConfigError("cannot write " + sidecar_path(path).string());
}

void verify_checksum_sidecar(const std::filesystem::path& path) {
  std::ifstream in(sidecar_path(path));
  std::string expected;
  if (!(in >> expected)) throw FormatError("missing checksum sidecar for " + path.string());
  if (expected != to_hex(hash_file(path))) throw FormatError("checksum mismatch for " + path.string());
}

}  // namespace tsed::io
