#pragma once

#include <array>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "context.hpp"

namespace vlmc {

enum class SequenceFormat { text, binary };

/// Binary layout: 16-byte header then one byte per symbol index.
///   bytes 0-3  magic "VLMC"
///   bytes 4-5  version (uint16, little-endian), currently 1
///   bytes 6-7  alphabet size (uint16, little-endian)
///   bytes 8-15 n (uint64, little-endian)
inline constexpr std::array<char, 4> kBinaryMagic{'V', 'L', 'M', 'C'};
inline constexpr std::uint16_t kBinaryVersion = 1;
inline constexpr std::size_t kBinaryHeaderSize = 16;

struct Sequence {
  std::size_t alphabet_size = 0;
  std::vector<symbol_t> symbols;
};

namespace detail {

template <typename T>
void put_le(std::string& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i)
    out.push_back(static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xFF));
}

template <typename T>
T get_le(const std::string& in, std::size_t offset) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i)
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[offset + i])) << (8 * i);
  return static_cast<T>(v);
}

}  // namespace detail

inline std::string encode_text(const Alphabet& alphabet, std::span<const symbol_t> symbols) {
  return alphabet.decode(symbols) + "\n";
}

inline std::string encode_binary(std::size_t alphabet_size, std::span<const symbol_t> symbols) {
  if (alphabet_size == 0 || alphabet_size > kMaxAlphabetSize)
    throw input_error("alphabet size does not fit the binary format");
  std::string out(kBinaryMagic.begin(), kBinaryMagic.end());
  detail::put_le<std::uint16_t>(out, kBinaryVersion);
  detail::put_le<std::uint16_t>(out, static_cast<std::uint16_t>(alphabet_size));
  detail::put_le<std::uint64_t>(out, symbols.size());
  out.append(reinterpret_cast<const char*>(symbols.data()), symbols.size());
  return out;
}

inline bool looks_binary(const std::string& bytes) {
  return bytes.size() >= kBinaryHeaderSize &&
         std::memcmp(bytes.data(), kBinaryMagic.data(), kBinaryMagic.size()) == 0;
}

inline Sequence decode_binary(const std::string& bytes) {
  if (!looks_binary(bytes)) throw input_error("missing binary sequence header");
  const auto version = detail::get_le<std::uint16_t>(bytes, 4);
  if (version != kBinaryVersion)
    throw input_error("unsupported binary sequence version " + std::to_string(version));
  Sequence seq;
  seq.alphabet_size = detail::get_le<std::uint16_t>(bytes, 6);
  const auto n = detail::get_le<std::uint64_t>(bytes, 8);
  if (seq.alphabet_size == 0 || seq.alphabet_size > kMaxAlphabetSize)
    throw input_error("bad alphabet size in binary header");
  if (bytes.size() - kBinaryHeaderSize != n)
    throw input_error("binary sequence length does not match its header");
  seq.symbols.assign(bytes.begin() + kBinaryHeaderSize, bytes.end());
  for (auto s : seq.symbols)
    if (s >= seq.alphabet_size)
      throw unknown_symbol("binary sequence contains symbol index " + std::to_string(s) +
                           " outside the alphabet");
  return seq;
}

/// Decodes the text format. Whitespace is ignored; every other character must be a label.
inline Sequence decode_text(const Alphabet& alphabet, const std::string& text) {
  Sequence seq;
  seq.alphabet_size = alphabet.size();
  seq.symbols.reserve(text.size());
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    seq.symbols.push_back(alphabet.index_of(c));
  }
  return seq;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw input_error("cannot write " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw error("write to " + path + " failed");
}

/// Reads either format, detecting binary input by its magic bytes.
/// A binary file must agree with `alphabet` on size when one is given.
inline Sequence read_sequence(const std::string& path, const std::optional<Alphabet>& alphabet) {
  const auto bytes = read_file(path);
  if (looks_binary(bytes)) {
    auto seq = decode_binary(bytes);
    if (alphabet && alphabet->size() != seq.alphabet_size)
      throw input_error("alphabet has " + std::to_string(alphabet->size()) +
                        " symbols but the binary data declares " +
                        std::to_string(seq.alphabet_size));
    return seq;
  }
  if (!alphabet) throw input_error("text data requires an alphabet");
  return decode_text(*alphabet, bytes);
}

}  // namespace vlmc
