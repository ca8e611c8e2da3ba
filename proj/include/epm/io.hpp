#pragma once

#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include "strings.hpp"

namespace epm {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::InputError, "cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !out.write(data.data(), static_cast<std::streamsize>(data.size())))
    throw Error(Errc::InputError, "cannot write " + path);
}

// Whitespace-separated non-negative integers, each one symbol.
inline Str parse_ints(const std::string& text) {
  std::istringstream in(text);
  Str out;
  long long v;
  while (in >> v) {
    if (v < 0 || static_cast<unsigned long long>(v) >= kReservedBase) throw Error(Errc::InputError, "symbol out of range");
    out.push_back(static_cast<Symbol>(v));
  }
  if (!in.eof()) throw Error(Errc::InputError, "malformed integer list");
  return out;
}

inline Str load_symbols(const std::string& path, bool ints) {
  std::string raw = read_file(path);
  return ints ? parse_ints(raw) : from_bytes(raw);
}

}  // namespace epm
