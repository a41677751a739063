//
// Copyright 2026 The Augbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef AUGBENCH_TEXT_HPP_
#define AUGBENCH_TEXT_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

// UTF-8 helpers. All span arithmetic in the library is in Unicode code
// points, not bytes; this is the one place that knows about encodings.

namespace augbench {

class encoding_error : public std::runtime_error {
 public:
  explicit encoding_error(const std::string& what) : std::runtime_error(what) {}
};

namespace utf8 {

/// Decodes UTF-8 into code points. Throws encoding_error on malformed input.
inline std::u32string decode(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const unsigned char b0 = static_cast<unsigned char>(s[i]);
    char32_t cp = 0;
    std::size_t len = 0;
    if (b0 < 0x80) {
      cp = b0;
      len = 1;
    } else if ((b0 & 0xE0) == 0xC0) {
      cp = b0 & 0x1F;
      len = 2;
    } else if ((b0 & 0xF0) == 0xE0) {
      cp = b0 & 0x0F;
      len = 3;
    } else if ((b0 & 0xF8) == 0xF0) {
      cp = b0 & 0x07;
      len = 4;
    } else {
      throw encoding_error("invalid UTF-8 lead byte at offset " +
                           std::to_string(i));
    }
    if (i + len > s.size()) {
      throw encoding_error("truncated UTF-8 sequence at offset " +
                           std::to_string(i));
    }
    for (std::size_t k = 1; k < len; ++k) {
      const unsigned char b = static_cast<unsigned char>(s[i + k]);
      if ((b & 0xC0) != 0x80) {
        throw encoding_error("invalid UTF-8 continuation byte at offset " +
                             std::to_string(i + k));
      }
      cp = (cp << 6) | (b & 0x3F);
    }
    // Reject overlong encodings and surrogates.
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
        (len == 4 && cp < 0x10000) || (cp >= 0xD800 && cp <= 0xDFFF) ||
        cp > 0x10FFFF) {
      throw encoding_error("invalid UTF-8 code point at offset " +
                           std::to_string(i));
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

inline void append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

inline std::string encode(std::u32string_view cps) {
  std::string out;
  out.reserve(cps.size());
  for (char32_t cp : cps) append(out, cp);
  return out;
}

inline std::string encode(char32_t cp) {
  std::string out;
  append(out, cp);
  return out;
}

/// Number of code points in a UTF-8 string.
inline std::size_t length(std::string_view s) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < s.size();) {
    const unsigned char b = static_cast<unsigned char>(s[i]);
    if (b < 0x80) {
      i += 1;
    } else if ((b & 0xE0) == 0xC0) {
      i += 2;
    } else if ((b & 0xF0) == 0xE0) {
      i += 3;
    } else if ((b & 0xF8) == 0xF0) {
      i += 4;
    } else {
      throw encoding_error("invalid UTF-8 lead byte at offset " +
                           std::to_string(i));
    }
    ++n;
  }
  return n;
}

/// Substring by code-point range [start, end).
inline std::string substr(std::string_view s, std::size_t start,
                          std::size_t end) {
  const std::u32string cps = decode(s);
  if (start > end || end > cps.size()) {
    throw std::out_of_range("utf8::substr range out of bounds");
  }
  return encode(std::u32string_view(cps).substr(start, end - start));
}

}  // namespace utf8

namespace unicode {

// Simple one-to-one case mapping for Latin scripts (ASCII, Latin-1
// Supplement, Latin Extended-A). Covers Danish and the gold data this
// library targets; code points outside these blocks map to themselves.
inline char32_t to_lower(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return cp + 32;
  // Latin-1 Supplement: À-Þ lowercase to à-þ, excluding ×.
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 32;
  // Latin Extended-A: mostly even/odd upper/lower pairs.
  if (cp >= 0x100 && cp <= 0x177 && (cp % 2) == 0) return cp + 1;
  if (cp == 0x178) return 0xFF;  // Ÿ -> ÿ
  if (cp >= 0x179 && cp <= 0x17D && (cp % 2) == 1) return cp + 1;
  return cp;
}

inline char32_t to_upper(char32_t cp) {
  if (cp >= U'a' && cp <= U'z') return cp - 32;
  if (cp >= 0xE0 && cp <= 0xFE && cp != 0xF7) return cp - 32;
  if (cp >= 0x101 && cp <= 0x178 && (cp % 2) == 1) return cp - 1;
  if (cp == 0xFF) return 0x178;
  if (cp >= 0x17A && cp <= 0x17E && (cp % 2) == 0) return cp - 1;
  return cp;
}

inline bool is_upper(char32_t cp) { return to_lower(cp) != cp; }
inline bool is_lower(char32_t cp) { return to_upper(cp) != cp; }
inline bool is_letter(char32_t cp) { return is_upper(cp) || is_lower(cp); }

inline std::string to_lower(std::string_view s) {
  const std::u32string cps = utf8::decode(s);
  std::string out;
  out.reserve(s.size());
  for (char32_t cp : cps) utf8::append(out, to_lower(cp));
  return out;
}

/// True if the first code point of a non-empty string is uppercase.
inline bool starts_uppercase(std::string_view s) {
  if (s.empty()) return false;
  return is_upper(utf8::decode(s.substr(0, std::min<std::size_t>(4, s.size())))
                      .front());
}

}  // namespace unicode

namespace strings {

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      parts.emplace_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return parts;
}

inline std::string strip(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r'))
    --e;
  return std::string(s.substr(b, e - b));
}

inline bool starts_with(std::string_view s, std::string_view prefix) {
  return s.size() >= prefix.size() && s.substr(0, prefix.size()) == prefix;
}

inline bool contains_whitespace(std::string_view s) {
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') return true;
  }
  return false;
}

}  // namespace strings

}  // namespace augbench

#endif  // AUGBENCH_TEXT_HPP_
