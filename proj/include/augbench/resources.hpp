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

#ifndef AUGBENCH_RESOURCES_HPP_
#define AUGBENCH_RESOURCES_HPP_

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "augbench/text.hpp"

// Data files the augmenters depend on: name lexicons and keyboard
// layouts. Loaded values are immutable and freely shareable.

namespace augbench {

class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

enum class Gender { F, M, U };

enum class NameMode { Danish, Muslim, Female, Male };

inline std::string to_string(NameMode m) {
  switch (m) {
    case NameMode::Danish:
      return "danish";
    case NameMode::Muslim:
      return "muslim";
    case NameMode::Female:
      return "female";
    case NameMode::Male:
      return "male";
  }
  return "?";
}

inline std::optional<NameMode> name_mode_from(std::string_view s) {
  if (s == "danish") return NameMode::Danish;
  if (s == "muslim") return NameMode::Muslim;
  if (s == "female") return NameMode::Female;
  if (s == "male") return NameMode::Male;
  return std::nullopt;
}

/// First- and last-name pools per mode. The female/male modes are the
/// gender-F/M subsets of the Danish first names (gender-U names are only
/// in the danish mode); last names are shared with the danish pool.
/// Duplicate rows are kept, which weights sampling by frequency.
class NameLexicon {
 public:
  struct FirstName {
    std::string name;
    Gender gender = Gender::U;
  };

  void add_first(std::string_view mode, FirstName name) {
    first_[std::string(mode)].push_back(std::move(name));
  }
  void add_last(std::string_view mode, std::string name) {
    last_[std::string(mode)].push_back(std::move(name));
  }

  /// First-name pool for a sampling mode; empty if unavailable.
  std::vector<std::string> first_names(NameMode mode) const {
    std::vector<std::string> out;
    switch (mode) {
      case NameMode::Danish:
        for (const auto& n : pool(first_, "danish")) out.push_back(n.name);
        break;
      case NameMode::Muslim:
        for (const auto& n : pool(first_, "muslim")) out.push_back(n.name);
        break;
      case NameMode::Female:
        for (const auto& n : pool(first_, "danish"))
          if (n.gender == Gender::F) out.push_back(n.name);
        break;
      case NameMode::Male:
        for (const auto& n : pool(first_, "danish"))
          if (n.gender == Gender::M) out.push_back(n.name);
        break;
    }
    return out;
  }

  std::vector<std::string> last_names(NameMode mode) const {
    const char* key = mode == NameMode::Muslim ? "muslim" : "danish";
    const auto it = last_.find(key);
    return it == last_.end() ? std::vector<std::string>{} : it->second;
  }

 private:
  template <typename M>
  static const typename M::mapped_type& pool(const M& m,
                                             const std::string& key) {
    static const typename M::mapped_type empty;
    const auto it = m.find(key);
    return it == m.end() ? empty : it->second;
  }

  std::map<std::string, std::vector<FirstName>> first_;
  std::map<std::string, std::vector<std::string>> last_;
};

/// Loads a name lexicon from UTF-8 TSV with columns
/// kind(first|last) \t mode(danish|muslim) \t name \t gender(F|M|U|-).
inline NameLexicon load_name_lexicon(std::istream& in,
                                     const std::string& origin = "lexicon") {
  NameLexicon lex;
  std::string line;
  int line_no = 0;
  bool any = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto cols = strings::split(line, '\t');
    if (cols.size() != 4) {
      throw config_error(origin + " row " + std::to_string(line_no) +
                         ": expected 4 tab-separated columns");
    }
    const std::string& kind = cols[0];
    const std::string& mode = cols[1];
    const std::string& name = cols[2];
    const std::string& gender = cols[3];
    if (mode != "danish" && mode != "muslim") {
      throw config_error(origin + " row " + std::to_string(line_no) +
                         ": unknown mode '" + mode + "'");
    }
    if (name.empty() || strings::contains_whitespace(name)) {
      throw config_error(origin + " row " + std::to_string(line_no) +
                         ": names must be non-empty and whitespace-free");
    }
    if (kind == "first") {
      Gender g = Gender::U;
      if (gender == "F") {
        g = Gender::F;
      } else if (gender == "M") {
        g = Gender::M;
      } else if (gender != "U" && gender != "-") {
        throw config_error(origin + " row " + std::to_string(line_no) +
                           ": gender must be F, M, U or -");
      }
      lex.add_first(mode, NameLexicon::FirstName{name, g});
    } else if (kind == "last") {
      lex.add_last(mode, name);
    } else {
      throw config_error(origin + " row " + std::to_string(line_no) +
                         ": kind must be 'first' or 'last'");
    }
    any = true;
  }
  if (!any) throw config_error(origin + ": no name rows found");
  for (const char* mode : {"danish", "muslim"}) {
    const NameMode m = *name_mode_from(mode);
    if (lex.first_names(m).empty()) {
      throw config_error(origin + ": no first names for mode '" +
                         std::string(mode) + "'");
    }
    if (lex.last_names(m).empty()) {
      throw config_error(origin + ": no last names for mode '" +
                         std::string(mode) + "'");
    }
  }
  return lex;
}

inline NameLexicon load_name_lexicon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open name lexicon: " + path);
  return load_name_lexicon(in, path);
}

// ---------------------------------------------------------------------------

/// Neighbor sets over lowercase characters. The relation need not be
/// symmetric in general, though the built-in Danish layout's is.
class KeyboardLayout {
 public:
  explicit KeyboardLayout(std::string layout_id = "custom")
      : layout_id_(std::move(layout_id)) {}

  const std::string& layout_id() const { return layout_id_; }

  void set_neighbors(char32_t key, std::vector<char32_t> neighbors) {
    if (neighbors.empty()) {
      throw config_error("layout " + layout_id_ + ": empty neighbor list");
    }
    if (std::find(neighbors.begin(), neighbors.end(), key) !=
        neighbors.end()) {
      throw config_error("layout " + layout_id_ +
                         ": a character cannot be its own neighbor");
    }
    neighbors_[key] = std::move(neighbors);
  }

  bool covers(char32_t key) const { return neighbors_.count(key) != 0; }

  /// Neighbor list for a covered key; empty span for uncovered keys.
  const std::vector<char32_t>& neighbors(char32_t key) const {
    static const std::vector<char32_t> none;
    const auto it = neighbors_.find(key);
    return it == neighbors_.end() ? none : it->second;
  }

  const std::map<char32_t, std::vector<char32_t>>& all() const {
    return neighbors_;
  }

 private:
  std::string layout_id_;
  std::map<char32_t, std::vector<char32_t>> neighbors_;
};

/// The built-in Danish QWERTY layout. Adjacency is derived from the
/// physical key grid: letter rows are staggered by 0.25 / 0.75 key
/// widths, two keys are neighbors when they are adjacent in the same
/// row or horizontally within one key width in adjacent rows. Covers
/// a-z plus æ, ø, å; the derived relation is symmetric.
inline const KeyboardLayout& danish_qwerty() {
  static const KeyboardLayout layout = [] {
    const std::vector<std::u32string> rows = {U"qwertyuiopå", U"asdfghjklæø",
                                              U"zxcvbnm"};
    const std::vector<double> offsets = {0.0, 0.25, 0.75};
    KeyboardLayout l("danish-qwerty");
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (std::size_t c = 0; c < rows[r].size(); ++c) {
        std::vector<char32_t> neighbors;
        const double x = offsets[r] + static_cast<double>(c);
        for (std::size_t r2 = 0; r2 < rows.size(); ++r2) {
          for (std::size_t c2 = 0; c2 < rows[r2].size(); ++c2) {
            if (r2 == r && c2 == c) continue;
            const double x2 = offsets[r2] + static_cast<double>(c2);
            const bool adjacent =
                (r2 == r && std::abs(x2 - x) <= 1.0) ||
                (std::max(r2, r) - std::min(r2, r) == 1 &&
                 std::abs(x2 - x) < 1.0);
            if (adjacent) neighbors.push_back(rows[r2][c2]);
          }
        }
        l.set_neighbors(rows[r][c], std::move(neighbors));
      }
    }
    return l;
  }();
  return layout;
}

/// Loads a layout from UTF-8 TSV: char \t neighbor1,neighbor2,...
inline KeyboardLayout load_keyboard_layout(std::istream& in,
                                           const std::string& origin =
                                               "layout") {
  KeyboardLayout layout(origin);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto cols = strings::split(line, '\t');
    if (cols.size() != 2) {
      throw config_error(origin + " row " + std::to_string(line_no) +
                         ": expected 2 tab-separated columns");
    }
    const std::u32string key = utf8::decode(cols[0]);
    if (key.size() != 1) {
      throw config_error(origin + " row " + std::to_string(line_no) +
                         ": key must be a single character");
    }
    std::vector<char32_t> neighbors;
    for (const std::string& part : strings::split(cols[1], ',')) {
      const std::u32string cp = utf8::decode(part);
      if (cp.size() != 1) {
        throw config_error(origin + " row " + std::to_string(line_no) +
                           ": neighbors must be single characters");
      }
      neighbors.push_back(cp[0]);
    }
    if (neighbors.empty()) {
      throw config_error(origin + " row " + std::to_string(line_no) +
                         ": empty neighbor list");
    }
    if (std::find(neighbors.begin(), neighbors.end(), key[0]) !=
        neighbors.end()) {
      throw config_error(origin + " row " + std::to_string(line_no) +
                         ": a character cannot be its own neighbor");
    }
    layout.set_neighbors(key[0], std::move(neighbors));
  }
  if (layout.all().empty()) {
    throw config_error(origin + ": no layout rows found");
  }
  return layout;
}

inline KeyboardLayout load_keyboard_layout(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open keyboard layout: " + path);
  return load_keyboard_layout(in, path);
}

/// Writes a layout in the TSV file format (used to ship the built-in).
inline std::string serialize_keyboard_layout(const KeyboardLayout& layout) {
  std::string out;
  for (const auto& [key, neighbors] : layout.all()) {
    out += utf8::encode(key);
    out += '\t';
    for (std::size_t i = 0; i < neighbors.size(); ++i) {
      if (i != 0) out += ',';
      out += utf8::encode(neighbors[i]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace augbench

#endif  // AUGBENCH_RESOURCES_HPP_
