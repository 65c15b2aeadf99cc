#pragma once

// Text formats: problem files (an endomorphism given by generator images)
// and matrix files.
//
// Problem file:
//   generators: x y
//   x -> x y^2
//   y -> x^2 y^3
//   conjugator: y        (optional)
//   flags: handlebody    (optional; handlebody and/or surface)
//
// Matrix file:
//   ring: Z              (or GF2)
//   dim: 3
//   0 0 0
//   0 0 1
//   1 0 0
// Column j is the image of generator j. `#` starts a comment in both.

#include <gmpxx.h>

#include <cctype>
#include <charconv>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "shapeq/abelian.hpp"
#include "shapeq/error.hpp"
#include "shapeq/word.hpp"

namespace shapeq {

struct ProblemFile {
  Alphabet alphabet;
  std::vector<Word> images;
  Word conjugator;
  bool handlebody = false;
  bool surface = false;

  FreeEndomorphism endomorphism() const {
    return FreeEndomorphism(alphabet, images, conjugator);
  }

  friend bool operator==(const ProblemFile&, const ProblemFile&) = default;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::string_view strip_comment(std::string_view s) {
  auto hash = s.find('#');
  return hash == std::string_view::npos ? s : s.substr(0, hash);
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto c0 = static_cast<unsigned char>(s[0]);
  if (!(std::isalpha(c0) || c0 == '_')) return false;
  for (char c : s) {
    auto u = static_cast<unsigned char>(c);
    if (!(std::isalnum(u) || u == '_')) return false;
  }
  return true;
}

/// Splits "key: value" when the line starts with `key:`.
inline std::optional<std::string_view> keyed(std::string_view line, std::string_view key) {
  if (line.size() <= key.size() || line.substr(0, key.size()) != key ||
      line[key.size()] != ':') {
    return std::nullopt;
  }
  return trim(line.substr(key.size() + 1));
}

inline std::vector<std::pair<std::size_t, std::string_view>> content_lines(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string_view>> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = trim(strip_comment(line));
    if (!line.empty()) out.emplace_back(line_no, line);
  }
  return out;
}

}  // namespace detail

/// Parses whitespace-separated tokens `name`, `name^k` (k a nonzero integer)
/// or the lone literal `1`.
inline Word parse_word(const Alphabet& alphabet, std::string_view text, std::size_t line = 0,
                       std::size_t max_length = kDefaultMaxWordLength) {
  auto tokens = detail::split_ws(text);
  if (tokens.empty()) throw ParseError(line, "empty word (write 1 for the identity)");
  if (tokens.size() == 1 && tokens[0] == "1") return Word(alphabet);
  std::vector<Letter> letters;
  for (std::string_view tok : tokens) {
    if (tok == "1") throw ParseError(line, "the identity 1 must appear alone");
    std::string_view name = tok;
    long long exponent = 1;
    if (auto caret = tok.find('^'); caret != std::string_view::npos) {
      name = tok.substr(0, caret);
      std::string_view exp = tok.substr(caret + 1);
      auto [ptr, ec] = std::from_chars(exp.data(), exp.data() + exp.size(), exponent);
      if (exp.empty() || ec != std::errc() || ptr != exp.data() + exp.size() || exponent == 0) {
        throw ParseError(line, "malformed exponent in '" + std::string(tok) + "'");
      }
    }
    std::size_t g = alphabet.find(name);
    if (g == alphabet.rank()) {
      throw ParseError(line, "unknown generator '" + std::string(name) + "'");
    }
    const unsigned long long count =
        exponent < 0 ? 0ULL - static_cast<unsigned long long>(exponent)
                     : static_cast<unsigned long long>(exponent);
    if (count > max_length || letters.size() + count > max_length) {
      throw ParseError(line, "word longer than the maximum of " + std::to_string(max_length));
    }
    const Letter l{static_cast<std::uint32_t>(g), static_cast<std::int8_t>(exponent < 0 ? -1 : 1)};
    letters.insert(letters.end(), count, l);
  }
  return Word(alphabet, letters);
}

inline ProblemFile parse_problem(std::string_view text) {
  auto lines = detail::content_lines(text);
  if (lines.empty() || !detail::keyed(lines[0].second, "generators")) {
    throw ParseError(lines.empty() ? 0 : lines[0].first,
                     "problem file must start with 'generators:'");
  }
  const std::size_t gen_line = lines[0].first;
  std::vector<std::string> names;
  for (auto tok : detail::split_ws(*detail::keyed(lines[0].second, "generators"))) {
    if (!detail::is_identifier(tok)) {
      throw ParseError(gen_line, "invalid generator name '" + std::string(tok) + "'");
    }
    names.emplace_back(tok);
  }
  Alphabet alphabet = [&] {
    try {
      return Alphabet(std::move(names));
    } catch (const InvalidArgument& e) {
      throw ParseError(gen_line, e.what());
    }
  }();

  ProblemFile problem{alphabet, {}, Word(alphabet)};
  std::vector<std::optional<Word>> images(alphabet.rank());
  bool have_conjugator = false;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    auto [no, line] = lines[k];
    if (auto rest = detail::keyed(line, "conjugator")) {
      if (have_conjugator) throw ParseError(no, "duplicate conjugator line");
      problem.conjugator = parse_word(alphabet, *rest, no);
      have_conjugator = true;
      continue;
    }
    if (auto rest = detail::keyed(line, "flags")) {
      for (auto flag : detail::split_ws(*rest)) {
        if (flag == "handlebody") {
          problem.handlebody = true;
        } else if (flag == "surface") {
          problem.surface = true;
        } else {
          throw ParseError(no, "unknown flag '" + std::string(flag) + "'");
        }
      }
      continue;
    }
    if (detail::keyed(line, "generators")) throw ParseError(no, "duplicate generators line");
    auto arrow = line.find("->");
    if (arrow == std::string_view::npos) {
      throw ParseError(no, "expected 'NAME -> WORD', got '" + std::string(line) + "'");
    }
    std::string_view name = detail::trim(line.substr(0, arrow));
    std::size_t g = alphabet.find(name);
    if (g == alphabet.rank()) {
      throw ParseError(no, "unknown generator '" + std::string(name) + "'");
    }
    if (images[g]) throw ParseError(no, "duplicate image line for '" + std::string(name) + "'");
    images[g] = parse_word(alphabet, line.substr(arrow + 2), no);
  }
  for (std::size_t g = 0; g < images.size(); ++g) {
    if (!images[g]) throw ParseError(gen_line, "missing image line for '" + alphabet.name(g) + "'");
    problem.images.push_back(std::move(*images[g]));
  }
  return problem;
}

inline std::string serialize_problem(const ProblemFile& p) {
  std::string out = "generators:";
  for (const auto& n : p.alphabet.names()) out += ' ' + n;
  out += '\n';
  for (std::size_t g = 0; g < p.images.size(); ++g) {
    out += p.alphabet.name(g) + " -> " + p.images[g].to_string() + '\n';
  }
  if (!p.conjugator.is_identity()) out += "conjugator: " + p.conjugator.to_string() + '\n';
  if (p.handlebody || p.surface) {
    out += "flags:";
    if (p.handlebody) out += " handlebody";
    if (p.surface) out += " surface";
    out += '\n';
  }
  return out;
}

inline Matrix parse_matrix(std::string_view text) {
  auto lines = detail::content_lines(text);
  if (lines.size() < 2) throw ParseError(0, "matrix file needs 'ring:' and 'dim:' lines");
  auto ring_text = detail::keyed(lines[0].second, "ring");
  if (!ring_text) throw ParseError(lines[0].first, "expected 'ring: Z' or 'ring: GF2'");
  Ring ring;
  if (*ring_text == "Z") {
    ring = Ring::Z;
  } else if (*ring_text == "GF2") {
    ring = Ring::GF2;
  } else {
    throw ParseError(lines[0].first, "unknown ring '" + std::string(*ring_text) + "'");
  }
  auto dim_text = detail::keyed(lines[1].second, "dim");
  std::size_t dim = 0;
  if (!dim_text) throw ParseError(lines[1].first, "expected 'dim: N'");
  auto [ptr, ec] = std::from_chars(dim_text->data(), dim_text->data() + dim_text->size(), dim);
  if (ec != std::errc() || ptr != dim_text->data() + dim_text->size() || dim == 0) {
    throw ParseError(lines[1].first, "dimension must be a positive integer");
  }
  if (lines.size() != dim + 2) {
    throw ParseError(lines.back().first, "expected " + std::to_string(dim) + " matrix rows, got " +
                                             std::to_string(lines.size() - 2));
  }
  std::vector<std::vector<mpz_class>> rows;
  for (std::size_t i = 0; i < dim; ++i) {
    auto [no, line] = lines[i + 2];
    auto toks = detail::split_ws(line);
    if (toks.size() != dim) {
      throw ParseError(no, "expected " + std::to_string(dim) + " entries, got " +
                               std::to_string(toks.size()));
    }
    std::vector<mpz_class> row;
    for (auto tok : toks) {
      mpz_class v;
      std::string s(tok);
      if (s.front() == '+') s.erase(0, 1);
      if (s.empty() || v.set_str(s, 10) != 0) {
        throw ParseError(no, "malformed integer '" + std::string(tok) + "'");
      }
      if (ring == Ring::GF2 && v != 0 && v != 1) {
        throw ParseError(no, "GF2 entries must be 0 or 1");
      }
      row.push_back(std::move(v));
    }
    rows.push_back(std::move(row));
  }
  return Matrix(ring, rows);
}

inline std::string serialize_matrix(const Matrix& m) {
  return std::string("ring: ") + ring_name(m.ring()) + "\ndim: " + std::to_string(m.dim()) +
         "\n" + m.to_string();
}

}  // namespace shapeq
