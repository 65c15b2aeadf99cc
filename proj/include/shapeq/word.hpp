#pragma once

// Free-group arithmetic: alphabets, freely reduced words, and endomorphisms
// given by the images of the generators.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "shapeq/error.hpp"

namespace shapeq {

/// Default cap on the length of any computed image word.
inline constexpr std::size_t kDefaultMaxWordLength = 1'000'000;

/// Ordered list of distinct, nonempty generator names. Copies share storage.
class Alphabet {
 public:
  Alphabet() : names_(std::make_shared<const std::vector<std::string>>()) {}

  explicit Alphabet(std::vector<std::string> names) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i].empty()) {
        throw InvalidArgument("generator names must be nonempty");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (names[i] == names[j]) {
          throw InvalidArgument("duplicate generator name '" + names[i] + "'");
        }
      }
    }
    names_ = std::make_shared<const std::vector<std::string>>(std::move(names));
  }

  /// Alphabet x1, ..., x<rank>.
  static Alphabet numbered(std::size_t rank, const std::string& prefix = "x") {
    std::vector<std::string> names;
    names.reserve(rank);
    for (std::size_t i = 1; i <= rank; ++i) {
      names.push_back(prefix + std::to_string(i));
    }
    return Alphabet(std::move(names));
  }

  std::size_t rank() const noexcept { return names_->size(); }
  const std::vector<std::string>& names() const noexcept { return *names_; }
  const std::string& name(std::size_t i) const { return names_->at(i); }

  /// Index of `name`, or rank() when absent.
  std::size_t find(std::string_view name) const {
    auto it = std::find(names_->begin(), names_->end(), name);
    return static_cast<std::size_t>(it - names_->begin());
  }

  friend bool operator==(const Alphabet& a, const Alphabet& b) {
    return a.names_ == b.names_ || *a.names_ == *b.names_;
  }

 private:
  std::shared_ptr<const std::vector<std::string>> names_;
};

/// A generator or its inverse.
struct Letter {
  std::uint32_t generator = 0;
  std::int8_t sign = 1;

  constexpr Letter inverse() const noexcept {
    return {generator, static_cast<std::int8_t>(-sign)};
  }
  constexpr bool cancels(const Letter& other) const noexcept {
    return generator == other.generator && sign == -other.sign;
  }
  friend constexpr bool operator==(const Letter&, const Letter&) = default;
  friend constexpr auto operator<=>(const Letter&, const Letter&) = default;
};

constexpr Letter gen(std::uint32_t g) noexcept { return {g, 1}; }
constexpr Letter inv(std::uint32_t g) noexcept { return {g, -1}; }

namespace detail {

// Appends `l` to an already reduced sequence, cancelling when possible.
inline void push_reduced(std::vector<Letter>& out, Letter l) {
  if (!out.empty() && out.back().cancels(l)) {
    out.pop_back();
  } else {
    out.push_back(l);
  }
}

}  // namespace detail

/// Element of the free group on an alphabet, stored freely reduced.
/// The empty word is the identity.
class Word {
 public:
  explicit Word(Alphabet alphabet) : alphabet_(std::move(alphabet)) {}

  /// Freely reduces `raw`. Throws GeneratorOutOfRange on a bad index.
  Word(Alphabet alphabet, std::span<const Letter> raw)
      : alphabet_(std::move(alphabet)) {
    letters_.reserve(raw.size());
    for (Letter l : raw) {
      check(l);
      detail::push_reduced(letters_, l);
    }
  }

  Word(Alphabet alphabet, std::initializer_list<Letter> raw)
      : Word(std::move(alphabet), std::span<const Letter>(raw.begin(), raw.size())) {}

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::span<const Letter> letters() const noexcept { return letters_; }
  std::size_t length() const noexcept { return letters_.size(); }
  bool is_identity() const noexcept { return letters_.empty(); }

  /// Same group element over the same alphabet.
  friend bool operator==(const Word& a, const Word& b) {
    return a.letters_ == b.letters_ && a.alphabet_ == b.alphabet_;
  }

  /// Space-separated exponent notation, e.g. "x y^2 x^-1"; "1" for identity.
  std::string to_string() const {
    if (letters_.empty()) return "1";
    std::string out;
    std::size_t i = 0;
    while (i < letters_.size()) {
      std::size_t j = i;
      while (j < letters_.size() && letters_[j] == letters_[i]) ++j;
      long exponent = static_cast<long>(j - i) * letters_[i].sign;
      if (!out.empty()) out += ' ';
      out += alphabet_.name(letters_[i].generator);
      if (exponent != 1) out += '^' + std::to_string(exponent);
      i = j;
    }
    return out;
  }

 private:
  friend class WordBuilder;

  void check(Letter l) const {
    if (l.generator >= alphabet_.rank()) {
      throw GeneratorOutOfRange(l.generator, alphabet_.rank());
    }
    if (l.sign != 1 && l.sign != -1) {
      throw InvalidArgument("letter sign must be +1 or -1");
    }
  }

  Alphabet alphabet_;
  std::vector<Letter> letters_;
};

/// Accumulates letters with on-the-fly reduction; letters are assumed valid.
class WordBuilder {
 public:
  explicit WordBuilder(Alphabet alphabet) : word_(std::move(alphabet)) {}

  void push(Letter l) { detail::push_reduced(word_.letters_, l); }

  void append(const Word& w) {
    for (Letter l : w.letters_) push(l);
  }
  void append_inverse(const Word& w) {
    for (auto it = w.letters_.rbegin(); it != w.letters_.rend(); ++it) {
      push(it->inverse());
    }
  }

  std::size_t length() const noexcept { return word_.letters_.size(); }
  Word build() && { return std::move(word_); }

 private:
  Word word_;
};

/// Single-generator word g_i.
inline Word generator_word(const Alphabet& alphabet, std::uint32_t i) {
  return Word(alphabet, {gen(i)});
}

inline Word reduce(const Alphabet& alphabet, std::span<const Letter> raw) {
  return Word(alphabet, raw);
}

inline Word multiply(const Word& u, const Word& v) {
  if (!(u.alphabet() == v.alphabet())) throw AlphabetMismatch();
  WordBuilder b(u.alphabet());
  b.append(u);
  b.append(v);
  return std::move(b).build();
}

inline Word invert(const Word& w) {
  WordBuilder b(w.alphabet());
  b.append_inverse(w);
  return std::move(b).build();
}

inline Word operator*(const Word& u, const Word& v) { return multiply(u, v); }

/// Endomorphism of a free group: g_i -> c * images[i] * c^-1, where c is the
/// conjugator (empty unless the basepoint is moved).
class FreeEndomorphism {
 public:
  FreeEndomorphism(Alphabet alphabet, std::vector<Word> images)
      : FreeEndomorphism(alphabet, std::move(images), Word(alphabet)) {}

  FreeEndomorphism(Alphabet alphabet, std::vector<Word> images, Word conjugator)
      : alphabet_(std::move(alphabet)),
        images_(std::move(images)),
        conjugator_(std::move(conjugator)) {
    if (images_.size() != alphabet_.rank()) {
      throw InvalidArgument("endomorphism needs one image per generator (got " +
                            std::to_string(images_.size()) + ", rank " +
                            std::to_string(alphabet_.rank()) + ")");
    }
    for (const Word& w : images_) {
      if (!(w.alphabet() == alphabet_)) throw AlphabetMismatch();
    }
    if (!(conjugator_.alphabet() == alphabet_)) throw AlphabetMismatch();
  }

  static FreeEndomorphism identity(const Alphabet& alphabet) {
    std::vector<Word> images;
    for (std::uint32_t i = 0; i < alphabet.rank(); ++i) {
      images.push_back(generator_word(alphabet, i));
    }
    return FreeEndomorphism(alphabet, std::move(images));
  }

  /// Every generator maps to the identity.
  static FreeEndomorphism trivial(const Alphabet& alphabet) {
    return FreeEndomorphism(alphabet, std::vector<Word>(alphabet.rank(), Word(alphabet)));
  }

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t rank() const noexcept { return alphabet_.rank(); }
  const std::vector<Word>& images() const noexcept { return images_; }
  const Word& conjugator() const noexcept { return conjugator_; }

  /// The same images with a different conjugator.
  FreeEndomorphism with_conjugator(Word c) const {
    return FreeEndomorphism(alphabet_, images_, std::move(c));
  }

  /// Image of generator i including the conjugation.
  Word effective_image(std::size_t i) const {
    WordBuilder b(alphabet_);
    b.append(conjugator_);
    b.append(images_.at(i));
    b.append_inverse(conjugator_);
    return std::move(b).build();
  }

  friend bool operator==(const FreeEndomorphism&, const FreeEndomorphism&) = default;

 private:
  Alphabet alphabet_;
  std::vector<Word> images_;
  Word conjugator_;
};

namespace detail {

inline Word apply_with_effective(const Alphabet& alphabet,
                                 const std::vector<Word>& effective, const Word& w,
                                 std::size_t max_length) {
  WordBuilder b(alphabet);
  for (Letter l : w.letters()) {
    const Word& image = effective[l.generator];
    if (l.sign > 0) {
      b.append(image);
    } else {
      b.append_inverse(image);
    }
  }
  if (b.length() > max_length) throw WordBlowup(b.length(), max_length);
  return std::move(b).build();
}

inline std::vector<Word> effective_images(const FreeEndomorphism& phi) {
  std::vector<Word> out;
  out.reserve(phi.rank());
  for (std::size_t i = 0; i < phi.rank(); ++i) out.push_back(phi.effective_image(i));
  return out;
}

}  // namespace detail

/// phi(w). Throws WordBlowup when the reduced result is longer than `max_length`.
inline Word apply(const FreeEndomorphism& phi, const Word& w,
                  std::size_t max_length = kDefaultMaxWordLength) {
  if (!(w.alphabet() == phi.alphabet())) throw AlphabetMismatch();
  return detail::apply_with_effective(phi.alphabet(), detail::effective_images(phi), w,
                                      max_length);
}

/// phi o psi, with both conjugators folded into the images. `max_length`
/// bounds the total length of all images.
inline FreeEndomorphism compose(const FreeEndomorphism& phi, const FreeEndomorphism& psi,
                                std::size_t max_length = kDefaultMaxWordLength) {
  if (!(phi.alphabet() == psi.alphabet())) throw AlphabetMismatch();
  const auto outer = detail::effective_images(phi);
  std::vector<Word> images;
  images.reserve(psi.rank());
  std::size_t total = 0;
  for (std::size_t i = 0; i < psi.rank(); ++i) {
    images.push_back(detail::apply_with_effective(phi.alphabet(), outer,
                                                  psi.effective_image(i), max_length));
    total += images.back().length();
    if (total > max_length) throw WordBlowup(total, max_length);
  }
  return FreeEndomorphism(phi.alphabet(), std::move(images));
}

/// N-fold composite of phi with itself (N >= 1).
inline FreeEndomorphism endo_power(const FreeEndomorphism& phi, std::size_t n,
                                   std::size_t max_length = kDefaultMaxWordLength) {
  if (n == 0) throw InvalidArgument("endo_power needs a positive exponent");
  std::vector<Word> images = detail::effective_images(phi);
  std::size_t total = 0;
  for (const Word& w : images) total += w.length();
  if (total > max_length) throw WordBlowup(total, max_length);
  const auto step = images;
  for (std::size_t k = 1; k < n; ++k) {
    total = 0;
    for (Word& w : images) {
      w = detail::apply_with_effective(phi.alphabet(), step, w, max_length);
      total += w.length();
    }
    if (total > max_length) throw WordBlowup(total, max_length);
  }
  return FreeEndomorphism(phi.alphabet(), std::move(images));
}

}  // namespace shapeq
