#pragma once

// Decision procedure for stabilization of an endomorphism of a finitely
// generated free group, and what it implies for the attractor.
//
// With F_n = im phi^n and r_n = rank F_n, the ranks drop strictly until the
// first n with r_n = r_(n+1); from there phi is injective on F_n, and the
// chain stabilizes iff F_n = F_(n+1), i.e. iff every phi^n(g_i) lies in
// F_(n+1). Both steps are decided with Stallings graphs.

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "shapeq/stallings.hpp"
#include "shapeq/word.hpp"

namespace shapeq {

struct StabilizationOptions {
  std::size_t max_word_length = kDefaultMaxWordLength;
  /// The trapping region is a handlebody: report the bouquet-of-circles shape.
  bool handlebody = false;
};

struct Witness {
  std::size_t generator = 0;
  Word word;  // phi^n(g_generator), not in F_(n+1)
};

struct StabilizationReport {
  std::vector<std::size_t> ranks;  // r_0 > r_1 > ... > r_n = r_(n+1)
  std::size_t rank_equal_index = 0;
  bool stabilizes = false;
  std::optional<std::size_t> stable_rank;
  std::optional<Witness> witness;
  bool shape_equivalence = false;
  /// Which phase settled the verdict, for auditing.
  std::string criterion;
  std::string conclusion;
};

namespace detail {

/// Generator images under phi^n for n = 0, 1, ..., with the rank of each
/// image subgroup, stopping one step after the first rank repeat.
struct ImageIterates {
  std::vector<std::vector<Word>> images;
  std::vector<SubgroupHandle> subgroups;
  std::vector<std::size_t> ranks;
};

inline ImageIterates iterate_until_rank_repeat(const FreeEndomorphism& phi,
                                               std::size_t max_length) {
  const Alphabet& alphabet = phi.alphabet();
  const auto effective = effective_images(phi);
  ImageIterates it;

  std::vector<Word> current;
  for (std::uint32_t i = 0; i < phi.rank(); ++i) current.push_back(generator_word(alphabet, i));
  it.subgroups.push_back(subgroup_from_words(alphabet, current));
  it.ranks.push_back(phi.rank());
  it.images.push_back(current);

  while (it.ranks.size() < 2 || it.ranks[it.ranks.size() - 1] != it.ranks[it.ranks.size() - 2]) {
    std::vector<Word> next;
    next.reserve(current.size());
    std::size_t total = 0;
    for (const Word& w : current) {
      next.push_back(apply_with_effective(alphabet, effective, w, max_length));
      total += next.back().length();
      if (total > max_length) throw WordBlowup(total, max_length);
    }
    it.subgroups.push_back(subgroup_from_words(alphabet, next));
    it.ranks.push_back(rank(it.subgroups.back()));
    it.images.push_back(next);
    current = std::move(next);
    if (it.ranks.back() > it.ranks[it.ranks.size() - 2] || it.ranks.size() > phi.rank() + 2) {
      throw Error("image rank sequence is not strictly decreasing; folding fault");
    }
  }
  return it;
}

inline std::string join_ranks(const std::vector<std::size_t>& ranks) {
  std::string s;
  for (std::size_t r : ranks) {
    if (!s.empty()) s += ", ";
    s += std::to_string(r);
  }
  return "(" + s + ")";
}

inline std::string circumferences(std::size_t r) {
  return std::to_string(r) + (r == 1 ? " circumference" : " circumferences");
}

}  // namespace detail

/// r_0, r_1, ..., ending at the first repeated value.
inline std::vector<std::size_t> image_rank_sequence(
    const FreeEndomorphism& phi, std::size_t max_length = kDefaultMaxWordLength) {
  return detail::iterate_until_rank_repeat(phi, max_length).ranks;
}

inline StabilizationReport decide_stabilization(const FreeEndomorphism& phi,
                                                const StabilizationOptions& options = {}) {
  StabilizationReport report;
  auto it = detail::iterate_until_rank_repeat(phi, options.max_word_length);
  report.ranks = it.ranks;
  const std::size_t n = it.ranks.size() - 2;
  report.rank_equal_index = n;

  const SubgroupHandle& next = it.subgroups[n + 1];
  for (std::size_t i = 0; i < phi.rank(); ++i) {
    if (!contains(next, it.images[n][i])) {
      report.witness = Witness{i, it.images[n][i]};
      break;
    }
  }
  report.stabilizes = !report.witness.has_value();
  report.shape_equivalence = report.stabilizes;

  const std::string index = std::to_string(n);
  const std::string next_index = std::to_string(n + 1);
  report.criterion = "rank phase: ranks " + detail::join_ranks(report.ranks) +
                     " first repeat at n = " + index + "; membership phase: ";
  if (report.stabilizes) {
    const std::size_t r = it.ranks[n];
    report.stable_rank = r;
    report.criterion += "every Φ^" + index + "(g_i) lies in im Φ^" + next_index;
    report.conclusion = "Φ stabilizes (im Φ^" + index + " = im Φ^" + next_index +
                        "), so the inclusion of K into its basin of attraction is a shape "
                        "equivalence. The first shape group of K is free of rank " +
                        std::to_string(r) + ".";
    if (options.handlebody) {
      report.conclusion += " The trapping region is a handlebody, so K has the shape of a "
                           "bouquet of " + detail::circumferences(r) + ".";
    } else {
      report.conclusion += " K has the shape of a wedge of " + detail::circumferences(r) +
                           " and s 2-spheres; s = dim Ȟ₂(K;ℤ₂) needs homological input "
                           "and is not computed from the group data.";
    }
  } else {
    const Witness& w = *report.witness;
    const std::string name = phi.alphabet().name(w.generator);
    report.criterion += "Φ^" + index + "(" + name + ") = " + w.word.to_string() +
                        " is not in im Φ^" + next_index;
    report.conclusion = "Φ does not stabilize: Φ^" + index + "(" + name + ") = " +
                        w.word.to_string() + " does not belong to im Φ^" + next_index +
                        ". The inclusion of K into its basin of attraction is not a shape "
                        "equivalence.";
  }
  return report;
}

/// rank im phi = rank of the alphabet, which for free groups of finite rank
/// is equivalent to injectivity of phi.
inline bool injectivity_equivalent(const FreeEndomorphism& phi,
                                   std::size_t max_length = kDefaultMaxWordLength) {
  std::vector<Word> images;
  for (std::size_t i = 0; i < phi.rank(); ++i) images.push_back(phi.effective_image(i));
  std::size_t total = 0;
  for (const Word& w : images) total += w.length();
  if (total > max_length) throw WordBlowup(total, max_length);
  return rank(subgroup_from_words(phi.alphabet(), std::move(images))) == phi.rank();
}

/// How f^n permutes the r components of a trapping region (0-based).
class ComponentPermutation {
 public:
  ComponentPermutation(std::vector<std::size_t> mapping, std::uint64_t entry_power)
      : mapping_(std::move(mapping)), entry_power_(entry_power) {
    if (mapping_.empty()) throw InvalidArgument("permutation needs at least one component");
    if (entry_power_ == 0) throw InvalidArgument("entry power must be positive");
    std::vector<char> hit(mapping_.size(), 0);
    for (std::size_t j : mapping_) {
      if (j >= mapping_.size() || hit[j]) throw InvalidArgument("mapping is not a bijection");
      hit[j] = 1;
    }
  }

  std::size_t size() const noexcept { return mapping_.size(); }
  const std::vector<std::size_t>& mapping() const noexcept { return mapping_; }
  std::uint64_t entry_power() const noexcept { return entry_power_; }

  /// lcm of the cycle lengths.
  std::uint64_t order() const {
    std::vector<char> seen(mapping_.size(), 0);
    std::uint64_t order = 1;
    for (std::size_t start = 0; start < mapping_.size(); ++start) {
      if (seen[start]) continue;
      std::uint64_t len = 0;
      for (std::size_t v = start; !seen[v]; v = mapping_[v]) {
        seen[v] = 1;
        ++len;
      }
      order = std::lcm(order, len);
    }
    return order;
  }

 private:
  std::vector<std::size_t> mapping_;
  std::uint64_t entry_power_;
};

/// Smallest multiple N of the entry power n such that f^N maps every
/// component into itself: n times the order of the permutation.
inline std::uint64_t component_power(const ComponentPermutation& perm) {
  std::uint64_t result = 0;
  if (__builtin_mul_overflow(perm.entry_power(), perm.order(), &result)) {
    throw InvalidArgument("component power overflows 64 bits");
  }
  return result;
}

}  // namespace shapeq
