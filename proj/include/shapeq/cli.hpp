#pragma once

// Command implementations behind the `shapeq` tool. Each command takes the
// input text and an output stream and returns the process exit code:
// 0 = shape equivalence / stabilizes, 1 = not, 2 = error or inconclusive.

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "shapeq/abelian.hpp"
#include "shapeq/problem.hpp"
#include "shapeq/stabilize.hpp"
#include "shapeq/stallings.hpp"

namespace shapeq::cli {

inline constexpr int kExitYes = 0;
inline constexpr int kExitNo = 1;
inline constexpr int kExitError = 2;

struct CheckOptions {
  bool json = false;
  bool handlebody = false;
  std::size_t max_word_length = kDefaultMaxWordLength;
};

/// The machine-readable verdict: exactly these seven fields.
inline nlohmann::json verdict_json(const StabilizationReport& r) {
  nlohmann::json j;
  j["stabilizes"] = r.stabilizes;
  j["shape_equivalence"] = r.shape_equivalence;
  j["ranks"] = r.ranks;
  j["stabilization_index"] =
      r.stabilizes ? nlohmann::json(r.rank_equal_index) : nlohmann::json(nullptr);
  j["stable_rank"] = r.stable_rank ? nlohmann::json(*r.stable_rank) : nlohmann::json(nullptr);
  j["witness"] = r.witness ? nlohmann::json(r.witness->word.to_string()) : nlohmann::json(nullptr);
  j["conclusion"] = r.conclusion;
  return j;
}

inline std::string ranks_text(const std::vector<std::size_t>& ranks) {
  std::string s;
  for (std::size_t r : ranks) s += (s.empty() ? "" : " ") + std::to_string(r);
  return s;
}

inline int cmd_check(std::string_view text, const CheckOptions& options, std::ostream& out,
                     std::ostream& err) {
  try {
    ProblemFile problem = parse_problem(text);
    StabilizationOptions so;
    so.max_word_length = options.max_word_length;
    so.handlebody = options.handlebody || problem.handlebody;
    StabilizationReport report = decide_stabilization(problem.endomorphism(), so);
    if (options.json) {
      out << verdict_json(report).dump(2) << '\n';
    } else {
      out << "ranks: " << ranks_text(report.ranks) << '\n'
          << "first rank repeat: n = " << report.rank_equal_index << '\n'
          << "criterion: " << report.criterion << '\n';
      if (report.stable_rank) out << "stable rank: " << *report.stable_rank << '\n';
      if (report.witness) {
        out << "witness: " << problem.alphabet.name(report.witness->generator) << " -> "
            << report.witness->word.to_string() << '\n';
      }
      out << "verdict: "
          << (report.shape_equivalence ? "shape equivalence" : "not a shape equivalence") << '\n'
          << report.conclusion << '\n';
    }
    return report.shape_equivalence ? kExitYes : kExitNo;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

struct SubgroupOptions {
  /// Work with im Φ^power; 0 means the whole group.
  std::size_t power = 1;
  std::size_t max_word_length = kDefaultMaxWordLength;
};

namespace detail {

inline SubgroupHandle image_subgroup(const ProblemFile& problem, const SubgroupOptions& options) {
  const Alphabet& a = problem.alphabet;
  std::vector<Word> gens;
  if (options.power == 0) {
    for (std::uint32_t i = 0; i < a.rank(); ++i) gens.push_back(generator_word(a, i));
  } else {
    gens = endo_power(problem.endomorphism(), options.power, options.max_word_length).images();
  }
  return subgroup_from_words(a, std::move(gens));
}

}  // namespace detail

/// Prints "true"/"false"; exit 0 for a member, 1 otherwise.
inline int cmd_membership(std::string_view text, std::string_view word,
                          const SubgroupOptions& options, std::ostream& out, std::ostream& err) {
  try {
    ProblemFile problem = parse_problem(text);
    Word w = parse_word(problem.alphabet, word);
    bool member = contains(detail::image_subgroup(problem, options), w);
    out << (member ? "true" : "false") << '\n';
    return member ? kExitYes : kExitNo;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

inline int cmd_rank(std::string_view text, const SubgroupOptions& options, std::ostream& out,
                    std::ostream& err) {
  try {
    ProblemFile problem = parse_problem(text);
    out << rank(detail::image_subgroup(problem, options)) << '\n';
    return kExitYes;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

/// Prints the abelianized matrix in matrix-file format.
inline int cmd_abelianize(std::string_view text, std::ostream& out, std::ostream& err) {
  try {
    ProblemFile problem = parse_problem(text);
    out << serialize_matrix(abelianize(problem.endomorphism()));
    return kExitYes;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

struct MatrixOptions {
  bool json = false;
  std::optional<std::size_t> degree;
  bool surface = false;
  std::size_t max_steps = kDefaultMaxSteps;
};

inline int cmd_matrix(std::string_view text, const MatrixOptions& options, std::ostream& out,
                      std::ostream& err) {
  try {
    Matrix a = parse_matrix(text);
    MatrixChainReport chain = image_chain(a, options.max_steps);
    std::vector<std::size_t> ranks;
    for (const auto& im : chain.images) ranks.push_back(im.rank());

    std::optional<bool> iso;
    if (chain.stabilizes()) iso = stable_image_isomorphism_check(a, options.max_steps);
    std::optional<HomologyVerdict> homology;
    bool reduced = false;
    if (options.degree) {
      reduced = a.ring() == Ring::Z;
      homology = homology_verdict(reduced ? a.mod2() : a, *options.degree, options.surface);
    }

    const char* verdict = chain.verdict == ChainVerdict::Stabilizes        ? "stabilizes"
                          : chain.verdict == ChainVerdict::NeverStabilizes ? "never stabilizes"
                                                                           : "inconclusive";
    if (options.json) {
      nlohmann::json j;
      j["ring"] = ring_name(a.ring());
      j["dim"] = a.dim();
      j["verdict"] = verdict;
      j["stabilizes"] = chain.stabilizes();
      j["image_ranks"] = ranks;
      j["stabilization_index"] = chain.stabilization_index
                                     ? nlohmann::json(*chain.stabilization_index)
                                     : nlohmann::json(nullptr);
      j["stable_rank"] =
          chain.stable_rank ? nlohmann::json(*chain.stable_rank) : nlohmann::json(nullptr);
      j["stable_image"] = chain.stabilizes() ? nlohmann::json(chain.stable_image().to_string())
                                             : nlohmann::json(nullptr);
      j["restricted_invertible"] = iso ? nlohmann::json(*iso) : nlohmann::json(nullptr);
      if (homology) {
        j["homology"] = {{"degree", homology->degree},
                         {"dimension", homology->dimension},
                         {"reduced_mod_2", reduced},
                         {"text", homology->text}};
      }
      out << j.dump(2) << '\n';
    } else {
      out << "ring: " << ring_name(a.ring()) << ", dim: " << a.dim() << '\n'
          << "image ranks: " << ranks_text(ranks) << '\n';
      switch (chain.verdict) {
        case ChainVerdict::Stabilizes:
          out << "image chain stabilizes at n = " << *chain.stabilization_index
              << " with stable image " << chain.stable_image().to_string() << " (rank "
              << *chain.stable_rank << ")\n"
              << "restriction to the stable image is "
              << (*iso ? "an isomorphism" : "NOT an isomorphism") << '\n';
          if (*chain.stable_rank == 0) out << "stable image is 0: shape of a point\n";
          break;
        case ChainVerdict::NeverStabilizes:
          out << "image chain never stabilizes: ranks repeat from n = " << *chain.rank_equal_index
              << " while the images keep shrinking\n";
          break;
        case ChainVerdict::Inconclusive:
          out << "image chain not stabilized within " << options.max_steps << " steps\n";
          break;
      }
      if (homology) {
        if (reduced) out << "(matrix reduced mod 2 for the homology verdict)\n";
        out << homology->text << '\n';
      }
    }
    if (iso && !*iso) {
      err << "error: restriction to the stable image is not bijective\n";
      return kExitError;
    }
    return chain.verdict == ChainVerdict::Stabilizes        ? kExitYes
           : chain.verdict == ChainVerdict::NeverStabilizes ? kExitNo
                                                            : kExitError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

// ---------------------------------------------------------------------------
// Corpus regression.
//
// A corpus is a directory of `*.problem` and `*.matrix` files. Expected
// results are recorded in comment lines of the form
//   # expect <key>: <value>
// Problem keys: stabilizes, ranks, stable_rank, witness, index.
// Matrix keys:  stabilizes, index, stable_rank, homology (dimension over GF2
// in degree 1, after reduction mod 2).

struct CorpusResult {
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::vector<std::string> failures;
  bool empty = false;

  int exit_code() const { return failed == 0 ? kExitYes : kExitNo; }
};

namespace detail {

inline std::map<std::string, std::string> expectations(std::string_view text) {
  std::map<std::string, std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::string_view s = shapeq::detail::trim(line);
    if (!s.starts_with('#')) continue;
    s = shapeq::detail::trim(s.substr(1));
    if (!s.starts_with("expect ")) continue;
    s = s.substr(7);
    auto colon = s.find(':');
    if (colon == std::string_view::npos) continue;
    out[std::string(shapeq::detail::trim(s.substr(0, colon)))] =
        std::string(shapeq::detail::trim(s.substr(colon + 1)));
  }
  return out;
}

inline std::string bool_text(bool b) { return b ? "true" : "false"; }

inline std::string opt_text(const std::optional<std::size_t>& v) {
  return v ? std::to_string(*v) : "none";
}

// Returns mismatch descriptions; empty when everything matches.
inline std::vector<std::string> check_problem(std::string_view text) {
  auto expect = expectations(text);
  std::vector<std::string> bad;
  ProblemFile problem = parse_problem(text);
  StabilizationOptions so;
  so.handlebody = problem.handlebody;
  StabilizationReport r = decide_stabilization(problem.endomorphism(), so);
  std::map<std::string, std::string> got{
      {"stabilizes", bool_text(r.stabilizes)},
      {"ranks", ranks_text(r.ranks)},
      {"stable_rank", opt_text(r.stable_rank)},
      {"witness", r.witness ? r.witness->word.to_string() : "none"},
      {"index", std::to_string(r.rank_equal_index)},
  };
  for (const auto& [key, value] : expect) {
    auto it = got.find(key);
    if (it == got.end()) {
      bad.push_back("unknown expectation key '" + key + "'");
    } else if (it->second != value) {
      bad.push_back(key + ": expected '" + value + "', got '" + it->second + "'");
    }
  }
  if (expect.empty()) bad.push_back("no expectations recorded");
  return bad;
}

inline std::vector<std::string> check_matrix(std::string_view text) {
  auto expect = expectations(text);
  std::vector<std::string> bad;
  Matrix a = parse_matrix(text);
  MatrixChainReport chain = image_chain(a);
  std::map<std::string, std::string> got{
      {"stabilizes", bool_text(chain.stabilizes())},
      {"index", opt_text(chain.stabilization_index)},
      {"stable_rank", opt_text(chain.stable_rank)},
      {"homology", std::to_string(homology_verdict(a.mod2(), 1, false).dimension)},
  };
  if (chain.stabilizes() && !stable_image_isomorphism_check(a)) {
    bad.push_back("restriction to the stable image is not bijective");
  }
  for (const auto& [key, value] : expect) {
    auto it = got.find(key);
    if (it == got.end()) {
      bad.push_back("unknown expectation key '" + key + "'");
    } else if (it->second != value) {
      bad.push_back(key + ": expected '" + value + "', got '" + it->second + "'");
    }
  }
  if (expect.empty()) bad.push_back("no expectations recorded");
  return bad;
}

}  // namespace detail

inline CorpusResult run_corpus(const std::filesystem::path& dir, std::ostream& out,
                               std::ostream& err) {
  namespace fs = std::filesystem;
  CorpusResult result;
  std::vector<fs::path> files;
  if (fs::is_directory(dir)) {
    for (const auto& entry : fs::directory_iterator(dir)) {
      auto ext = entry.path().extension();
      if (entry.is_regular_file() && (ext == ".problem" || ext == ".matrix")) {
        files.push_back(entry.path());
      }
    }
  } else {
    err << "warning: corpus directory " << dir << " does not exist\n";
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    err << "warning: no corpus files found in " << dir << '\n';
    result.empty = true;
    return result;
  }
  for (const auto& path : files) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    std::vector<std::string> bad;
    try {
      bad = path.extension() == ".problem" ? detail::check_problem(buf.str())
                                           : detail::check_matrix(buf.str());
    } catch (const Error& e) {
      bad.push_back(std::string("error: ") + e.what());
    }
    const std::string name = path.filename().string();
    if (bad.empty()) {
      ++result.passed;
      out << "PASS " << name << '\n';
    } else {
      ++result.failed;
      for (const auto& b : bad) {
        out << "FAIL " << name << ": " << b << '\n';
        result.failures.push_back(name + ": " + b);
      }
    }
  }
  out << result.passed << " passed, " << result.failed << " failed\n";
  return result;
}

}  // namespace shapeq::cli
