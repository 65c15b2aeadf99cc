// shapeq: decide whether an attractor's inclusion into its basin of
// attraction is a shape equivalence, from the endomorphism induced on the
// fundamental group of a trapping region.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "shapeq/cli.hpp"

#ifndef SHAPEQ_CORPUS_DIR
#define SHAPEQ_CORPUS_DIR "corpus"
#endif

namespace {

bool read_file(const std::string& path, std::string& text) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot open " << path << '\n';
    return false;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  text = buf.str();
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace shapeq::cli;

  CLI::App app{"Shape equivalence of attractors from free-group and matrix data"};
  app.require_subcommand(1);

  std::string file;
  std::string word;

  CheckOptions check;
  auto* check_cmd = app.add_subcommand("check", "Decide whether the inclusion is a shape equivalence");
  check_cmd->add_option("file", file, "Problem file")->required();
  check_cmd->add_flag("--json", check.json, "Emit the verdict as JSON");
  check_cmd->add_flag("--handlebody", check.handlebody,
                      "Trapping region is a handlebody (bouquet-of-circles conclusion)");
  check_cmd->add_option("--max-word-len", check.max_word_length, "Cap on iterated word length");

  SubgroupOptions sub;
  auto* member_cmd = app.add_subcommand("membership", "Test whether WORD lies in im Φ^power");
  member_cmd->add_option("file", file, "Problem file")->required();
  member_cmd->add_option("word", word, "Word, e.g. \"x y^2\"")->required();
  member_cmd->add_option("--power", sub.power, "Use im Φ^power (0 = whole group)");
  member_cmd->add_option("--max-word-len", sub.max_word_length, "Cap on iterated word length");

  auto* rank_cmd = app.add_subcommand("rank", "Rank of im Φ^power");
  rank_cmd->add_option("file", file, "Problem file")->required();
  rank_cmd->add_option("--power", sub.power, "Use im Φ^power (0 = whole group)");
  rank_cmd->add_option("--max-word-len", sub.max_word_length, "Cap on iterated word length");

  auto* abel_cmd = app.add_subcommand("abelianize", "Print the abelianized matrix");
  abel_cmd->add_option("file", file, "Problem file")->required();

  MatrixOptions mat;
  std::size_t degree = 0;
  auto* matrix_cmd = app.add_subcommand("matrix", "Image chain of a Z or GF2 matrix");
  matrix_cmd->add_option("file", file, "Matrix file")->required();
  matrix_cmd->add_flag("--json", mat.json, "Emit the report as JSON");
  auto* degree_opt =
      matrix_cmd->add_option("--degree", degree, "Homology degree for the Z_2 verdict");
  matrix_cmd->add_flag("--surface", mat.surface, "Attractor lies in a surface (wedge-of-circles text)");
  matrix_cmd->add_option("--max-steps", mat.max_steps, "Step budget for Z chains")
      ->check(CLI::PositiveNumber);

  std::string corpus_dir = SHAPEQ_CORPUS_DIR;
  auto* corpus_cmd = app.add_subcommand("corpus", "Run the bundled regression corpus");
  corpus_cmd->add_option("--dir", corpus_dir, "Corpus directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  if (*corpus_cmd) {
    return run_corpus(corpus_dir, std::cout, std::cerr).exit_code();
  }

  std::string text;
  if (!read_file(file, text)) return kExitError;

  if (*check_cmd) return cmd_check(text, check, std::cout, std::cerr);
  if (*member_cmd) return cmd_membership(text, word, sub, std::cout, std::cerr);
  if (*rank_cmd) return cmd_rank(text, sub, std::cout, std::cerr);
  if (*abel_cmd) return cmd_abelianize(text, std::cout, std::cerr);
  if (*degree_opt) mat.degree = degree;
  return cmd_matrix(text, mat, std::cout, std::cerr);
}
