// Drives the installed command-line binary end to end: file formats, exit
// codes and byte-level determinism. Invoked by ctest with the binary path as
// the sole argument.

#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

std::string g_cli;
fs::path g_work;

int run(const std::string& args, const fs::path& stderr_to = {}) {
  std::string command = g_cli + " " + args;
  if (!stderr_to.empty()) {
    command += " 2>" + stderr_to.string();
  } else {
    command += " 2>/dev/null";
  }
  command += " >/dev/null";
  const int status = std::system(command.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_fixture_book(const fs::path& path) {
  // Deterministic text with planted, clumpy co-occurrence structure: block
  // choice follows a small linear congruential stream so topical words
  // cluster instead of blanketing every part.
  std::ostringstream out;
  const char* blocks[] = {
      "the bee builds wax cells and fills honey into the comb ",
      "north america and south america share a continent of rivers ",
      "the male bird and the female bird guard the nest together ",
      "truth stands while falsehood falls and the proposition holds ",
      "the queen bee lays eggs in wax cells under the hive roof ",
      "south winds meet north winds over the grey open sea today ",
      "rivers run of water and stone beneath a pale morning sky ",
      "a reader turns a page and a writer mends a quiet line ",
  };
  std::uint64_t state = 12345;
  for (int rep = 0; rep < 192; ++rep) {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    out << blocks[(state >> 33) % 8];
  }
  std::ofstream file(path, std::ios::binary);
  file << out.str();
}

}  // namespace

TEST_CASE("ingest writes the matrix and is byte-deterministic") {
  const fs::path book = g_work / "book.txt";
  write_fixture_book(book);

  const std::string args = "ingest --input " + book.string() +
                           " --parts 64 --band-min 6 --band-max 900"
                           " --max-words 12 --out ";
  REQUIRE(run(args + (g_work / "run_a").string()) == 0);
  REQUIRE(run(args + (g_work / "run_b").string()) == 0);
  const std::string matrix_a = slurp(g_work / "run_a" / "matrix.csv");
  CHECK(matrix_a == slurp(g_work / "run_b" / "matrix.csv"));
  CHECK(slurp(g_work / "run_a" / "selection.json") ==
        slurp(g_work / "run_b" / "selection.json"));

  // 64 parts: header plus 64 rows
  int lines = 0;
  for (char c : matrix_a) lines += c == '\n';
  CHECK(lines == 65);
}

TEST_CASE("lemma map merges surface forms") {
  const fs::path book = g_work / "book.txt";
  const fs::path lemmas = g_work / "lemmas.tsv";
  {
    std::ofstream out(lemmas);
    out << "# plural folding\nbirds\tbird\ncells\tcell\nwinds\twind\n";
  }
  REQUIRE(run("ingest --input " + book.string() + " --lemma-map " +
              lemmas.string() +
              " --parts 64 --band-min 6 --band-max 900 --max-words 40 --out " +
              (g_work / "run_lemma").string()) == 0);
  const std::string selection = slurp(g_work / "run_lemma" / "selection.json");
  CHECK(selection.find("\"cell\"") != std::string::npos);
  CHECK(selection.find("\"cells\"") == std::string::npos);
}

TEST_CASE("exit codes follow the contract") {
  CHECK(run("ingest --input " + (g_work / "absent.txt").string() + " --out " +
            (g_work / "x").string(),
            g_work / "err.txt") == 2);
  const std::string diagnostic = slurp(g_work / "err.txt");
  CHECK(diagnostic.find("absent.txt") != std::string::npos);

  CHECK(run("analyze --matrix " + (g_work / "run_a" / "matrix.csv").string() +
            " --stages nonsense --out " + (g_work / "y").string()) == 1);
  CHECK(run("bogus-subcommand") == 1);
}

TEST_CASE("analyze emits the requested stage files") {
  const fs::path out = g_work / "analysis";
  REQUIRE(run("analyze --matrix " + (g_work / "run_a" / "matrix.csv").string() +
              " --selection " +
              (g_work / "run_a" / "selection.json").string() +
              " --stages singles,pairs,triplets,mediators,network"
              " --alpha 0.05 --top-k 10 --band-trials 200 --no-progress"
              " --out " +
              out.string()) == 0);
  for (const char* name :
       {"singles.csv", "singles.json", "pairs.csv", "pairs.json",
        "triplets_top_triple.csv", "triplets_top_redundancy.csv",
        "triplets_top_multi.csv", "triplet_scatter.csv",
        "triplet_summary.json", "mediators.csv", "mediator_hubs.csv",
        "network.dot"}) {
    CHECK(fs::exists(out / name));
  }
  // top-k honored: header comment + column row + at most 10 rows
  const std::string table = slurp(out / "triplets_top_triple.csv");
  int lines = 0;
  for (char c : table) lines += c == '\n';
  CHECK(lines <= 12);
  CHECK(table.rfind("# trinfo", 0) == 0);

  // analyze is deterministic too
  const fs::path again = g_work / "analysis_b";
  REQUIRE(run("analyze --matrix " + (g_work / "run_a" / "matrix.csv").string() +
              " --selection " +
              (g_work / "run_a" / "selection.json").string() +
              " --stages singles,pairs,triplets,mediators,network"
              " --alpha 0.05 --top-k 10 --band-trials 200 --no-progress"
              " --out " +
              again.string()) == 0);
  CHECK(slurp(out / "triplets_top_triple.csv") ==
        slurp(again / "triplets_top_triple.csv"));
  CHECK(slurp(out / "singles.csv") == slurp(again / "singles.csv"));
  CHECK(slurp(out / "mediators.csv") == slurp(again / "mediators.csv"));
}

TEST_CASE("synthetic generators emit truth next to samples") {
  const fs::path flat = g_work / "synth_flat";
  REQUIRE(run("synthetic --kind theta --theta 0 --parts 512 --seed 9 --out " +
              flat.string()) == 0);
  CHECK(slurp(flat / "truth.json").rfind("[0.125,", 0) == 0);
  CHECK(fs::exists(flat / "matrix.csv"));

  const fs::path gate = g_work / "synth_gate";
  REQUIRE(run("synthetic --kind xor --sign 1 --parts 256 --seed 9 --out " +
              gate.string()) == 0);
  CHECK(fs::exists(gate / "truth.json"));

  const fs::path spins = g_work / "synth_spins";
  REQUIRE(run("synthetic --kind spins --beta-points 17 --parts 64 --seed 9"
              " --out " +
              spins.string()) == 0);
  const std::string sweep = slurp(spins / "beta_sweep.csv");
  CHECK(sweep.find("beta,multi_information,pairwise_total,"
                   "triple_interaction") != std::string::npos);

  CHECK(run("synthetic --kind theta --theta nonsense --parts 8 --out " +
            (g_work / "z").string()) == 1);
}

TEST_CASE("config file supplies defaults, flags win") {
  const fs::path conf = g_work / "run.conf";
  {
    std::ofstream out(conf);
    out << "[ingest]\nparts=4\nband-min=6\nband-max=900\nmax-words=6\n";
  }
  const fs::path out_conf = g_work / "run_conf";
  REQUIRE(run("--config " + conf.string() + " ingest --input " +
              (g_work / "book.txt").string() + " --out " +
              out_conf.string()) == 0);
  // 4 parts from the config file
  int lines = 0;
  for (char c : slurp(out_conf / "matrix.csv")) lines += c == '\n';
  CHECK(lines == 5);

  const fs::path out_override = g_work / "run_conf_override";
  REQUIRE(run("--config " + conf.string() + " ingest --input " +
              (g_work / "book.txt").string() + " --parts 2 --out " +
              out_override.string()) == 0);
  lines = 0;
  for (char c : slurp(out_override / "matrix.csv")) lines += c == '\n';
  CHECK(lines == 3);
}

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: cli_smoke <path-to-cli>\n";
    return 1;
  }
  g_cli = argv[1];
  g_work = fs::temp_directory_path() / "trinfo_cli_smoke";
  fs::remove_all(g_work);
  fs::create_directories(g_work);

  doctest::Context context;
  context.applyCommandLine(1, argv);
  const int result = context.run();
  fs::remove_all(g_work);
  return result;
}
