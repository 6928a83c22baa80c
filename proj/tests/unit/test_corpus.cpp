#include "trinfo/corpus.hpp"

#include "trinfo/errors.hpp"
#include "trinfo/rng.hpp"
#include "trinfo/stats.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

using namespace trinfo;

TEST_CASE("tokenizer rules") {
  CHECK(tokenize("The bee; the Bee.") ==
        std::vector<std::string>{"the", "bee", "the", "bee"});
  CHECK(tokenize("").empty());
  // em dash separates, case folds, repeated words survive
  CHECK(tokenize("truth, falsehood—truth") ==
        std::vector<std::string>{"truth", "falsehood", "truth"});
  // digits are tokens of their own right
  CHECK(tokenize("place 2 and 1") ==
        std::vector<std::string>{"place", "2", "and", "1"});
  // apostrophes split by default ...
  CHECK(tokenize("don't") == std::vector<std::string>{"don", "t"});
  // ... unless configured as word-internal
  TokenizerOptions keep;
  keep.intra_word_chars = "'";
  CHECK(tokenize("don't", keep) == std::vector<std::string>{"don't"});
  // hyphens split likewise
  CHECK(tokenize("well-known") == std::vector<std::string>{"well", "known"});
  // accented Latin letters fold and hold together
  CHECK(tokenize("Café CAFÉ") ==
        std::vector<std::string>{"café", "café"});
}

TEST_CASE("lemma map lookup and idempotency") {
  const LemmaMap map = LemmaMap::from_entries(
      {{"bees", "bee"}, {"cells", "cell"}, {"running", "run"},
       {"ran", "run"}});
  CHECK(map.map("bees") == "bee");
  CHECK(map.map("unknown") == "unknown");
  CHECK(lemmatize({"bees", "cells"}, map) ==
        std::vector<std::string>{"bee", "cell"});
  CHECK(lemmatize({"bee"}, LemmaMap{}) == std::vector<std::string>{"bee"});
  CHECK(lemmatize({"running", "ran"}, map) ==
        std::vector<std::string>{"run", "run"});

  // chains resolve so stored entries are idempotent
  const LemmaMap chained =
      LemmaMap::from_entries({{"bees", "bee"}, {"bee", "b"}});
  CHECK(chained.map("bees") == "b");
  CHECK(chained.map(chained.map("bees")) == chained.map("bees"));
  CHECK_THROWS_AS(LemmaMap::from_entries({{"a", "b"}, {"b", "a"}}), DataError);
}

TEST_CASE("lemma map TSV parsing") {
  std::istringstream in(
      "# comment line\n"
      "bees\tbee\n"
      "\n"
      "cells\tcell\n");
  const LemmaMap map = LemmaMap::from_stream(in);
  CHECK(map.size() == 2);
  CHECK(map.map("cells") == "cell");

  std::istringstream bad("no_tab_here\n");
  CHECK_THROWS_AS(LemmaMap::from_stream(bad), DataError);
  CHECK_THROWS_AS(LemmaMap::from_file("/nonexistent/lemmas.tsv"), DataError);
}

TEST_CASE("partition shapes") {
  std::vector<std::string> ten(10, "w");
  const PartitionedCorpus even = partition(ten, 5);
  CHECK(even.parts.size() == 5);
  for (const auto& part : even.parts) CHECK(part.size() == 2);
  CHECK(even.part_size == 2);
  CHECK(even.total_tokens == 10);

  std::vector<std::string> eleven(11, "w");
  const PartitionedCorpus ragged = partition(eleven, 5);
  CHECK(ragged.parts.size() == 5);
  for (std::size_t p = 0; p + 1 < 5; ++p) CHECK(ragged.parts[p].size() == 2);
  CHECK(ragged.parts.back().size() == 3);

  std::vector<std::string> three(3, "w");
  CHECK_THROWS_AS(partition(three, 4), std::invalid_argument);
  CHECK_THROWS_AS(partition(three, 0), std::invalid_argument);

  // concatenating the parts reproduces the stream
  std::vector<std::string> stream;
  for (int t = 0; t < 23; ++t) stream.push_back("t" + std::to_string(t));
  const PartitionedCorpus parts = partition(stream, 4);
  std::vector<std::string> rebuilt;
  for (const auto& part : parts.parts) {
    rebuilt.insert(rebuilt.end(), part.begin(), part.end());
  }
  CHECK(rebuilt == stream);
}

TEST_CASE("word selection band and ordering") {
  std::vector<std::string> lemmas;
  const auto add = [&](const std::string& w, int times) {
    for (int t = 0; t < times; ++t) lemmas.push_back(w);
  };
  add("a", 500);
  add("bee", 40);
  add("cell", 35);
  add("x", 2);
  const WordSelection sel = select_words(lemmas, {21, 136}, 2);
  CHECK(sel.words == std::vector<std::string>{"bee", "cell"});
  CHECK(sel.counts == std::vector<std::int64_t>{40, 35});
  CHECK(sel.shortfall() == 0);

  // ties break lexicographically
  std::vector<std::string> tied;
  for (int t = 0; t < 30; ++t) {
    tied.push_back("q");
    tied.push_back("p");
  }
  const WordSelection tie = select_words(tied, {21, 136}, 1);
  CHECK(tie.words == std::vector<std::string>{"p"});

  // empty corpus and shortfall reporting
  CHECK(select_words({}, {1, 10}, 5).words.empty());
  CHECK(select_words({}, {1, 10}, 5).shortfall() == 5);
  CHECK_THROWS_AS(select_words(tied, {10, 1}, 5), std::invalid_argument);
}

TEST_CASE("presence matrix construction") {
  std::vector<std::string> lemmas;
  // part size 4 with P = 3: "bee" 3 times in part 0, "cell" once per part
  const char* script[] = {"bee", "bee", "bee",  "cell", "ant", "moth",
                          "cell", "ant", "moth", "cell", "ant", "moth"};
  lemmas.assign(std::begin(script), std::end(script));
  const PartitionedCorpus corpus = partition(lemmas, 3);
  const WordSelection sel = select_words(lemmas, {1, 100}, 10);
  const PresenceMatrix matrix = build_presence_matrix(corpus, sel);
  CHECK(matrix.part_count() == 3);
  const auto column = [&](const std::string& w) {
    const auto& labels = matrix.column_labels();
    return static_cast<Eigen::Index>(
        std::find(labels.begin(), labels.end(), w) - labels.begin());
  };
  // multiplicity collapses to presence
  CHECK(matrix.at(0, column("bee")));
  CHECK(!matrix.at(1, column("bee")));
  CHECK(matrix.presence_probability(column("bee")) == doctest::Approx(1.0 / 3));
  // once per part means probability one
  CHECK(matrix.presence_probability(column("cell")) == doctest::Approx(1.0));
  // absent everywhere gives an all-false column
  const WordSelection ghost{{"ghost"}, {0}, {0, 10}, 1};
  const PresenceMatrix empty = build_presence_matrix(corpus, ghost);
  CHECK(empty.presence_probability(0) == 0.0);
}

TEST_CASE("presence matrix csv round trip") {
  BitMatrix bits(3, 2);
  bits << 1, 0, 0, 1, 1, 1;
  const PresenceMatrix matrix(bits, {"alpha", "beta"});
  std::ostringstream out;
  matrix.write_csv(out);
  CHECK(out.str() == "alpha,beta\n1,0\n0,1\n1,1\n");
  std::istringstream in(out.str());
  const PresenceMatrix back = PresenceMatrix::read_csv(in);
  CHECK(back.column_labels() == matrix.column_labels());
  CHECK((back.bits() == matrix.bits()));

  std::istringstream bad("a,b\n1,2\n");
  CHECK_THROWS_AS(PresenceMatrix::read_csv(bad), DataError);
  std::istringstream ragged("a,b\n1\n");
  CHECK_THROWS_AS(PresenceMatrix::read_csv(ragged), DataError);
}

TEST_CASE("shuffle determinism and content") {
  std::vector<std::string> lemmas;
  for (int t = 0; t < 200; ++t) lemmas.push_back("w" + std::to_string(t % 17));
  const std::vector<std::string> once = shuffle_tokens(lemmas, 99);
  const std::vector<std::string> twice = shuffle_tokens(lemmas, 99);
  CHECK(once == twice);
  CHECK(once != lemmas);  // 200 tokens: an unmoved permutation is implausible
  std::multiset<std::string> before(lemmas.begin(), lemmas.end());
  std::multiset<std::string> after(once.begin(), once.end());
  CHECK(before == after);
}

TEST_CASE("shuffled presence matches the placement model") {
  // One word with n occurrences in a long stream: across many shuffle seeds
  // the measured presence probability approaches the binomial placement
  // value (the exact without-replacement law is closer than the Monte Carlo
  // error here).
  const std::int64_t parts = 128;
  const std::int64_t n_word = 40;
  const std::int64_t total = 128 * 100;
  std::vector<std::string> lemmas(static_cast<std::size_t>(total), "filler");
  for (std::int64_t t = 0; t < n_word; ++t) {
    lemmas[static_cast<std::size_t>(t)] = "target";
  }
  const int seeds = 1200;
  double sum = 0.0, sum_sq = 0.0;
  for (int seed = 0; seed < seeds; ++seed) {
    const std::vector<std::string> shuffled =
        shuffle_tokens(lemmas, 1000 + static_cast<std::uint64_t>(seed));
    const PartitionedCorpus corpus = partition(shuffled, parts);
    std::int64_t present = 0;
    for (const auto& part : corpus.parts) {
      if (std::find(part.begin(), part.end(), "target") != part.end()) {
        ++present;
      }
    }
    const double p = static_cast<double>(present) / static_cast<double>(parts);
    sum += p;
    sum_sq += p * p;
  }
  const double mean = sum / seeds;
  const double variance = sum_sq / seeds - mean * mean;
  const double standard_error = std::sqrt(variance / seeds);
  const double predicted = binomial_presence_probability(n_word, parts);
  CHECK(std::abs(mean - predicted) < 3.0 * standard_error + 1e-4);
}

TEST_CASE("pipeline determinism end to end") {
  const std::string text =
      "Bees build wax cells. The queen bee lays eggs in wax cells; "
      "worker bees guard the cells. Wax, honey and pollen fill the hive. "
      "Drones wait. Cells of wax hold honey.";
  const LemmaMap map = LemmaMap::from_entries(
      {{"bees", "bee"}, {"cells", "cell"}, {"lays", "lay"}});
  const auto run = [&]() {
    const std::vector<std::string> lemmas = lemmatize(tokenize(text), map);
    const PartitionedCorpus corpus = partition(lemmas, 4);
    const WordSelection sel = select_words(lemmas, {2, 10}, 5);
    const PresenceMatrix matrix = build_presence_matrix(corpus, sel);
    std::ostringstream out;
    matrix.write_csv(out);
    return out.str();
  };
  CHECK(run() == run());
}
