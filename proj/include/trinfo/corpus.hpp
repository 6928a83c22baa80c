#pragma once

#include "trinfo/presence_matrix.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace trinfo {

struct TokenizerOptions {
  /// Extra code points treated as word-internal (UTF-8 encoded, e.g. "'-").
  /// By default apostrophes and hyphens split tokens.
  std::string intra_word_chars;
};

/// Splits text into lowercased tokens: maximal runs of letters and digits.
/// Everything else, punctuation included, separates tokens. Letters cover
/// ASCII, Latin-1/Latin Extended, Greek and Cyrillic; lowercasing covers
/// ASCII, Latin-1 and Latin Extended-A.
std::vector<std::string> tokenize(std::string_view text,
                                  const TokenizerOptions& options = {});

/// Surface-form to base-form dictionary with identity fallback. Stored
/// entries are chain-resolved so the mapping is idempotent.
class LemmaMap {
 public:
  LemmaMap() = default;

  static LemmaMap from_entries(
      std::vector<std::pair<std::string, std::string>> entries);

  /// Two tab-separated columns `surface<TAB>base`, one entry per line,
  /// blank lines and lines starting with '#' ignored. Throws DataError on
  /// malformed lines or mapping cycles.
  static LemmaMap from_stream(std::istream& in);
  static LemmaMap from_file(const std::filesystem::path& path);

  /// Base form of the token; tokens without an entry map to themselves.
  const std::string& map(const std::string& token) const;

  std::size_t size() const { return entries_.size(); }

 private:
  std::unordered_map<std::string, std::string> entries_;
};

std::vector<std::string> lemmatize(std::vector<std::string> tokens,
                                   const LemmaMap& lemmas);

struct PartitionedCorpus {
  std::vector<std::vector<std::string>> parts;
  std::int64_t total_tokens = 0;
  std::int64_t part_size = 0;  // floor(total / parts)
};

/// Cuts the token stream into part_count contiguous parts of
/// floor(total/part_count) tokens each; the final part absorbs the
/// remainder. Throws std::invalid_argument when part_count exceeds the
/// token count.
PartitionedCorpus partition(std::vector<std::string> lemmas, int part_count);

struct FrequencyBand {
  std::int64_t min_count = 0;
  std::int64_t max_count = 0;
};

struct WordSelection {
  std::vector<std::string> words;     // descending count, ties lexicographic
  std::vector<std::int64_t> counts;   // aligned with words
  FrequencyBand band;
  int requested = 0;

  int shortfall() const {
    const int have = static_cast<int>(words.size());
    return requested > have ? requested - have : 0;
  }
};

/// All base forms whose total count lies in the band, most frequent first
/// (ties broken lexicographically), truncated to max_words.
WordSelection select_words(std::span<const std::string> lemmas,
                           FrequencyBand band, int max_words);

PresenceMatrix build_presence_matrix(const PartitionedCorpus& corpus,
                                     const WordSelection& selection);

/// Uniform random permutation of the token stream, reproducible from the
/// seed (Fisher-Yates driven by Xoshiro256StarStar).
std::vector<std::string> shuffle_tokens(std::vector<std::string> lemmas,
                                        std::uint64_t seed);

}  // namespace trinfo
