#include "trinfo/corpus.hpp"

#include "trinfo/errors.hpp"
#include "trinfo/rng.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace trinfo {

namespace {

// Minimal UTF-8 decoding: returns the next code point and advances `pos`.
// Malformed bytes decode as U+FFFD and advance one byte, which makes them
// token separators.
char32_t decode_utf8(std::string_view text, std::size_t& pos) {
  const unsigned char lead = static_cast<unsigned char>(text[pos]);
  if (lead < 0x80) {
    ++pos;
    return lead;
  }
  int extra = 0;
  char32_t cp = 0;
  if ((lead & 0xe0) == 0xc0) {
    extra = 1;
    cp = lead & 0x1f;
  } else if ((lead & 0xf0) == 0xe0) {
    extra = 2;
    cp = lead & 0x0f;
  } else if ((lead & 0xf8) == 0xf0) {
    extra = 3;
    cp = lead & 0x07;
  } else {
    ++pos;
    return 0xfffd;
  }
  if (pos + static_cast<std::size_t>(extra) >= text.size()) {
    ++pos;
    return 0xfffd;
  }
  for (int k = 1; k <= extra; ++k) {
    const unsigned char cont =
        static_cast<unsigned char>(text[pos + static_cast<std::size_t>(k)]);
    if ((cont & 0xc0) != 0x80) {
      ++pos;
      return 0xfffd;
    }
    cp = (cp << 6) | (cont & 0x3f);
  }
  pos += static_cast<std::size_t>(extra) + 1;
  return cp;
}

void encode_utf8(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  } else {
    out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  }
}

bool is_word_char(char32_t cp) {
  if ((cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') ||
      (cp >= '0' && cp <= '9')) {
    return true;
  }
  if (cp >= 0xc0 && cp <= 0x24f) return cp != 0xd7 && cp != 0xf7;  // Latin
  if (cp >= 0x386 && cp <= 0x3ff) return cp != 0x387;              // Greek
  if (cp >= 0x400 && cp <= 0x4ff) return true;                     // Cyrillic
  return false;
}

char32_t lower(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 32;
  if (cp >= 0xc0 && cp <= 0xde && cp != 0xd7) return cp + 32;  // Latin-1
  if (cp >= 0x100 && cp <= 0x177 && (cp % 2 == 0)) return cp + 1;
  if (cp == 0x178) return 0xff;
  if (cp >= 0x179 && cp <= 0x17e && (cp % 2 == 1)) return cp + 1;
  return cp;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text,
                                  const TokenizerOptions& options) {
  std::unordered_set<char32_t> intra;
  {
    std::size_t pos = 0;
    while (pos < options.intra_word_chars.size()) {
      intra.insert(decode_utf8(options.intra_word_chars, pos));
    }
  }
  std::vector<std::string> tokens;
  std::string current;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char32_t cp = decode_utf8(text, pos);
    if (is_word_char(cp) || intra.count(cp) > 0) {
      encode_utf8(lower(cp), current);
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

LemmaMap LemmaMap::from_entries(
    std::vector<std::pair<std::string, std::string>> entries) {
  LemmaMap map;
  for (auto& [surface, base] : entries) {
    map.entries_[std::move(surface)] = std::move(base);
  }
  // Resolve chains (a->b, b->c becomes a->c) so stored lookups are
  // idempotent; a cycle means the data cannot be resolved.
  for (auto& [surface, base] : map.entries_) {
    std::unordered_set<std::string> seen{surface};
    std::string resolved = base;
    auto it = map.entries_.find(resolved);
    while (it != map.entries_.end() && it->second != resolved) {
      if (!seen.insert(resolved).second) {
        throw DataError("lemma map: cycle involving '" + surface + "'");
      }
      resolved = it->second;
      it = map.entries_.find(resolved);
    }
    base = resolved;
  }
  return map;
}

LemmaMap LemmaMap::from_stream(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size()) {
      throw DataError("lemma map: line " + std::to_string(line_number) +
                      ": expected 'surface<TAB>base'");
    }
    entries.emplace_back(line.substr(0, tab), line.substr(tab + 1));
  }
  return from_entries(std::move(entries));
}

LemmaMap LemmaMap::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("lemma map: cannot open " + path.string());
  }
  return from_stream(in);
}

const std::string& LemmaMap::map(const std::string& token) const {
  const auto it = entries_.find(token);
  return it == entries_.end() ? token : it->second;
}

std::vector<std::string> lemmatize(std::vector<std::string> tokens,
                                   const LemmaMap& lemmas) {
  for (auto& token : tokens) {
    const std::string& base = lemmas.map(token);
    if (&base != &token) token = base;
  }
  return tokens;
}

PartitionedCorpus partition(std::vector<std::string> lemmas, int part_count) {
  const auto total = static_cast<std::int64_t>(lemmas.size());
  if (part_count < 1) {
    throw std::invalid_argument("partition: need at least one part");
  }
  if (total < part_count) {
    throw std::invalid_argument("partition: more parts than tokens");
  }
  PartitionedCorpus corpus;
  corpus.total_tokens = total;
  corpus.part_size = total / part_count;
  corpus.parts.resize(static_cast<std::size_t>(part_count));
  std::int64_t cursor = 0;
  for (int p = 0; p < part_count; ++p) {
    const std::int64_t size =
        p + 1 < part_count ? corpus.part_size : total - cursor;
    auto& part = corpus.parts[static_cast<std::size_t>(p)];
    part.reserve(static_cast<std::size_t>(size));
    for (std::int64_t t = 0; t < size; ++t) {
      part.push_back(std::move(lemmas[static_cast<std::size_t>(cursor + t)]));
    }
    cursor += size;
  }
  return corpus;
}

WordSelection select_words(std::span<const std::string> lemmas,
                           FrequencyBand band, int max_words) {
  if (band.min_count > band.max_count) {
    throw std::invalid_argument("select_words: band minimum exceeds maximum");
  }
  std::map<std::string, std::int64_t> counts;
  for (const auto& lemma : lemmas) ++counts[lemma];

  std::vector<std::pair<std::string, std::int64_t>> in_band;
  for (const auto& [word, count] : counts) {
    if (count >= band.min_count && count <= band.max_count) {
      in_band.emplace_back(word, count);
    }
  }
  std::sort(in_band.begin(), in_band.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (max_words >= 0 &&
      in_band.size() > static_cast<std::size_t>(max_words)) {
    in_band.resize(static_cast<std::size_t>(max_words));
  }

  WordSelection selection;
  selection.band = band;
  selection.requested = max_words;
  selection.words.reserve(in_band.size());
  selection.counts.reserve(in_band.size());
  for (auto& [word, count] : in_band) {
    selection.words.push_back(std::move(word));
    selection.counts.push_back(count);
  }
  return selection;
}

PresenceMatrix build_presence_matrix(const PartitionedCorpus& corpus,
                                     const WordSelection& selection) {
  const auto parts = static_cast<Eigen::Index>(corpus.parts.size());
  const auto words = static_cast<Eigen::Index>(selection.words.size());
  std::unordered_map<std::string, Eigen::Index> column_of;
  column_of.reserve(selection.words.size());
  for (Eigen::Index w = 0; w < words; ++w) {
    column_of.emplace(selection.words[static_cast<std::size_t>(w)], w);
  }
  BitMatrix bits = BitMatrix::Zero(parts, words);
  for (Eigen::Index p = 0; p < parts; ++p) {
    for (const auto& lemma : corpus.parts[static_cast<std::size_t>(p)]) {
      const auto it = column_of.find(lemma);
      if (it != column_of.end()) bits(p, it->second) = 1;
    }
  }
  return PresenceMatrix(std::move(bits), selection.words);
}

std::vector<std::string> shuffle_tokens(std::vector<std::string> lemmas,
                                        std::uint64_t seed) {
  Xoshiro256StarStar rng(seed);
  for (std::size_t i = lemmas.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.next_below(i));
    std::swap(lemmas[i - 1], lemmas[j]);
  }
  return lemmas;
}

}  // namespace trinfo
