#pragma once

#include "trinfo/infocore.hpp"
#include "trinfo/irreducible.hpp"
#include "trinfo/presence_matrix.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace trinfo {

enum class Outlier { above, inside, below };

struct SinglesRow {
  std::string word;
  std::int64_t occurrences = 0;       // n_i over the whole token stream
  double presence_probability = 0.0;  // fraction of parts containing the word
  double entropy_bits = 0.0;
  double binomial_entropy_bits = 0.0;
  double entropy_gap_bits = 0.0;      // binomial - observed
  double band_lo = 0.0;
  double band_hi = 0.0;
  Outlier outlier = Outlier::inside;
};

struct SinglesOptions {
  std::pair<double, double> percentiles{1.0, 99.0};
  int band_trials = 2000;
  std::uint64_t seed = 1;
};

struct SinglesReport {
  std::vector<SinglesRow> rows;  // matrix column order
  double fraction_above = 0.0;
  double fraction_below = 0.0;
  SinglesOptions options;
};

/// Per-word entropy against the binomial placement baseline; counts must be
/// aligned with the matrix columns.
SinglesReport analyze_singles(const PresenceMatrix& matrix,
                              std::span<const std::int64_t> counts,
                              const SinglesOptions& options = {});

enum class PairPolarity { co_occur, exclude };

struct PairRow {
  int i = 0;
  int j = 0;
  double mi_bits = 0.0;
  double h_i = 0.0;
  double h_j = 0.0;
  bool significant = false;
  PairPolarity polarity = PairPolarity::co_occur;
};

/// Every unordered column pair, sorted by mutual information descending
/// (ties by index pair).
std::vector<PairRow> analyze_pairs(const PresenceMatrix& matrix,
                                   double threshold_bits);

struct TripletRow {
  int i = 0;
  int j = 0;
  int k = 0;
  TripletMetrics metrics;
  double triple_fraction = 0.0;  // triple share of the total, 0 when total 0
};

struct ScatterPoint {
  float co_information = 0.0f;
  float triple_interaction = 0.0f;
};

struct TripletScanOptions {
  double threshold_bits = 0.010573795088537825;  // alpha=0.1%, N=512, literal
  int top_k = 20;
  int workers = 0;  // 0: hardware concurrency
  /// Collect a scatter point for every triplet whose total interaction is at
  /// least this value; disabled when unset.
  std::optional<double> scatter_min_multi;
  bool error_bars = true;  // sigma for retained significant rows
  std::function<void(std::int64_t done, std::int64_t total)> progress;
};

struct TripletScanSummary {
  std::int64_t triplet_count = 0;
  std::int64_t significant_count = 0;  // triple interaction above threshold
  double mean_triple_fraction_significant = 0.0;
  double max_triple_interaction = 0.0;
};

struct TripletScanResult {
  std::vector<TripletRow> top_triple;      // by triple interaction
  std::vector<TripletRow> top_redundancy;  // by triple + co-information
  std::vector<TripletRow> top_multi;       // by total interaction
  std::vector<ScatterPoint> scatter;       // (co-information, triple)
  TripletScanSummary summary;
};

/// Exhaustive scan over all column triplets. Work is split into fixed-size
/// chunks of the combination index space and reduced in chunk order, so the
/// result is identical for any worker count.
TripletScanResult analyze_triplets(const PresenceMatrix& matrix,
                                   const TripletScanOptions& options);

struct MediatorScanOptions {
  double pair_threshold_bits = 0.010573795088537825;
  /// A pair counts as explained when the best chain covers at least this
  /// fraction of its mutual information.
  double explained_fraction = 0.9;
  int workers = 0;
  /// Candidate mediators; all other columns when unset.
  std::optional<std::vector<int>> candidates;
};

struct MediatorRow {
  MediatorResult result;
  double explained_fraction = 0.0;  // 1 - irreducible/I, 0 when I = 0
  bool explained = false;
};

struct MediatorReport {
  std::vector<MediatorRow> rows;  // irreducible ascending
  /// (mediator column, number of explained pairs routed through it),
  /// count descending.
  std::vector<std::pair<int, std::int64_t>> hub_counts;
};

/// Mediator search over every pair whose mutual information clears the
/// threshold.
MediatorReport analyze_mediators(const PresenceMatrix& matrix,
                                 const MediatorScanOptions& options);

enum class GraphFormat { dot, graphml };

/// Weighted word graph from pair rows (weight = mutual information) or
/// mediator rows (weight = irreducible interaction). Nodes are the words on
/// retained edges, emitted in deterministic order. Throws DataError when
/// rows is empty.
void export_network(std::ostream& out, const PresenceMatrix& matrix,
                    std::span<const PairRow> rows, GraphFormat format);
void export_network(std::ostream& out, const PresenceMatrix& matrix,
                    std::span<const MediatorRow> rows, GraphFormat format);

}  // namespace trinfo
