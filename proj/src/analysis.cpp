#include "trinfo/analysis.hpp"

#include "trinfo/errors.hpp"
#include "trinfo/maxent.hpp"
#include "trinfo/rng.hpp"
#include "trinfo/stats.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <vector>

namespace trinfo {

namespace {

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// (count/P) * log2(count/P) for every count in [0, P]; entropies of empirical
// marginals become table sums.
std::vector<double> plogp_table(std::int64_t parts) {
  std::vector<double> table(static_cast<std::size_t>(parts) + 1, 0.0);
  const double p = static_cast<double>(parts);
  for (std::int64_t c = 1; c <= parts; ++c) {
    const double f = static_cast<double>(c) / p;
    table[static_cast<std::size_t>(c)] = f * std::log2(f);
  }
  return table;
}

}  // namespace

SinglesReport analyze_singles(const PresenceMatrix& matrix,
                              std::span<const std::int64_t> counts,
                              const SinglesOptions& options) {
  if (static_cast<Eigen::Index>(counts.size()) != matrix.word_count()) {
    throw std::invalid_argument(
        "analyze_singles: counts not aligned with matrix columns");
  }
  SinglesReport report;
  report.options = options;
  report.rows.reserve(counts.size());

  // Words sharing a total count share a band; the band seed is derived from
  // the count so the cache does not depend on column order.
  std::map<std::int64_t, EntropyBand> band_cache;
  std::int64_t above = 0, below = 0;
  for (Eigen::Index w = 0; w < matrix.word_count(); ++w) {
    const std::int64_t n = counts[static_cast<std::size_t>(w)];
    auto it = band_cache.find(n);
    if (it == band_cache.end()) {
      it = band_cache
               .emplace(n, entropy_band(
                               n, matrix.part_count(), options.percentiles,
                               options.band_trials,
                               derive_seed(options.seed,
                                           static_cast<std::uint64_t>(n))))
               .first;
    }
    const EntropyBand& band = it->second;

    SinglesRow row;
    row.word = matrix.label(w);
    row.occurrences = n;
    row.presence_probability = matrix.presence_probability(w);
    row.entropy_bits = entropy_binary(row.presence_probability);
    row.binomial_entropy_bits = band.expected_bits;
    row.entropy_gap_bits = row.binomial_entropy_bits - row.entropy_bits;
    row.band_lo = band.lo;
    row.band_hi = band.hi;
    if (row.entropy_bits < band.lo) {
      row.outlier = Outlier::below;
      ++below;
    } else if (row.entropy_bits > band.hi) {
      row.outlier = Outlier::above;
      ++above;
    } else {
      row.outlier = Outlier::inside;
    }
    report.rows.push_back(std::move(row));
  }
  const double total = static_cast<double>(report.rows.size());
  if (total > 0) {
    report.fraction_above = static_cast<double>(above) / total;
    report.fraction_below = static_cast<double>(below) / total;
  }
  return report;
}

std::vector<PairRow> analyze_pairs(const PresenceMatrix& matrix,
                                   double threshold_bits) {
  if (threshold_bits < 0) {
    throw std::invalid_argument("analyze_pairs: negative threshold");
  }
  const Eigen::Index words = matrix.word_count();
  const std::int64_t parts = matrix.part_count();
  const std::vector<double> table = plogp_table(parts);

  std::vector<PairRow> rows;
  rows.reserve(static_cast<std::size_t>(words) * (words - 1) / 2);
  std::vector<double> h_single(static_cast<std::size_t>(words));
  for (Eigen::Index w = 0; w < words; ++w) {
    const std::int64_t n = matrix.presence_count(w);
    h_single[static_cast<std::size_t>(w)] =
        -table[static_cast<std::size_t>(n)] -
        table[static_cast<std::size_t>(parts - n)];
  }
  for (Eigen::Index i = 0; i < words; ++i) {
    for (Eigen::Index j = i + 1; j < words; ++j) {
      const auto cells = matrix.pair_counts(i, j);
      double h_joint = 0.0;
      for (std::int64_t c : cells) h_joint -= table[static_cast<std::size_t>(c)];
      PairRow row;
      row.i = static_cast<int>(i);
      row.j = static_cast<int>(j);
      row.h_i = h_single[static_cast<std::size_t>(i)];
      row.h_j = h_single[static_cast<std::size_t>(j)];
      row.mi_bits = row.h_i + row.h_j - h_joint;
      if (row.mi_bits < 0.0) row.mi_bits = 0.0;
      row.significant = row.mi_bits > threshold_bits;
      // covariance sign of the two +/-1 columns
      const std::int64_t cov = cells[3] * parts -
                               matrix.presence_count(i) * matrix.presence_count(j);
      row.polarity = cov < 0 ? PairPolarity::exclude : PairPolarity::co_occur;
      rows.push_back(row);
    }
  }
  std::sort(rows.begin(), rows.end(), [](const PairRow& a, const PairRow& b) {
    if (a.mi_bits != b.mi_bits) return a.mi_bits > b.mi_bits;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });
  return rows;
}

namespace {

struct ScanCandidate {
  double key = 0.0;
  int i = 0, j = 0, k = 0;
};

struct ChunkResult {
  std::vector<ScanCandidate> by_triple;
  std::vector<ScanCandidate> by_redundancy;
  std::vector<ScanCandidate> by_multi;
  std::vector<ScatterPoint> scatter;
  std::int64_t significant = 0;
  double fraction_sum = 0.0;  // triple/total over significant triplets
  double max_triple = 0.0;
};

constexpr std::int64_t kChunkSize = 32768;

// Total order on candidates: better key first, ties to the lexicographically
// smallest index tuple. Used everywhere so chunk-local pruning keeps exactly
// the rows a full sort would.
bool candidate_before(const ScanCandidate& a, const ScanCandidate& b) {
  if (a.key != b.key) return a.key > b.key;
  if (a.i != b.i) return a.i < b.i;
  if (a.j != b.j) return a.j < b.j;
  return a.k < b.k;
}

// Bounded keep-best buffer: grows to twice the budget, then compacts.
void keep_top(std::vector<ScanCandidate>& buffer, std::size_t budget,
              const ScanCandidate& candidate) {
  if (budget == 0) return;
  buffer.push_back(candidate);
  if (buffer.size() >= 2 * budget + 16) {
    std::nth_element(buffer.begin(), buffer.begin() + budget - 1, buffer.end(),
                     candidate_before);
    buffer.resize(budget);
  }
}

void sort_candidates(std::vector<ScanCandidate>& v) {
  std::sort(v.begin(), v.end(), candidate_before);
}

// First triplet (i<j<k) of the chunk starting at linear combination index t.
void unrank_triplet(std::int64_t t, int words, int& i, int& j, int& k) {
  i = 0;
  while (true) {
    const std::int64_t tail = static_cast<std::int64_t>(words - 1 - i) *
                              (words - 2 - i) / 2;
    if (t < tail) break;
    t -= tail;
    ++i;
  }
  j = i + 1;
  while (t >= words - 1 - j) {
    t -= words - 1 - j;
    ++j;
  }
  k = j + 1 + static_cast<int>(t);
}

}  // namespace

TripletScanResult analyze_triplets(const PresenceMatrix& matrix,
                                   const TripletScanOptions& options) {
  const int words = static_cast<int>(matrix.word_count());
  if (words < 3) {
    throw std::invalid_argument("analyze_triplets: need at least 3 columns");
  }
  if (options.top_k < 0) {
    throw std::invalid_argument("analyze_triplets: negative top_k");
  }
  const std::int64_t parts = matrix.part_count();
  const std::int64_t total = static_cast<std::int64_t>(words) * (words - 1) *
                             (words - 2) / 6;
  const std::int64_t chunk_count = (total + kChunkSize - 1) / kChunkSize;
  const auto budget = static_cast<std::size_t>(options.top_k);

  // Shared read-only precomputation.
  const std::vector<double> table = plogp_table(parts);
  std::vector<double> h_single(static_cast<std::size_t>(words));
  for (int w = 0; w < words; ++w) {
    const std::int64_t n = matrix.presence_count(w);
    h_single[static_cast<std::size_t>(w)] =
        -table[static_cast<std::size_t>(n)] -
        table[static_cast<std::size_t>(parts - n)];
  }
  // Pairwise co-occurrence counts and mutual informations, flat upper
  // triangle indexed i*words+j.
  std::vector<std::int64_t> pair_present(
      static_cast<std::size_t>(words) * static_cast<std::size_t>(words), 0);
  std::vector<double> pair_mi(pair_present.size(), 0.0);
  for (int i = 0; i < words; ++i) {
    for (int j = i + 1; j < words; ++j) {
      const auto cells = matrix.pair_counts(i, j);
      double h_joint = 0.0;
      for (std::int64_t c : cells) {
        h_joint -= table[static_cast<std::size_t>(c)];
      }
      const std::size_t flat =
          static_cast<std::size_t>(i) * static_cast<std::size_t>(words) +
          static_cast<std::size_t>(j);
      pair_present[flat] = cells[3];
      pair_mi[flat] = h_single[static_cast<std::size_t>(i)] +
                      h_single[static_cast<std::size_t>(j)] - h_joint;
    }
  }
  const auto flat_index = [words](int a, int b) {
    return static_cast<std::size_t>(a) * static_cast<std::size_t>(words) +
           static_cast<std::size_t>(b);
  };

  std::vector<ChunkResult> chunks(static_cast<std::size_t>(chunk_count));
  std::atomic<std::int64_t> next_chunk{0};
  std::atomic<std::int64_t> done_chunks{0};

  const auto worker = [&]() {
    const double parts_d = static_cast<double>(parts);
    while (true) {
      const std::int64_t chunk = next_chunk.fetch_add(1);
      if (chunk >= chunk_count) break;
      const std::int64_t begin = chunk * kChunkSize;
      const std::int64_t end = std::min(total, begin + kChunkSize);
      ChunkResult& result = chunks[static_cast<std::size_t>(chunk)];

      int i, j, k;
      unrank_triplet(begin, words, i, j, k);
      for (std::int64_t t = begin; t < end; ++t) {
        const std::int64_t ni = matrix.presence_count(i);
        const std::int64_t nj = matrix.presence_count(j);
        const std::int64_t nk = matrix.presence_count(k);
        const std::int64_t nij = pair_present[flat_index(i, j)];
        const std::int64_t nik = pair_present[flat_index(i, k)];
        const std::int64_t njk = pair_present[flat_index(j, k)];
        std::int64_t nijk = 0;
        {
          const auto ci = matrix.packed_column(i);
          const auto cj = matrix.packed_column(j);
          const auto ck = matrix.packed_column(k);
          for (std::size_t w = 0; w < ci.size(); ++w) {
            nijk += std::popcount(ci[w] & cj[w] & ck[w]);
          }
        }
        const std::int64_t cells[8] = {
            parts - ni - nj - nk + nij + nik + njk - nijk,
            ni - nij - nik + nijk,
            nj - nij - njk + nijk,
            nij - nijk,
            nk - nik - njk + nijk,
            nik - nijk,
            njk - nijk,
            nijk};
        double h_joint = 0.0;
        Vector8 probs;
        for (int s = 0; s < 8; ++s) {
          h_joint -= table[static_cast<std::size_t>(cells[s])];
          probs[s] = static_cast<double>(cells[s]) / parts_d;
        }
        const double h_sum = h_single[static_cast<std::size_t>(i)] +
                             h_single[static_cast<std::size_t>(j)] +
                             h_single[static_cast<std::size_t>(k)];
        const double total_dependence = h_sum - h_joint;
        const double mi_sum = pair_mi[flat_index(i, j)] +
                              pair_mi[flat_index(i, k)] +
                              pair_mi[flat_index(j, k)];
        const double co_info = mi_sum - total_dependence;

        const double delta = detail::solve_pairwise_delta(probs).first;
        double h_model = 0.0;
        for (int s = 0; s < 8; ++s) {
          const double q = probs[s] - delta * triple_product(s);
          if (q > 0.0) h_model -= q * std::log2(q);
        }
        double triple = h_model - h_joint;
        if (triple < 0.0) triple = 0.0;

        if (triple > result.max_triple) result.max_triple = triple;
        if (triple > options.threshold_bits) {
          ++result.significant;
          result.fraction_sum +=
              total_dependence > 0.0 ? triple / total_dependence : 0.0;
        }
        if (options.scatter_min_multi &&
            total_dependence >= *options.scatter_min_multi) {
          result.scatter.push_back({static_cast<float>(co_info),
                                    static_cast<float>(triple)});
        }
        keep_top(result.by_triple, budget, {triple, i, j, k});
        keep_top(result.by_redundancy, budget, {triple + co_info, i, j, k});
        keep_top(result.by_multi, budget, {total_dependence, i, j, k});

        // next combination in lexicographic order
        ++k;
        if (k == words) {
          ++j;
          if (j == words - 1) {
            ++i;
            j = i + 1;
          }
          k = j + 1;
        }
      }
      const std::int64_t done = done_chunks.fetch_add(1) + 1;
      if (options.progress) {
        options.progress(std::min(total, done * kChunkSize), total);
      }
    }
  };

  const int workers = resolve_workers(options.workers);
  if (workers <= 1 || chunk_count == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& thread : pool) thread.join();
  }

  // Reduce in chunk order: all totals and orderings are independent of the
  // worker count.
  TripletScanResult result;
  result.summary.triplet_count = total;
  std::vector<ScanCandidate> by_triple, by_redundancy, by_multi;
  for (const ChunkResult& chunk : chunks) {
    result.summary.significant_count += chunk.significant;
    result.summary.mean_triple_fraction_significant += chunk.fraction_sum;
    result.summary.max_triple_interaction =
        std::max(result.summary.max_triple_interaction, chunk.max_triple);
    by_triple.insert(by_triple.end(), chunk.by_triple.begin(),
                     chunk.by_triple.end());
    by_redundancy.insert(by_redundancy.end(), chunk.by_redundancy.begin(),
                         chunk.by_redundancy.end());
    by_multi.insert(by_multi.end(), chunk.by_multi.begin(),
                    chunk.by_multi.end());
    result.scatter.insert(result.scatter.end(), chunk.scatter.begin(),
                          chunk.scatter.end());
  }
  if (result.summary.significant_count > 0) {
    result.summary.mean_triple_fraction_significant /=
        static_cast<double>(result.summary.significant_count);
  }

  const auto build_rows = [&](std::vector<ScanCandidate>& candidates) {
    sort_candidates(candidates);
    if (candidates.size() > budget) candidates.resize(budget);
    std::vector<TripletRow> rows;
    rows.reserve(candidates.size());
    for (const ScanCandidate& c : candidates) {
      TripletRow row;
      row.i = c.i;
      row.j = c.j;
      row.k = c.k;
      row.metrics = compute_triplet_metrics(
          empirical_triplet(matrix, c.i, c.j, c.k));
      row.metrics.significant =
          row.metrics.triple_interaction > options.threshold_bits;
      if (row.metrics.significant && options.error_bars) {
        row.metrics.sigma_triple = bayesian_std(
            matrix.joint_counts(c.i, c.j, c.k), triple_interaction_functional());
      }
      row.triple_fraction =
          row.metrics.multi_information > 0.0
              ? row.metrics.triple_interaction / row.metrics.multi_information
              : 0.0;
      rows.push_back(row);
    }
    return rows;
  };
  result.top_triple = build_rows(by_triple);
  result.top_redundancy = build_rows(by_redundancy);
  result.top_multi = build_rows(by_multi);
  return result;
}

MediatorReport analyze_mediators(const PresenceMatrix& matrix,
                                 const MediatorScanOptions& options) {
  if (options.pair_threshold_bits < 0) {
    throw std::invalid_argument("analyze_mediators: negative threshold");
  }
  if (!(options.explained_fraction >= 0.0 &&
        options.explained_fraction <= 1.0)) {
    throw std::invalid_argument(
        "analyze_mediators: explained_fraction must be in [0, 1]");
  }
  const int words = static_cast<int>(matrix.word_count());
  if (options.candidates) {
    for (int c : *options.candidates) {
      if (c < 0 || c >= words) {
        throw std::invalid_argument(
            "analyze_mediators: candidate index out of range");
      }
    }
  }

  // Pairs above threshold, in (i, j) order.
  std::vector<std::pair<int, int>> pairs;
  for (const PairRow& row : analyze_pairs(matrix, options.pair_threshold_bits)) {
    if (row.significant) pairs.emplace_back(row.i, row.j);
  }
  std::sort(pairs.begin(), pairs.end());

  std::vector<MediatorRow> rows(pairs.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    while (true) {
      const std::size_t q = next.fetch_add(1);
      if (q >= pairs.size()) break;
      const auto [i, j] = pairs[q];
      std::vector<int> candidates;
      if (options.candidates) {
        candidates.reserve(options.candidates->size());
        for (int c : *options.candidates) {
          if (c != i && c != j) candidates.push_back(c);
        }
      } else {
        candidates.reserve(static_cast<std::size_t>(words) - 2);
        for (int c = 0; c < words; ++c) {
          if (c != i && c != j) candidates.push_back(c);
        }
      }
      MediatorRow row;
      row.result = irreducible_interaction(matrix, i, j, candidates);
      row.explained_fraction =
          row.result.mutual_information > 0.0
              ? 1.0 - row.result.irreducible / row.result.mutual_information
              : 0.0;
      row.explained = row.explained_fraction > options.explained_fraction &&
                      row.result.best_mediator.has_value();
      rows[q] = std::move(row);
    }
  };
  const int workers = resolve_workers(options.workers);
  if (workers <= 1 || pairs.size() <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& thread : pool) thread.join();
  }

  std::sort(rows.begin(), rows.end(),
            [](const MediatorRow& a, const MediatorRow& b) {
              if (a.result.irreducible != b.result.irreducible) {
                return a.result.irreducible < b.result.irreducible;
              }
              if (a.result.i != b.result.i) return a.result.i < b.result.i;
              return a.result.j < b.result.j;
            });

  std::map<int, std::int64_t> hubs;
  for (const MediatorRow& row : rows) {
    if (row.explained && row.result.best_mediator) {
      ++hubs[*row.result.best_mediator];
    }
  }
  MediatorReport report;
  report.rows = std::move(rows);
  report.hub_counts.assign(hubs.begin(), hubs.end());
  std::sort(report.hub_counts.begin(), report.hub_counts.end(),
            [](const auto& a, const auto& b) {
              if (a.second != b.second) return a.second > b.second;
              return a.first < b.first;
            });
  return report;
}

namespace {

struct Edge {
  int a = 0;
  int b = 0;
  double weight = 0.0;
};

void write_graph(std::ostream& out, const PresenceMatrix& matrix,
                 const std::vector<Edge>& edges, GraphFormat format) {
  if (edges.empty()) {
    throw DataError("export_network: no edges to export");
  }
  std::vector<int> nodes;
  for (const Edge& e : edges) {
    nodes.push_back(e.a);
    nodes.push_back(e.b);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  char buffer[64];
  const auto g6 = [&buffer](double v) {
    std::snprintf(buffer, sizeof(buffer), "%.6g", v);
    return std::string(buffer);
  };
  if (format == GraphFormat::dot) {
    out << "graph words {\n";
    for (int n : nodes) {
      out << "  \"" << matrix.label(n) << "\";\n";
    }
    for (const Edge& e : edges) {
      out << "  \"" << matrix.label(e.a) << "\" -- \"" << matrix.label(e.b)
          << "\" [weight=" << g6(e.weight) << "];\n";
    }
    out << "}\n";
  } else {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
        << "  <key id=\"w\" for=\"edge\" attr.name=\"weight\" "
           "attr.type=\"double\"/>\n"
        << "  <graph id=\"words\" edgedefault=\"undirected\">\n";
    for (int n : nodes) {
      out << "    <node id=\"" << matrix.label(n) << "\"/>\n";
    }
    for (const Edge& e : edges) {
      out << "    <edge source=\"" << matrix.label(e.a) << "\" target=\""
          << matrix.label(e.b) << "\"><data key=\"w\">" << g6(e.weight)
          << "</data></edge>\n";
    }
    out << "  </graph>\n</graphml>\n";
  }
}

}  // namespace

void export_network(std::ostream& out, const PresenceMatrix& matrix,
                    std::span<const PairRow> rows, GraphFormat format) {
  std::vector<Edge> edges;
  edges.reserve(rows.size());
  for (const PairRow& row : rows) {
    edges.push_back({row.i, row.j, row.mi_bits});
  }
  write_graph(out, matrix, edges, format);
}

void export_network(std::ostream& out, const PresenceMatrix& matrix,
                    std::span<const MediatorRow> rows, GraphFormat format) {
  std::vector<Edge> edges;
  edges.reserve(rows.size());
  for (const MediatorRow& row : rows) {
    edges.push_back({row.result.i, row.result.j, row.result.irreducible});
  }
  write_graph(out, matrix, edges, format);
}

}  // namespace trinfo
