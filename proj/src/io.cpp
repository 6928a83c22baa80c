#include "trinfo/io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <ostream>

namespace trinfo {

namespace {

using nlohmann::json;

const char* outlier_name(Outlier o) {
  switch (o) {
    case Outlier::above: return "above";
    case Outlier::below: return "below";
    case Outlier::inside: return "inside";
  }
  return "inside";
}

const char* polarity_name(PairPolarity p) {
  return p == PairPolarity::exclude ? "exclude" : "co-occur";
}

// Round to six significant digits so JSON output matches the CSV contract.
double round6(double v) {
  if (v == 0.0 || !std::isfinite(v)) return v;
  char buffer[48];
  std::snprintf(buffer, sizeof(buffer), "%.6g", v);
  return std::strtod(buffer, nullptr);
}

}  // namespace

std::string format_g6(double value) {
  char buffer[48];
  std::snprintf(buffer, sizeof(buffer), "%.6g", value);
  return buffer;
}

void write_singles_csv(std::ostream& out, const SinglesReport& report) {
  out << "word,occurrences,presence_probability,entropy,binomial_entropy,"
         "entropy_gap,band_lo,band_hi,outlier\n";
  for (const SinglesRow& r : report.rows) {
    out << r.word << ',' << r.occurrences << ','
        << format_g6(r.presence_probability) << ',' << format_g6(r.entropy_bits)
        << ',' << format_g6(r.binomial_entropy_bits) << ','
        << format_g6(r.entropy_gap_bits) << ',' << format_g6(r.band_lo) << ','
        << format_g6(r.band_hi) << ',' << outlier_name(r.outlier) << '\n';
  }
}

std::string singles_to_json(const SinglesReport& report) {
  json rows = json::array();
  for (const SinglesRow& r : report.rows) {
    rows.push_back({{"word", r.word},
                    {"occurrences", r.occurrences},
                    {"presence_probability", round6(r.presence_probability)},
                    {"entropy", round6(r.entropy_bits)},
                    {"binomial_entropy", round6(r.binomial_entropy_bits)},
                    {"entropy_gap", round6(r.entropy_gap_bits)},
                    {"band_lo", round6(r.band_lo)},
                    {"band_hi", round6(r.band_hi)},
                    {"outlier", outlier_name(r.outlier)}});
  }
  json doc;
  doc["rows"] = std::move(rows);
  doc["fraction_above"] = round6(report.fraction_above);
  doc["fraction_below"] = round6(report.fraction_below);
  doc["band_trials"] = report.options.band_trials;
  doc["percentiles"] = {report.options.percentiles.first,
                        report.options.percentiles.second};
  doc["seed"] = report.options.seed;
  return doc.dump(2);
}

void write_pairs_csv(std::ostream& out, const PresenceMatrix& matrix,
                     std::span<const PairRow> rows) {
  out << "word_i,word_j,mutual_information,entropy_i,entropy_j,significant,"
         "polarity\n";
  for (const PairRow& r : rows) {
    out << matrix.label(r.i) << ',' << matrix.label(r.j) << ','
        << format_g6(r.mi_bits) << ',' << format_g6(r.h_i) << ','
        << format_g6(r.h_j) << ',' << (r.significant ? 1 : 0) << ','
        << polarity_name(r.polarity) << '\n';
  }
}

std::string pairs_to_json(const PresenceMatrix& matrix,
                          std::span<const PairRow> rows) {
  json arr = json::array();
  for (const PairRow& r : rows) {
    arr.push_back({{"word_i", matrix.label(r.i)},
                   {"word_j", matrix.label(r.j)},
                   {"mutual_information", round6(r.mi_bits)},
                   {"entropy_i", round6(r.h_i)},
                   {"entropy_j", round6(r.h_j)},
                   {"significant", r.significant},
                   {"polarity", polarity_name(r.polarity)}});
  }
  return arr.dump(2);
}

void write_triplets_csv(std::ostream& out, const PresenceMatrix& matrix,
                        std::span<const TripletRow> rows) {
  out << "rank,word_i,word_j,word_k,triple_interaction,co_information,"
         "multi_information,pairwise_total,triple_fraction,xor_sign,"
         "significant,sigma_triple,mi_ij,mi_jk,mi_ki,entropy_i,entropy_j,"
         "entropy_k\n";
  int rank = 1;
  for (const TripletRow& r : rows) {
    const TripletMetrics& m = r.metrics;
    out << rank++ << ',' << matrix.label(r.i) << ',' << matrix.label(r.j)
        << ',' << matrix.label(r.k) << ',' << format_g6(m.triple_interaction)
        << ',' << format_g6(m.co_information) << ','
        << format_g6(m.multi_information) << ',' << format_g6(m.pairwise_total)
        << ',' << format_g6(r.triple_fraction) << ',' << m.xor_sign << ','
        << (m.significant ? 1 : 0) << ',' << format_g6(m.sigma_triple) << ','
        << format_g6(m.i12) << ',' << format_g6(m.i23) << ','
        << format_g6(m.i31) << ',' << format_g6(m.h1) << ','
        << format_g6(m.h2) << ',' << format_g6(m.h3) << '\n';
  }
}

std::string triplets_to_json(const PresenceMatrix& matrix,
                             std::span<const TripletRow> rows) {
  json arr = json::array();
  int rank = 1;
  for (const TripletRow& r : rows) {
    const TripletMetrics& m = r.metrics;
    arr.push_back({{"rank", rank++},
                   {"word_i", matrix.label(r.i)},
                   {"word_j", matrix.label(r.j)},
                   {"word_k", matrix.label(r.k)},
                   {"triple_interaction", round6(m.triple_interaction)},
                   {"co_information", round6(m.co_information)},
                   {"multi_information", round6(m.multi_information)},
                   {"pairwise_total", round6(m.pairwise_total)},
                   {"triple_fraction", round6(r.triple_fraction)},
                   {"xor_sign", m.xor_sign},
                   {"significant", m.significant},
                   {"sigma_triple", round6(m.sigma_triple)},
                   {"mi_ij", round6(m.i12)},
                   {"mi_jk", round6(m.i23)},
                   {"mi_ki", round6(m.i31)},
                   {"entropy_i", round6(m.h1)},
                   {"entropy_j", round6(m.h2)},
                   {"entropy_k", round6(m.h3)}});
  }
  return arr.dump(2);
}

void write_scatter_csv(std::ostream& out,
                       std::span<const ScatterPoint> points) {
  out << "co_information,triple_interaction\n";
  for (const ScatterPoint& p : points) {
    out << format_g6(p.co_information) << ','
        << format_g6(p.triple_interaction) << '\n';
  }
}

void write_mediators_csv(std::ostream& out, const PresenceMatrix& matrix,
                         std::span<const MediatorRow> rows) {
  out << "i_word,j_word,I_ij,delta_ij,mediator,explained_fraction\n";
  for (const MediatorRow& r : rows) {
    out << matrix.label(r.result.i) << ',' << matrix.label(r.result.j) << ','
        << format_g6(r.result.mutual_information) << ','
        << format_g6(r.result.irreducible) << ','
        << (r.result.best_mediator ? matrix.label(*r.result.best_mediator)
                                   : std::string("none"))
        << ',' << format_g6(r.explained_fraction) << '\n';
  }
}

std::string mediators_to_json(const PresenceMatrix& matrix,
                              std::span<const MediatorRow> rows) {
  json arr = json::array();
  for (const MediatorRow& r : rows) {
    json row = {{"i_word", matrix.label(r.result.i)},
                {"j_word", matrix.label(r.result.j)},
                {"I_ij", round6(r.result.mutual_information)},
                {"delta_ij", round6(r.result.irreducible)},
                {"explained_fraction", round6(r.explained_fraction)},
                {"explained", r.explained}};
    if (r.result.best_mediator) {
      row["mediator"] = matrix.label(*r.result.best_mediator);
    } else {
      row["mediator"] = nullptr;
    }
    arr.push_back(std::move(row));
  }
  return arr.dump(2);
}

void write_hubs_csv(std::ostream& out, const PresenceMatrix& matrix,
                    std::span<const std::pair<int, std::int64_t>> hubs) {
  out << "mediator,explained_pairs\n";
  for (const auto& [word, count] : hubs) {
    out << matrix.label(word) << ',' << count << '\n';
  }
}

void write_beta_sweep_csv(std::ostream& out,
                          std::span<const BetaSweepRow> rows) {
  out << "beta,multi_information,pairwise_total,triple_interaction\n";
  for (const BetaSweepRow& r : rows) {
    out << format_g6(r.beta) << ',' << format_g6(r.multi_information) << ','
        << format_g6(r.pairwise_total) << ','
        << format_g6(r.triple_interaction) << '\n';
  }
}

}  // namespace trinfo
