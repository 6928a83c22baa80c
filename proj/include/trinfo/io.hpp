#pragma once

#include "trinfo/analysis.hpp"
#include "trinfo/synthetic.hpp"

#include <iosfwd>
#include <span>
#include <string>

namespace trinfo {

// Table serialization. Column names are part of the output contract and are
// documented in the README; all floating-point values are printed with six
// significant digits.

std::string format_g6(double value);

void write_singles_csv(std::ostream& out, const SinglesReport& report);
std::string singles_to_json(const SinglesReport& report);

void write_pairs_csv(std::ostream& out, const PresenceMatrix& matrix,
                     std::span<const PairRow> rows);
std::string pairs_to_json(const PresenceMatrix& matrix,
                          std::span<const PairRow> rows);

void write_triplets_csv(std::ostream& out, const PresenceMatrix& matrix,
                        std::span<const TripletRow> rows);
std::string triplets_to_json(const PresenceMatrix& matrix,
                             std::span<const TripletRow> rows);

void write_scatter_csv(std::ostream& out, std::span<const ScatterPoint> points);

void write_mediators_csv(std::ostream& out, const PresenceMatrix& matrix,
                         std::span<const MediatorRow> rows);
std::string mediators_to_json(const PresenceMatrix& matrix,
                              std::span<const MediatorRow> rows);

void write_hubs_csv(std::ostream& out, const PresenceMatrix& matrix,
                    std::span<const std::pair<int, std::int64_t>> hubs);

void write_beta_sweep_csv(std::ostream& out,
                          std::span<const BetaSweepRow> rows);

}  // namespace trinfo
