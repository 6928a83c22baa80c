#include "trinfo/presence_matrix.hpp"

#include "trinfo/errors.hpp"

#include <bit>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace trinfo {

PresenceMatrix::PresenceMatrix(BitMatrix bits,
                               std::vector<std::string> column_labels)
    : bits_(std::move(bits)), labels_(std::move(column_labels)) {
  if (static_cast<Eigen::Index>(labels_.size()) != bits_.cols()) {
    throw std::invalid_argument("label count does not match column count");
  }
  const Eigen::Index parts = bits_.rows();
  const Eigen::Index words = bits_.cols();
  counts_.assign(words, 0);
  words_per_column_ = (parts + 63) / 64;
  packed_.assign(static_cast<std::size_t>(words * words_per_column_), 0);
  for (Eigen::Index w = 0; w < words; ++w) {
    std::int64_t count = 0;
    std::uint64_t* column = packed_.data() + w * words_per_column_;
    for (Eigen::Index p = 0; p < parts; ++p) {
      if (bits_(p, w)) {
        ++count;
        column[p >> 6] |= std::uint64_t{1} << (p & 63);
      }
    }
    counts_[w] = count;
  }
}

namespace {

std::int64_t and_popcount(std::span<const std::uint64_t> a,
                          std::span<const std::uint64_t> b) {
  std::int64_t total = 0;
  for (std::size_t w = 0; w < a.size(); ++w) {
    total += std::popcount(a[w] & b[w]);
  }
  return total;
}

std::int64_t and_popcount(std::span<const std::uint64_t> a,
                          std::span<const std::uint64_t> b,
                          std::span<const std::uint64_t> c) {
  std::int64_t total = 0;
  for (std::size_t w = 0; w < a.size(); ++w) {
    total += std::popcount(a[w] & b[w] & c[w]);
  }
  return total;
}

}  // namespace

std::array<std::int64_t, 4> PresenceMatrix::pair_counts(Eigen::Index i,
                                                        Eigen::Index j) const {
  const std::int64_t parts = part_count();
  const std::int64_t ni = counts_[i];
  const std::int64_t nj = counts_[j];
  const std::int64_t nij = and_popcount(packed_column(i), packed_column(j));
  return {parts - ni - nj + nij, ni - nij, nj - nij, nij};
}

std::array<std::int64_t, 8> PresenceMatrix::joint_counts(
    Eigen::Index i, Eigen::Index j, Eigen::Index k) const {
  const std::int64_t parts = part_count();
  const std::int64_t ni = counts_[i];
  const std::int64_t nj = counts_[j];
  const std::int64_t nk = counts_[k];
  const auto ci = packed_column(i);
  const auto cj = packed_column(j);
  const auto ck = packed_column(k);
  const std::int64_t nij = and_popcount(ci, cj);
  const std::int64_t nik = and_popcount(ci, ck);
  const std::int64_t njk = and_popcount(cj, ck);
  const std::int64_t nijk = and_popcount(ci, cj, ck);
  return {parts - ni - nj - nk + nij + nik + njk - nijk,
          ni - nij - nik + nijk,
          nj - nij - njk + nijk,
          nij - nijk,
          nk - nik - njk + nijk,
          nik - nijk,
          njk - nijk,
          nijk};
}

void PresenceMatrix::write_csv(std::ostream& out) const {
  for (Eigen::Index w = 0; w < word_count(); ++w) {
    if (w > 0) out << ',';
    out << labels_[w];
  }
  out << '\n';
  for (Eigen::Index p = 0; p < part_count(); ++p) {
    for (Eigen::Index w = 0; w < word_count(); ++w) {
      if (w > 0) out << ',';
      out << (bits_(p, w) ? '1' : '0');
    }
    out << '\n';
  }
}

PresenceMatrix PresenceMatrix::read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw DataError("presence matrix CSV: missing header row");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> labels;
  {
    std::stringstream header(line);
    std::string cell;
    while (std::getline(header, cell, ',')) labels.push_back(cell);
  }
  if (labels.empty()) {
    throw DataError("presence matrix CSV: empty header row");
  }
  std::vector<std::vector<std::uint8_t>> rows;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::uint8_t> row;
    row.reserve(labels.size());
    std::stringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      if (cell == "0") {
        row.push_back(0);
      } else if (cell == "1") {
        row.push_back(1);
      } else {
        throw DataError("presence matrix CSV: line " +
                        std::to_string(line_number) +
                        ": cell is not 0 or 1: '" + cell + "'");
      }
    }
    if (row.size() != labels.size()) {
      throw DataError("presence matrix CSV: line " +
                      std::to_string(line_number) + ": expected " +
                      std::to_string(labels.size()) + " cells, got " +
                      std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw DataError("presence matrix CSV: no data rows");
  }
  BitMatrix bits(static_cast<Eigen::Index>(rows.size()),
                 static_cast<Eigen::Index>(labels.size()));
  for (Eigen::Index p = 0; p < bits.rows(); ++p) {
    for (Eigen::Index w = 0; w < bits.cols(); ++w) {
      bits(p, w) = rows[static_cast<std::size_t>(p)][static_cast<std::size_t>(w)];
    }
  }
  return PresenceMatrix(std::move(bits), std::move(labels));
}

}  // namespace trinfo
