#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace trinfo {

using BitMatrix =
    Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Binary presence/absence matrix: one row per part, one column per selected
/// word. Entry (p, w) is 1 iff word w occurs at least once in part p.
/// Immutable after construction and safe to share across threads.
class PresenceMatrix {
 public:
  PresenceMatrix(BitMatrix bits, std::vector<std::string> column_labels);

  Eigen::Index part_count() const { return bits_.rows(); }
  Eigen::Index word_count() const { return bits_.cols(); }

  bool at(Eigen::Index part, Eigen::Index word) const {
    return bits_(part, word) != 0;
  }

  const BitMatrix& bits() const { return bits_; }
  const std::vector<std::string>& column_labels() const { return labels_; }
  const std::string& label(Eigen::Index word) const { return labels_[word]; }

  /// Number of parts containing the word.
  std::int64_t presence_count(Eigen::Index word) const {
    return counts_[word];
  }
  double presence_probability(Eigen::Index word) const {
    return static_cast<double>(counts_[word]) /
           static_cast<double>(bits_.rows());
  }

  /// Column packed into 64-bit words, part 0 in bit 0 of word 0; used by the
  /// counting kernels.
  std::span<const std::uint64_t> packed_column(Eigen::Index word) const {
    return {packed_.data() + word * words_per_column_,
            static_cast<std::size_t>(words_per_column_)};
  }
  Eigen::Index words_per_column() const { return words_per_column_; }

  /// Joint state counts of two columns; the state indexes x_i as bit 0 and
  /// x_j as bit 1.
  std::array<std::int64_t, 4> pair_counts(Eigen::Index i,
                                          Eigen::Index j) const;

  /// Joint state counts of three columns, bit order (i, j, k).
  std::array<std::int64_t, 8> joint_counts(Eigen::Index i, Eigen::Index j,
                                           Eigen::Index k) const;

  /// CSV: header row of column labels, then one 0/1 row per part.
  void write_csv(std::ostream& out) const;
  static PresenceMatrix read_csv(std::istream& in);

 private:
  BitMatrix bits_;
  std::vector<std::string> labels_;
  std::vector<std::int64_t> counts_;
  std::vector<std::uint64_t> packed_;
  Eigen::Index words_per_column_ = 0;
};

}  // namespace trinfo
