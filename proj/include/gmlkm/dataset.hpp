#ifndef GMLKM_DATASET_HPP
#define GMLKM_DATASET_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gmlkm/matrix.hpp"

namespace gmlkm::data {

// n samples observed through m feature views, optionally with ground-truth
// class labels in [0, k).
struct MultiViewDataset {
  std::string name;
  std::vector<Matrix> views;  // view p is n x d_p
  std::optional<std::vector<int>> labels;
  int k = 0;

  std::size_t samples() const { return views.empty() ? 0 : views.front().rows(); }
  std::size_t view_count() const { return views.size(); }

  // Throws std::invalid_argument when the shape invariants are violated:
  // shared row count n >= 2, m >= 1, d_p >= 1, labels (if any) of length n
  // with values in [0, k).
  void validate() const;
};

enum class Normalization { none, unit_row_norm, z_score };

Normalization parse_normalization(std::string_view name);
std::string_view normalization_name(Normalization scheme);

// unit_row_norm: nonzero rows rescaled to Euclidean norm 1.
// z_score: per column, subtract mean and divide by the population standard
//          deviation; constant columns become all-zero.
// Throws on non-finite input.
Matrix normalize_view(const Matrix& x, Normalization scheme);

// On-disk layout: a directory with meta.json ({"name", "k", "m", "views",
// "labels"}), one headerless numeric CSV per view, and an optional
// single-column labels CSV. Doubles are written with shortest round-trip
// formatting, so save followed by load is bitwise exact.
MultiViewDataset load_dataset(const std::filesystem::path& dir);
void save_dataset(const MultiViewDataset& dataset, const std::filesystem::path& dir);

// Deterministic Gaussian-blob fixture: m views of dimension 2+p, unit
// within-cluster deviation, near-balanced labels, per-view cluster centers at
// mutual distance >= separation.
MultiViewDataset synthetic_blobs(std::size_t n, int k, std::size_t m, double separation,
                                 std::uint64_t seed);

// CSV primitives, shared with the kernel/graph debug exports.
Matrix read_csv_matrix(const std::filesystem::path& path);
void write_csv_matrix(const Matrix& m, const std::filesystem::path& path);

}  // namespace gmlkm::data

#endif
