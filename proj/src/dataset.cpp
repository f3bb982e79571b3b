#include "gmlkm/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "gmlkm/rng.hpp"
#include "gmlkm/simd/kernels.hpp"

namespace gmlkm::data {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_cell(std::string_view cell, const std::filesystem::path& path, std::size_t line,
                  std::size_t col) {
  cell = trim(cell);
  double value = 0.0;
  const auto result = std::from_chars(cell.begin(), cell.end(), value);
  if (result.ec != std::errc() || result.ptr != cell.end()) {
    std::ostringstream msg;
    msg << path.string() << ": non-numeric cell at line " << line + 1 << ", column " << col + 1;
    fail(msg.str());
  }
  return value;
}

void append_double(std::string& out, double v) {
  char buf[32];
  const auto result = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, result.ptr);
}

std::vector<int> read_labels_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open labels file " + path.string());
  std::vector<int> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    const std::string_view cell = trim(line);
    if (cell.empty()) {
      ++line_no;
      continue;
    }
    int value = 0;
    const auto result = std::from_chars(cell.begin(), cell.end(), value);
    if (result.ec != std::errc() || result.ptr != cell.end()) {
      std::ostringstream msg;
      msg << path.string() << ": non-integer label at line " << line_no + 1;
      fail(msg.str());
    }
    labels.push_back(value);
    ++line_no;
  }
  return labels;
}

}  // namespace

void MultiViewDataset::validate() const {
  if (views.empty()) throw std::invalid_argument("dataset '" + name + "': no views");
  if (k < 1) throw std::invalid_argument("dataset '" + name + "': k must be positive");
  const std::size_t n = views.front().rows();
  if (n < 2) throw std::invalid_argument("dataset '" + name + "': needs at least 2 samples");
  for (std::size_t p = 0; p < views.size(); ++p) {
    if (views[p].rows() != n) {
      std::ostringstream msg;
      msg << "dataset '" << name << "': row-count mismatch, view 0 has " << n << " rows but view "
          << p << " has " << views[p].rows();
      throw std::invalid_argument(msg.str());
    }
    if (views[p].cols() < 1)
      throw std::invalid_argument("dataset '" + name + "': view with zero columns");
  }
  if (labels) {
    if (labels->size() != n)
      throw std::invalid_argument("dataset '" + name + "': label count differs from sample count");
    for (std::size_t i = 0; i < labels->size(); ++i) {
      const int y = (*labels)[i];
      if (y < 0 || y >= k) {
        std::ostringstream msg;
        msg << "dataset '" << name << "': label " << y << " at row " << i << " out of range [0, "
            << k << ")";
        throw std::invalid_argument(msg.str());
      }
    }
  }
}

Normalization parse_normalization(std::string_view name) {
  if (name == "none") return Normalization::none;
  if (name == "unit-row-norm") return Normalization::unit_row_norm;
  if (name == "z-score") return Normalization::z_score;
  throw std::invalid_argument("unknown normalization scheme: " + std::string(name));
}

std::string_view normalization_name(Normalization scheme) {
  switch (scheme) {
    case Normalization::none: return "none";
    case Normalization::unit_row_norm: return "unit-row-norm";
    case Normalization::z_score: return "z-score";
  }
  return "none";
}

Matrix normalize_view(const Matrix& x, Normalization scheme) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!std::isfinite(x.data()[i]))
      throw std::invalid_argument("normalize_view: non-finite entry");

  Matrix out = x;
  const std::size_t n = x.rows(), d = x.cols();
  switch (scheme) {
    case Normalization::none:
      break;
    case Normalization::unit_row_norm:
      for (std::size_t i = 0; i < n; ++i) {
        const double norm = std::sqrt(simd::sumsq(out.row(i), d));
        if (norm > 0.0) simd::scal(1.0 / norm, out.row(i), d);
      }
      break;
    case Normalization::z_score:
      for (std::size_t j = 0; j < d; ++j) {
        double lo = x(0, j), hi = x(0, j), total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          lo = std::min(lo, x(i, j));
          hi = std::max(hi, x(i, j));
          total += x(i, j);
        }
        if (lo == hi) {
          // constant column maps to zero rather than dividing by ~0
          for (std::size_t i = 0; i < n; ++i) out(i, j) = 0.0;
          continue;
        }
        const double mean = total / static_cast<double>(n);
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double c = x(i, j) - mean;
          var += c * c;
        }
        var /= static_cast<double>(n);  // population variance
        const double inv = 1.0 / std::sqrt(var);
        for (std::size_t i = 0; i < n; ++i) out(i, j) = (x(i, j) - mean) * inv;
      }
      break;
  }
  return out;
}

Matrix read_csv_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) {
      ++line_no;
      continue;
    }
    std::vector<double> row;
    std::size_t start = 0, col = 0;
    const std::string_view view(line);
    while (true) {
      const std::size_t comma = view.find(',', start);
      const std::string_view cell =
          comma == std::string_view::npos ? view.substr(start) : view.substr(start, comma - start);
      row.push_back(parse_cell(cell, path, line_no, col));
      ++col;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      std::ostringstream msg;
      msg << path.string() << ": ragged row at line " << line_no + 1;
      fail(msg.str());
    }
    rows.push_back(std::move(row));
    ++line_no;
  }
  if (rows.empty()) return {};
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    std::copy(rows[i].begin(), rows[i].end(), m.row(i));
  return m;
}

void write_csv_matrix(const Matrix& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail("cannot write " + path.string());
  std::string line;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    line.clear();
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) line.push_back(',');
      append_double(line, m(i, j));
    }
    line.push_back('\n');
    out << line;
  }
  if (!out) fail("failed writing " + path.string());
}

MultiViewDataset load_dataset(const std::filesystem::path& dir) {
  const auto meta_path = dir / "meta.json";
  std::ifstream meta_in(meta_path);
  if (!meta_in) fail("cannot open " + meta_path.string());
  json meta;
  try {
    meta = json::parse(meta_in);
  } catch (const json::parse_error& e) {
    fail(meta_path.string() + ": " + e.what());
  }

  MultiViewDataset out;
  try {
    out.name = meta.at("name").get<std::string>();
    out.k = meta.at("k").get<int>();
    for (const auto& file : meta.at("views")) {
      const auto path = dir / file.get<std::string>();
      if (!std::filesystem::exists(path)) fail("missing view file " + path.string());
      out.views.push_back(read_csv_matrix(path));
    }
    if (!meta.at("labels").is_null()) {
      const auto path = dir / meta.at("labels").get<std::string>();
      if (!std::filesystem::exists(path)) fail("missing labels file " + path.string());
      out.labels = read_labels_csv(path);
    }
    if (meta.contains("m") && meta.at("m").get<std::size_t>() != out.views.size())
      fail(meta_path.string() + ": 'm' does not match the number of view files");
  } catch (const json::exception& e) {
    fail(meta_path.string() + ": " + e.what());
  }

  out.validate();
  return out;
}

void save_dataset(const MultiViewDataset& dataset, const std::filesystem::path& dir) {
  dataset.validate();
  std::filesystem::create_directories(dir);

  json meta;
  meta["name"] = dataset.name;
  meta["k"] = dataset.k;
  meta["m"] = dataset.views.size();
  json view_names = json::array();
  for (std::size_t p = 0; p < dataset.views.size(); ++p) {
    const std::string file = "view_" + std::to_string(p) + ".csv";
    write_csv_matrix(dataset.views[p], dir / file);
    view_names.push_back(file);
  }
  meta["views"] = view_names;
  if (dataset.labels) {
    std::ofstream out(dir / "labels.csv");
    if (!out) fail("cannot write " + (dir / "labels.csv").string());
    for (const int y : *dataset.labels) out << y << '\n';
    meta["labels"] = "labels.csv";
  } else {
    meta["labels"] = nullptr;
  }

  std::ofstream meta_out(dir / "meta.json");
  if (!meta_out) fail("cannot write " + (dir / "meta.json").string());
  meta_out << meta.dump(2) << '\n';
}

namespace {

// Orthonormal basis from a Gaussian draw (Gram-Schmidt); deterministic.
Matrix random_rotation(std::size_t d, Rng& rng) {
  Matrix q(d, d);
  for (std::size_t c = 0; c < d; ++c) {
    std::vector<double> v(d);
    double norm_sq = 0.0;
    do {
      for (std::size_t i = 0; i < d; ++i) v[i] = rng.normal();
      for (std::size_t prev = 0; prev < c; ++prev) {
        double proj = 0.0;
        for (std::size_t i = 0; i < d; ++i) proj += v[i] * q(i, prev);
        for (std::size_t i = 0; i < d; ++i) v[i] -= proj * q(i, prev);
      }
      norm_sq = 0.0;
      for (const double x : v) norm_sq += x * x;
    } while (norm_sq < 1e-12);
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (std::size_t i = 0; i < d; ++i) q(i, c) = v[i] * inv;
  }
  return q;
}

}  // namespace

MultiViewDataset synthetic_blobs(std::size_t n, int k, std::size_t m, double separation,
                                 std::uint64_t seed) {
  if (k < 1 || n < static_cast<std::size_t>(k))
    throw std::invalid_argument("synthetic_blobs: need n >= k >= 1");
  if (m < 1) throw std::invalid_argument("synthetic_blobs: need m >= 1");
  if (!(separation > 0.0)) throw std::invalid_argument("synthetic_blobs: separation must be > 0");

  MultiViewDataset out;
  out.name = "blobs_n" + std::to_string(n) + "_k" + std::to_string(k) + "_m" + std::to_string(m);
  out.k = k;

  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(i % static_cast<std::size_t>(k));
  out.labels = labels;

  // centers on a planar grid with spacing = separation, so the minimum
  // pairwise center distance equals separation (unit within-cluster std)
  const std::size_t grid = static_cast<std::size_t>(
      std::ceil(std::sqrt(static_cast<double>(k))));

  Rng rng(seed);
  for (std::size_t p = 0; p < m; ++p) {
    const std::size_t d = 2 + p;
    const Matrix rotation = random_rotation(d, rng);
    Matrix centers(static_cast<std::size_t>(k), d);
    for (std::size_t c = 0; c < static_cast<std::size_t>(k); ++c) {
      std::vector<double> base(d, 0.0);
      base[0] = separation * static_cast<double>(c % grid);
      base[1] = separation * static_cast<double>(c / grid);
      for (std::size_t i = 0; i < d; ++i) {
        double v = 0.0;
        for (std::size_t j = 0; j < d; ++j) v += rotation(i, j) * base[j];
        centers(c, i) = v;
      }
    }
    Matrix view(n, d);
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = static_cast<std::size_t>(labels[i]);
      for (std::size_t j = 0; j < d; ++j) view(i, j) = centers(c, j) + rng.normal();
    }
    out.views.push_back(std::move(view));
  }

  out.validate();
  return out;
}

}  // namespace gmlkm::data
