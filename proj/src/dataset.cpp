#include "admmnet/dataset.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>

namespace admmnet {

namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

std::uint32_t read_u32_be(std::istream& in, const std::string& path) {
  unsigned char buf[4];
  if (!in.read(reinterpret_cast<char*>(buf), 4)) {
    throw std::runtime_error("idx: truncated header in " + path);
  }
  return (std::uint32_t(buf[0]) << 24) | (std::uint32_t(buf[1]) << 16) |
         (std::uint32_t(buf[2]) << 8) | std::uint32_t(buf[3]);
}

void write_u32_be(std::ostream& out, std::uint32_t v) {
  const unsigned char buf[4] = {
      static_cast<unsigned char>(v >> 24), static_cast<unsigned char>(v >> 16),
      static_cast<unsigned char>(v >> 8), static_cast<unsigned char>(v)};
  out.write(reinterpret_cast<const char*>(buf), 4);
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("idx: cannot open " + path);
  return in;
}

}  // namespace

Matrix load_idx_images(const std::string& path) {
  std::ifstream in = open_input(path);
  const std::uint32_t magic = read_u32_be(in, path);
  if (magic != kImageMagic) {
    throw std::runtime_error("idx: bad image magic in " + path + " (expected " +
                             std::to_string(kImageMagic) + ", got " +
                             std::to_string(magic) + ")");
  }
  const std::uint32_t count = read_u32_be(in, path);
  const std::uint32_t rows = read_u32_be(in, path);
  const std::uint32_t cols = read_u32_be(in, path);
  const std::size_t pixels =
      std::size_t(count) * std::size_t(rows) * std::size_t(cols);
  std::vector<unsigned char> raw(pixels);
  if (!in.read(reinterpret_cast<char*>(raw.data()),
               static_cast<std::streamsize>(pixels))) {
    throw std::runtime_error("idx: truncated image payload in " + path);
  }
  Matrix out(count, std::size_t(rows) * cols);
  const double scale = 1.0 / 255.0;
  for (Index q = 0; q < out.rows(); ++q) {
    const std::size_t base = std::size_t(q) * rows * cols;
    for (Index j = 0; j < out.cols(); ++j) {
      out(q, j) = scale * raw[base + std::size_t(j)];
    }
  }
  return out;
}

std::vector<std::uint8_t> load_idx_labels(const std::string& path) {
  std::ifstream in = open_input(path);
  const std::uint32_t magic = read_u32_be(in, path);
  if (magic != kLabelMagic) {
    throw std::runtime_error("idx: bad label magic in " + path + " (expected " +
                             std::to_string(kLabelMagic) + ", got " +
                             std::to_string(magic) + ")");
  }
  const std::uint32_t count = read_u32_be(in, path);
  std::vector<std::uint8_t> labels(count);
  if (!in.read(reinterpret_cast<char*>(labels.data()), count)) {
    throw std::runtime_error("idx: truncated label payload in " + path);
  }
  return labels;
}

void write_idx_images(const std::string& path, const Matrix& images,
                      Index img_rows, Index img_cols) {
  if (img_rows * img_cols != images.cols()) {
    throw std::invalid_argument("idx: image dims " + std::to_string(img_rows) +
                                "x" + std::to_string(img_cols) +
                                " do not match " +
                                std::to_string(images.cols()) + " columns");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("idx: cannot write " + path);
  write_u32_be(out, kImageMagic);
  write_u32_be(out, static_cast<std::uint32_t>(images.rows()));
  write_u32_be(out, static_cast<std::uint32_t>(img_rows));
  write_u32_be(out, static_cast<std::uint32_t>(img_cols));
  for (Index q = 0; q < images.rows(); ++q) {
    for (Index j = 0; j < images.cols(); ++j) {
      const long byte = std::lround(images(q, j) * 255.0);
      if (byte < 0 || byte > 255) {
        throw std::invalid_argument("idx: pixel out of [0,1] range");
      }
      const unsigned char c = static_cast<unsigned char>(byte);
      out.write(reinterpret_cast<const char*>(&c), 1);
    }
  }
}

void write_idx_labels(const std::string& path,
                      const std::vector<std::uint8_t>& labels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("idx: cannot write " + path);
  write_u32_be(out, kLabelMagic);
  write_u32_be(out, static_cast<std::uint32_t>(labels.size()));
  out.write(reinterpret_cast<const char*>(labels.data()),
            static_cast<std::streamsize>(labels.size()));
}

Matrix one_hot(const std::vector<std::uint8_t>& labels, Index n_out) {
  Matrix out = Matrix::Zero(static_cast<Index>(labels.size()), n_out);
  for (std::size_t q = 0; q < labels.size(); ++q) {
    if (labels[q] >= n_out) {
      throw std::invalid_argument("one_hot: label " + std::to_string(labels[q]) +
                                  " out of range [0," + std::to_string(n_out) +
                                  ")");
    }
    out(static_cast<Index>(q), labels[q]) = 1.0;
  }
  return out;
}

std::vector<Batch> partition(const Batch& data, Index batch_size,
                             std::uint64_t seed, bool shuffle) {
  if (batch_size <= 0) {
    throw std::invalid_argument("partition: batch size must be positive");
  }
  const Index m = data.samples();
  std::vector<Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), Index{0});
  if (shuffle) {
    std::mt19937_64 rng(seed);
    for (Index i = m - 1; i > 0; --i) {
      const Index j = static_cast<Index>(rng() % std::uint64_t(i + 1));
      std::swap(order[i], order[j]);
    }
  }
  std::vector<Batch> batches;
  for (Index start = 0; start < m; start += batch_size) {
    const Index size = std::min(batch_size, m - start);
    Batch b;
    b.d.resize(size, data.d.cols());
    b.o.resize(size, data.o.cols());
    for (Index r = 0; r < size; ++r) {
      b.d.row(r) = data.d.row(order[start + r]);
      b.o.row(r) = data.o.row(order[start + r]);
    }
    batches.push_back(std::move(b));
  }
  return batches;
}

Dataset load_mnist(const std::string& dir) {
  const std::string base = dir.empty() ? std::string(".") : dir;
  Dataset ds;
  ds.train.d = load_idx_images(base + "/train-images-idx3-ubyte");
  const auto train_labels = load_idx_labels(base + "/train-labels-idx1-ubyte");
  ds.test.d = load_idx_images(base + "/t10k-images-idx3-ubyte");
  const auto test_labels = load_idx_labels(base + "/t10k-labels-idx1-ubyte");
  if (ds.train.d.rows() != static_cast<Index>(train_labels.size())) {
    throw std::runtime_error("mnist: train image/label counts differ (" +
                             std::to_string(ds.train.d.rows()) + " vs " +
                             std::to_string(train_labels.size()) + ")");
  }
  if (ds.test.d.rows() != static_cast<Index>(test_labels.size())) {
    throw std::runtime_error("mnist: test image/label counts differ (" +
                             std::to_string(ds.test.d.rows()) + " vs " +
                             std::to_string(test_labels.size()) + ")");
  }
  ds.train.o = one_hot(train_labels, 10);
  ds.test.o = one_hot(test_labels, 10);
  return ds;
}

}  // namespace admmnet
