#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "admmnet/matrix.hpp"

namespace admmnet {

// One block of samples: inputs D (pixels scaled to [0,1]) and one-hot
// targets O, row q of each forming an input-output pair.
struct Batch {
  Matrix d;
  Matrix o;

  Index samples() const { return d.rows(); }
};

struct Dataset {
  Batch train;
  Batch test;
};

// IDX readers (big-endian header, unsigned-byte payload). Images are
// flattened row-major and scaled by 1/255.
Matrix load_idx_images(const std::string& path);
std::vector<std::uint8_t> load_idx_labels(const std::string& path);

// IDX writers for test fixtures. Image values are expected on the 1/255
// grid so that a write/read round trip is exact.
void write_idx_images(const std::string& path, const Matrix& images,
                      Index img_rows, Index img_cols);
void write_idx_labels(const std::string& path,
                      const std::vector<std::uint8_t>& labels);

Matrix one_hot(const std::vector<std::uint8_t>& labels, Index n_out);

// Splits a batch into minibatches of batch_size rows (the last one may be
// short). With shuffle the sample order is permuted once, seeded.
std::vector<Batch> partition(const Batch& data, Index batch_size,
                             std::uint64_t seed, bool shuffle);

// Loads the four standard MNIST files from dir and pairs images with
// labels; throws if the per-file sample counts disagree.
Dataset load_mnist(const std::string& dir);

}  // namespace admmnet
