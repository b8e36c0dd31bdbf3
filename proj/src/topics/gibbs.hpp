#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "lexis/topics.hpp"

namespace lexis::detail {

// Documents as word indexes into a vocabulary of size `v`.
struct CodedCorpus {
  std::size_t v = 0;
  std::vector<std::vector<std::uint32_t>> docs;
};

struct GibbsResult {
  Matrix phi;
  Matrix theta;
  std::vector<std::vector<std::uint16_t>> z;
  std::vector<Matrix> draws;
};

GibbsResult run_gibbs(const CodedCorpus& corpus, const ModelConfig& cfg);

// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// K x V matrix of FREX scores with exclusivity weight `w`.
Matrix frex_scores(const Matrix& phi, double w);

}  // namespace lexis::detail
