#pragma once

// Seeded train/valid/test partition: deterministic shuffle, floor-sized
// valid/test cuts, remainder to train.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "clinikit/rng.hpp"

namespace clinikit::prep {

struct SplitRatios {
    double train;
    double valid;
    double test;

    void validate() const {
        if (!(train > 0.0) || !(valid > 0.0) || !(test > 0.0))
            throw std::invalid_argument("split: ratios must be positive");
        if (std::abs(train + valid + test - 1.0) > 1e-9)
            throw std::invalid_argument("split: ratios must sum to 1");
    }
};

template <typename T>
struct SplitResult {
    std::vector<T> train;
    std::vector<T> valid;
    std::vector<T> test;
};

template <typename T>
SplitResult<T> split_dataset(const std::vector<T>& records, const SplitRatios& ratios,
                             uint64_t seed) {
    ratios.validate();
    const size_t n = records.size();
    SplitResult<T> out;
    if (n == 0) return out;

    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = i;
    Rng rng(seed);
    deterministic_shuffle(order, rng);

    size_t n_valid = static_cast<size_t>(std::floor(ratios.valid * static_cast<double>(n)));
    size_t n_test = static_cast<size_t>(std::floor(ratios.test * static_cast<double>(n)));
    size_t n_train = n - n_valid - n_test;  // floor(train*n) plus the remainder

    for (size_t i = 0; i < n; ++i) {
        const T& rec = records[order[i]];
        if (i < n_train)
            out.train.push_back(rec);
        else if (i < n_train + n_valid)
            out.valid.push_back(rec);
        else
            out.test.push_back(rec);
    }
    return out;
}

}  // namespace clinikit::prep
