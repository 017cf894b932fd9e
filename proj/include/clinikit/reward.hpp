#pragma once

// Linear reward model over bag-of-token-bigram features of the concatenated
// (prompt, response) sequence: r(I, R) = w . phi(I||R) + b. The toy analogue
// of a scalar head on top of a sequence featurization.

#include <span>
#include <stdexcept>
#include <vector>

#include "clinikit/policy.hpp"

namespace clinikit::rlhf {

class RewardModel {
public:
    explicit RewardModel(int vocab) : vocab_(vocab) {
        if (vocab < 1) throw std::invalid_argument("RewardModel: vocab must be >= 1");
        weights_.assign(static_cast<size_t>(vocab) * vocab, 0.0);
    }

    int vocab() const { return vocab_; }
    double& weight(int first, int second) {
        check(first), check(second);
        return weights_[static_cast<size_t>(first) * vocab_ + second];
    }
    double weight(int first, int second) const {
        check(first), check(second);
        return weights_[static_cast<size_t>(first) * vocab_ + second];
    }
    double& bias() { return bias_; }
    double bias() const { return bias_; }

    // Parameter vector [weights..., bias] shared with ranking-loss gradients.
    size_t param_count() const { return weights_.size() + 1; }
    double param(size_t i) const { return i < weights_.size() ? weights_[i] : bias_; }
    void set_param(size_t i, double v) {
        if (i < weights_.size())
            weights_[i] = v;
        else
            bias_ = v;
    }

    // Bigram counts of prompt||response, as a dense feature vector of size
    // vocab^2 (the bias feature is the implicit constant 1).
    std::vector<double> featurize(const Tokens& prompt, const Tokens& response) const {
        std::vector<double> features(weights_.size(), 0.0);
        Tokens seq = prompt;
        seq.insert(seq.end(), response.begin(), response.end());
        for (int tok : seq) check(tok);
        for (size_t i = 0; i + 1 < seq.size(); ++i)
            features[static_cast<size_t>(seq[i]) * vocab_ + seq[i + 1]] += 1.0;
        return features;
    }

    double score(const Tokens& prompt, const Tokens& response) const {
        Tokens seq = prompt;
        seq.insert(seq.end(), response.begin(), response.end());
        for (int tok : seq) check(tok);
        double total = bias_;
        for (size_t i = 0; i + 1 < seq.size(); ++i)
            total += weights_[static_cast<size_t>(seq[i]) * vocab_ + seq[i + 1]];
        return total;
    }

private:
    void check(int token) const {
        if (token < 0 || token >= vocab_)
            throw std::invalid_argument("RewardModel: token id out of range");
    }

    int vocab_;
    std::vector<double> weights_;
    double bias_ = 0.0;
};

inline double rm_score(const RewardModel& rm, const Tokens& prompt, const Tokens& response) {
    return rm.score(prompt, response);
}

}  // namespace clinikit::rlhf
