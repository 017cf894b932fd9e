#pragma once

// Tabular softmax language policy over a small vocabulary: one logit row per
// prefix, so sequence distributions are exactly enumerable and every
// expectation has a brute-force check. Sequences always run to the horizon;
// there is no end-of-sequence token.
//
// Parameter layout: params[prefix_id * V + token]. Prefix ids enumerate
// prefixes by length then base-V value, so gradients are plain flat vectors.

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "clinikit/rng.hpp"

namespace clinikit::rlhf {

using Tokens = std::vector<int>;

enum class Role { Theta, Sft, Rl, Old };

class PolicyModel {
public:
    PolicyModel(int vocab, int horizon, Role role = Role::Theta)
        : vocab_(vocab), horizon_(horizon), role_(role) {
        if (vocab < 1 || vocab > 16)
            throw std::invalid_argument("PolicyModel: vocab size must be in [1,16]");
        if (horizon < 1 || horizon > 6)
            throw std::invalid_argument("PolicyModel: horizon must be in [1,6]");
        prefix_offsets_.resize(horizon_ + 1);
        prefix_offsets_[0] = 0;
        size_t power = 1;
        for (int len = 0; len < horizon_; ++len) {
            prefix_offsets_[len + 1] = prefix_offsets_[len] + power;
            power *= static_cast<size_t>(vocab_);
        }
        params_.assign(prefix_offsets_[horizon_] * static_cast<size_t>(vocab_), 0.0);
    }

    int vocab() const { return vocab_; }
    int horizon() const { return horizon_; }
    Role role() const { return role_; }
    void set_role(Role r) { role_ = r; }

    size_t param_count() const { return params_.size(); }
    size_t prefix_count() const { return prefix_offsets_[horizon_]; }
    std::span<const double> params() const { return params_; }
    std::span<double> mutable_params() { return params_; }

    size_t prefix_id(std::span<const int> prefix) const {
        if (prefix.size() >= static_cast<size_t>(horizon_))
            throw std::invalid_argument("PolicyModel: prefix length must be < horizon");
        size_t value = 0;
        for (int tok : prefix) {
            check_token(tok);
            value = value * static_cast<size_t>(vocab_) + static_cast<size_t>(tok);
        }
        return prefix_offsets_[prefix.size()] + value;
    }

    std::span<const double> logits_row(size_t prefix_id) const {
        return std::span<const double>(params_).subspan(prefix_id * vocab_, vocab_);
    }

    std::vector<double> log_probs_row(size_t prefix_id) const {
        auto row = logits_row(prefix_id);
        double max_logit = row[0];
        for (double v : row) max_logit = std::max(max_logit, v);
        double sum = 0.0;
        for (double v : row) sum += std::exp(v - max_logit);
        double log_z = max_logit + std::log(sum);
        std::vector<double> out(row.begin(), row.end());
        for (double& v : out) v -= log_z;
        return out;
    }

    std::vector<double> probs_row(size_t prefix_id) const {
        auto out = log_probs_row(prefix_id);
        for (double& v : out) v = std::exp(v);
        return out;
    }

    double log_prob(const Tokens& prefix, int token) const {
        check_token(token);
        return log_probs_row(prefix_id(prefix))[token];
    }

    // log p(sequence) under the chain rule, for a full or partial sequence.
    double sequence_log_prob(const Tokens& sequence) const {
        std::span<const int> view(sequence);
        double total = 0.0;
        for (size_t i = 0; i < sequence.size(); ++i) {
            check_token(sequence[i]);
            total += log_probs_row(prefix_id(view.subspan(0, i)))[sequence[i]];
        }
        return total;
    }

    // log p(response | prompt): the response tokens scored after the prompt.
    double response_log_prob(const Tokens& prompt, const Tokens& response) const {
        Tokens prefix = prompt;
        double total = 0.0;
        for (int tok : response) {
            total += log_prob(prefix, tok);
            prefix.push_back(tok);
        }
        return total;
    }

    Tokens sample_completion(const Tokens& prompt, Rng& rng) const {
        Tokens sequence = prompt;
        while (sequence.size() < static_cast<size_t>(horizon_)) {
            auto probs = probs_row(prefix_id(sequence));
            sequence.push_back(static_cast<int>(sample_categorical(rng, probs)));
        }
        return Tokens(sequence.begin() + prompt.size(), sequence.end());
    }

    // All completions of the prompt up to the horizon, lexicographic order.
    std::vector<Tokens> enumerate_completions(const Tokens& prompt) const {
        size_t len = horizon_ - prompt.size();
        std::vector<Tokens> out;
        Tokens current(len, 0);
        size_t total = 1;
        for (size_t i = 0; i < len; ++i) total *= static_cast<size_t>(vocab_);
        out.reserve(total);
        for (size_t k = 0; k < total; ++k) {
            size_t v = k;
            for (size_t i = len; i-- > 0;) {
                current[i] = static_cast<int>(v % vocab_);
                v /= static_cast<size_t>(vocab_);
            }
            out.push_back(current);
        }
        return out;
    }

    void add_scaled(std::span<const double> grad, double scale) {
        if (grad.size() != params_.size())
            throw std::invalid_argument("PolicyModel: gradient size mismatch");
        for (size_t i = 0; i < params_.size(); ++i) params_[i] += scale * grad[i];
    }

    // Total probability mass over all vocab^horizon sequences; 1 up to
    // floating-point error for any parameter setting.
    double total_sequence_mass() const {
        double total = 0.0;
        for (const auto& seq : enumerate_completions({}))
            total += std::exp(sequence_log_prob(seq));
        return total;
    }

    void check_token(int token) const {
        if (token < 0 || token >= vocab_)
            throw std::invalid_argument("PolicyModel: token id " + std::to_string(token) +
                                        " outside vocab of " + std::to_string(vocab_));
    }

private:
    int vocab_;
    int horizon_;
    Role role_;
    std::vector<size_t> prefix_offsets_;
    std::vector<double> params_;
};

// Exact categorical KL(p(.|prefix) || q(.|prefix)) between next-token
// distributions. Softmax outputs are strictly positive, so this is finite.
inline double kl_between(const PolicyModel& p, const PolicyModel& q, const Tokens& prefix) {
    if (p.vocab() != q.vocab() || p.horizon() != q.horizon())
        throw std::invalid_argument("kl_between: policies must share vocab and horizon");
    size_t id = p.prefix_id(prefix);
    auto lp = p.log_probs_row(id);
    auto lq = q.log_probs_row(id);
    double kl = 0.0;
    for (int v = 0; v < p.vocab(); ++v) kl += std::exp(lp[v]) * (lp[v] - lq[v]);
    return kl;
}

// Exact KL between the full response distributions conditioned on a prompt,
// enumerated over every completion.
inline double sequence_kl(const PolicyModel& p, const PolicyModel& q, const Tokens& prompt) {
    double kl = 0.0;
    for (const auto& completion : p.enumerate_completions(prompt)) {
        double lp = p.response_log_prob(prompt, completion);
        double lq = q.response_log_prob(prompt, completion);
        kl += std::exp(lp) * (lp - lq);
    }
    return kl;
}

}  // namespace clinikit::rlhf
