#pragma once

// Training objectives on exactly enumerable toy policies, with analytic
// gradients throughout:
//
//   sft_nll        (1/n) sum_i -log p(w_i | w_<i) over the response tokens
//   ranking_loss   -log sigma(r(I,R_w) - r(I,R_l)) for a comparison pair
//   shaped_reward  r(x,y) - beta * (log pi_rl(y|x) - log pi_sft(y|x))
//   ppo            ascend E[ A * pi(y|x)/pi_old(y|x) ] - beta * sum_prefix
//                  KL(pi_old || pi), the penalized objective without ratio
//                  clipping; the advantage is the shaped reward minus an
//                  exponential-moving-average baseline, broadcast per token.
//
// The two KL terms play different roles and stay distinct: the shaped reward
// uses sampled sequence log-ratios against the SFT reference, the trust
// region uses exact per-prefix categorical KL against the previous policy,
// summed over the prefixes the batch visited.

#include <cmath>
#include <cstdint>
#include <ostream>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "clinikit/policy.hpp"
#include "clinikit/reward.hpp"
#include "clinikit/rng.hpp"

namespace clinikit::rlhf {

struct LossGrad {
    double value = 0.0;
    std::vector<double> grad;
};

// -------------------------------------------------------------------------
// Supervised fine-tuning loss
// -------------------------------------------------------------------------

inline LossGrad sft_nll(const PolicyModel& model, const Tokens& prompt,
                        const Tokens& response) {
    if (response.empty()) throw std::invalid_argument("sft_nll: empty response");
    if (prompt.size() + response.size() > static_cast<size_t>(model.horizon()))
        throw std::invalid_argument("sft_nll: sequence longer than the policy horizon");

    LossGrad out;
    out.grad.assign(model.param_count(), 0.0);
    const double inv_n = 1.0 / static_cast<double>(response.size());
    Tokens prefix = prompt;
    for (int token : response) {
        model.check_token(token);
        size_t id = model.prefix_id(prefix);
        auto log_probs = model.log_probs_row(id);
        out.value -= inv_n * log_probs[token];
        for (int v = 0; v < model.vocab(); ++v) {
            double p = std::exp(log_probs[v]);
            out.grad[id * model.vocab() + v] += inv_n * (p - (v == token ? 1.0 : 0.0));
        }
        prefix.push_back(token);
    }
    return out;
}

// -------------------------------------------------------------------------
// Reward-model ranking loss
// -------------------------------------------------------------------------

struct ComparisonPair {
    Tokens prompt;
    Tokens preferred;     // R_w
    Tokens dispreferred;  // R_l

    void validate() const {
        if (preferred == dispreferred)
            throw std::invalid_argument("ComparisonPair: responses must differ");
    }
};

inline double softplus(double x) {
    return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

// loss = -log sigma(delta), delta = r(I,R_w) - r(I,R_l). Gradient layout
// matches RewardModel params: [weights..., bias]; the bias cancels in delta.
inline LossGrad ranking_loss(const RewardModel& rm, const ComparisonPair& pair) {
    pair.validate();
    double delta = rm.score(pair.prompt, pair.preferred) - rm.score(pair.prompt, pair.dispreferred);
    LossGrad out;
    out.value = softplus(-delta);
    double dloss_ddelta = -1.0 / (1.0 + std::exp(delta));  // -sigma(-delta)
    auto phi_w = rm.featurize(pair.prompt, pair.preferred);
    auto phi_l = rm.featurize(pair.prompt, pair.dispreferred);
    out.grad.assign(rm.param_count(), 0.0);
    for (size_t i = 0; i < phi_w.size(); ++i)
        out.grad[i] = dloss_ddelta * (phi_w[i] - phi_l[i]);
    return out;
}

// -------------------------------------------------------------------------
// Shaped reward and advantage baseline
// -------------------------------------------------------------------------

inline double shaped_reward(double rm_value, double logp_rl, double logp_sft, double beta) {
    if (!std::isfinite(logp_rl) || !std::isfinite(logp_sft))
        throw std::invalid_argument("shaped_reward: log-probabilities must be finite");
    return rm_value - beta * (logp_rl - logp_sft);
}

struct EmaBaseline {
    double decay = 0.9;  // in [0,1); 0 tracks the previous batch mean exactly
    double value = 0.0;

    void update(double batch_mean) { value = decay * value + (1.0 - decay) * batch_mean; }
};

// Episode-level advantages against the current baseline; the baseline is
// then advanced by the batch mean. Advantages broadcast to every generated
// token of their episode.
inline std::vector<double> advantage(const std::vector<double>& shaped_rewards,
                                     EmaBaseline& baseline) {
    if (shaped_rewards.empty()) throw std::invalid_argument("advantage: empty batch");
    std::vector<double> out;
    out.reserve(shaped_rewards.size());
    double mean = 0.0;
    for (double r : shaped_rewards) {
        out.push_back(r - baseline.value);
        mean += r;
    }
    baseline.update(mean / static_cast<double>(shaped_rewards.size()));
    return out;
}

// -------------------------------------------------------------------------
// PPO step
// -------------------------------------------------------------------------

struct PpoConfig {
    double beta = 0.1;
    double learning_rate = 0.05;
    int steps = 100;
    int batch_size = 16;
    double baseline_decay = 0.9;
    uint64_t seed = 0;

    void validate() const {
        if (beta < 0) throw std::invalid_argument("PpoConfig: beta must be >= 0");
        if (learning_rate < 0) throw std::invalid_argument("PpoConfig: learning_rate must be >= 0");
        if (steps < 0) throw std::invalid_argument("PpoConfig: steps must be >= 0");
        if (batch_size < 1) throw std::invalid_argument("PpoConfig: batch_size must be >= 1");
        if (baseline_decay < 0 || baseline_decay >= 1)
            throw std::invalid_argument("PpoConfig: baseline_decay must be in [0,1)");
    }
};

// How a step's episode batch is formed. MonteCarlo samples batch_size
// responses per prompt from the old policy; Enumerate weights every
// completion by its exact old-policy probability, which turns the objective
// into the exact expectation (the form the brute-force checks differentiate).
enum class PpoSampling { MonteCarlo, Enumerate };

struct Episode {
    size_t prompt_index = 0;
    Tokens response;
    std::vector<std::pair<size_t, int>> steps;  // (prefix id, chosen token)
    double weight = 0.0;                        // sums to 1 over the batch
    double rm_value = 0.0;
    double shaped = 0.0;
    double logp_old = 0.0;
};

struct PpoBatch {
    std::vector<Episode> episodes;
    std::vector<size_t> visited_prefixes;  // sorted unique prefix ids
    double mean_rm = 0.0;                  // weighted batch means
    double mean_shaped = 0.0;
};

inline PpoBatch build_ppo_batch(const PolicyModel& old_policy, const PolicyModel& sft,
                                const RewardModel& rm, const std::vector<Tokens>& prompts,
                                double beta, int batch_size, PpoSampling sampling, Rng& rng) {
    if (prompts.empty()) throw std::invalid_argument("ppo: prompt batch is empty");
    PpoBatch batch;
    std::set<size_t> visited;
    const double prompt_weight = 1.0 / static_cast<double>(prompts.size());

    auto add_episode = [&](size_t prompt_index, Tokens response, double weight) {
        const Tokens& prompt = prompts[prompt_index];
        Episode e;
        e.prompt_index = prompt_index;
        e.weight = weight;
        Tokens prefix = prompt;
        for (int tok : response) {
            size_t id = old_policy.prefix_id(prefix);
            e.steps.emplace_back(id, tok);
            visited.insert(id);
            prefix.push_back(tok);
        }
        e.logp_old = old_policy.response_log_prob(prompt, response);
        double logp_sft = sft.response_log_prob(prompt, response);
        e.rm_value = rm.score(prompt, response);
        e.shaped = shaped_reward(e.rm_value, e.logp_old, logp_sft, beta);
        e.response = std::move(response);
        batch.episodes.push_back(std::move(e));
    };

    for (size_t pi = 0; pi < prompts.size(); ++pi) {
        if (sampling == PpoSampling::MonteCarlo) {
            double w = prompt_weight / static_cast<double>(batch_size);
            for (int k = 0; k < batch_size; ++k)
                add_episode(pi, old_policy.sample_completion(prompts[pi], rng), w);
        } else {
            for (auto& completion : old_policy.enumerate_completions(prompts[pi])) {
                double p = std::exp(old_policy.response_log_prob(prompts[pi], completion));
                add_episode(pi, std::move(completion), prompt_weight * p);
            }
        }
    }

    for (const auto& e : batch.episodes) {
        batch.mean_rm += e.weight * e.rm_value;
        batch.mean_shaped += e.weight * e.shaped;
    }
    batch.visited_prefixes.assign(visited.begin(), visited.end());
    return batch;
}

// Objective value at the current policy, for a fixed batch and baseline.
inline double ppo_objective(const PolicyModel& policy, const PolicyModel& old_policy,
                            const PpoBatch& batch, double beta, double baseline_value) {
    double value = 0.0;
    for (const auto& e : batch.episodes) {
        double logp = 0.0;
        for (const auto& [id, tok] : e.steps) logp += policy.log_probs_row(id)[tok];
        value += e.weight * (e.shaped - baseline_value) * std::exp(logp - e.logp_old);
    }
    for (size_t id : batch.visited_prefixes) {
        auto lp_old = old_policy.log_probs_row(id);
        auto lp_new = policy.log_probs_row(id);
        double kl = 0.0;
        for (int v = 0; v < policy.vocab(); ++v)
            kl += std::exp(lp_old[v]) * (lp_old[v] - lp_new[v]);
        value -= beta * kl;
    }
    return value;
}

inline LossGrad ppo_objective_grad(const PolicyModel& policy, const PolicyModel& old_policy,
                                   const PpoBatch& batch, double beta, double baseline_value) {
    LossGrad out;
    out.grad.assign(policy.param_count(), 0.0);
    const int vocab = policy.vocab();

    for (const auto& e : batch.episodes) {
        double logp = 0.0;
        for (const auto& [id, tok] : e.steps) logp += policy.log_probs_row(id)[tok];
        double ratio = std::exp(logp - e.logp_old);
        double coeff = e.weight * (e.shaped - baseline_value) * ratio;
        out.value += coeff;
        for (const auto& [id, tok] : e.steps) {
            auto probs = policy.probs_row(id);
            for (int v = 0; v < vocab; ++v)
                out.grad[id * vocab + v] += coeff * ((v == tok ? 1.0 : 0.0) - probs[v]);
        }
    }

    for (size_t id : batch.visited_prefixes) {
        auto p_old = old_policy.probs_row(id);
        auto lp_old = old_policy.log_probs_row(id);
        auto lp_new = policy.log_probs_row(id);
        double kl = 0.0;
        for (int v = 0; v < vocab; ++v) kl += p_old[v] * (lp_old[v] - lp_new[v]);
        out.value -= beta * kl;
        for (int v = 0; v < vocab; ++v) {
            double p_new = std::exp(lp_new[v]);
            out.grad[id * vocab + v] -= beta * (p_new - p_old[v]);
        }
    }
    return out;
}

struct PpoStats {
    double mean_rm = 0.0;
    double mean_shaped = 0.0;
    double kl_to_sft = 0.0;  // exact sequence-level KL, averaged over prompts
    double kl_to_old = 0.0;
    double objective = 0.0;  // value before the update
};

// One ascent step of the penalized objective. The baseline advances by the
// batch mean after advantages are taken against its pre-update value.
inline PpoStats ppo_step(PolicyModel& policy, const PolicyModel& old_policy,
                         const PolicyModel& sft, const RewardModel& rm,
                         const std::vector<Tokens>& prompts, const PpoConfig& cfg,
                         EmaBaseline& baseline, Rng& rng,
                         PpoSampling sampling = PpoSampling::MonteCarlo) {
    cfg.validate();
    if (policy.vocab() != old_policy.vocab() || policy.vocab() != sft.vocab() ||
        policy.horizon() != old_policy.horizon() || policy.horizon() != sft.horizon())
        throw std::invalid_argument("ppo_step: policies must share vocab and horizon");

    PpoBatch batch =
        build_ppo_batch(old_policy, sft, rm, prompts, cfg.beta, cfg.batch_size, sampling, rng);
    LossGrad obj = ppo_objective_grad(policy, old_policy, batch, cfg.beta, baseline.value);

    for (size_t i = 0; i < obj.grad.size(); ++i) {
        if (!std::isfinite(obj.grad[i]))
            throw std::runtime_error("ppo_step: non-finite gradient at parameter index " +
                                     std::to_string(i));
    }
    if (cfg.learning_rate != 0.0) policy.add_scaled(obj.grad, cfg.learning_rate);
    baseline.update(batch.mean_shaped);

    PpoStats stats;
    stats.mean_rm = batch.mean_rm;
    stats.mean_shaped = batch.mean_shaped;
    stats.objective = obj.value;
    for (const auto& prompt : prompts) {
        stats.kl_to_sft += sequence_kl(policy, sft, prompt);
        stats.kl_to_old += sequence_kl(policy, old_policy, prompt);
    }
    stats.kl_to_sft /= static_cast<double>(prompts.size());
    stats.kl_to_old /= static_cast<double>(prompts.size());
    return stats;
}

// -------------------------------------------------------------------------
// Training loops
// -------------------------------------------------------------------------

struct TrainTrace {
    struct Row {
        int step = 0;
        double mean_shaped = 0.0;
        double mean_rm = 0.0;
        double kl_to_sft = 0.0;
        double kl_to_old = 0.0;
        double objective = 0.0;
    };
    std::vector<Row> rows;
    double baseline_decay = 0.9;

    void write_tsv(std::ostream& out) const {
        out << "# advantage baseline: exponential moving average, decay=" << baseline_decay
            << "\n";
        out << "step\tmean_shaped_reward\tmean_rm\tkl_to_sft\tkl_to_old\tobjective\n";
        for (const auto& r : rows) {
            out << r.step << '\t' << r.mean_shaped << '\t' << r.mean_rm << '\t' << r.kl_to_sft
                << '\t' << r.kl_to_old << '\t' << r.objective << '\n';
        }
    }
};

// Full loop: the initial policy doubles as the SFT reference, and the old
// policy is refreshed to the current policy before every step.
inline std::pair<PolicyModel, TrainTrace> train_rlhf(const PolicyModel& init,
                                                     const RewardModel& rm,
                                                     const std::vector<Tokens>& prompts,
                                                     const PpoConfig& cfg,
                                                     PpoSampling sampling = PpoSampling::MonteCarlo) {
    cfg.validate();
    PolicyModel sft = init;
    sft.set_role(Role::Sft);
    PolicyModel policy = init;
    policy.set_role(Role::Rl);
    Rng rng(cfg.seed);
    EmaBaseline baseline{cfg.baseline_decay, 0.0};
    TrainTrace trace;
    trace.baseline_decay = cfg.baseline_decay;
    for (int step = 0; step < cfg.steps; ++step) {
        PolicyModel old_policy = policy;
        old_policy.set_role(Role::Old);
        PpoStats stats = ppo_step(policy, old_policy, sft, rm, prompts, cfg, baseline, rng,
                                  sampling);
        trace.rows.push_back({step, stats.mean_shaped, stats.mean_rm, stats.kl_to_sft,
                              stats.kl_to_old, stats.objective});
    }
    return {std::move(policy), std::move(trace)};
}

struct RmTrainResult {
    RewardModel model;
    double final_mean_loss = 0.0;
};

// Full-batch gradient descent on the mean ranking loss from a symmetric
// (zero) init. The seed is accepted for interface parity; full-batch descent
// consumes no randomness.
inline RmTrainResult train_reward_model(int vocab, const std::vector<ComparisonPair>& pairs,
                                        int epochs, double learning_rate, uint64_t seed) {
    (void)seed;
    if (pairs.empty()) throw std::invalid_argument("train_reward_model: no comparison pairs");
    if (epochs < 0) throw std::invalid_argument("train_reward_model: epochs must be >= 0");
    RmTrainResult result{RewardModel(vocab), 0.0};
    RewardModel& rm = result.model;

    const double inv_n = 1.0 / static_cast<double>(pairs.size());
    std::vector<double> grad(rm.param_count());
    for (int epoch = 0; epoch < epochs; ++epoch) {
        std::fill(grad.begin(), grad.end(), 0.0);
        for (const auto& pair : pairs) {
            LossGrad lg = ranking_loss(rm, pair);
            for (size_t i = 0; i < grad.size(); ++i) grad[i] += inv_n * lg.grad[i];
        }
        for (size_t i = 0; i < grad.size(); ++i)
            rm.set_param(i, rm.param(i) - learning_rate * grad[i]);
    }
    for (const auto& pair : pairs) result.final_mean_loss += inv_n * ranking_loss(rm, pair).value;
    return result;
}

}  // namespace clinikit::rlhf
