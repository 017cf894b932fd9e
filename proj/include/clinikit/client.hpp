#pragma once

// Text-generation endpoint access over the de-facto chat-completions wire
// shape, with bounded retries, timeouts, and first-class record/replay so
// evaluation runs never need a live endpoint twice.
//
// Request:  {"model": m, "messages": [{"role": "user", "content": p}],
//            "temperature": t, "max_tokens": k}
// Response: {"choices": [{"message": {"content": text}}]}

#include <chrono>
#include <cstdint>
#include <fstream>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "clinikit/jsonl.hpp"

namespace clinikit::client {

struct EndpointConfig {
    std::string base_url;      // scheme://host[:port][/path]; path defaults to
                               // /v1/chat/completions when absent
    std::string auth_token;    // bearer token, empty = no auth header
    std::string model_name;
    double timeout_sec = 30.0;
    int max_retries = 2;
    double temperature = 0.0;
    int max_new_tokens = 512;
    int backoff_initial_ms = 100;  // doubles per retry

    void validate() const {
        if (!(timeout_sec > 0)) throw std::invalid_argument("endpoint: timeout must be > 0");
        if (max_retries < 0) throw std::invalid_argument("endpoint: max_retries must be >= 0");
        if (temperature < 0) throw std::invalid_argument("endpoint: temperature must be >= 0");
    }
};

inline EndpointConfig endpoint_from_json(const json& j) {
    EndpointConfig cfg;
    cfg.base_url = j.value("base_url", "");
    cfg.auth_token = j.value("auth_token", "");
    cfg.model_name = j.value("model_name", "");
    cfg.timeout_sec = j.value("timeout_sec", 30.0);
    cfg.max_retries = j.value("max_retries", 2);
    cfg.temperature = j.value("temperature", 0.0);
    cfg.max_new_tokens = j.value("max_new_tokens", 512);
    cfg.backoff_initial_ms = j.value("backoff_initial_ms", 100);
    cfg.validate();
    return cfg;
}

struct GenerationRecord {
    std::string prompt;
    std::string completion;
    std::string endpoint;  // model name
    double latency_ms = 0.0;
    int attempt = 1;
};

struct ClientError : std::runtime_error {
    enum class Kind { Unavailable, Protocol, CacheMiss };
    Kind kind;
    int last_status;  // 0 when no HTTP status was seen

    ClientError(Kind k, const std::string& message, int status = 0)
        : std::runtime_error(message), kind(k), last_status(status) {}
};

// Anything that can complete a prompt. Implementations must tolerate
// concurrent generate() calls.
struct TextGenerator {
    virtual ~TextGenerator() = default;
    virtual GenerationRecord generate(const std::string& prompt) = 0;
};

inline uint64_t fnv1a64(std::string_view s) {
    uint64_t hash = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        hash ^= c;
        hash *= 0x100000001B3ULL;
    }
    return hash;
}

inline std::string prompt_key(std::string_view prompt) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(prompt)));
    return buf;
}

// Append-only JSONL sink, one record per line keyed by prompt hash.
class RecordingSink {
public:
    explicit RecordingSink(const std::string& path) : out_(path, std::ios::app | std::ios::binary) {
        if (!out_) throw std::runtime_error("cannot open recording sink " + path);
    }

    void write(const GenerationRecord& rec) {
        json j{{"key", prompt_key(rec.prompt)}, {"prompt", rec.prompt},
               {"completion", rec.completion},  {"endpoint", rec.endpoint},
               {"latency_ms", rec.latency_ms},  {"attempt", rec.attempt}};
        std::lock_guard<std::mutex> lock(mutex_);
        out_ << j.dump() << '\n';
        out_.flush();
    }

private:
    std::ofstream out_;
    std::mutex mutex_;
};

class RecordingStore {
public:
    RecordingStore() = default;

    static RecordingStore load(const std::string& path) {
        RecordingStore store;
        for (const auto& j : read_jsonl_file(path)) {
            GenerationRecord rec;
            rec.prompt = j.value("prompt", "");
            rec.completion = j.value("completion", "");
            rec.endpoint = j.value("endpoint", "");
            rec.latency_ms = j.value("latency_ms", 0.0);
            rec.attempt = j.value("attempt", 1);
            store.records_[rec.prompt] = std::move(rec);  // last entry wins
        }
        return store;
    }

    void add(const GenerationRecord& rec) { records_[rec.prompt] = rec; }
    size_t size() const { return records_.size(); }

    const GenerationRecord& lookup(const std::string& prompt) const {
        auto it = records_.find(prompt);
        if (it == records_.end())
            throw ClientError(ClientError::Kind::CacheMiss,
                              "replay: no recording for prompt (key " + prompt_key(prompt) + ")");
        return it->second;
    }

private:
    std::unordered_map<std::string, GenerationRecord> records_;
};

// Deterministic offline evaluation from a recording store.
inline std::string replay(const RecordingStore& store, const std::string& prompt) {
    return store.lookup(prompt).completion;
}

class ReplayGenerator : public TextGenerator {
public:
    explicit ReplayGenerator(RecordingStore store) : store_(std::move(store)) {}

    GenerationRecord generate(const std::string& prompt) override {
        return store_.lookup(prompt);
    }

private:
    RecordingStore store_;
};

namespace detail {

struct ParsedUrl {
    std::string host_root;  // scheme://host[:port]
    std::string path;
};

inline ParsedUrl parse_base_url(const std::string& base_url) {
    auto scheme_end = base_url.find("://");
    if (scheme_end == std::string::npos)
        throw std::invalid_argument("endpoint: base_url must carry a scheme: " + base_url);
    auto path_start = base_url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {base_url, "/v1/chat/completions"};
    std::string path = base_url.substr(path_start);
    if (path.empty() || path == "/") path = "/v1/chat/completions";
    return {base_url.substr(0, path_start), path};
}

}  // namespace detail

// Live HTTP endpoint. Transport failures and 5xx responses are retried with
// exponential backoff up to max_retries; other statuses and malformed bodies
// fail immediately.
class HttpEndpoint : public TextGenerator {
public:
    explicit HttpEndpoint(EndpointConfig cfg, RecordingSink* sink = nullptr)
        : cfg_(std::move(cfg)), sink_(sink) {
        cfg_.validate();
    }

    GenerationRecord generate(const std::string& prompt) override {
        auto url = detail::parse_base_url(cfg_.base_url);
        json body{{"model", cfg_.model_name},
                  {"messages", json::array({{{"role", "user"}, {"content", prompt}}})},
                  {"temperature", cfg_.temperature},
                  {"max_tokens", cfg_.max_new_tokens}};
        httplib::Headers headers;
        if (!cfg_.auth_token.empty())
            headers.emplace("Authorization", "Bearer " + cfg_.auth_token);

        const auto start = std::chrono::steady_clock::now();
        int last_status = 0;
        std::string last_error;
        for (int attempt = 1; attempt <= cfg_.max_retries + 1; ++attempt) {
            httplib::Client cli(url.host_root);
            cli.set_connection_timeout(std::chrono::duration<double>(cfg_.timeout_sec));
            cli.set_read_timeout(std::chrono::duration<double>(cfg_.timeout_sec));
            auto res = cli.Post(url.path, headers, body.dump(), "application/json");
            if (!res) {
                last_status = 0;
                last_error = "transport error: " + httplib::to_string(res.error());
            } else if (res->status >= 500) {
                last_status = res->status;
                last_error = "server error " + std::to_string(res->status);
            } else if (res->status != 200) {
                throw ClientError(ClientError::Kind::Unavailable,
                                  "endpoint returned status " + std::to_string(res->status),
                                  res->status);
            } else {
                GenerationRecord rec;
                rec.prompt = prompt;
                rec.completion = parse_completion(res->body);
                rec.endpoint = cfg_.model_name;
                rec.latency_ms = std::chrono::duration<double, std::milli>(
                                     std::chrono::steady_clock::now() - start)
                                     .count();
                rec.attempt = attempt;
                if (sink_) sink_->write(rec);
                return rec;
            }
            if (attempt <= cfg_.max_retries) {
                std::this_thread::sleep_for(
                    std::chrono::milliseconds(cfg_.backoff_initial_ms << (attempt - 1)));
            }
        }
        throw ClientError(ClientError::Kind::Unavailable,
                          "endpoint unavailable after " + std::to_string(cfg_.max_retries + 1) +
                              " attempts: " + last_error,
                          last_status);
    }

private:
    static std::string parse_completion(const std::string& body) {
        json j;
        try {
            j = json::parse(body);
        } catch (const json::exception& e) {
            throw ClientError(ClientError::Kind::Protocol,
                              std::string("response body is not JSON: ") + e.what());
        }
        if (!j.contains("choices") || !j["choices"].is_array() || j["choices"].empty() ||
            !j["choices"][0].contains("message") ||
            !j["choices"][0]["message"].contains("content") ||
            !j["choices"][0]["message"]["content"].is_string()) {
            throw ClientError(ClientError::Kind::Protocol,
                              "response body missing choices[0].message.content");
        }
        return j["choices"][0]["message"]["content"].get<std::string>();
    }

    EndpointConfig cfg_;
    RecordingSink* sink_;
};

}  // namespace clinikit::client
