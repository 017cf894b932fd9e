#pragma once

// Shared test gear: scripted generators and temp-file helpers.

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>

#include "clinikit/client.hpp"

namespace testutil {

// Scripted endpoint: completion is a pure function of the prompt, so record
// and replay see consistent answers.
class FnGenerator : public clinikit::client::TextGenerator {
public:
    explicit FnGenerator(std::function<std::string(const std::string&)> fn,
                         clinikit::client::RecordingSink* sink = nullptr)
        : fn_(std::move(fn)), sink_(sink) {}

    clinikit::client::GenerationRecord generate(const std::string& prompt) override {
        ++calls_;
        clinikit::client::GenerationRecord rec;
        rec.prompt = prompt;
        rec.completion = fn_(prompt);
        rec.endpoint = "scripted";
        rec.attempt = 1;
        if (sink_) sink_->write(rec);
        return rec;
    }

    int calls() const { return calls_.load(); }

private:
    std::function<std::string(const std::string&)> fn_;
    clinikit::client::RecordingSink* sink_;
    std::atomic<int> calls_{0};
};

// Endpoint that always fails, for error-path coverage.
class FailingGenerator : public clinikit::client::TextGenerator {
public:
    clinikit::client::GenerationRecord generate(const std::string&) override {
        throw clinikit::client::ClientError(clinikit::client::ClientError::Kind::Unavailable,
                                            "scripted failure", 503);
    }
};

inline std::string temp_path(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "clinikit_tests";
    std::filesystem::create_directories(dir);
    return (dir / name).string();
}

inline std::string slurp(const std::string& path) {
    return clinikit::read_text_file(path);
}

}  // namespace testutil
