#pragma once

// Line-oriented JSON record IO. All dataset files in this project are JSONL.

#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace clinikit {

using json = nlohmann::json;

inline std::vector<json> read_jsonl(std::istream& in, const std::string& name = "<stream>") {
    std::vector<json> records;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            records.push_back(json::parse(line));
        } catch (const json::parse_error& e) {
            throw std::runtime_error(name + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return records;
}

inline std::vector<json> read_jsonl_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_jsonl(in, path);
}

inline void write_jsonl(std::ostream& out, const std::vector<json>& records) {
    for (const auto& rec : records) out << rec.dump() << '\n';
}

inline void write_jsonl_file(const std::string& path, const std::vector<json>& records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    write_jsonl(out, records);
}

inline std::string require_string(const json& rec, const std::string& key,
                                  const std::string& context) {
    auto it = rec.find(key);
    if (it == rec.end() || !it->is_string())
        throw std::runtime_error(context + ": missing string field '" + key + "'");
    return it->get<std::string>();
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << text;
}

}  // namespace clinikit
