#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace promptopic {

using Timestamp = std::chrono::sys_seconds;

/// Parses an RFC 3339 timestamp ("2020-01-01T00:00:00Z", offsets allowed,
/// fractional seconds truncated). Returns nullopt on malformed input.
std::optional<Timestamp> parse_rfc3339(const std::string& s);

/// Formats a Timestamp as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_rfc3339(Timestamp t);

/// One corpus item. `text` is the cleaned document body; documents whose text
/// becomes empty after cleaning never make it into a Corpus.
struct Document {
    std::string id;
    std::string text;
    std::optional<std::string> label;
    std::optional<Timestamp> timestamp;
    std::map<std::string, std::string> meta;
};

/// Ordered document collection. Iteration order is insertion order.
struct Corpus {
    std::string name;
    std::vector<Document> documents;

    std::size_t size() const { return documents.size(); }
    bool empty() const { return documents.empty(); }
};

/// Time-window specification: k boundaries define k+1 bins. The i-th bin is
/// the half-open interval [boundaries[i-1], boundaries[i]); the first bin is
/// everything before boundaries[0], the last everything at or after the end.
struct PeriodSpec {
    std::vector<Timestamp> boundaries;
    std::vector<std::string> bin_names;  // size boundaries.size() + 1
};

}  // namespace promptopic
