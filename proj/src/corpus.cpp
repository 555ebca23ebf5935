#include "promptopic/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "promptopic/errors.hpp"

namespace promptopic {

namespace {

bool is_mention(const std::string& tok) { return tok.size() > 1 && tok[0] == '@'; }

bool is_link(const std::string& tok) {
    if (tok.find("http://") != std::string::npos) return true;
    if (tok.find("https://") != std::string::npos) return true;
    if (tok.rfind("www.", 0) == 0) return true;
    if (tok.rfind("t.co/", 0) == 0) return true;
    return false;
}

}  // namespace

std::string clean_text(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t start = i;
        while (i < n && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i == start) break;
        std::string tok = text.substr(start, i - start);
        if (is_mention(tok) || is_link(tok)) continue;
        if (!out.empty()) out.push_back(' ');
        out += tok;
    }
    return out;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// Adds one raw record to the corpus, cleaning text and validating fields.
// Returns an error string on rejection.
std::optional<std::string> add_document(Corpus& corpus, std::set<std::string>& seen_ids,
                                        Document&& doc) {
    if (doc.id.empty()) return "empty id";
    if (!seen_ids.insert(doc.id).second) return "duplicate id '" + doc.id + "'";
    doc.text = clean_text(doc.text);
    if (doc.text.empty()) return "text empty after cleaning";
    corpus.documents.push_back(std::move(doc));
    return std::nullopt;
}

void record_skip(LoadResult& result, bool strict, std::size_t line, const std::string& reason) {
    if (strict) {
        throw ConfigError("line " + std::to_string(line) + ": " + reason);
    }
    result.skipped.push_back({line, reason});
}

}  // namespace

LoadResult load_jsonl(const std::string& path, bool strict) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open corpus file: " + path);

    LoadResult result;
    result.corpus.name = path;
    std::set<std::string> seen_ids;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            record_skip(result, strict, lineno, "invalid JSON object");
            continue;
        }
        Document doc;
        try {
            doc.id = j.at("id").is_string() ? j.at("id").get<std::string>() : j.at("id").dump();
            doc.text = j.at("text").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            record_skip(result, strict, lineno, std::string("missing id/text: ") + e.what());
            continue;
        }
        if (j.contains("label") && !j["label"].is_null()) {
            if (!j["label"].is_string()) {
                record_skip(result, strict, lineno, "label is not a string");
                continue;
            }
            doc.label = j["label"].get<std::string>();
        }
        if (j.contains("timestamp") && !j["timestamp"].is_null()) {
            if (!j["timestamp"].is_string()) {
                record_skip(result, strict, lineno, "timestamp is not a string");
                continue;
            }
            auto ts = parse_rfc3339(j["timestamp"].get<std::string>());
            if (!ts) {
                record_skip(result, strict, lineno,
                            "bad timestamp '" + j["timestamp"].get<std::string>() + "'");
                continue;
            }
            doc.timestamp = *ts;
        }
        if (j.contains("meta") && j["meta"].is_object()) {
            for (auto& [k, v] : j["meta"].items())
                doc.meta[k] = v.is_string() ? v.get<std::string>() : v.dump();
        }
        if (auto err = add_document(result.corpus, seen_ids, std::move(doc)))
            record_skip(result, strict, lineno, *err);
    }
    return result;
}

namespace {

// RFC 4180-style records: quoted fields may contain commas, quotes ("") and
// newlines. Returns one record per entry together with its starting line.
std::vector<std::pair<std::size_t, std::vector<std::string>>> read_csv_records(std::istream& in) {
    std::vector<std::pair<std::size_t, std::vector<std::string>>> records;
    std::vector<std::string> fields;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    std::size_t lineno = 1, record_line = 1;

    auto end_field = [&] {
        fields.push_back(field);
        field.clear();
        field_started = false;
    };
    auto end_record = [&] {
        end_field();
        records.emplace_back(record_line, std::move(fields));
        fields = {};
        record_line = lineno;
    };

    char c;
    while (in.get(c)) {
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    field.push_back('"');
                    in.get();
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++lineno;
                field.push_back(c);
            }
        } else if (c == '"' && !field_started) {
            in_quotes = true;
            field_started = true;
        } else if (c == ',') {
            end_field();
        } else if (c == '\r') {
            // swallowed; \r\n ends the record at the \n
        } else if (c == '\n') {
            ++lineno;
            if (!fields.empty() || !field.empty()) end_record();
            record_line = lineno;
        } else {
            field.push_back(c);
            field_started = true;
        }
    }
    if (!fields.empty() || !field.empty()) end_record();
    return records;
}

}  // namespace

LoadResult load_csv(const std::string& path, bool strict) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open corpus file: " + path);

    auto records = read_csv_records(in);
    if (records.empty()) throw ConfigError("empty CSV file: " + path);

    const auto& header = records.front().second;
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < header.size(); ++i) col[trim(header[i])] = i;
    if (!col.count("id") || !col.count("text"))
        throw ConfigError("CSV header must contain 'id' and 'text' columns: " + path);

    LoadResult result;
    result.corpus.name = path;
    std::set<std::string> seen_ids;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& [lineno, fields] = records[r];
        if (fields.size() != header.size()) {
            record_skip(result, strict, lineno,
                        "expected " + std::to_string(header.size()) + " fields, got " +
                            std::to_string(fields.size()));
            continue;
        }
        Document doc;
        doc.id = fields[col["id"]];
        doc.text = fields[col["text"]];
        for (const auto& [name, idx] : col) {
            if (name == "id" || name == "text") continue;
            const std::string& value = fields[idx];
            if (value.empty()) continue;
            if (name == "label") {
                doc.label = value;
            } else if (name == "timestamp") {
                auto ts = parse_rfc3339(value);
                if (!ts) {
                    record_skip(result, strict, lineno, "bad timestamp '" + value + "'");
                    doc.id.clear();  // poison so the record is dropped below
                    break;
                }
                doc.timestamp = *ts;
            } else {
                doc.meta[name] = value;
            }
        }
        if (doc.id.empty()) continue;
        if (auto err = add_document(result.corpus, seen_ids, std::move(doc)))
            record_skip(result, strict, lineno, *err);
    }
    return result;
}

LoadResult load_corpus(const std::string& path, bool strict) {
    auto dot = path.find_last_of('.');
    std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (ext == "csv") return load_csv(path, strict);
    if (ext == "jsonl" || ext == "ndjson" || ext == "json") return load_jsonl(path, strict);
    throw ConfigError("unrecognized corpus extension '" + ext + "' (want .jsonl or .csv): " + path);
}

namespace {

// Portable Fisher-Yates; std::shuffle is implementation-defined so golden
// artifacts would not survive a stdlib change.
template <typename T>
void deterministic_shuffle(std::vector<T>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace

std::pair<Corpus, Corpus> stratified_split(const Corpus& corpus, double fraction,
                                           std::uint64_t rng_seed) {
    if (!(fraction > 0.0 && fraction < 1.0))
        throw ConfigError("split fraction must be in (0,1), got " + std::to_string(fraction));

    // Group document indices per label; labels processed in sorted order so
    // the single shared RNG stream is consumed deterministically.
    std::map<std::string, std::vector<std::size_t>> by_label;
    for (std::size_t i = 0; i < corpus.documents.size(); ++i) {
        const auto& doc = corpus.documents[i];
        if (!doc.label)
            throw MissingLabel("document '" + doc.id + "' has no label; stratified split needs one");
        by_label[*doc.label].push_back(i);
    }

    std::mt19937_64 rng(rng_seed);
    std::vector<bool> in_test(corpus.documents.size(), false);
    for (auto& [label, indices] : by_label) {
        auto take = static_cast<std::size_t>(
            std::floor(fraction * static_cast<double>(indices.size()) + 0.5));
        deterministic_shuffle(indices, rng);
        for (std::size_t k = 0; k < take; ++k) in_test[indices[k]] = true;
    }

    Corpus test{corpus.name + "/test", {}};
    Corpus rest{corpus.name + "/rest", {}};
    for (std::size_t i = 0; i < corpus.documents.size(); ++i)
        (in_test[i] ? test : rest).documents.push_back(corpus.documents[i]);
    return {std::move(test), std::move(rest)};
}

std::vector<Corpus> temporal_bins(const Corpus& corpus, const PeriodSpec& spec) {
    if (spec.bin_names.size() != spec.boundaries.size() + 1)
        throw ConfigError("period spec needs boundaries+1 bin names");
    for (std::size_t i = 1; i < spec.boundaries.size(); ++i)
        if (!(spec.boundaries[i - 1] < spec.boundaries[i]))
            throw ConfigError("period boundaries must be strictly increasing");

    std::vector<Corpus> bins(spec.bin_names.size());
    for (std::size_t i = 0; i < bins.size(); ++i) bins[i].name = spec.bin_names[i];

    for (const auto& doc : corpus.documents) {
        if (!doc.timestamp)
            throw MissingTimestamp("document '" + doc.id + "' has no timestamp");
        // First boundary with t < boundary; past-the-end means the last bin.
        std::size_t bin = std::upper_bound(spec.boundaries.begin(), spec.boundaries.end(),
                                           *doc.timestamp) -
                          spec.boundaries.begin();
        bins[bin].documents.push_back(doc);
    }
    return bins;
}

}  // namespace promptopic
