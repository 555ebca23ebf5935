#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "promptopic/types.hpp"

namespace promptopic {

/// Removes @-mentions and hyperlinks (http/https URLs, bare www. hosts and
/// t.co shortlinks), collapses whitespace runs and trims. Total and idempotent.
std::string clean_text(const std::string& text);

/// One skipped input record with the reason it was dropped.
struct SkippedRecord {
    std::size_t line;
    std::string reason;
};

struct LoadResult {
    Corpus corpus;
    std::vector<SkippedRecord> skipped;
};

/// Reads a JSON Lines corpus file: one object per line with fields `id`,
/// `text`, optional `label`, `timestamp` (RFC 3339), `meta`. Text is cleaned
/// on ingest; records that are invalid or empty after cleaning are skipped and
/// reported with their line numbers. With strict=true the first bad record
/// raises ConfigError instead.
LoadResult load_jsonl(const std::string& path, bool strict = false);

/// Reads a CSV corpus with a header row naming the same fields. Columns other
/// than id/text/label/timestamp become meta entries keyed by column name.
LoadResult load_csv(const std::string& path, bool strict = false);

/// Loads by extension: ".jsonl"/".ndjson" -> JSONL, ".csv" -> CSV.
LoadResult load_corpus(const std::string& path, bool strict = false);

/// Per-label sampling of round(fraction * count) documents (round half up)
/// into `test`, uniformly without replacement, deterministic for a fixed
/// seed. Both outputs preserve corpus order. Throws MissingLabel if any
/// document lacks a label.
std::pair<Corpus, Corpus> stratified_split(const Corpus& corpus, double fraction,
                                           std::uint64_t rng_seed);

/// Buckets documents into spec's half-open time windows. Every timestamped
/// document lands in exactly one bin; bin order matches the spec. Throws
/// MissingTimestamp if any document lacks a timestamp.
std::vector<Corpus> temporal_bins(const Corpus& corpus, const PeriodSpec& spec);

}  // namespace promptopic
