#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace promptopic {

/// Suffix rewrite applied per token, longest-suffix first as listed.
struct SuffixRule {
    std::string suffix;
    std::string replacement;
    std::size_t min_token_len = 0;  // rule skipped for shorter tokens
};

/// Rules that collapse surface variants of one topic. Defaults reconstruct
/// the hand-crafted post-processing used for vaccine-hesitancy output
/// (lowercasing, hyphen removal, plural stripping, a small derivational
/// override table). Fully user-overridable via a key-value config file.
struct NormalizationConfig {
    /// Whole-token rewrites tried before suffix rules ("effectiveness" -> "effective").
    std::map<std::string, std::string> lemma_overrides;
    /// Ordered suffix rules; first match wins per token.
    std::vector<SuffixRule> suffix_rules;
    /// Tokens exempt from the trailing-s rule ("virus", "news", ...).
    std::set<std::string> keep_list;
    /// Whole-topic rewrites applied last ("vaccine efficacy" -> "vaccine effectiveness").
    std::map<std::string, std::string> synonym_map;

    static NormalizationConfig defaults();

    /// defaults() with the tables replaced/extended from a key-value file.
    /// Validates that the resulting pipeline is idempotent on every mapping
    /// target; throws ConfigError otherwise.
    static NormalizationConfig from_file(const std::string& path);
};

/// Normalizes one raw topic string: NFC composition, lowercasing, hyphen ->
/// space, punctuation stripping (internal apostrophes survive), whitespace
/// collapsing, per-token lemmatization, then a whole-topic synonym lookup.
/// Idempotent. Throws EmptyAfterNormalization when nothing is left.
std::string normalize_topic(const std::string& raw, const NormalizationConfig& cfg);

struct NormalizedMention {
    std::string topic;
    std::string doc_id;
};

struct NormalizeResult {
    std::vector<NormalizedMention> mentions;  // order-preserving
    std::size_t dropped_empty = 0;
};

/// Maps normalize_topic over (raw, doc_id) pairs; items that normalize to the
/// empty string are dropped and counted.
NormalizeResult normalize_mentions(const std::vector<std::pair<std::string, std::string>>& mentions,
                                   const NormalizationConfig& cfg);

}  // namespace promptopic
