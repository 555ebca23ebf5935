#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "promptopic/types.hpp"

namespace promptopic {

enum class PromptMode { basic, constrained, seeded };

PromptMode prompt_mode_from_string(const std::string& s);
std::string to_string(PromptMode mode);

/// Prompt configuration for the extraction round. `forbidden_topics` and
/// `framing` together make up the constraint block rendered for constrained
/// and seeded modes; `seed_topics` are the granularity exemplars named in
/// seeded mode (two by default in the shipped configs).
struct PromptConfig {
    PromptMode mode = PromptMode::basic;
    std::vector<std::string> forbidden_topics;
    std::vector<std::string> framing;  // extra task-framing sentences, verbatim
    std::vector<std::string> seed_topics;
    std::optional<std::string> granularity_hint;

    /// Enforces the mode invariants (basic carries no constraints or seeds,
    /// seeded requires seeds). Throws ConfigError.
    void validate() const;
};

struct Batch {
    std::vector<Document> documents;
    int index = 0;
};

struct RenderedPrompt {
    std::string system;
    std::string user;
    std::vector<std::string> doc_ids;  // order matches the enumeration in `user`
};

enum class BatchStrategy { individual, batched };

BatchStrategy batch_strategy_from_string(const std::string& s);

/// Splits the corpus into provider-sized batches. `individual` puts one
/// document per batch; `batched` cuts consecutive chunks of at most
/// batch_size, preserving corpus order. Every document lands in exactly one
/// batch.
std::vector<Batch> make_batches(const Corpus& corpus, int batch_size, BatchStrategy strategy);

/// Editable prompt wording. Each template is plain text with {PLACEHOLDER}
/// substitution; see the shipped defaults for the available placeholders
/// ({DOCS}, {CONSTRAINTS}, {SEEDS}, {N}, {EXAMPLE}).
struct TemplateSet {
    std::string extract_basic;
    std::string extract_constrained;
    std::string extract_seeded;
    std::string summarize;
    std::string label;
    std::string few_shot_example;

    static TemplateSet defaults();

    /// defaults() with any template overridden by a file in `dir` named
    /// `<template>.txt` (e.g. extract_seeded.txt). A style-specific file
    /// `<template>.<style>.txt` (style "chat" or "sys") wins over the plain
    /// one.
    static TemplateSet load(const std::string& dir, const std::string& style = "chat");
};

/// Renders the system+user pair for one extraction batch: task instruction,
/// output grammar, constraint block (constrained/seeded), seed sentence
/// (seeded), and the documents enumerated as "i: <text>" starting at 1.
RenderedPrompt render_extraction_prompt(const Batch& batch, const PromptConfig& cfg,
                                        const TemplateSet& templates);

/// Renders the summarization round: merge the topic list into exactly n
/// general topics, embedding the few-shot example verbatim. The user section
/// is the newline-joined topic list. When `max_context_tokens` is set and the
/// estimate exceeds it, throws ContextOverflow (callers fall back to a
/// frequency-truncated list).
RenderedPrompt render_summarization_prompt(const std::vector<std::string>& topics, int n,
                                           const std::string& few_shot_example,
                                           const TemplateSet& templates,
                                           std::int64_t max_context_tokens = 0);

/// Renders the baseline-labeling prompt: each token list becomes one numbered
/// line of comma-separated tokens; the model is asked for one name per line.
RenderedPrompt render_label_prompt(const std::vector<std::vector<std::string>>& token_lists,
                                   const TemplateSet& templates);

}  // namespace promptopic
