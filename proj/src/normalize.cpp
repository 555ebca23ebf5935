#include "promptopic/normalize.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "promptopic/errors.hpp"

namespace promptopic {

namespace {

#include "nfc_compose.inc"

// --- minimal UTF-8 <-> char32_t helpers ------------------------------------

std::u32string decode_utf8(const std::string& s) {
    std::u32string out;
    out.reserve(s.size());
    std::size_t i = 0;
    const auto n = s.size();
    while (i < n) {
        unsigned char b = s[i];
        char32_t cp = 0xFFFD;
        std::size_t len = 1;
        if (b < 0x80) {
            cp = b;
        } else if ((b & 0xE0) == 0xC0 && i + 1 < n && (s[i + 1] & 0xC0) == 0x80) {
            cp = (b & 0x1Fu) << 6 | (s[i + 1] & 0x3Fu);
            len = 2;
        } else if ((b & 0xF0) == 0xE0 && i + 2 < n && (s[i + 1] & 0xC0) == 0x80 &&
                   (s[i + 2] & 0xC0) == 0x80) {
            cp = (b & 0x0Fu) << 12 | (s[i + 1] & 0x3Fu) << 6 | (s[i + 2] & 0x3Fu);
            len = 3;
        } else if ((b & 0xF8) == 0xF0 && i + 3 < n && (s[i + 1] & 0xC0) == 0x80 &&
                   (s[i + 2] & 0xC0) == 0x80 && (s[i + 3] & 0xC0) == 0x80) {
            cp = (b & 0x07u) << 18 | (s[i + 1] & 0x3Fu) << 12 | (s[i + 2] & 0x3Fu) << 6 |
                 (s[i + 3] & 0x3Fu);
            len = 4;
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

// NFC composition for the ASCII-base + single-combining-mark subset frozen in
// nfc_compose.inc. Other sequences pass through untouched.
void nfc_compose(std::u32string& cps) {
    std::size_t w = 0;
    for (std::size_t r = 0; r < cps.size(); ++r) {
        char32_t cp = cps[r];
        if (w > 0 && cp >= 0x300 && cp < 0x370) {
            char32_t base = cps[w - 1];
            auto it = std::lower_bound(std::begin(kNfcPairs), std::end(kNfcPairs),
                                       std::pair<char32_t, char32_t>{base, cp},
                                       [](const NfcPair& p, const std::pair<char32_t, char32_t>& k) {
                                           return std::tie(p.base, p.mark) < std::tie(k.first, k.second);
                                       });
            if (it != std::end(kNfcPairs) && it->base == base && it->mark == cp) {
                cps[w - 1] = it->composed;
                continue;
            }
        }
        cps[w++] = cp;
    }
    cps.resize(w);
}

char32_t fold_case(char32_t cp) {
    if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
    // Latin-1 uppercase block, skipping the multiplication sign
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
    return cp;
}

bool is_hyphen(char32_t cp) {
    return cp == '-' || (cp >= 0x2010 && cp <= 0x2015) || cp == 0x2212;
}

bool is_space_cp(char32_t cp) {
    if (cp < 0x80) return std::isspace(static_cast<int>(cp)) != 0;
    return cp == 0xA0 || (cp >= 0x2000 && cp <= 0x200A) || cp == 0x202F || cp == 0x205F ||
           cp == 0x3000;
}

bool is_alnum_cp(char32_t cp) {
    if (cp < 0x80) return std::isalnum(static_cast<int>(cp)) != 0;
    return false;
}

// Non-ASCII codepoints dropped as punctuation/symbols. Letters in any script
// (and stray combining marks) survive.
bool is_stripped_symbol(char32_t cp) {
    if (cp == 0xAA || cp == 0xBA) return false;  // ordinal indicators are letters
    if (cp >= 0xA1 && cp <= 0xBF) return true;
    if (cp == 0xD7 || cp == 0xF7) return true;
    if (cp >= 0x2000 && cp <= 0x206F) return true;
    if (cp >= 0x20A0 && cp <= 0x20BF) return true;
    if (cp >= 0x2100 && cp <= 0x2BFF) return true;
    if (cp >= 0x2E00 && cp <= 0x2E7F) return true;
    if (cp >= 0x3000 && cp <= 0x303F) return true;
    if (cp >= 0xFE30 && cp <= 0xFE4F) return true;
    if (cp >= 0xFF00 && cp <= 0xFFEF) {
        bool fullwidth_alnum = (cp >= 0xFF10 && cp <= 0xFF19) || (cp >= 0xFF21 && cp <= 0xFF3A) ||
                               (cp >= 0xFF41 && cp <= 0xFF5A);
        return !fullwidth_alnum;
    }
    if (cp >= 0x1F000 && cp <= 0x1FAFF) return true;
    return false;
}

std::string lemmatize_token(const std::string& token, const NormalizationConfig& cfg) {
    if (auto it = cfg.lemma_overrides.find(token); it != cfg.lemma_overrides.end())
        return it->second;
    std::string t = token;
    if (!cfg.keep_list.count(t)) {
        for (const auto& rule : cfg.suffix_rules) {
            if (rule.suffix.empty()) continue;
            if (t.size() < rule.min_token_len || t.size() < rule.suffix.size()) continue;
            if (t.compare(t.size() - rule.suffix.size(), rule.suffix.size(), rule.suffix) != 0)
                continue;
            t.replace(t.size() - rule.suffix.size(), rule.suffix.size(), rule.replacement);
            break;  // first matching rule wins
        }
    }
    // rules can expose a boundary apostrophe; it is no longer internal
    while (!t.empty() && t.front() == '\'') t.erase(t.begin());
    while (!t.empty() && t.back() == '\'') t.pop_back();
    // a stripped suffix may uncover an override key ("effectiveness's")
    if (auto it = cfg.lemma_overrides.find(t); it != cfg.lemma_overrides.end()) return it->second;
    return t;
}

std::string normalize_core(const std::string& raw, const NormalizationConfig& cfg,
                           bool apply_synonyms) {
    std::u32string cps = decode_utf8(raw);
    nfc_compose(cps);

    // case folding, hyphen->space, typographic apostrophes -> ASCII
    for (auto& cp : cps) {
        cp = fold_case(cp);
        if (is_hyphen(cp))
            cp = ' ';
        else if (cp == 0x2018 || cp == 0x2019)
            cp = '\'';
    }

    // strip punctuation, keeping apostrophes flanked by alphanumerics
    std::u32string kept;
    kept.reserve(cps.size());
    for (std::size_t i = 0; i < cps.size(); ++i) {
        char32_t cp = cps[i];
        if (is_space_cp(cp)) {
            kept.push_back(' ');
        } else if (cp == '\'') {
            bool prev_ok = i > 0 && is_alnum_cp(cps[i - 1]);
            bool next_ok = i + 1 < cps.size() && is_alnum_cp(cps[i + 1]);
            if (prev_ok && next_ok) kept.push_back(cp);
        } else if (cp < 0x80) {
            if (is_alnum_cp(cp)) kept.push_back(cp);
        } else if (!is_stripped_symbol(cp)) {
            kept.push_back(cp);
        }
    }

    // collapse whitespace and lemmatize token by token
    std::string result;
    std::string token;
    auto flush_token = [&] {
        if (token.empty()) return;
        std::string lemma = lemmatize_token(token, cfg);
        token.clear();
        if (lemma.empty()) return;
        if (!result.empty()) result.push_back(' ');
        result += lemma;
    };
    for (char32_t cp : kept) {
        if (cp == ' ')
            flush_token();
        else
            append_utf8(token, cp);
    }
    flush_token();

    if (apply_synonyms) {
        if (auto it = cfg.synonym_map.find(result); it != cfg.synonym_map.end())
            return it->second;
    }
    return result;
}

}  // namespace

NormalizationConfig NormalizationConfig::defaults() {
    NormalizationConfig cfg;
    cfg.lemma_overrides = {
        {"effectiveness", "effective"},
        {"doubts", "doubt"},
        {"concerns", "concern"},
    };
    // "ss" maps to itself so the bare plural rule never mangles "less"/"mass"
    cfg.suffix_rules = {
        {"'s", "", 0},
        {"ies", "y", 5},
        {"ss", "ss", 0},
        {"s", "", 4},
    };
    cfg.keep_list = {"virus", "news", "analysis", "this"};
    return cfg;
}

std::string normalize_topic(const std::string& raw, const NormalizationConfig& cfg) {
    if (raw.empty()) throw EmptyAfterNormalization("empty topic string");
    std::string result = normalize_core(raw, cfg, true);
    if (result.empty())
        throw EmptyAfterNormalization("topic '" + raw + "' normalized to nothing");
    return result;
}

NormalizeResult normalize_mentions(const std::vector<std::pair<std::string, std::string>>& mentions,
                                   const NormalizationConfig& cfg) {
    NormalizeResult out;
    out.mentions.reserve(mentions.size());
    for (const auto& [raw, doc_id] : mentions) {
        std::string topic = raw.empty() ? std::string() : normalize_core(raw, cfg, true);
        if (topic.empty()) {
            ++out.dropped_empty;
            continue;
        }
        out.mentions.push_back({std::move(topic), doc_id});
    }
    return out;
}

namespace {

std::string trim_copy(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string lowercase_ascii(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

}  // namespace

NormalizationConfig NormalizationConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open normalization config: " + path);

    NormalizationConfig cfg = defaults();
    // Raw directive lists; keys are canonalized only once the full table set
    // is known.
    std::vector<std::pair<std::string, std::string>> lemmas, synonyms;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim_copy(line);
        if (t.empty() || t[0] == '#') continue;
        auto colon = t.find(':');
        if (colon == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected '<kind>: <body>'");
        std::string kind = trim_copy(t.substr(0, colon));
        std::string body = trim_copy(t.substr(colon + 1));
        auto split_arrow = [&](const std::string& b) -> std::pair<std::string, std::string> {
            auto arrow = b.find("->");
            if (arrow == std::string::npos)
                throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 'lhs -> rhs'");
            return {trim_copy(b.substr(0, arrow)), trim_copy(b.substr(arrow + 2))};
        };
        if (kind == "clear") {
            if (body == "lemma" || body == "all") cfg.lemma_overrides.clear();
            if (body == "suffix" || body == "all") cfg.suffix_rules.clear();
            if (body == "keep" || body == "all") cfg.keep_list.clear();
            if (body == "synonym" || body == "all") cfg.synonym_map.clear();
        } else if (kind == "lemma") {
            lemmas.push_back(split_arrow(body));
        } else if (kind == "synonym") {
            synonyms.push_back(split_arrow(body));
        } else if (kind == "keep") {
            cfg.keep_list.insert(lowercase_ascii(body));
        } else if (kind == "suffix") {
            auto [sfx, rest] = split_arrow(body);
            if (sfx.empty())
                throw ConfigError(path + ":" + std::to_string(lineno) + ": empty suffix");
            SuffixRule rule{sfx, "", 0};
            std::istringstream rs(rest);
            std::string word;
            while (rs >> word) {
                if (word.rfind("minlen=", 0) == 0)
                    rule.min_token_len = std::stoul(word.substr(7));
                else
                    rule.replacement = word;
            }
            cfg.suffix_rules.push_back(rule);
        } else {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": unknown directive '" +
                              kind + "'");
        }
    }

    for (auto& [k, v] : lemmas) cfg.lemma_overrides[lowercase_ascii(k)] = lowercase_ascii(v);
    // Synonym keys must be in post-pipeline form or they would never match.
    for (auto& [k, v] : synonyms) cfg.synonym_map[normalize_core(k, cfg, false)] = v;

    // The pipeline must be idempotent: every mapping target has to be a
    // fixed point of the rules it will pass through again.
    for (const auto& [k, v] : cfg.lemma_overrides) {
        if (!v.empty() && lemmatize_token(v, cfg) != v)
            throw ConfigError("lemma target '" + v + "' is not a fixed point of the token rules");
    }
    for (const auto& [k, v] : cfg.synonym_map) {
        if (!v.empty() && normalize_core(v, cfg, true) != v)
            throw ConfigError("synonym target '" + v + "' is not a fixed point of the pipeline");
    }
    return cfg;
}

}  // namespace promptopic
