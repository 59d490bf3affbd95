#pragma once

#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "udgan/error.hpp"

namespace udgan {

// Token-id vocabulary with four reserved ids at the front. Ids are stable
// across runs for a given corpus: tokens are ordered by descending frequency
// with a lexicographic tie-break.
class Vocabulary {
public:
    static constexpr int kPad = 0;
    static constexpr int kBos = 1;
    static constexpr int kSep = 2; // sentence separator / end-of-sentence
    static constexpr int kUnk = 3;
    static constexpr std::size_t kReservedCount = 4;

    Vocabulary();

    // Appends a regular token; returns its id. Throws on duplicates.
    int add_token(const std::string& token);

    int id_of(const std::string& token) const; // kUnk when absent
    const std::string& token(int id) const;    // DataError on invalid id
    bool contains(const std::string& token) const;
    std::size_t size() const { return id_to_token_.size(); }

private:
    std::vector<std::string> id_to_token_;
    std::unordered_map<std::string, int> token_to_id_;
};

struct Sentence {
    std::vector<int> ids;

    std::size_t length() const { return ids.size(); }
};

struct Paragraph {
    std::vector<Sentence> sentences;
};

struct Corpus {
    Vocabulary vocab;
    std::vector<Paragraph> paragraphs;

    std::size_t sentence_count() const {
        std::size_t n = 0;
        for (const auto& p : paragraphs) n += p.sentences.size();
        return n;
    }
};

inline constexpr std::size_t kDefaultMaxLen = 45;
inline constexpr std::size_t kDefaultMinCount = 2;

std::vector<std::string> tokenize_ws(const std::string& text);

// Corpus file format: one pre-tokenized sentence per line, a blank line
// terminates a paragraph. Sentences longer than max_len are dropped; tokens
// seen fewer than min_count times map to UNK.
Corpus load_corpus(const std::filesystem::path& path, std::size_t max_len = kDefaultMaxLen,
                   std::size_t min_count = kDefaultMinCount);
Corpus load_corpus_text(const std::string& text, std::size_t max_len = kDefaultMaxLen,
                        std::size_t min_count = kDefaultMinCount);

// Whitespace-splits and maps through the vocabulary (unknown tokens -> UNK).
// An empty token list violates the Sentence invariant and raises DataError.
Sentence encode(const Vocabulary& vocab, const std::string& text);
std::string decode(const Vocabulary& vocab, const Sentence& s);
std::vector<std::string> decode_tokens(const Vocabulary& vocab, const Sentence& s);

struct ParagraphBatch {
    std::vector<const Paragraph*> items;

    // Sentences of all paragraphs, right-padded with PAD to a common length.
    std::vector<std::vector<int>> padded_sentence_ids() const;
};

// Deterministic shuffled batching: a fixed seed always yields the same batch
// sequence. The final batch may be smaller.
std::vector<ParagraphBatch> batch_paragraphs(const std::vector<Paragraph>& data,
                                             std::size_t batch_size, std::uint64_t seed);

// Every n-th paragraph goes to the held-out slice (used for validation NLL
// and as the BLEU reference pool). Both halves share the corpus vocabulary.
std::pair<std::vector<const Paragraph*>, std::vector<const Paragraph*>>
split_heldout(const Corpus& corpus, std::size_t every_n = 10);

// Vocabulary file: one token per line in id order (reserved ids included).
void save_vocab(const std::filesystem::path& path, const Vocabulary& vocab);
Vocabulary load_vocab(const std::filesystem::path& path);

} // namespace udgan
