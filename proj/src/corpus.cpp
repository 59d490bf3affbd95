#include "udgan/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "udgan/rng.hpp"

namespace udgan {

namespace {

const char* kReservedTokens[] = {"<pad>", "<bos>", "<sep>", "<unk>"};

} // namespace

Vocabulary::Vocabulary() {
    for (std::size_t i = 0; i < kReservedCount; ++i) {
        id_to_token_.emplace_back(kReservedTokens[i]);
        token_to_id_[kReservedTokens[i]] = static_cast<int>(i);
    }
}

int Vocabulary::add_token(const std::string& token) {
    if (token_to_id_.count(token)) throw DataError("vocabulary: duplicate token " + token);
    const int id = static_cast<int>(id_to_token_.size());
    id_to_token_.push_back(token);
    token_to_id_[token] = id;
    return id;
}

int Vocabulary::id_of(const std::string& token) const {
    auto it = token_to_id_.find(token);
    return it == token_to_id_.end() ? kUnk : it->second;
}

const std::string& Vocabulary::token(int id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= id_to_token_.size())
        throw DataError("vocabulary: invalid token id " + std::to_string(id));
    return id_to_token_[static_cast<std::size_t>(id)];
}

bool Vocabulary::contains(const std::string& token) const {
    return token_to_id_.count(token) > 0;
}

std::vector<std::string> tokenize_ws(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream iss(text);
    std::string tok;
    while (iss >> tok) out.push_back(tok);
    return out;
}

namespace {

bool is_blank(const std::string& line) {
    return std::all_of(line.begin(), line.end(),
                       [](unsigned char c) { return std::isspace(c); });
}

Corpus build_corpus(std::istream& in, std::size_t max_len, std::size_t min_count) {
    std::vector<std::vector<std::vector<std::string>>> raw_paragraphs;
    std::vector<std::vector<std::string>> current;
    std::map<std::string, std::size_t> freq; // ordered map gives the lexicographic tie-break

    std::string line;
    auto flush = [&] {
        if (!current.empty()) {
            raw_paragraphs.push_back(std::move(current));
            current.clear();
        }
    };
    while (std::getline(in, line)) {
        if (is_blank(line)) {
            flush();
            continue;
        }
        auto tokens = tokenize_ws(line);
        if (tokens.size() > max_len) continue; // over-long sentences are dropped
        for (const auto& t : tokens) ++freq[t];
        current.push_back(std::move(tokens));
    }
    flush();

    if (raw_paragraphs.empty()) throw DataError("corpus: empty after filtering");

    Corpus corpus;
    // frequency desc, then lexicographic; the stable sort keeps map order
    // within equal-frequency buckets
    std::vector<std::pair<std::string, std::size_t>> items(freq.begin(), freq.end());
    std::stable_sort(items.begin(), items.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    for (const auto& [token, count] : items) {
        if (count < min_count) continue;
        if (corpus.vocab.contains(token)) continue; // reserved surface form in the corpus
        corpus.vocab.add_token(token);
    }

    for (auto& para_tokens : raw_paragraphs) {
        Paragraph p;
        for (auto& sent_tokens : para_tokens) {
            Sentence s;
            s.ids.reserve(sent_tokens.size());
            for (const auto& t : sent_tokens) s.ids.push_back(corpus.vocab.id_of(t));
            p.sentences.push_back(std::move(s));
        }
        corpus.paragraphs.push_back(std::move(p));
    }
    return corpus;
}

} // namespace

Corpus load_corpus(const std::filesystem::path& path, std::size_t max_len,
                   std::size_t min_count) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open corpus: " + path.string());
    return build_corpus(f, max_len, min_count);
}

Corpus load_corpus_text(const std::string& text, std::size_t max_len, std::size_t min_count) {
    std::istringstream iss(text);
    return build_corpus(iss, max_len, min_count);
}

Sentence encode(const Vocabulary& vocab, const std::string& text) {
    auto tokens = tokenize_ws(text);
    if (tokens.empty()) throw DataError("encode: empty sentence");
    Sentence s;
    s.ids.reserve(tokens.size());
    for (const auto& t : tokens) s.ids.push_back(vocab.id_of(t));
    return s;
}

std::vector<std::string> decode_tokens(const Vocabulary& vocab, const Sentence& s) {
    std::vector<std::string> out;
    out.reserve(s.ids.size());
    for (int id : s.ids) out.push_back(vocab.token(id));
    return out;
}

std::string decode(const Vocabulary& vocab, const Sentence& s) {
    std::string out;
    bool first = true;
    for (int id : s.ids) {
        if (!first) out += ' ';
        out += vocab.token(id);
        first = false;
    }
    return out;
}

std::vector<std::vector<int>> ParagraphBatch::padded_sentence_ids() const {
    std::size_t width = 0;
    for (const Paragraph* p : items)
        for (const auto& s : p->sentences) width = std::max(width, s.ids.size());
    std::vector<std::vector<int>> out;
    for (const Paragraph* p : items)
        for (const auto& s : p->sentences) {
            std::vector<int> row = s.ids;
            row.resize(width, Vocabulary::kPad);
            out.push_back(std::move(row));
        }
    return out;
}

std::vector<ParagraphBatch> batch_paragraphs(const std::vector<Paragraph>& data,
                                             std::size_t batch_size, std::uint64_t seed) {
    if (batch_size < 1) throw UsageError("batch_paragraphs: batch_size must be >= 1");
    std::vector<std::size_t> order(data.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng(seed);
    for (std::size_t i = order.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(i));
        std::swap(order[i - 1], order[j < i ? j : i - 1]);
    }
    std::vector<ParagraphBatch> batches;
    for (std::size_t start = 0; start < order.size(); start += batch_size) {
        ParagraphBatch b;
        for (std::size_t i = start; i < std::min(start + batch_size, order.size()); ++i)
            b.items.push_back(&data[order[i]]);
        batches.push_back(std::move(b));
    }
    return batches;
}

std::pair<std::vector<const Paragraph*>, std::vector<const Paragraph*>>
split_heldout(const Corpus& corpus, std::size_t every_n) {
    std::vector<const Paragraph*> train, held;
    for (std::size_t i = 0; i < corpus.paragraphs.size(); ++i) {
        if (every_n > 0 && i % every_n == every_n - 1)
            held.push_back(&corpus.paragraphs[i]);
        else
            train.push_back(&corpus.paragraphs[i]);
    }
    if (train.empty()) throw DataError("split: no training paragraphs left");
    return {std::move(train), std::move(held)};
}

void save_vocab(const std::filesystem::path& path, const Vocabulary& vocab) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw IoError("cannot write vocab: " + path.string());
    for (std::size_t i = 0; i < vocab.size(); ++i) f << vocab.token(static_cast<int>(i)) << '\n';
}

Vocabulary load_vocab(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open vocab: " + path.string());
    Vocabulary v;
    std::string line;
    std::size_t idx = 0;
    while (std::getline(f, line)) {
        if (idx < Vocabulary::kReservedCount) {
            if (line != v.token(static_cast<int>(idx)))
                throw DataError("vocab file: reserved token mismatch at line " +
                                std::to_string(idx));
        } else {
            v.add_token(line);
        }
        ++idx;
    }
    if (idx < Vocabulary::kReservedCount) throw DataError("vocab file: too short");
    return v;
}

} // namespace udgan
