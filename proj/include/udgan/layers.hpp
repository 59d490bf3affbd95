#pragma once

#include <span>
#include <string>
#include <vector>

#include "udgan/tape.hpp"

namespace udgan {

// Shape descriptor stored in checkpoints and validated when a checkpoint is
// loaded against a configured model.
struct LayerSpec {
    std::string kind; // linear | embedding | gru-cell | lstm-cell | bilstm
    std::uint32_t input_dim = 0;
    std::uint32_t output_dim = 0; // hidden dim for recurrent kinds
    std::uint32_t layer_count = 1;

    void validate() const {
        if (input_dim == 0 || output_dim == 0)
            throw ConfigError("LayerSpec: dimensions must be positive");
        if (layer_count < 1) throw ConfigError("LayerSpec: layer count must be >= 1");
    }

    bool operator==(const LayerSpec&) const = default;
};

// y = x*W + b
class LinearLayer {
public:
    static LinearLayer create(ParamStore& store, const std::string& prefix, std::size_t in,
                              std::size_t out, Rng& rng);
    // Binds to parameters that already exist in a store (after checkpoint load).
    static LinearLayer attach(const std::string& prefix, std::size_t in, std::size_t out);

    Tape::Id forward(Tape& t, Tape::Id x) const;
    LayerSpec spec() const { return {"linear", (std::uint32_t)in_, (std::uint32_t)out_, 1}; }
    std::size_t in_dim() const { return in_; }
    std::size_t out_dim() const { return out_; }

private:
    std::string w_, b_;
    std::size_t in_ = 0, out_ = 0;
};

class Embedding {
public:
    static Embedding create(ParamStore& store, const std::string& name, std::size_t vocab,
                            std::size_t dim, Rng& rng);
    static Embedding attach(const std::string& name, std::size_t vocab, std::size_t dim);

    // Rows of the table for a token-id sequence: (len x dim).
    Tape::Id lookup(Tape& t, std::vector<int> ids) const;
    Tape::Id table(Tape& t) const { return t.param(name_); }
    const std::string& name() const { return name_; }
    LayerSpec spec() const { return {"embedding", (std::uint32_t)vocab_, (std::uint32_t)dim_, 1}; }
    std::size_t vocab() const { return vocab_; }
    std::size_t dim() const { return dim_; }

private:
    std::string name_;
    std::size_t vocab_ = 0, dim_ = 0;
};

// Gated recurrent unit cell. Gate layout in the packed input projection is
// [update | reset | candidate].
class GruCell {
public:
    static GruCell create(ParamStore& store, const std::string& prefix, std::size_t in,
                          std::size_t hidden, Rng& rng);
    static GruCell attach(const std::string& prefix, std::size_t in, std::size_t hidden);

    Tape::Id step(Tape& t, Tape::Id x, Tape::Id h_prev) const;
    LayerSpec spec() const { return {"gru-cell", (std::uint32_t)in_, (std::uint32_t)hidden_, 1}; }
    std::size_t hidden() const { return hidden_; }

private:
    std::string wx_, wh_zr_, wh_c_, b_;
    std::size_t in_ = 0, hidden_ = 0;
};

// LSTM cell; packed gate layout [input | forget | candidate | output].
class LstmCell {
public:
    static LstmCell create(ParamStore& store, const std::string& prefix, std::size_t in,
                           std::size_t hidden, Rng& rng);
    static LstmCell attach(const std::string& prefix, std::size_t in, std::size_t hidden);

    struct State {
        Tape::Id h;
        Tape::Id c;
    };

    State step(Tape& t, Tape::Id x, State prev) const;
    State zero_state(Tape& t) const;
    LayerSpec spec() const { return {"lstm-cell", (std::uint32_t)in_, (std::uint32_t)hidden_, 1}; }
    std::size_t hidden() const { return hidden_; }

private:
    std::string wx_, wh_, b_;
    std::size_t in_ = 0, hidden_ = 0;
};

// Stack of LSTM cells; layer k feeds layer k+1 its hidden state each step.
class LstmStack {
public:
    static LstmStack create(ParamStore& store, const std::string& prefix, std::size_t in,
                            std::size_t hidden, std::size_t layers, Rng& rng);
    static LstmStack attach(const std::string& prefix, std::size_t in, std::size_t hidden,
                            std::size_t layers);

    // Runs the stack over a token-step sequence (each element 1 x in) and
    // returns the final hidden state of the top layer.
    Tape::Id run(Tape& t, std::span<const Tape::Id> xs) const;
    std::size_t layer_count() const { return cells_.size(); }
    std::size_t hidden() const { return cells_.back().hidden(); }
    LayerSpec spec() const {
        return {"lstm-cell", (std::uint32_t)in_, (std::uint32_t)hidden_,
                (std::uint32_t)cells_.size()};
    }

private:
    std::vector<LstmCell> cells_;
    std::size_t in_ = 0, hidden_ = 0;
};

// Bidirectional LSTM over a sequence; output is the concatenation of the
// final forward state and the final backward state (1 x 2*hidden).
class BiLstm {
public:
    static BiLstm create(ParamStore& store, const std::string& prefix, std::size_t in,
                         std::size_t hidden, Rng& rng);
    static BiLstm attach(const std::string& prefix, std::size_t in, std::size_t hidden);

    Tape::Id run(Tape& t, std::span<const Tape::Id> xs) const;
    LayerSpec spec() const { return {"bilstm", (std::uint32_t)in_, (std::uint32_t)hidden_, 1}; }
    std::size_t hidden() const { return hidden_; }

private:
    LstmCell fwd_, bwd_;
    std::size_t in_ = 0, hidden_ = 0;
};

} // namespace udgan
