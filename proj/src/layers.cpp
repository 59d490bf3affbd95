#include "udgan/layers.hpp"

namespace udgan {

LinearLayer LinearLayer::create(ParamStore& store, const std::string& prefix, std::size_t in,
                                std::size_t out, Rng& rng) {
    LayerSpec{"linear", (std::uint32_t)in, (std::uint32_t)out, 1}.validate();
    store.add(prefix + ".w", Matrix::uniform_init(in, out, in, rng));
    store.add(prefix + ".b", Matrix(1, out));
    return attach(prefix, in, out);
}

LinearLayer LinearLayer::attach(const std::string& prefix, std::size_t in, std::size_t out) {
    LinearLayer l;
    l.w_ = prefix + ".w";
    l.b_ = prefix + ".b";
    l.in_ = in;
    l.out_ = out;
    return l;
}

Tape::Id LinearLayer::forward(Tape& t, Tape::Id x) const {
    if (t.value(x).cols != in_) throw ConfigError("linear: input dim mismatch");
    return t.add_row(t.matmul(x, t.param(w_)), t.param(b_));
}

Embedding Embedding::create(ParamStore& store, const std::string& name, std::size_t vocab,
                            std::size_t dim, Rng& rng) {
    LayerSpec{"embedding", (std::uint32_t)vocab, (std::uint32_t)dim, 1}.validate();
    store.add(name, Matrix::uniform_init(vocab, dim, dim, rng));
    return attach(name, vocab, dim);
}

Embedding Embedding::attach(const std::string& name, std::size_t vocab, std::size_t dim) {
    Embedding e;
    e.name_ = name;
    e.vocab_ = vocab;
    e.dim_ = dim;
    return e;
}

Tape::Id Embedding::lookup(Tape& t, std::vector<int> ids) const {
    return t.gather_rows(t.param(name_), std::move(ids));
}

GruCell GruCell::create(ParamStore& store, const std::string& prefix, std::size_t in,
                        std::size_t hidden, Rng& rng) {
    LayerSpec{"gru-cell", (std::uint32_t)in, (std::uint32_t)hidden, 1}.validate();
    store.add(prefix + ".wx", Matrix::uniform_init(in, 3 * hidden, in, rng));
    store.add(prefix + ".wh_zr", Matrix::uniform_init(hidden, 2 * hidden, hidden, rng));
    store.add(prefix + ".wh_c", Matrix::uniform_init(hidden, hidden, hidden, rng));
    store.add(prefix + ".b", Matrix(1, 3 * hidden));
    return attach(prefix, in, hidden);
}

GruCell GruCell::attach(const std::string& prefix, std::size_t in, std::size_t hidden) {
    GruCell g;
    g.wx_ = prefix + ".wx";
    g.wh_zr_ = prefix + ".wh_zr";
    g.wh_c_ = prefix + ".wh_c";
    g.b_ = prefix + ".b";
    g.in_ = in;
    g.hidden_ = hidden;
    return g;
}

Tape::Id GruCell::step(Tape& t, Tape::Id x, Tape::Id h_prev) const {
    if (t.value(x).cols != in_ || t.value(h_prev).cols != hidden_)
        throw ConfigError("gru: input/state dim mismatch");
    const std::size_t h = hidden_;
    Tape::Id gx = t.add_row(t.matmul(x, t.param(wx_)), t.param(b_)); // 1 x 3H
    Tape::Id zr = t.sigmoid(t.add(t.slice_cols(gx, 0, 2 * h), t.matmul(h_prev, t.param(wh_zr_))));
    Tape::Id z = t.slice_cols(zr, 0, h);
    Tape::Id r = t.slice_cols(zr, h, 2 * h);
    Tape::Id cand =
        t.tanh_(t.add(t.slice_cols(gx, 2 * h, 3 * h), t.matmul(t.mul(r, h_prev), t.param(wh_c_))));
    return t.add(t.mul(t.one_minus(z), h_prev), t.mul(z, cand));
}

LstmCell LstmCell::create(ParamStore& store, const std::string& prefix, std::size_t in,
                          std::size_t hidden, Rng& rng) {
    LayerSpec{"lstm-cell", (std::uint32_t)in, (std::uint32_t)hidden, 1}.validate();
    store.add(prefix + ".wx", Matrix::uniform_init(in, 4 * hidden, in, rng));
    store.add(prefix + ".wh", Matrix::uniform_init(hidden, 4 * hidden, hidden, rng));
    store.add(prefix + ".b", Matrix(1, 4 * hidden));
    return attach(prefix, in, hidden);
}

LstmCell LstmCell::attach(const std::string& prefix, std::size_t in, std::size_t hidden) {
    LstmCell l;
    l.wx_ = prefix + ".wx";
    l.wh_ = prefix + ".wh";
    l.b_ = prefix + ".b";
    l.in_ = in;
    l.hidden_ = hidden;
    return l;
}

LstmCell::State LstmCell::zero_state(Tape& t) const {
    return State{t.input(Matrix(1, hidden_)), t.input(Matrix(1, hidden_))};
}

LstmCell::State LstmCell::step(Tape& t, Tape::Id x, State prev) const {
    if (t.value(x).cols != in_ || t.value(prev.h).cols != hidden_)
        throw ConfigError("lstm: input/state dim mismatch");
    const std::size_t h = hidden_;
    Tape::Id a = t.add(t.add_row(t.matmul(x, t.param(wx_)), t.param(b_)),
                       t.matmul(prev.h, t.param(wh_)));
    Tape::Id i = t.sigmoid(t.slice_cols(a, 0, h));
    Tape::Id f = t.sigmoid(t.slice_cols(a, h, 2 * h));
    Tape::Id g = t.tanh_(t.slice_cols(a, 2 * h, 3 * h));
    Tape::Id o = t.sigmoid(t.slice_cols(a, 3 * h, 4 * h));
    Tape::Id c = t.add(t.mul(f, prev.c), t.mul(i, g));
    Tape::Id hn = t.mul(o, t.tanh_(c));
    return State{hn, c};
}

LstmStack LstmStack::create(ParamStore& store, const std::string& prefix, std::size_t in,
                            std::size_t hidden, std::size_t layers, Rng& rng) {
    if (layers < 1) throw ConfigError("lstm stack: layer count must be >= 1");
    LstmStack s;
    s.in_ = in;
    s.hidden_ = hidden;
    for (std::size_t l = 0; l < layers; ++l) {
        const std::size_t lin = l == 0 ? in : hidden;
        s.cells_.push_back(LstmCell::create(store, prefix + ".l" + std::to_string(l), lin,
                                            hidden, rng));
    }
    return s;
}

LstmStack LstmStack::attach(const std::string& prefix, std::size_t in, std::size_t hidden,
                            std::size_t layers) {
    if (layers < 1) throw ConfigError("lstm stack: layer count must be >= 1");
    LstmStack s;
    s.in_ = in;
    s.hidden_ = hidden;
    for (std::size_t l = 0; l < layers; ++l) {
        const std::size_t lin = l == 0 ? in : hidden;
        s.cells_.push_back(LstmCell::attach(prefix + ".l" + std::to_string(l), lin, hidden));
    }
    return s;
}

Tape::Id LstmStack::run(Tape& t, std::span<const Tape::Id> xs) const {
    if (xs.empty()) throw UsageError("lstm stack: empty sequence");
    std::vector<LstmCell::State> states;
    states.reserve(cells_.size());
    for (const auto& c : cells_) states.push_back(c.zero_state(t));
    for (Tape::Id x : xs) {
        Tape::Id inp = x;
        for (std::size_t l = 0; l < cells_.size(); ++l) {
            states[l] = cells_[l].step(t, inp, states[l]);
            inp = states[l].h;
        }
    }
    return states.back().h;
}

BiLstm BiLstm::create(ParamStore& store, const std::string& prefix, std::size_t in,
                      std::size_t hidden, Rng& rng) {
    LayerSpec{"bilstm", (std::uint32_t)in, (std::uint32_t)hidden, 1}.validate();
    BiLstm b;
    b.fwd_ = LstmCell::create(store, prefix + ".fwd", in, hidden, rng);
    b.bwd_ = LstmCell::create(store, prefix + ".bwd", in, hidden, rng);
    b.in_ = in;
    b.hidden_ = hidden;
    return b;
}

BiLstm BiLstm::attach(const std::string& prefix, std::size_t in, std::size_t hidden) {
    BiLstm b;
    b.fwd_ = LstmCell::attach(prefix + ".fwd", in, hidden);
    b.bwd_ = LstmCell::attach(prefix + ".bwd", in, hidden);
    b.in_ = in;
    b.hidden_ = hidden;
    return b;
}

Tape::Id BiLstm::run(Tape& t, std::span<const Tape::Id> xs) const {
    if (xs.empty()) throw UsageError("bilstm: empty sequence");
    LstmCell::State sf = fwd_.zero_state(t);
    for (Tape::Id x : xs) sf = fwd_.step(t, x, sf);
    LstmCell::State sb = bwd_.zero_state(t);
    for (std::size_t i = xs.size(); i-- > 0;) sb = bwd_.step(t, xs[i], sb);
    return t.concat_cols(sf.h, sb.h);
}

} // namespace udgan
