#include "udgan/sentiment.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "udgan/kv_file.hpp"

namespace udgan {

std::string ascii_lower(const std::string& s) {
    std::string out = s;
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

namespace {

bool is_all_caps(const std::string& s) {
    bool has_alpha = false;
    for (unsigned char c : s) {
        if (std::isalpha(c)) {
            has_alpha = true;
            if (!std::isupper(c)) return false;
        }
    }
    return has_alpha;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream iss(s);
    while (std::getline(iss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

} // namespace

SentimentRules SentimentRules::defaults() {
    SentimentRules r;
    r.negators = {"not",    "never", "no",      "none",   "nothing", "neither", "nor",
                  "cannot", "cant",  "wont",    "dont",   "didnt",   "doesnt",  "isnt",
                  "arent",  "wasnt", "werent",  "hasnt",  "havent",  "hadnt",   "aint",
                  "without", "rarely", "seldom", "hardly"};
    const double up = 0.293, down = -0.293;
    r.boosters = {{"very", up},       {"really", up},    {"extremely", up},
                  {"absolutely", up}, {"completely", up}, {"totally", up},
                  {"incredibly", up}, {"highly", up},     {"so", up},
                  {"utterly", up},    {"remarkably", up}, {"deeply", up},
                  {"slightly", down}, {"somewhat", down}, {"barely", down},
                  {"marginally", down}, {"partly", down}, {"almost", down},
                  {"kinda", down},    {"little", down},   {"less", down}};
    r.contrastive = {"but"};
    return r;
}

SentimentLexicon SentimentLexicon::defaults() {
    SentimentLexicon lex;
    lex.rules_ = SentimentRules::defaults();
    // Frozen subset of VADER-scale valences ([-4, 4]).
    static const std::pair<const char*, double> kEntries[] = {
        {"good", 1.9},      {"great", 3.1},     {"excellent", 2.7}, {"happy", 2.7},
        {"wonderful", 2.7}, {"love", 3.2},      {"loved", 2.9},     {"amazing", 2.8},
        {"awesome", 3.1},   {"best", 3.2},      {"better", 1.9},    {"positive", 2.3},
        {"success", 2.7},   {"successful", 2.8}, {"win", 2.8},      {"winning", 2.4},
        {"strong", 2.3},    {"gain", 2.4},      {"gains", 2.2},     {"profit", 2.1},
        {"profitable", 2.3}, {"improve", 1.9},  {"improved", 2.1},  {"improving", 1.9},
        {"optimistic", 2.4}, {"thrive", 2.6},   {"thriving", 2.8},  {"boom", 2.1},
        {"booming", 2.4},   {"hope", 1.9},      {"hopeful", 2.3},   {"confident", 2.2},
        {"calm", 1.3},      {"stable", 1.2},    {"safe", 1.9},      {"benefit", 1.9},
        {"bright", 1.9},    {"promising", 2.0},
        {"bad", -2.5},      {"terrible", -2.1}, {"awful", -2.0},    {"horrible", -2.5},
        {"sad", -2.1},      {"unhappy", -1.8},  {"hate", -2.7},     {"worst", -3.1},
        {"worse", -2.1},    {"negative", -2.3}, {"fail", -2.5},     {"failure", -2.6},
        {"failing", -2.2},  {"loss", -1.3},     {"losses", -1.7},   {"lose", -2.2},
        {"losing", -1.9},   {"weak", -1.9},     {"crisis", -3.1},   {"collapse", -2.2},
        {"crash", -2.2},    {"fear", -2.2},     {"fears", -1.8},    {"panic", -2.7},
        {"gloomy", -1.9},   {"bleak", -1.9},    {"risk", -1.1},     {"risky", -1.4},
        {"threat", -2.4},   {"decline", -1.6},  {"declining", -1.6}, {"slump", -1.9},
        {"war", -2.9},      {"damage", -2.2},   {"angry", -2.3},    {"worried", -1.8},
    };
    for (const auto& [tok, v] : kEntries) lex.valence_[tok] = v;
    return lex;
}

SentimentLexicon SentimentLexicon::from_files(const std::filesystem::path& lexicon_path,
                                              const std::filesystem::path& rules_path) {
    SentimentLexicon lex;
    lex.rules_ = SentimentRules::defaults();

    std::ifstream f(lexicon_path);
    if (!f) throw IoError("cannot open sentiment lexicon: " + lexicon_path.string());
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos) throw DataError("lexicon: missing TAB in line: " + line);
        const std::string token = ascii_lower(line.substr(0, tab));
        try {
            lex.valence_[token] = std::stod(line.substr(tab + 1));
        } catch (const std::exception&) {
            throw DataError("lexicon: bad valence in line: " + line);
        }
        if (!std::isfinite(lex.valence_[token]))
            throw DataError("lexicon: non-finite valence for " + token);
    }
    if (lex.valence_.empty()) throw DataError("lexicon: no entries");

    if (!rules_path.empty()) {
        KvMap kv = load_kv_file(rules_path);
        SentimentRules& r = lex.rules_;
        r.negation_factor = kv_double(kv, "negation_factor", r.negation_factor);
        r.caps_boost = kv_double(kv, "caps_boost", r.caps_boost);
        r.exclaim_boost = kv_double(kv, "exclaim_boost", r.exclaim_boost);
        r.exclaim_cap = static_cast<int>(kv_int(kv, "exclaim_cap", r.exclaim_cap));
        r.but_before = kv_double(kv, "but_before", r.but_before);
        r.but_after = kv_double(kv, "but_after", r.but_after);
        r.booster_damp[0] = kv_double(kv, "booster_damp_1", r.booster_damp[0]);
        r.booster_damp[1] = kv_double(kv, "booster_damp_2", r.booster_damp[1]);
        r.booster_damp[2] = kv_double(kv, "booster_damp_3", r.booster_damp[2]);
        if (kv.count("negators")) {
            r.negators.clear();
            for (auto& t : split_list(kv.at("negators"))) r.negators.insert(ascii_lower(t));
        }
        if (kv.count("contrastive")) {
            r.contrastive.clear();
            for (auto& t : split_list(kv.at("contrastive"))) r.contrastive.insert(ascii_lower(t));
        }
        if (kv.count("boosters")) {
            r.boosters.clear();
            for (auto& item : split_list(kv.at("boosters"))) {
                const auto colon = item.find(':');
                if (colon == std::string::npos)
                    throw DataError("rules: booster entry needs token:value, got " + item);
                r.boosters[ascii_lower(item.substr(0, colon))] =
                    std::stod(item.substr(colon + 1));
            }
        }
        for (double d : {r.negation_factor, r.caps_boost, r.exclaim_boost, r.but_before,
                         r.but_after})
            if (!std::isfinite(d)) throw DataError("rules: non-finite constant");
    }
    return lex;
}

bool SentimentLexicon::has(const std::string& token) const {
    return valence_.count(ascii_lower(token)) > 0;
}

double SentimentLexicon::valence(const std::string& token) const {
    auto it = valence_.find(ascii_lower(token));
    return it == valence_.end() ? 0.0 : it->second;
}

void SentimentLexicon::set_valence(const std::string& token, double v) {
    valence_[ascii_lower(token)] = v;
}

SentimentScores sentiment_proportions(const SentimentLexicon& lex,
                                      std::span<const std::string> tokens) {
    const SentimentRules& rules = lex.rules();

    std::vector<std::string> lower;
    lower.reserve(tokens.size());
    for (const auto& t : tokens) lower.push_back(ascii_lower(t));

    int exclaims = 0;
    for (const auto& t : tokens)
        for (char c : t)
            if (c == '!') ++exclaims;
    exclaims = std::min(exclaims, rules.exclaim_cap);

    // position of the last contrastive conjunction, if any
    std::ptrdiff_t but_idx = -1;
    for (std::size_t i = 0; i < lower.size(); ++i)
        if (rules.contrastive.count(lower[i])) but_idx = static_cast<std::ptrdiff_t>(i);

    double pos_mass = 0.0, neg_mass = 0.0;
    std::size_t neutral_count = 0;

    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (!lex.has(lower[i])) {
            ++neutral_count; // negators, boosters and plain words all land here
            continue;
        }
        double v = lex.valence(lower[i]);

        // 1. negation window: any negator within the 3 preceding tokens
        for (std::size_t d = 1; d <= 3 && d <= i; ++d) {
            if (rules.negators.count(lower[i - d])) {
                v *= rules.negation_factor;
                break;
            }
        }
        // 2. boosters, damped with distance
        for (std::size_t d = 1; d <= 3 && d <= i; ++d) {
            auto it = rules.boosters.find(lower[i - d]);
            if (it != rules.boosters.end())
                v += sign_of(v) * it->second * rules.booster_damp[d - 1];
        }
        // 3. all-caps emphasis
        if (is_all_caps(tokens[i])) v += sign_of(v) * rules.caps_boost;
        // 4. exclamation emphasis (sentence-wide count)
        v += sign_of(v) * rules.exclaim_boost * exclaims;
        // 5. contrastive reweighting around the last "but"
        if (but_idx >= 0) {
            if (static_cast<std::ptrdiff_t>(i) < but_idx)
                v *= rules.but_before;
            else if (static_cast<std::ptrdiff_t>(i) > but_idx)
                v *= rules.but_after;
        }

        if (v > 0.0)
            pos_mass += v;
        else if (v < 0.0)
            neg_mass += -v;
        // a lexicon token whose adjusted valence is exactly 0 carries no mass
    }

    const double total = pos_mass + neg_mass + static_cast<double>(neutral_count);
    if (total == 0.0) return SentimentScores{0.0, 0.0, 1.0};
    return SentimentScores{pos_mass / total, neg_mass / total,
                           static_cast<double>(neutral_count) / total};
}

} // namespace udgan
