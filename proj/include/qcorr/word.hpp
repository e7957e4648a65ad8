#pragma once
// Free-group words over indexed generators and finite presentations.

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace qcorr {

struct Letter {
    int gen;
    int exp;  // +1 or -1

    friend bool operator==(const Letter&, const Letter&) = default;
    friend auto operator<=>(const Letter&, const Letter&) = default;
};

using Word = std::vector<Letter>;

inline Word free_reduce(const Word& w) {
    Word out;
    out.reserve(w.size());
    for (const auto& l : w) {
        if (!out.empty() && out.back().gen == l.gen && out.back().exp == -l.exp)
            out.pop_back();
        else
            out.push_back(l);
    }
    return out;
}

inline Word inverse(const Word& w) {
    Word out(w.rbegin(), w.rend());
    for (auto& l : out) l.exp = -l.exp;
    return out;
}

inline Word concat(std::initializer_list<Word> parts) {
    Word out;
    for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

inline Word gen_word(int g, int power = 1) {
    Word w;
    const int e = power >= 0 ? 1 : -1;
    for (int i = 0; i < std::abs(power); ++i) w.push_back({g, e});
    return w;
}

// [x, y] = x^-1 y^-1 x y
inline Word commutator(const Word& x, const Word& y) {
    return free_reduce(concat({inverse(x), inverse(y), x, y}));
}

inline int exponent_sum(const Word& w, int gen) {
    int s = 0;
    for (const auto& l : w)
        if (l.gen == gen) s += l.exp;
    return s;
}

struct Presentation {
    int generators = 0;
    std::vector<std::string> names;  // optional, same length as generators when present
    std::vector<Word> relators;

    std::string name(int g) const {
        if (g >= 0 && g < static_cast<int>(names.size())) return names[g];
        return "g" + std::to_string(g);
    }

    void check() const {
        for (const auto& r : relators)
            for (const auto& l : r)
                if (l.gen < 0 || l.gen >= generators || (l.exp != 1 && l.exp != -1))
                    throw std::out_of_range("relator letter out of range");
    }
};

inline std::string word_to_string(const Word& w, const Presentation* pres = nullptr) {
    if (w.empty()) return "e";
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) s += " ";
        s += pres ? pres->name(w[i].gen) : "g" + std::to_string(w[i].gen);
        if (w[i].exp < 0) s += "^-1";
    }
    return s;
}

inline nlohmann::json word_to_json(const Word& w) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& l : w) j.push_back({l.gen, l.exp});
    return j;
}

inline Word word_from_json(const nlohmann::json& j) {
    Word w;
    for (const auto& e : j) {
        const int g = e.at(0).get<int>(), x = e.at(1).get<int>();
        if (x == 0) continue;
        const Word part = gen_word(g, x);
        w.insert(w.end(), part.begin(), part.end());
    }
    return w;
}

inline nlohmann::json presentation_to_json(const Presentation& p) {
    nlohmann::json rels = nlohmann::json::array();
    for (const auto& r : p.relators) rels.push_back(word_to_json(r));
    nlohmann::json j = {{"generators", p.generators}, {"relators", rels}};
    if (!p.names.empty()) j["names"] = p.names;
    return j;
}

inline Presentation presentation_from_json(const nlohmann::json& j) {
    Presentation p;
    p.generators = j.at("generators").get<int>();
    if (j.contains("names")) p.names = j.at("names").get<std::vector<std::string>>();
    for (const auto& r : j.at("relators")) p.relators.push_back(word_from_json(r));
    p.check();
    return p;
}

}  // namespace qcorr
