#pragma once
// Minsky (counter) machines: simulation, bounded equivalence closure and the
// two machine transformations used by the reduction.

#include <algorithm>
#include <deque>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qcorr/cyclotomic.hpp"

namespace qcorr {

enum class CommandKind { Add, Sub, EmptyCheck, Stop };

inline const char* to_string(CommandKind k) {
    switch (k) {
        case CommandKind::Add: return "Add";
        case CommandKind::Sub: return "Sub";
        case CommandKind::EmptyCheck: return "EmptyCheck";
        case CommandKind::Stop: return "Stop";
    }
    return "?";
}

inline CommandKind command_kind_from_string(const std::string& s) {
    if (s == "Add") return CommandKind::Add;
    if (s == "Sub") return CommandKind::Sub;
    if (s == "EmptyCheck") return CommandKind::EmptyCheck;
    if (s == "Stop") return CommandKind::Stop;
    throw std::invalid_argument("unknown command kind: " + s);
}

struct Command {
    CommandKind kind;
    int input_state;
    int output_state;
    std::vector<int> glasses;  // 1-based, sorted, no duplicates

    friend bool operator==(const Command&, const Command&) = default;
};

inline Command make_command(CommandKind kind, int from, int to, std::vector<int> glasses = {}) {
    std::sort(glasses.begin(), glasses.end());
    glasses.erase(std::unique(glasses.begin(), glasses.end()), glasses.end());
    return Command{kind, from, to, std::move(glasses)};
}

class MinskyMachine {
public:
    MinskyMachine(int glasses, int states, std::vector<Command> commands, std::vector<std::string> names = {})
        : k_(glasses), n_(states), commands_(std::move(commands)), names_(std::move(names)) {
        if (k_ < 1) throw std::invalid_argument("machine needs at least one glass");
        if (n_ < 2) throw std::invalid_argument("machine needs the halt and start states");
        if (names_.empty())
            for (int s = 0; s < n_; ++s) names_.push_back(std::to_string(s));
        if (static_cast<int>(names_.size()) != n_) throw std::invalid_argument("state name map has wrong size");
        for (const auto& c : commands_) {
            if (c.input_state == 0) throw std::invalid_argument("no command may leave the halt state");
            if (c.input_state < 0 || c.input_state >= n_ || c.output_state < 0 || c.output_state >= n_)
                throw std::invalid_argument("command references an unknown state");
            // A Stop leads to the halt state in user machines; after the glass
            // extension renames 0 to 0' it is an unconditional move to 0'.
            if (c.kind == CommandKind::Stop) {
                if (!c.glasses.empty()) throw std::invalid_argument("Stop takes no glasses");
            } else if (c.glasses.empty()) {
                throw std::invalid_argument("Add/Sub/EmptyCheck need at least one glass");
            }
            for (int g : c.glasses)
                if (g < 1 || g > k_) throw std::invalid_argument("glass index out of range");
            if (!std::is_sorted(c.glasses.begin(), c.glasses.end()) ||
                std::adjacent_find(c.glasses.begin(), c.glasses.end()) != c.glasses.end())
                throw std::invalid_argument("glass list must be strictly increasing");
        }
    }

    int glasses() const { return k_; }
    int states() const { return n_; }
    const std::vector<Command>& commands() const { return commands_; }
    const std::vector<std::string>& state_names() const { return names_; }

private:
    int k_;
    int n_;
    std::vector<Command> commands_;
    std::vector<std::string> names_;
};

struct Configuration {
    int state = 1;
    std::vector<BigInt> coins;

    friend bool operator==(const Configuration& a, const Configuration& b) {
        return a.state == b.state && a.coins == b.coins;
    }
    friend bool operator<(const Configuration& a, const Configuration& b) {
        if (a.state != b.state) return a.state < b.state;
        return std::lexicographical_compare(a.coins.begin(), a.coins.end(), b.coins.begin(), b.coins.end());
    }
};

inline Configuration input_configuration(const MinskyMachine& m, const BigInt& n) {
    Configuration c{1, std::vector<BigInt>(m.glasses(), 0)};
    c.coins[0] = n;
    return c;
}

inline Configuration accept_configuration(const MinskyMachine& m) {
    return Configuration{0, std::vector<BigInt>(m.glasses(), 0)};
}

inline bool guard_holds(const Command& cmd, const Configuration& c) {
    if (cmd.input_state != c.state) return false;
    if (cmd.kind == CommandKind::Sub)
        return std::all_of(cmd.glasses.begin(), cmd.glasses.end(), [&](int g) { return c.coins[g - 1] > 0; });
    if (cmd.kind == CommandKind::EmptyCheck)
        return std::all_of(cmd.glasses.begin(), cmd.glasses.end(), [&](int g) { return c.coins[g - 1] == 0; });
    return true;
}

inline Configuration apply_command(const Command& cmd, Configuration c) {
    if (cmd.kind == CommandKind::Add)
        for (int g : cmd.glasses) c.coins[g - 1] += 1;
    if (cmd.kind == CommandKind::Sub)
        for (int g : cmd.glasses) c.coins[g - 1] -= 1;
    c.state = cmd.output_state;
    return c;
}

inline void check_configuration(const MinskyMachine& m, const Configuration& c) {
    if (static_cast<int>(c.coins.size()) != m.glasses()) throw std::invalid_argument("configuration has wrong glass count");
    if (c.state < 0 || c.state >= m.states()) throw std::invalid_argument("configuration state out of range");
    for (const auto& v : c.coins)
        if (v < 0) throw std::invalid_argument("negative coin count");
}

inline std::vector<Command> applicable_commands(const MinskyMachine& m, const Configuration& c) {
    check_configuration(m, c);
    std::vector<Command> out;
    for (const auto& cmd : m.commands())
        if (guard_holds(cmd, c)) out.push_back(cmd);
    return out;
}

// Two guards overlap unless one demands n_g > 0 where the other demands n_g = 0.
inline bool guards_overlap(const Command& a, const Command& b) {
    if (a.input_state != b.input_state) return false;
    auto conflict = [](const Command& pos, const Command& zero) {
        if (pos.kind != CommandKind::Sub || zero.kind != CommandKind::EmptyCheck) return false;
        for (int g : pos.glasses)
            if (std::binary_search(zero.glasses.begin(), zero.glasses.end(), g)) return true;
        return false;
    };
    return !conflict(a, b) && !conflict(b, a);
}

inline bool is_deterministic(const MinskyMachine& m) {
    const auto& cs = m.commands();
    for (std::size_t i = 0; i < cs.size(); ++i)
        for (std::size_t j = i + 1; j < cs.size(); ++j)
            if (guards_overlap(cs[i], cs[j])) return false;
    return true;
}

struct NondeterministicMachine : std::runtime_error {
    NondeterministicMachine() : std::runtime_error("machine is not deterministic") {}
};

struct RunAccepted { long long steps; };
struct RunStuck { Configuration config; long long steps; };
struct RunTimeout { Configuration config; };
using RunResult = std::variant<RunAccepted, RunStuck, RunTimeout>;

inline RunResult run(const MinskyMachine& m, const BigInt& input, long long max_steps) {
    if (!is_deterministic(m)) throw NondeterministicMachine();
    if (input < 0) throw std::invalid_argument("input must be nonnegative");
    Configuration c = input_configuration(m, input);
    const Configuration accept = accept_configuration(m);
    for (long long step = 0;; ++step) {
        if (c == accept) return RunAccepted{step};
        if (step >= max_steps) return RunTimeout{c};
        const Command* next = nullptr;
        for (const auto& cmd : m.commands())
            if (guard_holds(cmd, c)) {
                next = &cmd;
                break;
            }
        if (!next) return RunStuck{c, step};
        c = apply_command(*next, std::move(c));
    }
}

// Configurations c with cmd(c) = target.
inline std::vector<Configuration> inverse_images(const MinskyMachine& m, const Configuration& target) {
    std::vector<Configuration> out;
    for (const auto& cmd : m.commands()) {
        if (cmd.output_state != target.state) continue;
        Configuration c = target;
        c.state = cmd.input_state;
        bool ok = true;
        if (cmd.kind == CommandKind::Add) {
            for (int g : cmd.glasses) {
                if (c.coins[g - 1] == 0) ok = false;
                else c.coins[g - 1] -= 1;
            }
        } else if (cmd.kind == CommandKind::Sub) {
            for (int g : cmd.glasses) c.coins[g - 1] += 1;
        }
        if (ok && guard_holds(cmd, c)) out.push_back(std::move(c));
    }
    return out;
}

// BFS over forward and inverse command edges up to `bound` edges from c.
inline std::set<Configuration> equivalence_closure(const MinskyMachine& m, const Configuration& c, int bound) {
    if (bound < 0) throw std::invalid_argument("bound must be >= 0");
    check_configuration(m, c);
    std::set<Configuration> seen{c};
    std::vector<Configuration> frontier{c};
    for (int depth = 0; depth < bound && !frontier.empty(); ++depth) {
        std::vector<Configuration> next;
        for (const auto& cur : frontier) {
            std::vector<Configuration> nbrs = inverse_images(m, cur);
            for (const auto& cmd : m.commands())
                if (guard_holds(cmd, cur)) nbrs.push_back(apply_command(cmd, cur));
            for (auto& nb : nbrs)
                if (seen.insert(nb).second) next.push_back(std::move(nb));
        }
        frontier = std::move(next);
    }
    return seen;
}

// The (k+1)-glass machine that first copies n into a fresh glass and empties
// that glass before halting. States 0 and 1 of the input become 0' and 1'.
inline MinskyMachine add_glass_extension(const MinskyMachine& m) {
    const int k = m.glasses();
    if (k < 2) throw std::invalid_argument("add_glass_extension needs k >= 2 (glass 2 is the scratch copy)");
    const int base = m.states();
    auto primed = [&](int i) { return base + i; };  // i' for i in 0..6
    auto rename = [&](int s) { return s == 0 ? primed(0) : s == 1 ? primed(1) : s; };

    std::vector<std::string> names = m.state_names();
    for (int i = 0; i <= 6; ++i) names.push_back(std::to_string(i) + "'");

    std::vector<Command> cmds;
    for (const auto& c : m.commands()) {
        Command r = c;
        r.input_state = rename(c.input_state);
        r.output_state = rename(c.output_state);
        cmds.push_back(r);
    }

    std::vector<int> upper;  // glasses 2..k+1
    for (int g = 2; g <= k + 1; ++g) upper.push_back(g);
    std::vector<int> lower;  // glasses 1..k
    for (int g = 1; g <= k; ++g) lower.push_back(g);

    cmds.push_back(make_command(CommandKind::EmptyCheck, 1, primed(2), upper));
    cmds.push_back(make_command(CommandKind::Sub, primed(2), primed(3), {1}));
    cmds.push_back(make_command(CommandKind::Add, primed(3), primed(2), {2, k + 1}));
    cmds.push_back(make_command(CommandKind::EmptyCheck, primed(2), primed(4), {1}));
    cmds.push_back(make_command(CommandKind::Sub, primed(4), primed(5), {2}));
    cmds.push_back(make_command(CommandKind::Add, primed(5), primed(4), {1}));
    cmds.push_back(make_command(CommandKind::EmptyCheck, primed(4), primed(1), {2}));
    cmds.push_back(make_command(CommandKind::EmptyCheck, primed(0), primed(6), lower));
    cmds.push_back(make_command(CommandKind::Sub, primed(6), primed(6), {k + 1}));
    cmds.push_back(make_command(CommandKind::EmptyCheck, primed(6), 0, {k + 1}));
    return MinskyMachine(k + 1, base + 7, std::move(cmds), std::move(names));
}

// Adds a forced cycle 1 -> 2' -> ... -> p' -> 1 that puts p coins in glass 1.
inline MinskyMachine p_cycle_extension(const MinskyMachine& m, int p) {
    if (p < 2) throw std::invalid_argument("p must be >= 2");
    const int base = m.states();
    auto primed = [&](int i) { return base + i - 2; };  // i' for i in 2..p
    std::vector<std::string> names = m.state_names();
    for (int i = 2; i <= p; ++i) names.push_back(std::to_string(i) + "'");
    std::vector<Command> cmds = m.commands();
    cmds.push_back(make_command(CommandKind::Add, 1, primed(2), {1}));
    for (int i = 2; i < p; ++i) cmds.push_back(make_command(CommandKind::Add, primed(i), primed(i + 1), {1}));
    cmds.push_back(make_command(CommandKind::Add, primed(p), 1, {1}));
    return MinskyMachine(m.glasses(), base + p - 1, std::move(cmds), std::move(names));
}

inline MinskyMachine machine_from_json(const nlohmann::json& j) {
    std::vector<Command> cmds;
    for (const auto& c : j.at("commands")) {
        std::vector<int> gl = c.contains("glasses") ? c.at("glasses").get<std::vector<int>>() : std::vector<int>{};
        std::vector<int> sorted = gl;
        std::sort(sorted.begin(), sorted.end());
        cmds.push_back(Command{command_kind_from_string(c.at("kind").get<std::string>()), c.at("from").get<int>(),
                               c.at("to").get<int>(), sorted});
    }
    std::vector<std::string> names;
    if (j.contains("state_names")) names = j.at("state_names").get<std::vector<std::string>>();
    return MinskyMachine(j.at("glasses").get<int>(), j.at("states").get<int>(), std::move(cmds), std::move(names));
}

inline nlohmann::json machine_to_json(const MinskyMachine& m) {
    nlohmann::json cmds = nlohmann::json::array();
    for (const auto& c : m.commands())
        cmds.push_back({{"kind", to_string(c.kind)}, {"from", c.input_state}, {"to", c.output_state}, {"glasses", c.glasses}});
    return {{"glasses", m.glasses()}, {"states", m.states()}, {"commands", cmds}, {"state_names", m.state_names()}};
}

inline nlohmann::json configuration_to_json(const Configuration& c) {
    nlohmann::json coins = nlohmann::json::array();
    for (const auto& v : c.coins) coins.push_back(bigint_to_json(v));
    return {{"state", c.state}, {"coins", coins}};
}

}  // namespace qcorr
