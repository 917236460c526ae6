#ifndef QSG_CONFIG_HPP
#define QSG_CONFIG_HPP

#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qsg/errors.hpp"
#include "qsg/game.hpp"

namespace qsg {

// ---------------------------------------------------------------------------
// Minimal TOML-style reader: [section] tables, key = value pairs, numbers,
// booleans, quoted strings, and (nested, multi-line) arrays. Enough for
// experiment files; anything fancier is rejected with a line number.
// ---------------------------------------------------------------------------

struct TomlValue {
    enum class Kind { Table, Array, Num, Bool, Str };
    Kind kind = Kind::Table;
    double num = 0.0;
    bool boolean = false;
    std::string str;
    std::vector<TomlValue> arr;
    std::map<std::string, TomlValue> table;

    bool has(const std::string& key) const { return table.count(key) > 0; }
    const TomlValue& at(const std::string& key) const {
        auto it = table.find(key);
        if (it == table.end()) throw ConfigError("missing config key: " + key);
        return it->second;
    }
};

namespace detail {

class TomlScanner {
public:
    explicit TomlScanner(std::string text) : text_(std::move(text)) {}

    TomlValue parse() {
        TomlValue root;
        TomlValue* current = &root;
        skip_space(true);
        while (!eof()) {
            if (peek() == '[') {
                get();
                std::string name = read_bare();
                while (!eof() && peek() == '.') {
                    get();
                    name += '.' + read_bare();
                }
                expect(']');
                current = &root;
                std::stringstream ss(name);
                std::string part;
                while (std::getline(ss, part, '.')) {
                    current = &current->table[part];
                    current->kind = TomlValue::Kind::Table;
                }
            } else {
                const std::string key = read_bare();
                skip_space(false);
                expect('=');
                skip_space(false);
                current->table[key] = parse_value();
            }
            skip_space(false);
            if (!eof() && peek() != '\n')
                fail("unexpected trailing characters");
            skip_space(true);
        }
        return root;
    }

private:
    std::string text_;
    std::size_t pos_ = 0;
    int line_ = 1;

    bool eof() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }
    char get() {
        const char c = text_[pos_++];
        if (c == '\n') ++line_;
        return c;
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw ConfigError("config line " + std::to_string(line_) + ": " + msg);
    }
    void expect(char c) {
        if (eof() || peek() != c) fail(std::string("expected '") + c + "'");
        get();
    }
    void skip_space(bool newlines) {
        while (!eof()) {
            const char c = peek();
            if (c == '#') {
                while (!eof() && peek() != '\n') get();
            } else if (c == ' ' || c == '\t' || c == '\r' || (newlines && c == '\n')) {
                get();
            } else {
                break;
            }
        }
    }
    std::string read_bare() {
        skip_space(false);
        std::string s;
        while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' ||
                          peek() == '-'))
            s += get();
        if (s.empty()) fail("expected a name");
        return s;
    }
    TomlValue parse_value() {
        skip_space(false);
        if (eof()) fail("expected a value");
        const char c = peek();
        TomlValue v;
        if (c == '"') {
            get();
            v.kind = TomlValue::Kind::Str;
            while (!eof() && peek() != '"') {
                char ch = get();
                if (ch == '\\' && !eof()) {
                    const char esc = get();
                    ch = esc == 'n' ? '\n' : esc == 't' ? '\t' : esc;
                }
                v.str += ch;
            }
            expect('"');
        } else if (c == '[') {
            get();
            v.kind = TomlValue::Kind::Array;
            skip_space(true);
            while (!eof() && peek() != ']') {
                v.arr.push_back(parse_value());
                skip_space(true);
                if (!eof() && peek() == ',') {
                    get();
                    skip_space(true);
                }
            }
            expect(']');
        } else if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::string word = read_bare();
            if (word == "true" || word == "false") {
                v.kind = TomlValue::Kind::Bool;
                v.boolean = word == "true";
            } else {
                fail("unknown literal '" + word + "'");
            }
        } else {
            std::string tok;
            while (!eof() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '+' ||
                              peek() == '-' || peek() == '.' || peek() == 'e' || peek() == 'E'))
                tok += get();
            char* end = nullptr;
            v.num = std::strtod(tok.c_str(), &end);
            if (tok.empty() || end != tok.c_str() + tok.size()) fail("bad number '" + tok + "'");
            v.kind = TomlValue::Kind::Num;
        }
        return v;
    }
};

inline double toml_num(const TomlValue& v, const std::string& key) {
    if (v.kind != TomlValue::Kind::Num) throw ConfigError(key + ": expected a number");
    return v.num;
}

} // namespace detail

inline TomlValue parse_toml(const std::string& text) {
    return detail::TomlScanner(text).parse();
}

inline TomlValue parse_toml_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_toml(ss.str());
}

// ---------------------------------------------------------------------------
// Experiment configuration
// ---------------------------------------------------------------------------

// Game described in seat order (the order the table is written in); roles
// say which seats act strategically. Payoff tensors are flat, row-major
// over seat-ordered joint actions.
struct ExperimentConfig {
    std::string name = "experiment";
    // game
    std::vector<int> seat_actions;
    std::vector<char> roles; // 'A' or 'N' per seat
    std::vector<std::vector<double>> seat_payoffs;
    bool zero_sum = false;
    std::string generator; // optional named game generator
    std::uint64_t game_seed = 1;
    // learners
    LearnerParams learners;
    // solver
    double gamma = 0.8;
    int intervals = 100;
    double tolerance = 1e-8;
    int max_iters = 10000;
    // sim
    int stages = 1000;
    int trials = 100;
    std::uint64_t base_seed = 1;
    // grid override
    std::optional<double> grid_lower;
    std::optional<double> grid_upper;
    // output
    std::string output_dir;
    bool chart = true;
    int window = 0; // 0 = running cumulative means

    int num_seats() const { return static_cast<int>(seat_actions.size()); }
};

inline ExperimentConfig experiment_config_from_toml(const TomlValue& root) {
    ExperimentConfig cfg;
    auto get_num = [&](const TomlValue& tab, const std::string& key, double dflt) {
        return tab.has(key) ? detail::toml_num(tab.at(key), key) : dflt;
    };
    if (root.has("experiment")) {
        const TomlValue& e = root.at("experiment");
        if (e.has("name")) cfg.name = e.at("name").str;
        cfg.stages = static_cast<int>(get_num(e, "stages", cfg.stages));
        cfg.trials = static_cast<int>(get_num(e, "trials", cfg.trials));
        cfg.base_seed = static_cast<std::uint64_t>(get_num(e, "seed", 1));
        if (e.has("output")) cfg.output_dir = e.at("output").str;
    }
    if (root.has("game")) {
        const TomlValue& g = root.at("game");
        if (g.has("actions"))
            for (const TomlValue& v : g.at("actions").arr)
                cfg.seat_actions.push_back(static_cast<int>(v.num));
        if (g.has("roles"))
            for (const TomlValue& v : g.at("roles").arr) {
                if (v.str != "A" && v.str != "N")
                    throw ConfigError("game.roles entries must be \"A\" or \"N\"");
                cfg.roles.push_back(v.str[0]);
            }
        if (g.has("payoffs")) {
            for (const TomlValue& seat : g.at("payoffs").arr) {
                std::vector<double> flat;
                for (const TomlValue& v : seat.arr) flat.push_back(v.num);
                cfg.seat_payoffs.push_back(std::move(flat));
            }
        }
        if (g.has("zero_sum")) cfg.zero_sum = g.at("zero_sum").boolean;
        if (g.has("generator")) cfg.generator = g.at("generator").str;
        cfg.game_seed = static_cast<std::uint64_t>(get_num(g, "seed", 1));
    }
    if (root.has("learners")) {
        const TomlValue& l = root.at("learners");
        cfg.learners.tau = get_num(l, "tau", cfg.learners.tau);
        cfg.learners.alpha = get_num(l, "alpha", cfg.learners.alpha);
        cfg.learners.q0 = get_num(l, "q0", cfg.learners.q0);
    }
    if (root.has("solver")) {
        const TomlValue& s = root.at("solver");
        cfg.gamma = get_num(s, "gamma", cfg.gamma);
        cfg.intervals = static_cast<int>(get_num(s, "intervals", cfg.intervals));
        cfg.tolerance = get_num(s, "tolerance", cfg.tolerance);
        cfg.max_iters = static_cast<int>(get_num(s, "max_iterations", cfg.max_iters));
    }
    if (root.has("grid")) {
        const TomlValue& g = root.at("grid");
        if (g.has("lower")) cfg.grid_lower = detail::toml_num(g.at("lower"), "grid.lower");
        if (g.has("upper")) cfg.grid_upper = detail::toml_num(g.at("upper"), "grid.upper");
    }
    if (root.has("output")) {
        const TomlValue& o = root.at("output");
        if (o.has("chart")) cfg.chart = o.at("chart").boolean;
        cfg.window = static_cast<int>(get_num(o, "window", 0));
    }
    return cfg;
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
    return experiment_config_from_toml(parse_toml_file(path));
}

inline void validate_experiment_config(const ExperimentConfig& cfg) {
    if (!cfg.generator.empty()) return; // generator fills in the game later
    const int seats = cfg.num_seats();
    if (seats == 0) throw ConfigError("game.actions missing or empty");
    if (static_cast<int>(cfg.roles.size()) != seats)
        throw ConfigError("game.roles must list one role per seat");
    if (static_cast<int>(cfg.seat_payoffs.size()) != seats)
        throw ConfigError("game.payoffs must list one tensor per seat");
    std::size_t cells = 1;
    for (int a : cfg.seat_actions) {
        if (a < 1) throw ConfigError("game.actions entries must be >= 1");
        cells *= static_cast<std::size_t>(a);
    }
    for (const auto& t : cfg.seat_payoffs)
        if (t.size() != cells)
            throw ConfigError("game.payoffs tensors must have prod(actions) entries");
    int n_a = 0;
    for (char r : cfg.roles) n_a += r == 'A';
    if (n_a > 2) throw ConfigError("at most two A-type seats are supported");
    if (n_a == 2 && !cfg.zero_sum)
        throw ConfigError("two A-type seats require game.zero_sum = true");
    try {
        cfg.learners.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (!(cfg.gamma > 0.0 && cfg.gamma < 1.0))
        throw ConfigError("solver.gamma must lie in (0,1)");
    if (cfg.intervals < 1) throw ConfigError("solver.intervals must be >= 1");
    if (cfg.stages < 0) throw ConfigError("experiment.stages must be >= 0");
    if (cfg.trials < 1) throw ConfigError("experiment.trials must be >= 1");
    if (cfg.grid_lower.has_value() != cfg.grid_upper.has_value())
        throw ConfigError("grid.lower and grid.upper must be given together");
    if (cfg.grid_lower && cfg.grid_upper && !(*cfg.grid_lower < *cfg.grid_upper))
        throw ConfigError("grid.lower must be below grid.upper");
}

// ---------------------------------------------------------------------------
// Seat-ordered game -> solver-ordered model (A-types first, then N-types)
// ---------------------------------------------------------------------------

struct ModelMapping {
    NormalFormGame game;
    std::vector<int> agent_seat; // model agent index -> seat index
    std::vector<int> seat_agent; // seat index -> model agent index
};

inline ModelMapping build_model(const std::vector<int>& seat_actions,
                                const std::vector<char>& roles,
                                const std::vector<std::vector<double>>& seat_payoffs,
                                bool zero_sum) {
    const int seats = static_cast<int>(seat_actions.size());
    ModelMapping m;
    m.seat_agent.assign(seats, -1);
    for (int s = 0; s < seats; ++s)
        if (roles[s] == 'A') {
            m.seat_agent[s] = static_cast<int>(m.agent_seat.size());
            m.agent_seat.push_back(s);
            m.game.a_actions.push_back(seat_actions[s]);
        }
    const int num_a = static_cast<int>(m.agent_seat.size());
    for (int s = 0; s < seats; ++s)
        if (roles[s] == 'N') {
            m.seat_agent[s] = static_cast<int>(m.agent_seat.size());
            m.agent_seat.push_back(s);
            m.game.n_actions.push_back(seat_actions[s]);
        }

    const int na = m.game.num_joint_a();
    const int nb = m.game.num_joint_b();
    const std::size_t cells = static_cast<std::size_t>(na) * nb;
    m.game.a_payoffs.assign(num_a, std::vector<double>(cells));
    m.game.n_payoffs.assign(seats - num_a, std::vector<double>(cells));

    std::vector<int> seat_act(seats);
    for (int ja = 0; ja < na; ++ja) {
        const std::vector<int> aa = m.game.decode_joint_a(ja);
        for (int jb = 0; jb < nb; ++jb) {
            const std::vector<int> bb = m.game.decode_joint_b(jb);
            for (int ag = 0; ag < seats; ++ag)
                seat_act[m.agent_seat[ag]] = ag < num_a ? aa[ag] : bb[ag - num_a];
            std::size_t joint = 0;
            for (int s = 0; s < seats; ++s)
                joint = joint * seat_actions[s] + seat_act[s];
            const std::size_t cell = static_cast<std::size_t>(ja) * nb + jb;
            for (int ag = 0; ag < seats; ++ag) {
                const int s = m.agent_seat[ag];
                if (ag < num_a)
                    m.game.a_payoffs[ag][cell] = seat_payoffs[s][joint];
                else
                    m.game.n_payoffs[ag - num_a][cell] = seat_payoffs[s][joint];
            }
        }
    }
    if (num_a == 2 && zero_sum) m.game.zero_sum_pairs.push_back({0, 1});
    try {
        m.game.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return m;
}

inline ModelMapping build_model(const ExperimentConfig& cfg) {
    validate_experiment_config(cfg);
    return build_model(cfg.seat_actions, cfg.roles, cfg.seat_payoffs, cfg.zero_sum);
}

} // namespace qsg

#endif // QSG_CONFIG_HPP
