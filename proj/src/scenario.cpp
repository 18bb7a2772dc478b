// scenario.cpp -- scenario text format and scale validation.

#include "nilrect/scenario.hpp"
#include "nilrect/abelian.hpp"

#include <fstream>
#include <sstream>

namespace nilrect {

namespace {

std::string rat_text(const Rat& r) { return rat_str(r); }

std::optional<Rat> parse_rat(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s));
        Int num(s.substr(0, slash)), den(s.substr(slash + 1));
        if (den <= 0) return std::nullopt;
        return Rat(num, den);
    } catch (...) {
        return std::nullopt;
    }
}

std::optional<std::vector<Int>> parse_bracket_list(const std::string& s) {
    if (s.size() < 2 || s.front() != '[' || s.back() != ']') return std::nullopt;
    std::vector<Int> out;
    std::string cur;
    for (char c : s.substr(1, s.size() - 2)) {
        if (c == ',') {
            if (cur.empty()) return std::nullopt;
            out.push_back(Int(cur));
            cur.clear();
        } else if (c == '-' || (c >= '0' && c <= '9')) {
            cur += c;
        } else if (c != ' ') {
            return std::nullopt;
        }
    }
    if (!cur.empty()) out.push_back(Int(cur));
    return out;
}

std::string bracket_list(const std::vector<Int>& v) {
    std::string s = "[";
    for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].str();
    return s + "]";
}

std::optional<std::vector<Int>> parse_paren_tuple(const std::string& s) {
    if (s.size() < 2 || s.front() != '(' || s.back() != ')') return std::nullopt;
    std::string inner = "[" + s.substr(1, s.size() - 2) + "]";
    return parse_bracket_list(inner);
}

struct KnobField {
    const char* name;
    std::optional<Rat> LevelKnobs::* field;
};

constexpr KnobField kKnobFields[] = {
    {"partition_mult", &LevelKnobs::partition_mult},
    {"scan_mult", &LevelKnobs::scan_mult},
    {"block_mult", &LevelKnobs::block_mult},
    {"ortho_dilation", &LevelKnobs::ortho_dilation},
    {"guard2_mult", &LevelKnobs::guard2_mult},
    {"guard3_mult", &LevelKnobs::guard3_mult},
    {"marker_mult", &LevelKnobs::marker_mult},
};

} // namespace

std::string scenario_to_text(const Scenario& s) {
    std::ostringstream os;
    os << "version " << s.version << "\n";
    os << "group " << group_to_text(s.group) << "\n";
    os << "period " << s.period << "\n";
    os << "seed " << s.seed << "\n";
    os << "budget " << s.budget.str() << "\n";
    os << "levels " << s.levels.size() << "\n";
    for (size_t k = 0; k < s.levels.size(); ++k) {
        const LevelSpec& L = s.levels[k];
        os << "level " << (k + 1) << "\n";
        os << "generators";
        for (const auto& g : L.generators) os << " " << element_to_text(g);
        os << "\n";
        os << "zee " << bracket_list(L.zee) << "\n";
        os << "A " << bracket_list(L.A) << "\n";
        os << "epsilon " << rat_text(L.epsilon) << "\n";
        os << "q " << rat_text(L.q) << "\n";
        os << "p " << L.p << "\n";
        for (const auto& kf : kKnobFields) {
            const auto& v = L.knobs.*(kf.field);
            if (v) os << "knob " << kf.name << " " << rat_text(*v) << "\n";
        }
    }
    os << "end\n";
    return os.str();
}

std::optional<Scenario> scenario_from_text(const std::string& text, std::string* error) {
    auto fail = [&](const std::string& msg) -> std::optional<Scenario> {
        if (error) *error = msg;
        return std::nullopt;
    };
    std::istringstream is(text);
    std::string line;
    Scenario s;
    long long levels_declared = -1;
    LevelSpec* cur = nullptr;
    bool ended = false;

    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (ended) return fail("content after end");
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        std::string rest;
        std::getline(ls, rest);
        if (!rest.empty() && rest[0] == ' ') rest.erase(0, 1);

        if (key == "version") {
            s.version = std::stoi(rest);
            if (s.version != 1) return fail("unsupported version");
        } else if (key == "group") {
            auto g = group_from_text(rest);
            if (!g) return fail("bad group: " + rest);
            s.group = *g;
        } else if (key == "period") {
            s.period = std::stoll(rest);
        } else if (key == "seed") {
            s.seed = std::stoull(rest);
        } else if (key == "budget") {
            s.budget = Int(rest);
        } else if (key == "levels") {
            levels_declared = std::stoll(rest);
        } else if (key == "level") {
            s.levels.emplace_back();
            cur = &s.levels.back();
            if (std::stoll(rest) != static_cast<long long>(s.levels.size()))
                return fail("levels must be numbered consecutively from 1");
        } else if (key == "end") {
            ended = true;
        } else if (cur == nullptr) {
            return fail("level field before any level: " + key);
        } else if (key == "generators") {
            std::istringstream gs(rest);
            std::string tok;
            while (gs >> tok) {
                auto t = parse_paren_tuple(tok);
                if (!t) return fail("bad generator: " + tok);
                if (t->size() != static_cast<size_t>(s.group.num_coords()))
                    return fail("generator arity mismatch: " + tok);
                cur->generators.push_back(make_element(s.group, *t));
            }
        } else if (key == "zee") {
            auto v = parse_bracket_list(rest);
            if (!v) return fail("bad zee list");
            cur->zee = *v;
        } else if (key == "A") {
            auto v = parse_bracket_list(rest);
            if (!v) return fail("bad A list");
            cur->A = *v;
        } else if (key == "epsilon") {
            auto r = parse_rat(rest);
            if (!r) return fail("bad epsilon");
            cur->epsilon = *r;
        } else if (key == "q") {
            auto r = parse_rat(rest);
            if (!r) return fail("bad q");
            cur->q = *r;
        } else if (key == "p") {
            cur->p = std::stoll(rest);
        } else if (key == "knob") {
            std::istringstream ks(rest);
            std::string name, val;
            ks >> name >> val;
            auto r = parse_rat(val);
            if (!r) return fail("bad knob value: " + rest);
            bool known = false;
            for (const auto& kf : kKnobFields)
                if (name == kf.name) {
                    cur->knobs.*(kf.field) = *r;
                    known = true;
                    break;
                }
            if (!known) return fail("unknown knob: " + name);
        } else {
            return fail("unknown key: " + key);
        }
    }
    if (!ended) return fail("missing end marker");
    if (levels_declared != static_cast<long long>(s.levels.size()))
        return fail("level count mismatch");
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open scenario file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    std::string err;
    auto s = scenario_from_text(ss.str(), &err);
    if (!s) throw std::runtime_error("bad scenario file " + path + ": " + err);
    return *s;
}

void save_scenario(const Scenario& s, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write scenario file: " + path);
    out << scenario_to_text(s);
}

namespace {

Int span_of(const Rat& mult, const Int& radius) {
    return 2 * ceil_mul(mult, radius) + 1;
}

} // namespace

ScaleReport validate_scales(const Scenario& s) {
    ScaleReport rep;
    auto add = [&](const std::string& name, bool pass, const std::string& detail) {
        rep.checks.push_back(ScaleCheck{name, pass, detail});
    };

    add("period >= 2", s.period >= 2, "period = " + std::to_string(s.period));
    add("at least one level", !s.levels.empty(),
        std::to_string(s.levels.size()) + " level(s)");
    add("budget positive", s.budget > 0, "budget = " + s.budget.str());

    for (size_t k = 0; k < s.levels.size(); ++k) {
        const LevelSpec& L = s.levels[k];
        std::string tag = "level " + std::to_string(k + 1) + ": ";
        int ell = static_cast<int>(L.zee.size());

        add(tag + "rank consistency", L.zee.size() == L.A.size() && !L.generators.empty(),
            std::to_string(L.zee.size()) + " zee radii, " + std::to_string(L.A.size()) +
                " A radii, " + std::to_string(L.generators.size()) + " generators");
        bool zee_ok = true, a_ok = true;
        for (const Int& z : L.zee) if (z < 1) zee_ok = false;
        for (const Int& a : L.A) if (a < 1) a_ok = false;
        add(tag + "zee radii >= 1", zee_ok, bracket_list(L.zee));
        add(tag + "A radii >= 1", a_ok, bracket_list(L.A));
        add(tag + "0 < epsilon < 1", L.epsilon > 0 && L.epsilon < 1, rat_text(L.epsilon));
        add(tag + "0 < q < 1", L.q > 0 && L.q < 1, rat_text(L.q));
        add(tag + "p >= 2", L.p >= 2, std::to_string(L.p));

        // 2 * Zee fits in epsilon * A (the rough-rectangularity hypothesis).
        bool fits = L.zee.size() == L.A.size();
        for (size_t i = 0; fits && i < L.zee.size(); ++i)
            if (floor_mul(L.epsilon, L.A[i]) < 2 * L.zee[i]) fits = false;
        add(tag + "2*Zee fits in epsilon*A", fits, "");

        // 3 * Zee inside the chart domain needs period headroom too; the
        // largest region any operation touches is max of the partition,
        // scan, block and dilation regions.
        if (L.zee.size() == L.A.size() && L.p >= 1) {
            Rat part = L.knobs.partition_mult.value_or(Rat(13)) * L.p;
            Rat scan = L.knobs.scan_mult.value_or(Rat(7)) * L.p;
            Rat dil = L.knobs.ortho_dilation.value_or(Rat(30) * ell);
            Rat biggest = std::max(std::max(part, scan), dil);
            // Blocks are one-sided runs of 9d+1 points with d <= 2p*a, not
            // symmetric dilations.
            Rat block_mult = L.knobs.block_mult.value_or(Rat(9)) * 2 * L.p;
            bool period_ok = true;
            Int widest = 0;
            for (const Int& a : L.A) {
                Int w = span_of(biggest, a);
                Int bw = ceil_mul(block_mult, a) + 1;
                if (bw > w) w = bw;
                if (w > widest) widest = w;
                if (w >= s.period) period_ok = false;
            }
            add(tag + "period exceeds widest touched region", period_ok,
                "widest = " + widest.str() + ", period = " + std::to_string(s.period));
        }

        // Informational: are the reference (non-relaxed) domain constants
        // enumerable under the budget?
        if (L.epsilon > 0) {
            Rat lam = Rat(Int(1) << (40 * ell)) * (2 / L.epsilon) * 2 * (36 * 36) *
                      Rat(Int(1) << (14 * ell));
            Int widest = 0;
            for (const Int& z : L.zee) {
                Int w = 2 * floor_mul(lam, z) + 1;
                if (w > widest) widest = w;
            }
            bool enumerable = widest <= s.budget;
            add(tag + "info: reference-constant domain",
                true,
                enumerable ? "enumerable within budget"
                           : "unenumerable, symbolic-only (span " + widest.str() + ")");
        }
    }
    return rep;
}

std::string ScaleReport::to_text() const {
    std::ostringstream os;
    for (const auto& c : checks)
        os << (c.pass ? "pass" : "FAIL") << "  " << c.name
           << (c.detail.empty() ? "" : "  [" + c.detail + "]") << "\n";
    os << (all_pass() ? "all checks passed" : "some checks FAILED") << "\n";
    return os.str();
}

} // namespace nilrect
