// group.cpp -- closed-form arithmetic for the nilpotent group catalog.

#include "nilrect/group.hpp"

#include <sstream>
#include <stdexcept>

namespace nilrect {

namespace {

Int mod_pos(const Int& a, const Int& m) {
    Int r = a % m;
    if (r < 0) r += m;
    return r;
}

void check_spec(const GroupSpec& G) {
    switch (G.kind) {
    case GroupSpec::Kind::FreeAbelian:
        if (G.rank < 0) throw std::invalid_argument("free-abelian rank must be >= 0");
        break;
    case GroupSpec::Kind::Cyclic:
        if (G.order < 1) throw std::invalid_argument("cyclic order must be >= 1");
        break;
    case GroupSpec::Kind::Heisenberg:
        break;
    case GroupSpec::Kind::Product:
        if (G.factors.empty()) throw std::invalid_argument("product must have factors");
        for (const auto& f : G.factors) check_spec(f);
        break;
    case GroupSpec::Kind::Sum:
        if (G.factors.size() != 1 || G.count < 1)
            throw std::invalid_argument("truncated sum needs one summand and count >= 1");
        check_spec(G.factors[0]);
        break;
    }
}

// Recursive span walkers ------------------------------------------------

void mul_span(const GroupSpec& s, const std::vector<Int>& a, const std::vector<Int>& b,
              std::vector<Int>& out, size_t off) {
    switch (s.kind) {
    case GroupSpec::Kind::FreeAbelian:
        for (int i = 0; i < s.rank; ++i) out[off + static_cast<size_t>(i)] =
            a[off + static_cast<size_t>(i)] + b[off + static_cast<size_t>(i)];
        break;
    case GroupSpec::Kind::Cyclic:
        out[off] = mod_pos(a[off] + b[off], s.order);
        break;
    case GroupSpec::Kind::Heisenberg:
        // (a,b,c)(a',b',c') = (a+a', b+b', c+c'-a'b)
        out[off]     = a[off] + b[off];
        out[off + 1] = a[off + 1] + b[off + 1];
        out[off + 2] = a[off + 2] + b[off + 2] - b[off] * a[off + 1];
        break;
    case GroupSpec::Kind::Product:
        for (const auto& f : s.factors) {
            mul_span(f, a, b, out, off);
            off += static_cast<size_t>(f.num_coords());
        }
        break;
    case GroupSpec::Kind::Sum: {
        size_t w = static_cast<size_t>(s.factors[0].num_coords());
        for (int i = 0; i < s.count; ++i) mul_span(s.factors[0], a, b, out, off + w * static_cast<size_t>(i));
        break;
    }
    }
}

void inv_span(const GroupSpec& s, const std::vector<Int>& a, std::vector<Int>& out, size_t off) {
    switch (s.kind) {
    case GroupSpec::Kind::FreeAbelian:
        for (int i = 0; i < s.rank; ++i) out[off + static_cast<size_t>(i)] = -a[off + static_cast<size_t>(i)];
        break;
    case GroupSpec::Kind::Cyclic:
        out[off] = mod_pos(-a[off], s.order);
        break;
    case GroupSpec::Kind::Heisenberg:
        // (a,b,c)^{-1} = (-a, -b, -c - ab)
        out[off]     = -a[off];
        out[off + 1] = -a[off + 1];
        out[off + 2] = -a[off + 2] - a[off] * a[off + 1];
        break;
    case GroupSpec::Kind::Product:
        for (const auto& f : s.factors) {
            inv_span(f, a, out, off);
            off += static_cast<size_t>(f.num_coords());
        }
        break;
    case GroupSpec::Kind::Sum: {
        size_t w = static_cast<size_t>(s.factors[0].num_coords());
        for (int i = 0; i < s.count; ++i) inv_span(s.factors[0], a, out, off + w * static_cast<size_t>(i));
        break;
    }
    }
}

void reduce_span(const GroupSpec& s, std::vector<Int>& v, size_t off) {
    switch (s.kind) {
    case GroupSpec::Kind::FreeAbelian:
    case GroupSpec::Kind::Heisenberg:
        break;
    case GroupSpec::Kind::Cyclic:
        v[off] = mod_pos(v[off], s.order);
        break;
    case GroupSpec::Kind::Product:
        for (const auto& f : s.factors) {
            reduce_span(f, v, off);
            off += static_cast<size_t>(f.num_coords());
        }
        break;
    case GroupSpec::Kind::Sum: {
        size_t w = static_cast<size_t>(s.factors[0].num_coords());
        for (int i = 0; i < s.count; ++i) reduce_span(s.factors[0], v, off + w * static_cast<size_t>(i));
        break;
    }
    }
}

} // namespace

int GroupSpec::num_coords() const {
    switch (kind) {
    case Kind::FreeAbelian: return rank;
    case Kind::Cyclic:      return 1;
    case Kind::Heisenberg:  return 3;
    case Kind::Product: {
        int n = 0;
        for (const auto& f : factors) n += f.num_coords();
        return n;
    }
    case Kind::Sum: return factors[0].num_coords() * count;
    }
    return 0;
}

GroupSpec free_abelian(int n) {
    GroupSpec G;
    G.kind = GroupSpec::Kind::FreeAbelian;
    G.rank = n;
    check_spec(G);
    return G;
}

GroupSpec cyclic(const Int& m) {
    GroupSpec G;
    G.kind = GroupSpec::Kind::Cyclic;
    G.order = m;
    check_spec(G);
    return G;
}

GroupSpec heisenberg() {
    GroupSpec G;
    G.kind = GroupSpec::Kind::Heisenberg;
    return G;
}

GroupSpec product(std::vector<GroupSpec> factors) {
    GroupSpec G;
    G.kind = GroupSpec::Kind::Product;
    G.factors = std::move(factors);
    check_spec(G);
    return G;
}

GroupSpec truncated_sum(GroupSpec summand, int count) {
    GroupSpec G;
    G.kind = GroupSpec::Kind::Sum;
    G.factors.push_back(std::move(summand));
    G.count = count;
    check_spec(G);
    return G;
}

GroupElement identity(const GroupSpec& G) {
    GroupElement e;
    e.spec = G;
    e.coords.assign(static_cast<size_t>(G.num_coords()), Int(0));
    return e;
}

GroupElement make_element(const GroupSpec& G, std::vector<Int> coords) {
    if (coords.size() != static_cast<size_t>(G.num_coords()))
        throw std::invalid_argument("make_element: wrong coordinate count");
    GroupElement g;
    g.spec = G;
    g.coords = std::move(coords);
    reduce_span(G, g.coords, 0);
    return g;
}

GroupElement multiply(const GroupElement& g, const GroupElement& h) {
    if (!(g.spec == h.spec)) throw std::invalid_argument("multiply: group spec mismatch");
    GroupElement r;
    r.spec = g.spec;
    r.coords.assign(g.coords.size(), Int(0));
    mul_span(g.spec, g.coords, h.coords, r.coords, 0);
    reduce_span(g.spec, r.coords, 0);
    return r;
}

GroupElement invert(const GroupElement& g) {
    GroupElement r;
    r.spec = g.spec;
    r.coords.assign(g.coords.size(), Int(0));
    inv_span(g.spec, g.coords, r.coords, 0);
    reduce_span(g.spec, r.coords, 0);
    return r;
}

GroupElement conjugate(const GroupElement& g, const GroupElement& by) {
    return multiply(multiply(by, g), invert(by));
}

GroupElement commutator(const GroupElement& g, const GroupElement& h) {
    return multiply(multiply(invert(g), invert(h)), multiply(g, h));
}

GroupElement power(const GroupElement& g, const Int& n) {
    if (n < 0) return power(invert(g), -n);
    GroupElement acc = identity(g.spec), base = g;
    Int k = n;
    while (k > 0) {
        if ((k & 1) != 0) acc = multiply(acc, base);
        base = multiply(base, base);
        k >>= 1;
    }
    return acc;
}

bool is_identity(const GroupElement& g) {
    for (const Int& c : g.coords) if (c != 0) return false;
    return true;
}

int hirsch_length(const GroupSpec& G) {
    switch (G.kind) {
    case GroupSpec::Kind::FreeAbelian: return G.rank;
    case GroupSpec::Kind::Cyclic:      return 0;
    case GroupSpec::Kind::Heisenberg:  return 3;
    case GroupSpec::Kind::Product: {
        int n = 0;
        for (const auto& f : G.factors) n += hirsch_length(f);
        return n;
    }
    case GroupSpec::Kind::Sum: return hirsch_length(G.factors[0]) * G.count;
    }
    return 0;
}

int nilpotency_class(const GroupSpec& G) {
    switch (G.kind) {
    case GroupSpec::Kind::FreeAbelian: return G.rank == 0 ? 0 : 1;
    case GroupSpec::Kind::Cyclic:      return G.order == 1 ? 0 : 1;
    case GroupSpec::Kind::Heisenberg:  return 2;
    case GroupSpec::Kind::Product: {
        int c = 0;
        for (const auto& f : G.factors) c = std::max(c, nilpotency_class(f));
        return c;
    }
    case GroupSpec::Kind::Sum: return nilpotency_class(G.factors[0]);
    }
    return 0;
}

// Center decomposition ---------------------------------------------------

namespace {

void center_span(const GroupSpec& s, int off, CenterDecomposition& d) {
    switch (s.kind) {
    case GroupSpec::Kind::FreeAbelian:
        for (int i = 0; i < s.rank; ++i) d.center_free_coords.push_back(off + i);
        d.ell1 += s.rank;
        break;
    case GroupSpec::Kind::Cyclic:
        d.center_torsion_coords.push_back(off);
        d.gamma1.push_back(s.order);
        break;
    case GroupSpec::Kind::Heisenberg:
        d.center_free_coords.push_back(off + 2);
        d.ell1 += 1;
        d.quotient_coords.push_back(off);
        d.quotient_coords.push_back(off + 1);
        break;
    case GroupSpec::Kind::Product:
        for (const auto& f : s.factors) {
            center_span(f, off, d);
            off += f.num_coords();
        }
        break;
    case GroupSpec::Kind::Sum: {
        int w = s.factors[0].num_coords();
        for (int i = 0; i < s.count; ++i) center_span(s.factors[0], off + w * i, d);
        break;
    }
    }
}

GroupSpec quotient_spec(const GroupSpec& s) {
    switch (s.kind) {
    case GroupSpec::Kind::FreeAbelian: return free_abelian(0);
    case GroupSpec::Kind::Cyclic:      return free_abelian(0);
    case GroupSpec::Kind::Heisenberg:  return free_abelian(2);
    case GroupSpec::Kind::Product: {
        std::vector<GroupSpec> qs;
        for (const auto& f : s.factors) qs.push_back(quotient_spec(f));
        return product(std::move(qs));
    }
    case GroupSpec::Kind::Sum: return truncated_sum(quotient_spec(s.factors[0]), s.count);
    }
    return free_abelian(0);
}

} // namespace

CenterDecomposition center_decomposition(const GroupSpec& G) {
    check_spec(G);
    CenterDecomposition d;
    d.ambient = G;
    d.quotient = quotient_spec(G);
    center_span(G, 0, d);
    if (d.quotient_coords.size() != static_cast<size_t>(d.quotient.num_coords()))
        throw std::logic_error("center_decomposition: coordinate bookkeeping mismatch");
    return d;
}

GroupElement CenterDecomposition::embed_center(const std::vector<Int>& v) const {
    if (v.size() != static_cast<size_t>(ell1) + gamma1.size())
        throw std::invalid_argument("embed_center: wrong coordinate count");
    GroupElement g = identity(ambient);
    for (int i = 0; i < ell1; ++i)
        g.coords[static_cast<size_t>(center_free_coords[static_cast<size_t>(i)])] = v[static_cast<size_t>(i)];
    for (size_t i = 0; i < gamma1.size(); ++i)
        g.coords[static_cast<size_t>(center_torsion_coords[i])] =
            mod_pos(v[static_cast<size_t>(ell1) + i], gamma1[i]);
    return g;
}

std::vector<Int> CenterDecomposition::center_coords(const GroupElement& g) const {
    std::vector<bool> is_central(g.coords.size(), false);
    for (int c : center_free_coords) is_central[static_cast<size_t>(c)] = true;
    for (int c : center_torsion_coords) is_central[static_cast<size_t>(c)] = true;
    for (size_t i = 0; i < g.coords.size(); ++i)
        if (!is_central[i] && g.coords[i] != 0)
            throw std::invalid_argument("center_coords: element is not central");
    std::vector<Int> v;
    for (int c : center_free_coords) v.push_back(g.coords[static_cast<size_t>(c)]);
    for (int c : center_torsion_coords) v.push_back(g.coords[static_cast<size_t>(c)]);
    return v;
}

GroupElement CenterDecomposition::project(const GroupElement& g) const {
    std::vector<Int> q;
    for (int c : quotient_coords) q.push_back(g.coords[static_cast<size_t>(c)]);
    return make_element(quotient, std::move(q));
}

GroupElement CenterDecomposition::lift(const GroupElement& q) const {
    GroupElement g = identity(ambient);
    for (size_t i = 0; i < quotient_coords.size(); ++i)
        g.coords[static_cast<size_t>(quotient_coords[i])] = q.coords[i];
    return g;
}

// Text form --------------------------------------------------------------

std::string group_to_text(const GroupSpec& G) {
    switch (G.kind) {
    case GroupSpec::Kind::FreeAbelian:
        if (G.rank == 0) return "trivial";
        if (G.rank == 1) return "Z";
        return "Z^" + std::to_string(G.rank);
    case GroupSpec::Kind::Cyclic:
        return "C" + G.order.str();
    case GroupSpec::Kind::Heisenberg:
        return "heisenberg";
    case GroupSpec::Kind::Product: {
        std::string s;
        for (size_t i = 0; i < G.factors.size(); ++i) {
            if (i) s += " x ";
            s += group_to_text(G.factors[i]);
        }
        return s;
    }
    case GroupSpec::Kind::Sum:
        return "sum(" + group_to_text(G.factors[0]) + ", " + std::to_string(G.count) + ")";
    }
    return "trivial";
}

namespace {

struct Parser {
    const std::string& s;
    size_t pos = 0;

    void skip_ws() { while (pos < s.size() && s[pos] == ' ') ++pos; }

    bool literal(const std::string& w) {
        skip_ws();
        if (s.compare(pos, w.size(), w) == 0) { pos += w.size(); return true; }
        return false;
    }

    std::optional<long long> integer() {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
        if (pos == start) return std::nullopt;
        return std::stoll(s.substr(start, pos - start));
    }

    std::optional<GroupSpec> term() {
        skip_ws();
        if (literal("heisenberg")) return heisenberg();
        if (literal("trivial")) return free_abelian(0);
        if (literal("sum(")) {
            auto inner = spec();
            if (!inner || !literal(",")) return std::nullopt;
            auto n = integer();
            if (!n || *n < 1 || !literal(")")) return std::nullopt;
            return truncated_sum(*inner, static_cast<int>(*n));
        }
        if (pos < s.size() && s[pos] == 'Z') {
            ++pos;
            if (pos < s.size() && s[pos] == '^') {
                ++pos;
                auto n = integer();
                if (!n || *n < 0) return std::nullopt;
                return free_abelian(static_cast<int>(*n));
            }
            return free_abelian(1);
        }
        if (pos < s.size() && s[pos] == 'C') {
            ++pos;
            auto n = integer();
            if (!n || *n < 1) return std::nullopt;
            return cyclic(Int(*n));
        }
        return std::nullopt;
    }

    std::optional<GroupSpec> spec() {
        auto first = term();
        if (!first) return std::nullopt;
        std::vector<GroupSpec> fs{*first};
        while (true) {
            size_t save = pos;
            skip_ws();
            if (pos < s.size() && s[pos] == 'x' &&
                (pos + 1 == s.size() || s[pos + 1] == ' ')) {
                ++pos;
                auto next = term();
                if (!next) { pos = save; break; }
                fs.push_back(*next);
            } else {
                pos = save;
                break;
            }
        }
        if (fs.size() == 1) return fs[0];
        return product(std::move(fs));
    }
};

} // namespace

std::optional<GroupSpec> group_from_text(const std::string& s) {
    Parser p{s};
    auto g = p.spec();
    if (!g) return std::nullopt;
    p.skip_ws();
    if (p.pos != s.size()) return std::nullopt;
    return g;
}

std::string element_to_text(const GroupElement& g) {
    std::string s = "(";
    for (size_t i = 0; i < g.coords.size(); ++i) {
        if (i) s += ",";
        s += g.coords[i].str();
    }
    return s + ")";
}

} // namespace nilrect
