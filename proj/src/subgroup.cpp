// subgroup.cpp -- bounded-ball subgroup membership and the conjugacy demo.

#include "nilrect/subgroup.hpp"

#include <map>
#include <queue>
#include <set>
#include <stdexcept>

namespace nilrect {

const char* tri_name(Tri t) {
    switch (t) {
    case Tri::Yes: return "yes";
    case Tri::No: return "no";
    case Tri::Inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

// Flags the coordinates that are torsion (reduced mod a cyclic order); the
// ball constraint applies only to the remaining free coordinates.
void torsion_mask(const GroupSpec& s, std::vector<bool>& mask, size_t off) {
    switch (s.kind) {
    case GroupSpec::Kind::FreeAbelian:
    case GroupSpec::Kind::Heisenberg:
        break;
    case GroupSpec::Kind::Cyclic:
        mask[off] = true;
        break;
    case GroupSpec::Kind::Product:
        for (const auto& f : s.factors) {
            torsion_mask(f, mask, off);
            off += static_cast<size_t>(f.num_coords());
        }
        break;
    case GroupSpec::Kind::Sum: {
        size_t w = static_cast<size_t>(s.factors[0].num_coords());
        for (int i = 0; i < s.count; ++i) torsion_mask(s.factors[0], mask, off + w * static_cast<size_t>(i));
        break;
    }
    }
}

bool in_ball(const std::vector<Int>& coords, const std::vector<bool>& torsion, const Int& ball) {
    for (size_t i = 0; i < coords.size(); ++i) {
        if (torsion[i]) continue;
        if (coords[i] > ball || coords[i] < -ball) return false;
    }
    return true;
}

} // namespace

Tri subgroup_member(const Subgroup& H, const GroupElement& g, const Int& ball,
                    const Int& state_budget) {
    if (!(g.spec == H.ambient)) throw std::invalid_argument("subgroup_member: ambient mismatch");
    std::vector<bool> torsion(g.coords.size(), false);
    torsion_mask(H.ambient, torsion, 0);

    if (is_identity(g)) return Tri::Yes;
    if (!in_ball(g.coords, torsion, ball)) return Tri::Inconclusive; // target outside search ball

    std::vector<GroupElement> steps;
    for (const auto& h : H.generators) {
        steps.push_back(h);
        steps.push_back(invert(h));
    }

    std::set<std::vector<Int>> seen;
    std::queue<GroupElement> frontier;
    GroupElement e = identity(H.ambient);
    seen.insert(e.coords);
    frontier.push(e);
    bool pruned = false;
    Int states = 1;

    while (!frontier.empty()) {
        GroupElement cur = frontier.front();
        frontier.pop();
        for (const auto& s : steps) {
            GroupElement nxt = multiply(cur, s);
            if (!in_ball(nxt.coords, torsion, ball)) { pruned = true; continue; }
            if (seen.count(nxt.coords)) continue;
            if (nxt.coords == g.coords) return Tri::Yes;
            if (states >= state_budget) { pruned = true; continue; }
            seen.insert(nxt.coords);
            ++states;
            frontier.push(nxt);
        }
    }
    return pruned ? Tri::Inconclusive : Tri::No;
}

Subgroup hx_subgroup(const std::vector<int>& x) {
    int N = static_cast<int>(x.size());
    if (N < 1) throw std::invalid_argument("hx_subgroup: word must be nonempty");
    Subgroup H;
    H.ambient = truncated_sum(heisenberg(), N);
    for (int i = 0; i < N; ++i) {
        GroupElement g = identity(H.ambient);
        size_t off = 3 * static_cast<size_t>(i);
        g.coords[off] = -1;
        g.coords[off + 2] = x[static_cast<size_t>(i)];
        H.generators.push_back(g);
    }
    return H;
}

bool hx_member_exact(const std::vector<int>& x, const GroupElement& g) {
    if (g.coords.size() != 3 * x.size())
        throw std::invalid_argument("hx_member_exact: coordinate count mismatch");
    for (size_t i = 0; i < x.size(); ++i) {
        const Int& a = g.coords[3 * i];
        const Int& b = g.coords[3 * i + 1];
        const Int& c = g.coords[3 * i + 2];
        if (b != 0) return false;
        if (c != -a * x[i]) return false; // (-k, 0, k*x(i)) with k = -a
    }
    return true;
}

std::optional<std::vector<int>> hx_recover_word(const Subgroup& H) {
    GroupSpec expect = truncated_sum(heisenberg(), static_cast<int>(H.generators.size()));
    if (!(H.ambient == expect)) return std::nullopt;
    size_t N = H.generators.size();
    std::vector<int> x(N, -1);
    for (const auto& g : H.generators) {
        // Exactly one factor touched, with coordinates (-1, 0, v).
        std::optional<size_t> factor;
        for (size_t i = 0; i < N; ++i) {
            if (g.coords[3 * i] == 0 && g.coords[3 * i + 1] == 0 && g.coords[3 * i + 2] == 0)
                continue;
            if (factor) return std::nullopt;
            factor = i;
        }
        if (!factor) return std::nullopt;
        size_t i = *factor;
        if (g.coords[3 * i] != -1 || g.coords[3 * i + 1] != 0) return std::nullopt;
        const Int& v = g.coords[3 * i + 2];
        if (v < 0 || v > 1 || x[i] != -1) return std::nullopt;
        x[i] = static_cast<int>(v);
    }
    for (int v : x) if (v == -1) return std::nullopt;
    return x;
}

namespace {

// Certifies g H_x g^{-1} = H_y two ways: the exact closed-form oracle (both
// directions), then the independent bounded word search for the forward
// generators.  The two routes are kept separate on purpose.
Tri certify_conjugator(const Subgroup& Hx, const Subgroup& Hy,
                       const std::vector<int>& x, const std::vector<int>& y,
                       const GroupElement& g, const Int& ball) {
    GroupElement ginv = invert(g);
    for (const auto& h : Hx.generators)
        if (!hx_member_exact(y, conjugate(h, g))) return Tri::No;
    for (const auto& h : Hy.generators)
        if (!hx_member_exact(x, conjugate(h, ginv))) return Tri::No;

    bool inconclusive = false;
    for (const auto& h : Hx.generators) {
        Tri t = subgroup_member(Hy, conjugate(h, g), ball);
        if (t == Tri::No) return Tri::No;
        if (t == Tri::Inconclusive) inconclusive = true;
    }
    return inconclusive ? Tri::Inconclusive : Tri::Yes;
}

} // namespace

ConjugatorResult conjugator_search(const Subgroup& Hx, const Subgroup& Hy, const Int& ball,
                                   const std::optional<std::vector<int>>& support,
                                   long long exp_bound) {
    ConjugatorResult res;
    auto xw = hx_recover_word(Hx);
    auto yw = hx_recover_word(Hy);
    if (!xw || !yw || xw->size() != yw->size()) {
        res.note = "inputs are not hx_subgroup outputs over the same length";
        return res;
    }
    size_t N = xw->size();

    if (!support) {
        // Canonical candidate g = prod b_i^{y(i)-x(i)}.
        GroupElement g = identity(Hx.ambient);
        for (size_t i = 0; i < N; ++i)
            g.coords[3 * i + 1] = Int((*yw)[i]) - Int((*xw)[i]);
        Tri t = certify_conjugator(Hx, Hy, *xw, *yw, g, ball);
        res.status = t;
        if (t == Tri::Yes) {
            res.g = g;
            res.note = "canonical candidate certified";
        } else {
            res.note = t == Tri::No ? "canonical candidate refuted" : "ball too small to certify";
        }
        return res;
    }

    // Restricted search: enumerate g supported on the given factors with
    // bounded exponents per coordinate.
    std::vector<size_t> sup;
    for (int i : *support) {
        if (i < 0 || static_cast<size_t>(i) >= N) {
            res.note = "support index out of range";
            return res;
        }
        sup.push_back(static_cast<size_t>(i));
    }
    long long span = 2 * exp_bound + 1;
    long long total = 1;
    for (size_t k = 0; k < 3 * sup.size(); ++k) {
        total *= span;
        if (total > 20000000) {
            res.note = "restricted search space too large";
            return res;
        }
    }
    bool any_inconclusive = false;
    for (long long idx = 0; idx < total; ++idx) {
        GroupElement g = identity(Hx.ambient);
        long long rest = idx;
        for (size_t fi : sup) {
            for (int c = 0; c < 3; ++c) {
                g.coords[3 * fi + static_cast<size_t>(c)] = Int(rest % span - exp_bound);
                rest /= span;
            }
        }
        Tri t = certify_conjugator(Hx, Hy, *xw, *yw, g, ball);
        if (t == Tri::Yes) {
            res.status = Tri::Yes;
            res.g = g;
            res.note = "restricted candidate certified";
            return res;
        }
        if (t == Tri::Inconclusive) any_inconclusive = true;
    }
    // The closed-form oracle refuted every candidate (or the word search
    // could not confirm an oracle-accepted one).
    res.status = any_inconclusive ? Tri::Inconclusive : Tri::No;
    res.note = any_inconclusive ? "some candidates could not be certified within the ball"
                                : "no conjugator with the given support and exponent bound";
    return res;
}

} // namespace nilrect
