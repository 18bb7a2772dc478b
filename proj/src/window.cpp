// window.cpp -- periodic action windows and chart realization.

#include "nilrect/window.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace nilrect {

namespace {

void moduli_walk(const GroupSpec& s, long long N, std::vector<Int>& out) {
    switch (s.kind) {
    case GroupSpec::Kind::FreeAbelian:
        for (int i = 0; i < s.rank; ++i) out.push_back(Int(N));
        break;
    case GroupSpec::Kind::Cyclic:
        out.push_back(s.order);
        break;
    case GroupSpec::Kind::Heisenberg:
        out.push_back(Int(N));
        out.push_back(Int(N));
        out.push_back(Int(N));
        break;
    case GroupSpec::Kind::Product:
        for (const auto& f : s.factors) moduli_walk(f, N, out);
        break;
    case GroupSpec::Kind::Sum:
        for (int i = 0; i < s.count; ++i) moduli_walk(s.factors[0], N, out);
        break;
    }
}

Int mod_pos(const Int& a, const Int& m) {
    Int r = a % m;
    if (r < 0) r += m;
    return r;
}

} // namespace

GroupElement Window::point_element(long long x) const {
    long long full = rep_of.empty() ? x : rep_of[static_cast<size_t>(x)];
    std::vector<Int> coords(moduli.size());
    for (size_t i = moduli.size(); i-- > 0;) {
        long long m = static_cast<long long>(moduli[i]);
        coords[i] = Int(full % m);
        full /= m;
    }
    return make_element(group, std::move(coords));
}

long long Window::reduce_rank(const GroupElement& e) const {
    long long idx = 0;
    for (size_t i = 0; i < moduli.size(); ++i) {
        idx = idx * static_cast<long long>(moduli[i]) +
              static_cast<long long>(mod_pos(e.coords[i], moduli[i]));
    }
    return idx;
}

long long Window::act(const GroupElement& g, long long x) const {
    long long full = reduce_rank(multiply(g, point_element(x)));
    return class_of.empty() ? full : class_of[static_cast<size_t>(full)];
}

Window build_window(const GroupSpec& G, long long N) {
    if (N < 2) throw std::invalid_argument("build_window: period must be >= 2");
    Window w;
    w.group = G;
    w.N = N;
    moduli_walk(G, N, w.moduli);
    long long size = 1;
    for (const Int& m : w.moduli) {
        Int next = Int(size) * m;
        if (next > Int(4000000000LL)) throw std::invalid_argument("build_window: window too large");
        size = static_cast<long long>(next);
    }
    w.full_size = size;
    w.num_points = size;
    w.H.ambient = G; // trivial subgroup
    return w;
}

Window build_coset_window(const GroupSpec& G, const Subgroup& Hsub, long long N,
                          long long bound) {
    if (!(Hsub.ambient == G))
        throw std::invalid_argument("build_coset_window: subgroup ambient mismatch");
    Window w = build_window(G, N);
    if (w.full_size > bound)
        throw std::invalid_argument("build_coset_window: index bound exceeded (" +
                                    std::to_string(w.full_size) + " full points)");
    w.is_coset = true;
    w.H = Hsub;

    // Union-find over full points; x ~ x * h for each generator h.
    std::vector<long long> parent(static_cast<size_t>(w.full_size));
    std::iota(parent.begin(), parent.end(), 0LL);
    std::function<long long(long long)> find = [&](long long a) {
        while (parent[static_cast<size_t>(a)] != a) {
            parent[static_cast<size_t>(a)] = parent[static_cast<size_t>(parent[static_cast<size_t>(a)])];
            a = parent[static_cast<size_t>(a)];
        }
        return a;
    };
    auto unite = [&](long long a, long long b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[static_cast<size_t>(std::max(a, b))] = std::min(a, b);
    };
    for (long long x = 0; x < w.full_size; ++x) {
        GroupElement e = w.point_element(x);
        for (const auto& h : Hsub.generators) unite(x, w.reduce_rank(multiply(e, h)));
    }

    w.class_of.assign(static_cast<size_t>(w.full_size), -1);
    for (long long x = 0; x < w.full_size; ++x) {
        long long r = find(x);
        if (r == x) {
            w.class_of[static_cast<size_t>(x)] = static_cast<long long>(w.rep_of.size());
            w.rep_of.push_back(x);
        }
    }
    for (long long x = 0; x < w.full_size; ++x)
        w.class_of[static_cast<size_t>(x)] = w.class_of[static_cast<size_t>(find(x))];
    w.num_points = static_cast<long long>(w.rep_of.size());
    return w;
}

FreenessReport check_local_freeness(const Window& w, const std::vector<GroupElement>& F) {
    FreenessReport rep;
    for (const auto& f : F) {
        if (is_identity(f)) continue;
        for (long long x = 0; x < w.num_points; ++x) {
            if (w.act(f, x) == x) {
                rep.violations.push_back("f=" + element_to_text(f) + " fixes x=" + std::to_string(x));
                break;
            }
        }
    }
    return rep;
}

std::vector<long long> points_with_stabilizer(const Window& w,
                                              const std::vector<CosetOracle>& calH,
                                              const std::vector<GroupElement>& probes) {
    std::vector<long long> out;
    for (long long x = 0; x < w.num_points; ++x) {
        bool ok = true;
        for (const auto& f : probes) {
            bool fixes = w.act(f, x) == x;
            bool in_family = is_identity(f);
            for (const auto& oracle : calH)
                if (oracle.member(f) == Tri::Yes) { in_family = true; break; }
            if (fixes != in_family) { ok = false; break; }
        }
        if (ok) out.push_back(x);
    }
    return out;
}

std::vector<GroupElement> stabilizer_probes(const Window& w, long long x,
                                            const std::vector<GroupElement>& probes) {
    std::vector<GroupElement> out;
    for (const auto& f : probes)
        if (w.act(f, x) == x) out.push_back(f);
    return out;
}

RealizedChart realize_chart(std::shared_ptr<const Chart> c, std::shared_ptr<const Window> w,
                            const Rect& region, const Int& budget) {
    if (!subset_of(region, c->dom))
        throw std::invalid_argument("realize_chart: region must lie inside dom");
    Int cost = cardinality(region) * Int(w->num_points);
    if (cost > budget) throw BudgetError(cost);

    RealizedChart r;
    r.chart = c;
    r.window = w;
    r.region = region;
    r.vpts = enumerate(region, budget);

    size_t P = static_cast<size_t>(w->num_points);
    r.table.assign(r.vpts.size() * P, -1);
    std::vector<GroupElement> images;
    images.reserve(r.vpts.size());
    for (const GVec& v : r.vpts) images.push_back(c->phi(v));
    for (size_t vi = 0; vi < r.vpts.size(); ++vi)
        for (size_t x = 0; x < P; ++x)
            r.table[vi * P + x] = w->act(images[vi], static_cast<long long>(x));

    // Which base points must see an injective map?
    std::vector<bool> must_inject(P, true);
    if (!c->trivial_stabilizers()) {
        for (size_t x = 0; x < P; ++x) {
            bool ok = false;
            for (const auto& oracle : c->calH) {
                bool fixes_all = true;
                for (const auto& h : oracle.H.generators)
                    if (w->act(h, static_cast<long long>(x)) != static_cast<long long>(x)) {
                        fixes_all = false;
                        break;
                    }
                if (fixes_all) { ok = true; break; }
            }
            must_inject[x] = ok;
        }
    }

    r.inverse.assign(P, {});
    for (size_t x = 0; x < P; ++x) {
        auto& m = r.inverse[x];
        for (size_t vi = 0; vi < r.vpts.size(); ++vi) {
            long long y = r.table[vi * P + x];
            auto [it, inserted] = m.emplace(y, static_cast<int>(vi));
            if (!inserted && must_inject[x]) {
                auto show = [](const GVec& v) {
                    std::string s = "(";
                    for (size_t i = 0; i < v.z.size(); ++i) s += (i ? "," : "") + v.z[i].str();
                    return s + ")";
                };
                throw std::runtime_error("realize_chart: injectivity failure (period too small): r=" +
                                         show(r.vpts[static_cast<size_t>(it->second)]) +
                                         " s=" + show(r.vpts[vi]) + " x=" + std::to_string(x));
            }
        }
    }
    return r;
}

GroupElement window_displacement(const Window& w, long long from, long long to) {
    GroupElement g = multiply(w.point_element(to), invert(w.point_element(from)));
    std::vector<Int> cs = g.coords;
    for (size_t i = 0; i < cs.size(); ++i) {
        const Int& m = w.moduli[i];
        Int r = ((cs[i] % m) + m) % m;
        if (2 * r > m) r -= m;
        cs[i] = r;
    }
    GroupElement out = make_element(w.group, cs);
    if (w.act(out, from) != to)
        throw std::logic_error("window_displacement: centered reduction escaped the kernel");
    return out;
}

} // namespace nilrect
