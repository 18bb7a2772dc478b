// chart_build.cpp -- the recursive chart constructions.
//
// build_chart_free: induction on nilpotency class with trivial stabilizer
// family; the error set K collected from a quotient chart's section is
// absorbed into fresh central coordinates.
//
// build_chart_general: the same recursion relative to a family S of
// pairwise conjugate subgroups; the abelian base case quotients by the
// subgroup and takes a coset section.

#include "nilrect/chart.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>

namespace nilrect {

namespace {

// Flat coordinate layout of an abelian catalog group: the free coordinate
// indices and the torsion (cyclic) coordinate indices with their orders.
struct AbelianLayout {
    std::vector<int> free_idx;
    std::vector<int> tors_idx;
    std::vector<Int> tors_orders;
};

void layout_walk(const GroupSpec& s, int off, AbelianLayout& L) {
    switch (s.kind) {
    case GroupSpec::Kind::FreeAbelian:
        for (int i = 0; i < s.rank; ++i) L.free_idx.push_back(off + i);
        break;
    case GroupSpec::Kind::Cyclic:
        L.tors_idx.push_back(off);
        L.tors_orders.push_back(s.order);
        break;
    case GroupSpec::Kind::Heisenberg:
        throw std::invalid_argument("abelian layout requested for a non-abelian group");
    case GroupSpec::Kind::Product:
        for (const auto& f : s.factors) {
            layout_walk(f, off, L);
            off += f.num_coords();
        }
        break;
    case GroupSpec::Kind::Sum: {
        int w = s.factors[0].num_coords();
        for (int i = 0; i < s.count; ++i) layout_walk(s.factors[0], off + w * i, L);
        break;
    }
    }
}

AbelianLayout abelian_layout(const GroupSpec& G) {
    AbelianLayout L;
    layout_walk(G, 0, L);
    return L;
}

// Group coordinates -> ambient vector in (free..., torsion...) order.
std::vector<Int> to_ambient(const AbelianLayout& L, const GroupElement& g) {
    std::vector<Int> v;
    for (int i : L.free_idx) v.push_back(g.coords[static_cast<size_t>(i)]);
    for (int i : L.tors_idx) v.push_back(g.coords[static_cast<size_t>(i)]);
    return v;
}

GroupElement from_ambient(const GroupSpec& G, const AbelianLayout& L, const std::vector<Int>& v) {
    std::vector<Int> coords(static_cast<size_t>(G.num_coords()), Int(0));
    for (size_t i = 0; i < L.free_idx.size(); ++i)
        coords[static_cast<size_t>(L.free_idx[i])] = v[i];
    for (size_t i = 0; i < L.tors_idx.size(); ++i)
        coords[static_cast<size_t>(L.tors_idx[i])] = v[L.free_idx.size() + i];
    return make_element(G, std::move(coords));
}

GVec coords_to_gvec(int ell, const GammaSpec& gamma, const std::vector<Int>& q) {
    GVec v = gvec_zero(ell, gamma);
    for (int i = 0; i < ell; ++i) v.z[static_cast<size_t>(i)] = q[static_cast<size_t>(i)];
    for (size_t j = 0; j < gamma.orders.size(); ++j) v.t[j] = q[static_cast<size_t>(ell) + j];
    return v;
}

std::vector<Int> gvec_to_coords(const GVec& v) {
    std::vector<Int> q = v.z;
    q.insert(q.end(), v.t.begin(), v.t.end());
    return q;
}

Rat at_least(const Rat& x, long long floor_value) {
    return x < floor_value ? Rat(floor_value) : x;
}

void check_budgeted(const Rect& A, const Int& budget) {
    Int n = cardinality(A);
    if (n > budget) throw BudgetError(n);
}

// Splitting product-chart coordinates: the first chart contributes ell0
// free and t0 torsion coordinates, the second the rest.
GVec split_first(const GVec& v, int ell0, size_t t0) {
    GVec u;
    u.z.assign(v.z.begin(), v.z.begin() + ell0);
    u.t.assign(v.t.begin(), v.t.begin() + static_cast<long>(t0));
    return u;
}

GVec split_second(const GVec& v, int ell0, size_t t0) {
    GVec u;
    u.z.assign(v.z.begin() + ell0, v.z.end());
    u.t.assign(v.t.begin() + static_cast<long>(t0), v.t.end());
    return u;
}

Rect product_rect(const Rect& A, const Rect& B) {
    Rect R;
    R.ell = A.ell + B.ell;
    R.gamma.orders = A.gamma.orders;
    R.gamma.orders.insert(R.gamma.orders.end(), B.gamma.orders.begin(), B.gamma.orders.end());
    R.center = A.center;
    R.center.insert(R.center.end(), B.center.begin(), B.center.end());
    R.radius = A.radius;
    R.radius.insert(R.radius.end(), B.radius.begin(), B.radius.end());
    return R;
}

} // namespace

Chart build_abelian_chart(const GroupSpec& G, const std::vector<Int>& zee_radii,
                          const Rat& lambda) {
    if (nilpotency_class(G) > 1)
        throw std::invalid_argument("build_abelian_chart: group is not abelian");
    auto L = std::make_shared<AbelianLayout>(abelian_layout(G));
    if (zee_radii.size() != L->free_idx.size())
        throw std::invalid_argument("build_abelian_chart: zee radius count mismatch");
    for (const Int& r : zee_radii)
        if (r < 1) throw std::invalid_argument("build_abelian_chart: zee radii must be >= 1");

    Chart c;
    c.group = G;
    c.ell = static_cast<int>(L->free_idx.size());
    c.gamma.orders = L->tors_orders;
    c.zee = rec(c.gamma, zee_radii);
    c.dom = scale(at_least(lambda, 3), c.zee);
    GroupSpec Gcopy = G;
    c.phi = [Gcopy, L](const GVec& v) { return from_ambient(Gcopy, *L, gvec_to_coords(v)); };
    int ell = c.ell;
    GammaSpec gamma = c.gamma;
    c.phi_inv = [L, ell, gamma](const GroupElement& g) -> std::optional<GVec> {
        return coords_to_gvec(ell, gamma, to_ambient(*L, g));
    };
    c.linear = true;
    return c;
}

Chart build_span_chart(const GroupSpec& G, const std::vector<GroupElement>& gens,
                       const std::vector<Int>& zee_radii, const std::vector<Int>& dom_radii) {
    if (nilpotency_class(G) > 1)
        throw std::invalid_argument("build_span_chart: ambient group is not abelian");
    if (gens.empty()) throw std::invalid_argument("build_span_chart: no generators");
    auto L = std::make_shared<AbelianLayout>(abelian_layout(G));
    const size_t n = L->free_idx.size();
    const size_t m = gens.size();
    if (zee_radii.size() != m || dom_radii.size() != m)
        throw std::invalid_argument("build_span_chart: radius count mismatch");
    for (size_t i = 0; i < m; ++i) {
        if (!(gens[i].spec == G))
            throw std::invalid_argument("build_span_chart: generator spec mismatch");
        for (int t : L->tors_idx)
            if (gens[i].coords[static_cast<size_t>(t)] != 0)
                throw std::invalid_argument(
                    "build_span_chart: generators with torsion components are unsupported");
        if (zee_radii[i] < 1 || dom_radii[i] < 3 * zee_radii[i])
            throw std::invalid_argument("build_span_chart: need zee >= 1 and dom >= 3*zee");
    }

    // Generator matrix M (n x m): column i = the free coordinates of gens[i].
    IMat M(n, std::vector<Int>(m, Int(0)));
    for (size_t i = 0; i < m; ++i)
        for (size_t r = 0; r < n; ++r)
            M[r][i] = gens[i].coords[static_cast<size_t>(L->free_idx[r])];
    auto snf = std::make_shared<SmithResult>(smith_normal_form(M));
    for (size_t i = 0; i < m; ++i)
        if (i >= n || snf->D[i][i] == 0)
            throw std::invalid_argument("build_span_chart: generators are not Z-independent");

    Chart c;
    c.group = G;
    c.ell = static_cast<int>(m);
    c.gamma = GammaSpec{};
    c.zee = rec(c.gamma, zee_radii);
    c.dom = rec(c.gamma, dom_radii);
    GroupSpec Gcopy = G;
    std::vector<GroupElement> gs = gens;
    c.phi = [Gcopy, L, gs](const GVec& v) {
        std::vector<Int> coords(static_cast<size_t>(Gcopy.num_coords()), Int(0));
        for (size_t i = 0; i < gs.size(); ++i)
            for (size_t r = 0; r < L->free_idx.size(); ++r)
                coords[static_cast<size_t>(L->free_idx[r])] +=
                    v.z[i] * gs[i].coords[static_cast<size_t>(L->free_idx[r])];
        return make_element(Gcopy, std::move(coords));
    };
    size_t mm = m;
    c.phi_inv = [L, snf, mm](const GroupElement& g) -> std::optional<GVec> {
        const size_t n2 = L->free_idx.size();
        for (int t : L->tors_idx)
            if (g.coords[static_cast<size_t>(t)] != 0) return std::nullopt;
        // Solve M v = cvec through U M V = D: w = D^{-1} (U c), v = V w.
        std::vector<Int> uc(n2, Int(0));
        for (size_t r = 0; r < n2; ++r)
            for (size_t j = 0; j < n2; ++j)
                uc[r] += snf->U[r][j] * g.coords[static_cast<size_t>(L->free_idx[j])];
        std::vector<Int> w(mm, Int(0));
        for (size_t i = 0; i < n2; ++i) {
            if (i < mm) {
                if (uc[i] % snf->D[i][i] != 0) return std::nullopt;
                w[i] = uc[i] / snf->D[i][i];
            } else if (uc[i] != 0) {
                return std::nullopt;
            }
        }
        GVec v = gvec_zero(static_cast<int>(mm), GammaSpec{});
        for (size_t r = 0; r < mm; ++r)
            for (size_t j = 0; j < mm; ++j)
                v.z[r] += snf->V[r][j] * w[j];
        return v;
    };
    c.linear = true;
    return c;
}

Chart build_chart_free(const GroupSpec& G, const std::vector<GroupElement>& F,
                       const Rat& lambda, const Int& budget) {
    Rat lam = at_least(lambda, 3);

    if (nilpotency_class(G) <= 1) {
        AbelianLayout L = abelian_layout(G);
        std::vector<Int> radii(L.free_idx.size(), Int(1));
        for (const auto& f : F) {
            if (!(f.spec == G)) throw std::invalid_argument("build_chart_free: F element spec mismatch");
            for (size_t i = 0; i < L.free_idx.size(); ++i) {
                Int a = f.coords[static_cast<size_t>(L.free_idx[i])];
                if (a < 0) a = -a;
                if (a > radii[i]) radii[i] = a;
            }
        }
        return build_abelian_chart(G, radii, lam);
    }

    auto d = std::make_shared<CenterDecomposition>(center_decomposition(G));
    std::vector<GroupElement> F0;
    for (const auto& f : F) F0.push_back(d->project(f));
    auto c0 = std::make_shared<Chart>(build_chart_free(d->quotient, F0, lam, budget));

    auto phi0p = [c0, d](const GVec& u) { return d->lift(c0->phi(u)); };

    check_budgeted(c0->dom, budget);
    Int pairs = cardinality(c0->dom) * cardinality(c0->dom);
    if (pairs > budget * budget) throw BudgetError(pairs);
    std::vector<GVec> dom0 = enumerate(c0->dom, budget);
    std::vector<GVec> z0 = enumerate(c0->zee, budget);

    // The error set K, as center coordinate vectors.
    std::set<std::vector<Int>> K;
    auto absorb = [&](const GVec& X, const GroupElement& w) {
        if (!subset_of(translate(X.z, c0->zee), c0->dom)) return;
        GroupElement wq = d->project(w);
        for (const GVec& z : z0) {
            GVec Xz = gvec_add(X, z, c0->gamma);
            if (c0->phi(Xz) == wq) {
                K.insert(d->center_coords(multiply(invert(phi0p(Xz)), w)));
                return;
            }
        }
        throw std::logic_error("build_chart_free: quotient chart failed to absorb an error");
    };

    // F-coverage errors.
    for (const auto& f : F) {
        bool done = false;
        GroupElement fq = d->project(f);
        for (const GVec& z : z0) {
            if (c0->phi(z) == fq) {
                K.insert(d->center_coords(multiply(invert(phi0p(z)), f)));
                done = true;
                break;
            }
        }
        if (!done) throw std::logic_error("build_chart_free: F-coverage failed in the quotient");
    }

    // The four almost-homomorphism errors over all of dom(phi0').
    for (const GVec& r : dom0) {
        GroupElement pr = phi0p(r);
        for (const GVec& s : dom0) {
            GroupElement ps = phi0p(s);
            absorb(gvec_add(r, s, c0->gamma), multiply(pr, ps));
            absorb(gvec_sub(r, s, c0->gamma), multiply(pr, invert(ps)));
            absorb(gvec_add(gvec_neg(r, c0->gamma), s, c0->gamma), multiply(invert(pr), ps));
        }
        absorb(gvec_neg(r, c0->gamma), invert(pr));
    }

    // Zee1: minimal centered rectangle containing K, plus the all-ones radius.
    int ell1 = d->ell1;
    std::vector<Int> z1_radii(static_cast<size_t>(ell1), Int(0));
    for (const auto& v : K)
        for (int i = 0; i < ell1; ++i) {
            Int a = v[static_cast<size_t>(i)];
            if (a < 0) a = -a;
            if (a > z1_radii[static_cast<size_t>(i)]) z1_radii[static_cast<size_t>(i)] = a;
        }
    for (Int& r : z1_radii) r += 1;

    GammaSpec gamma1;
    gamma1.orders = d->gamma1;
    Rect zee1 = rec(gamma1, z1_radii);
    Rect dom1 = scale(lam, zee1);

    Chart c;
    c.group = G;
    c.ell = c0->ell + ell1;
    c.zee = product_rect(c0->zee, zee1);
    c.dom = product_rect(c0->dom, dom1);
    c.gamma = c.zee.gamma;

    int ell0 = c0->ell;
    size_t t0 = c0->gamma.orders.size();
    c.phi = [c0, d, ell0, t0](const GVec& v) {
        GVec u = split_first(v, ell0, t0);
        GVec w = split_second(v, ell0, t0);
        return multiply(d->lift(c0->phi(u)), d->embed_center(gvec_to_coords(w)));
    };
    int ell1c = ell1;
    GammaSpec gamma1c = gamma1;
    c.phi_inv = [c0, d, ell0, t0, ell1c, gamma1c](const GroupElement& g) -> std::optional<GVec> {
        if (!c0->phi_inv) return std::nullopt;
        auto u = c0->phi_inv(d->project(g));
        if (!u) return std::nullopt;
        GroupElement rest = multiply(invert(d->lift(c0->phi(*u))), g);
        std::vector<Int> v;
        try {
            v = d->center_coords(rest);
        } catch (const std::invalid_argument&) {
            return std::nullopt;
        }
        GVec w = coords_to_gvec(ell1c, gamma1c, v);
        GVec out;
        out.z = u->z;
        out.z.insert(out.z.end(), w.z.begin(), w.z.end());
        out.t = u->t;
        out.t.insert(out.t.end(), w.t.begin(), w.t.end());
        return out;
    };
    return c;
}

namespace {

bool same_generators(const Subgroup& A, const Subgroup& B) {
    auto key = [](const Subgroup& H) {
        std::vector<std::vector<Int>> k;
        for (const auto& g : H.generators) k.push_back(g.coords);
        std::sort(k.begin(), k.end());
        return k;
    };
    return key(A) == key(B);
}

// Is every generator central, i.e. a member of the coordinate center?
bool central_subgroup(const CenterDecomposition& d, const Subgroup& H) {
    for (const auto& g : H.generators) {
        std::vector<bool> is_central(g.coords.size(), false);
        for (int c : d.center_free_coords) is_central[static_cast<size_t>(c)] = true;
        for (int c : d.center_torsion_coords) is_central[static_cast<size_t>(c)] = true;
        for (size_t i = 0; i < g.coords.size(); ++i)
            if (!is_central[i] && g.coords[i] != 0) return false;
    }
    return true;
}

} // namespace

Chart build_chart_general(const GroupSpec& G, const std::vector<Subgroup>& S,
                          const std::vector<GroupElement>& F, const Rat& lambda,
                          const Rat& eta, const Int& budget) {
    if (S.empty()) throw std::invalid_argument("build_chart_general: S must be nonempty");
    for (const auto& H : S)
        if (!(H.ambient == G)) throw std::invalid_argument("build_chart_general: S ambient mismatch");
    for (size_t i = 1; i < S.size(); ++i)
        if (!same_generators(S[0], S[i]))
            throw std::runtime_error("build_chart_general: cannot certify pairwise conjugacy of "
                                     "distinct members within the supported scope (inconclusive)");

    Rat etap = at_least(eta, 3);
    Rat lam = at_least(lambda, 3);
    if (lam < etap) lam = etap;

    if (nilpotency_class(G) <= 1) {
        // Abelian base case: quotient by H, coset section.
        const Subgroup& H = S[0];
        auto L = std::make_shared<AbelianLayout>(abelian_layout(G));
        IMat gens;
        for (const auto& g : H.generators) gens.push_back(to_ambient(*L, g));
        auto AQ = std::make_shared<AbelianQuotient>(
            abelian_quotient(static_cast<int>(L->free_idx.size()), L->tors_orders, gens));

        Chart c;
        c.group = G;
        c.ell = AQ->ell;
        c.gamma.orders = AQ->gamma;
        std::vector<Int> radii(static_cast<size_t>(AQ->ell), Int(1));
        for (const auto& f : F) {
            std::vector<Int> q = AQ->to_quotient(to_ambient(*L, f));
            for (int i = 0; i < AQ->ell; ++i) {
                Int a = q[static_cast<size_t>(i)];
                if (a < 0) a = -a;
                if (a > radii[static_cast<size_t>(i)]) radii[static_cast<size_t>(i)] = a;
            }
        }
        c.zee = rec(c.gamma, radii);
        c.dom = scale(lam, c.zee);
        GroupSpec Gcopy = G;
        c.phi = [Gcopy, L, AQ](const GVec& v) {
            return from_ambient(Gcopy, *L, AQ->lift(gvec_to_coords(v)));
        };
        int ell = c.ell;
        GammaSpec gamma = c.gamma;
        c.phi_inv = [L, AQ, ell, gamma](const GroupElement& g) -> std::optional<GVec> {
            return coords_to_gvec(ell, gamma, AQ->to_quotient(to_ambient(*L, g)));
        };
        CosetOracle oracle;
        oracle.H = H;
        oracle.member = [L, AQ](const GroupElement& g) {
            return AQ->in_subgroup(to_ambient(*L, g)) ? Tri::Yes : Tri::No;
        };
        c.calH.push_back(std::move(oracle));
        return c;
    }

    // Inductive step.
    auto d = std::make_shared<CenterDecomposition>(center_decomposition(G));
    const Subgroup& H = S[0];
    if (!central_subgroup(*d, H))
        throw std::runtime_error("build_chart_general: only central (or trivial) subgroups are "
                                 "supported for non-abelian groups (inconclusive)");

    // S0: the projected family (central generators project to the identity).
    Subgroup H0;
    H0.ambient = d->quotient;
    std::vector<GroupElement> F0;
    for (const auto& f : F) F0.push_back(d->project(f));
    auto c0 = std::make_shared<Chart>(
        build_chart_general(d->quotient, {H0}, F0, lam, etap, budget));

    auto phi0p = [c0, d](const GVec& u) { return d->lift(c0->phi(u)); };

    // calH = {g H g^{-1}} over g in phi0'(eta * Zee0); central H makes the
    // closure a singleton, but we compute it generically and deduplicate.
    Rect etaZ0 = scale(etap, c0->zee);
    check_budgeted(etaZ0, budget);
    std::vector<Subgroup> calH_groups;
    for (const GVec& u : enumerate(etaZ0, budget)) {
        GroupElement g = phi0p(u);
        Subgroup Hc;
        Hc.ambient = G;
        for (const auto& h : H.generators) Hc.generators.push_back(conjugate(h, g));
        bool dup = false;
        for (const auto& prev : calH_groups)
            if (same_generators(prev, Hc)) { dup = true; break; }
        if (!dup) calH_groups.push_back(std::move(Hc));
    }

    // The error set B (center coordinates), absorbing the four implications
    // and F-coverage modulo the center.  Since H is central the projected
    // family is trivial, so quotient-level cosets are plain equalities.
    check_budgeted(c0->dom, budget);
    Int pairs = cardinality(c0->dom) * cardinality(c0->dom);
    if (pairs > budget * budget) throw BudgetError(pairs);
    std::vector<GVec> dom0 = enumerate(c0->dom, budget);
    std::vector<GVec> z0 = enumerate(c0->zee, budget);

    std::set<std::vector<Int>> B;
    auto q_equal = [&](const GroupElement& a, const GroupElement& b) {
        return c0->calH.empty() ? a == b : c0->calH[0].member(multiply(invert(b), a)) == Tri::Yes;
    };
    auto absorb = [&](const GVec& X, const GroupElement& w) {
        if (!subset_of(translate(X.z, c0->zee), c0->dom)) return;
        GroupElement wq = d->project(w);
        for (const GVec& z : z0) {
            GVec Xz = gvec_add(X, z, c0->gamma);
            if (q_equal(c0->phi(Xz), wq)) {
                // center_coords throws if the residual error were not
                // central, which cannot happen when the projected H is
                // trivial.
                B.insert(d->center_coords(multiply(invert(phi0p(Xz)), w)));
                return;
            }
        }
        throw std::logic_error("build_chart_general: quotient chart failed to absorb an error");
    };
    for (const auto& f : F) {
        GroupElement fq = d->project(f);
        bool done = false;
        for (const GVec& z : z0) {
            if (q_equal(c0->phi(z), fq)) {
                B.insert(d->center_coords(multiply(invert(phi0p(z)), f)));
                done = true;
                break;
            }
        }
        if (!done) throw std::logic_error("build_chart_general: F-coverage failed in the quotient");
    }
    for (const GVec& r : dom0) {
        GroupElement pr = phi0p(r);
        for (const GVec& s : dom0) {
            GroupElement ps = phi0p(s);
            absorb(gvec_add(r, s, c0->gamma), multiply(pr, ps));
            absorb(gvec_sub(r, s, c0->gamma), multiply(pr, invert(ps)));
            absorb(gvec_add(gvec_neg(r, c0->gamma), s, c0->gamma), multiply(invert(pr), ps));
        }
        absorb(gvec_neg(r, c0->gamma), invert(pr));
    }

    // The center as an abstract abelian group, with S1 = {H in center
    // coordinates} and the B elements as the finite set to cover.
    std::vector<GroupSpec> cfs{free_abelian(d->ell1)};
    for (const Int& m : d->gamma1) cfs.push_back(cyclic(m));
    GroupSpec Gc = product(std::move(cfs));
    Subgroup S1c;
    S1c.ambient = Gc;
    for (const auto& h : H.generators)
        S1c.generators.push_back(make_element(Gc, d->center_coords(h)));
    std::vector<GroupElement> Bc;
    for (const auto& v : B) Bc.push_back(make_element(Gc, v));
    auto c1 = std::make_shared<Chart>(build_chart_general(Gc, {S1c}, Bc, lam, etap, budget));

    Chart c;
    c.group = G;
    c.ell = c0->ell + c1->ell;
    c.zee = product_rect(c0->zee, c1->zee);
    c.dom = product_rect(c0->dom, c1->dom);
    c.gamma = c.zee.gamma;

    int ell0 = c0->ell;
    size_t t0 = c0->gamma.orders.size();
    c.phi = [c0, c1, d, ell0, t0](const GVec& v) {
        GVec u = split_first(v, ell0, t0);
        GVec w = split_second(v, ell0, t0);
        GroupElement zc = c1->phi(w); // element of the abstract center group
        return multiply(d->lift(c0->phi(u)), d->embed_center(zc.coords));
    };
    GroupSpec GcCopy = Gc;
    c.phi_inv = [c0, c1, d, GcCopy](const GroupElement& g) -> std::optional<GVec> {
        if (!c0->phi_inv || !c1->phi_inv) return std::nullopt;
        auto u = c0->phi_inv(d->project(g));
        if (!u) return std::nullopt;
        GroupElement rest = multiply(invert(d->lift(c0->phi(*u))), g);
        std::vector<Int> v;
        try {
            v = d->center_coords(rest);
        } catch (const std::invalid_argument&) {
            return std::nullopt;
        }
        auto w = c1->phi_inv(make_element(GcCopy, v));
        if (!w) return std::nullopt;
        GVec out;
        out.z = u->z;
        out.z.insert(out.z.end(), w->z.begin(), w->z.end());
        out.t = u->t;
        out.t.insert(out.t.end(), w->t.begin(), w->t.end());
        return out;
    };

    // Exact membership oracles: a conjugate of the central H equals H, and
    // membership reduces to lattice membership in center coordinates.
    auto Ld = d;
    for (auto& Hc : calH_groups) {
        IMat gens;
        for (const auto& h : Hc.generators) gens.push_back(Ld->center_coords(h));
        auto AQH = std::make_shared<AbelianQuotient>(
            abelian_quotient(Ld->ell1, Ld->gamma1, gens));
        CosetOracle oracle;
        oracle.H = Hc;
        oracle.member = [Ld, AQH](const GroupElement& g) {
            std::vector<Int> v;
            try {
                v = Ld->center_coords(g);
            } catch (const std::invalid_argument&) {
                return Tri::No; // not central, hence not in a central subgroup
            }
            return AQH->in_subgroup(v) ? Tri::Yes : Tri::No;
        };
        c.calH.push_back(std::move(oracle));
    }
    return c;
}

} // namespace nilrect
