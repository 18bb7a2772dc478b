// rough.cpp -- rough rectangles, boundaries, and their verifiers.

#include "nilrect/rough.hpp"
#include "nilrect/parallel.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace nilrect {

namespace {

std::string pt(long long x) { return std::to_string(x); }

bool in_xh(const std::vector<char>* xh, long long x) {
    return xh == nullptr || (*xh)[static_cast<size_t>(x)];
}

std::vector<char> orbit_mask(const Window& w, const Chart& c, const Rect& R, long long x,
                             const Int& budget) {
    std::vector<char> mask(static_cast<size_t>(w.num_points), 0);
    for (const GVec& v : enumerate(R, budget))
        mask[static_cast<size_t>(w.act(c.phi(v), x))] = 1;
    return mask;
}

} // namespace

std::vector<long long> phi_orbit(const Window& w, const Chart& c, const Rect& R, long long x,
                                 const Int& budget) {
    std::vector<long long> out;
    for (const GVec& v : enumerate(R, budget)) out.push_back(w.act(c.phi(v), x));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

RoughCheck verify_rough(const Window& w, const std::vector<long long>& R, const Chart& c,
                        const Rect& A, const Rat& eps, long long x, const Int& budget) {
    if (!(eps > 0 && eps < 1))
        throw std::invalid_argument("verify_rough: eps must lie in (0,1)");
    RoughCheck rep;
    if (!subset_of(scale(Rat(2), A), c.dom)) {
        rep.witness = "2.A is not contained in dom";
        return rep;
    }
    if (!fits_in(scale(Rat(2), c.zee), scale(eps, A))) {
        rep.witness = "2.Zee does not fit in eps.A";
        return rep;
    }
    for (const GVec& v : enumerate(scale(Rat(1) - eps, A), budget)) {
        long long y = w.act(c.phi(v), x);
        if (!std::binary_search(R.begin(), R.end(), y)) {
            rep.witness = "inner point " + pt(y) + " of phi((1-eps).A).x missing from R";
            return rep;
        }
    }
    std::vector<char> outer = orbit_mask(w, c, scale(Rat(1) + eps, A), x, budget);
    for (long long r : R) {
        if (!outer[static_cast<size_t>(r)]) {
            rep.witness = "point " + pt(r) + " of R escapes phi((1+eps).A).x";
            return rep;
        }
    }
    rep.ok = true;
    return rep;
}

std::vector<long long> boundary(const Window& w, const EqRel& E, const Chart& c, const Rect& A,
                                int axis, const std::vector<char>* xh, int jobs) {
    if (!A.centered()) throw std::invalid_argument("boundary: A must be centered");
    if (!subset_of(A, c.dom)) throw std::invalid_argument("boundary: A must lie inside dom");
    Rect f = face(A, axis);
    Int L = A.radius[static_cast<size_t>(axis - 1)];
    std::vector<GroupElement> minus_els, plus_els;
    for (const GVec& v : enumerate(translate_axis(-L, axis, f), Int(50000000)))
        minus_els.push_back(c.phi(v));
    for (const GVec& v : enumerate(translate_axis(L, axis, f), Int(50000000)))
        plus_els.push_back(c.phi(v));

    std::vector<char> is_bnd(static_cast<size_t>(w.num_points), 0);
    int threads = effective_jobs(jobs);
#if defined(NILRECT_OPENMP)
#pragma omp parallel for schedule(static) num_threads(threads)
#endif
    for (long long x = 0; x < w.num_points; ++x) {
        if (!in_xh(xh, x)) continue;
        std::set<long long> sm, sp;
        for (const auto& g : minus_els)
            sm.insert(E.class_id[static_cast<size_t>(w.act(g, x))]);
        for (const auto& g : plus_els)
            sp.insert(E.class_id[static_cast<size_t>(w.act(g, x))]);
        bool disjoint = true;
        for (long long cl : sm)
            if (sp.count(cl)) { disjoint = false; break; }
        if (disjoint) is_bnd[static_cast<size_t>(x)] = 1;
    }
    (void)threads;
    std::vector<long long> out;
    for (long long x = 0; x < w.num_points; ++x)
        if (is_bnd[static_cast<size_t>(x)]) out.push_back(x);
    return out;
}

namespace {

// One separable pass: out[x] = 1 iff cur[g^j.x] = 1 and L(g^j.x) = L(x) for
// all |j| <= r, computed cycle by cycle of the permutation x -> g.x with
// circular distance-to-nearest sweeps (two wraps each, sentinel 4m).
std::vector<char> axis_sweep(const Window& w, const GroupElement& g, const Int& radius,
                             const std::vector<long long>& L, const std::vector<char>& cur) {
    const long long n = w.num_points;
    std::vector<char> out(static_cast<size_t>(n), 0);
    std::vector<char> seen(static_cast<size_t>(n), 0);
    std::vector<long long> cyc, fwd, bwd, fz, bz;
    for (long long s = 0; s < n; ++s) {
        if (seen[static_cast<size_t>(s)]) continue;
        cyc.clear();
        for (long long x = s; !seen[static_cast<size_t>(x)]; x = w.act(g, x)) {
            seen[static_cast<size_t>(x)] = 1;
            cyc.push_back(x);
        }
        const long long m = static_cast<long long>(cyc.size());
        const long long r =
            radius > m ? m : radius.convert_to<long long>(); // window saturates at one lap
        const long long big = 4 * m;
        fwd.assign(static_cast<size_t>(m), big);
        bwd.assign(static_cast<size_t>(m), big);
        fz.assign(static_cast<size_t>(m), big);
        bz.assign(static_cast<size_t>(m), big);
        auto lab = [&](long long t) { return L[static_cast<size_t>(cyc[static_cast<size_t>(t)])]; };
        auto pok = [&](long long t) { return cur[static_cast<size_t>(cyc[static_cast<size_t>(t)])]; };
        auto edge = [&](long long t) { return lab(t) != lab((t + 1) % m); };
        // fwd[t]: least k >= 0 with an L-change edge between t+k and t+k+1;
        // fz[t]: least k >= 0 with cur = 0 at t+k.  Mirrored for bwd / bz.
        long long de = big, dz = big;
        for (long long t = 2 * m - 1; t >= 0; --t) {
            long long tm = t % m;
            if (edge(tm)) de = 0;
            if (!pok(tm)) dz = 0;
            if (de < fwd[static_cast<size_t>(tm)]) fwd[static_cast<size_t>(tm)] = de;
            if (dz < fz[static_cast<size_t>(tm)]) fz[static_cast<size_t>(tm)] = dz;
            ++de;
            ++dz;
        }
        de = big;
        dz = big;
        for (long long t = 0; t < 2 * m; ++t) {
            long long tm = t % m;
            if (de < bwd[static_cast<size_t>(tm)]) bwd[static_cast<size_t>(tm)] = de;
            if (!pok(tm)) dz = 0;
            if (dz < bz[static_cast<size_t>(tm)]) bz[static_cast<size_t>(tm)] = dz;
            if (edge(tm)) de = 1; else ++de;
            ++dz;
        }
        for (long long t = 0; t < m; ++t) {
            bool ok = fwd[static_cast<size_t>(t)] >= r && bwd[static_cast<size_t>(t)] > r &&
                      fz[static_cast<size_t>(t)] > r && bz[static_cast<size_t>(t)] > r;
            out[static_cast<size_t>(cyc[static_cast<size_t>(t)])] = ok ? 1 : 0;
        }
    }
    return out;
}

} // namespace

std::vector<char> box_invariant_mask(const Window& w, const EqRel& E, const Chart& c,
                                     const Rect& R, const Int& budget, int jobs) {
    if (!R.centered()) throw std::invalid_argument("box_invariant_mask: R must be centered");
    if (!subset_of(R, c.dom))
        throw std::invalid_argument("box_invariant_mask: R must lie inside dom");
    const long long n = w.num_points;

    if (c.linear && c.gamma.orders.empty()) {
        // phi is a homomorphism into an abelian group, so phi(R).x factors as
        // the composition of the per-axis generator windows; each axis pass
        // demands L constant (and the previous pass holding) across the
        // current generator window, which expands to the full box condition.
        std::vector<char> mask(static_cast<size_t>(n), 1);
        for (int i = 0; i < c.ell; ++i) {
            GVec e = gvec_zero(c.ell, c.gamma);
            e.z[static_cast<size_t>(i)] = 1;
            mask = axis_sweep(w, c.phi(e), R.radius[static_cast<size_t>(i)], E.class_id, mask);
        }
        return mask;
    }

    std::vector<GroupElement> gs;
    for (const GVec& v : enumerate(R, budget)) gs.push_back(c.phi(v));
    std::vector<char> mask(static_cast<size_t>(n), 1);
    int threads = effective_jobs(jobs);
#if defined(NILRECT_OPENMP)
#pragma omp parallel for schedule(static) num_threads(threads)
#endif
    for (long long x = 0; x < n; ++x) {
        long long cls = E.class_id[static_cast<size_t>(x)];
        for (const auto& g : gs)
            if (E.class_id[static_cast<size_t>(w.act(g, x))] != cls) {
                mask[static_cast<size_t>(x)] = 0;
                break;
            }
    }
    (void)threads;
    return mask;
}

namespace {

// One witness attempt against the full Definition 5.3 clause set.
bool try_witness(const Window& w, const std::vector<long long>& U, const Chart& c,
                 const Rect& A, const Rat& eps, const Rat& dom_mult, const Rect& B,
                 const Rat& delta, long long base, const Int& budget, std::string* why) {
    if (!(delta > 0)) { *why = "delta not positive"; return false; }
    if (!fits_in(A, B)) { *why = "A does not fit in B"; return false; }
    if (!subset_of(scale(dom_mult, B), c.dom)) {
        *why = "dom_mult.B escapes dom";
        return false;
    }
    if (!fits_in(scale(2 * delta, B), scale(eps, A))) {
        *why = "2 delta.B does not fit in eps.A";
        return false;
    }
    RoughCheck rc = verify_rough(w, U, c, B, delta, base, budget);
    if (!rc.ok) { *why = rc.witness; return false; }
    return true;
}

} // namespace

RectCert verify_rectangular(const Window& w, const EqRel& E, const Chart& c, const Rect& A,
                            const Rat& eps, const Rat& dom_mult, const std::vector<char>* xh,
                            const Int& budget) {
    if (!A.centered()) throw std::invalid_argument("verify_rectangular: A must be centered");
    if (!(eps > 0 && eps < 1))
        throw std::invalid_argument("verify_rectangular: eps must lie in (0,1)");
    RectCert cert;
    auto classes = E.classes();

    // The fallback witness search enumerates dom once per failing class.
    bool dom_enumerable = cardinality(c.dom) <= budget;

    for (long long cl = 0; cl < E.num_classes; ++cl) {
        const auto& U = classes[static_cast<size_t>(cl)];
        long long base = -1;
        for (long long x : U)
            if (in_xh(xh, x)) { base = x; break; }
        if (base < 0) {
            if (U.size() != 1) {
                cert.failure = "class " + pt(cl) + " misses X^H but is not a singleton";
                return cert;
            }
            continue;
        }
        std::string why = "no candidate witness";
        // Emitted witness first.
        auto it = E.witness.find(cl);
        if (it != E.witness.end() &&
            try_witness(w, U, c, A, eps, dom_mult, it->second.B, it->second.delta,
                        it->second.base, budget, &why)) {
            cert.by_class[cl] = it->second;
            continue;
        }
        // Fallback: bounding-box search from the class's least X^H point.
        // Preferred coordinate source: phi_inv of the centered window
        // displacement of each member, which stays finite when dom is wider
        // than the window period; the dom enumeration is the second route.
        bool found = false;
        {
            std::vector<Int> lo(static_cast<size_t>(c.ell)), hi(static_cast<size_t>(c.ell));
            bool any = false;
            auto grow = [&](const std::vector<Int>& z) {
                for (int i = 0; i < c.ell; ++i) {
                    size_t si = static_cast<size_t>(i);
                    if (!any || z[si] < lo[si]) lo[si] = z[si];
                }
                for (int i = 0; i < c.ell; ++i) {
                    size_t si = static_cast<size_t>(i);
                    if (!any || z[si] > hi[si]) hi[si] = z[si];
                }
                any = true;
            };
            if (c.phi_inv) {
                bool all = true;
                for (long long x : U) {
                    std::optional<GVec> v;
                    try {
                        v = c.phi_inv(window_displacement(w, base, x));
                    } catch (const std::logic_error&) {
                        v = std::nullopt;
                    }
                    if (!v) { all = false; break; }
                    grow(v->z);
                }
                if (!all) any = false;
            }
            if (!any && dom_enumerable) {
                std::vector<char> inU(static_cast<size_t>(w.num_points), 0);
                for (long long x : U) inU[static_cast<size_t>(x)] = 1;
                for (const GVec& v : enumerate(c.dom, budget)) {
                    if (!inU[static_cast<size_t>(w.act(c.phi(v), base))]) continue;
                    grow(v.z);
                }
            } else if (!any) {
                why = why + " (dom unenumerable within budget, no fallback search)";
            }
            if (any) {
                // Re-base at the bounding box's center so the witness
                // rectangle is centered: a base can always be translated
                // toward the middle of its rough rectangle.
                GVec mid;
                mid.z.resize(static_cast<size_t>(c.ell));
                mid.t.assign(c.gamma.orders.size(), Int(0));
                Rect B;
                B.ell = c.ell;
                B.gamma = c.gamma;
                B.center.assign(static_cast<size_t>(c.ell), Int(0));
                B.radius.resize(static_cast<size_t>(c.ell));
                for (int i = 0; i < c.ell; ++i) {
                    size_t si = static_cast<size_t>(i);
                    mid.z[si] = floor_div(lo[si] + hi[si], Int(2));
                    B.radius[si] = std::max(mid.z[si] - lo[si], hi[si] - mid.z[si]);
                }
                base = w.act(c.phi(mid), base);
                // delta ladder: the minimal delta with 2.Zee fitting in
                // delta.B, then doublings, then eps/2.
                Rat d0(0);
                for (int i = 0; i < c.ell; ++i) {
                    size_t si = static_cast<size_t>(i);
                    if (B.radius[si] == 0) {
                        if (c.zee.radius[si] > 0) d0 = Rat(-1);
                    } else if (d0 >= 0) {
                        Rat need(2 * c.zee.radius[si], B.radius[si]);
                        if (need > d0) d0 = need;
                    }
                }
                std::vector<Rat> ladder;
                if (d0 > 0) ladder = {d0, 2 * d0, 4 * d0, 8 * d0};
                ladder.push_back(eps / 2);
                for (const Rat& d : ladder) {
                    if (!(d > 0) || !(d < 1)) continue;
                    if (try_witness(w, U, c, A, eps, dom_mult, B, d, base, budget, &why)) {
                        cert.by_class[cl] = RoughWitness{B, d, base};
                        found = true;
                        break;
                    }
                }
            } else if (dom_enumerable) {
                why = "class not reached by phi(dom).base";
            }
        }
        if (!found) {
            cert.failure = "class " + pt(cl) + ": " + why;
            return cert;
        }
    }
    cert.pass = true;
    return cert;
}

std::string RectCert::to_text() const {
    std::ostringstream os;
    os << (pass ? "rectangular: pass" : "rectangular: FAIL " + failure) << "\n";
    std::vector<long long> keys;
    for (const auto& [cl, wtn] : by_class) keys.push_back(cl);
    std::sort(keys.begin(), keys.end());
    for (long long cl : keys) {
        const auto& wtn = by_class.at(cl);
        os << "class " << cl << " base " << wtn.base << " delta " << rat_str(wtn.delta)
           << " B " << rect_to_text(wtn.B) << "\n";
    }
    return os.str();
}

FindBaseResult find_base(const Window& w, const EqRel& E, const RectCert& cert, const Chart& c,
                         const Rect& A, const Rat& eps, long long y, const Rat& M,
                         long long target, const Int& budget) {
    if (!cert.pass) throw std::invalid_argument("find_base: relation is not certified");
    // Which classes does phi(M.A).y meet?
    std::set<long long> met;
    for (long long z : phi_orbit(w, c, scale(M, A), y, budget))
        met.insert(E.class_id[static_cast<size_t>(z)]);
    long long cls = -1;
    if (target >= 0) {
        if (met.count(target)) cls = target;
    } else {
        for (long long cl : met)
            if (cert.by_class.count(cl)) { cls = cl; break; }
    }
    if (cls < 0) throw std::runtime_error("find_base: no certified class meets phi(M.A).y");
    const RoughWitness& wtn = cert.by_class.at(cls);

    // Search v with phi(v).y = base, near M.A - 2.B + 2.Zee.
    Rect region = minkowski_sum(minkowski_sum(scale(M, A), negate(scale(Rat(2), wtn.B))),
                                scale(Rat(2), c.zee));
    std::optional<GVec> found;
    for (const GVec& v : enumerate(region, budget)) {
        if (!member(v, c.dom)) continue;
        if (w.act(c.phi(v), y) == wtn.base) { found = v; break; }
    }
    if (!found)
        throw std::runtime_error("find_base: no v in dom with phi(v).y equal to the base");

    FindBaseResult res;
    res.cls = cls;
    res.v = *found;
    res.B_translated = translate(found->z, wtn.B);
    res.delta = 2 * wtn.delta;

    // Independent re-verification of the translated witness.
    std::vector<long long> U;
    for (long long x = 0; x < w.num_points; ++x)
        if (E.class_id[static_cast<size_t>(x)] == cls) U.push_back(x);
    RoughCheck rc = verify_rough(w, U, c, res.B_translated, res.delta, y, budget);
    if (!rc.ok)
        throw std::runtime_error("find_base: translated witness fails re-verification: " +
                                 rc.witness);
    return res;
}

LemmaReport verify_faces(const Window& w, const EqRel& E, const RectCert& cert, const Chart& c,
                         const Rect& A, const Rat& eps, const Rat& q,
                         const std::vector<char>* xh, const Int& budget) {
    if (!(6 * eps < q)) throw std::invalid_argument("verify_faces: hypothesis 6 eps < q violated");
    if (!(q < 1 - eps)) throw std::invalid_argument("verify_faces: hypothesis q < 1 - eps violated");
    if (!cert.pass) throw std::invalid_argument("verify_faces: relation is not certified");
    LemmaReport rep;
    rep.constants = "q window (6 eps, 1 - eps) at eps=" + rat_str(eps) + " q=" + rat_str(q);

    Rect qA = scale(q, A);
    auto classes = E.classes();
    for (int i = 1; i <= c.ell; ++i) {
        std::vector<long long> bnd = boundary(w, E, c, qA, i, xh);
        std::vector<char> bmask(static_cast<size_t>(w.num_points), 0);
        for (long long b : bnd) bmask[static_cast<size_t>(b)] = 1;
        for (const auto& [cl, wtn] : cert.by_class) {
            Int bi = wtn.B.radius[static_cast<size_t>(i - 1)];
            Rect slab = minkowski_sum(face(wtn.B, i), scale(2 * q, A));
            Rect slab_m = translate_axis(-bi, i, slab);
            Rect slab_p = translate_axis(bi, i, slab);
            if (!subset_of(slab_m, c.dom) || !subset_of(slab_p, c.dom)) {
                rep.failures.push_back("class " + pt(cl) + " axis " + std::to_string(i) +
                                       ": face slab escapes dom");
                continue;
            }
            std::vector<char> in_slab = orbit_mask(w, c, slab_m, wtn.base, budget);
            std::vector<char> plus = orbit_mask(w, c, slab_p, wtn.base, budget);
            for (size_t k = 0; k < in_slab.size(); ++k) in_slab[k] |= plus[k];
            for (long long x : classes[static_cast<size_t>(cl)]) {
                if (!bmask[static_cast<size_t>(x)]) continue;
                ++rep.checked;
                if (!in_slab[static_cast<size_t>(x)])
                    rep.failures.push_back("class " + pt(cl) + " axis " + std::to_string(i) +
                                           ": boundary point " + pt(x) + " outside both slabs");
            }
        }
    }
    rep.pass = rep.failures.empty();
    return rep;
}

LemmaReport verify_strong_boundary(const Window& w, const EqRel& E, const Chart& c,
                                   const Rect& A, const Rat& eps, const Rat& q,
                                   const std::vector<char>* xh, const Int& budget) {
    if (!(12 * eps < q))
        throw std::invalid_argument("verify_strong_boundary: hypothesis 12 eps < q violated");
    if (!(q < Rat(1, 24 * c.ell)))
        throw std::invalid_argument("verify_strong_boundary: hypothesis q < 1/(24 l) violated");
    LemmaReport rep;
    rep.constants = "q window (12 eps, 1/(24 l)) at eps=" + rat_str(eps) + " q=" + rat_str(q);

    Rect qA = scale(q, A);
    Rect dil = scale(Rat(30 * c.ell), qA); // 30 l . (q . A), scaled in this order
    Rect premise_reach = scale(Rat(15 * c.ell) * q, A);

    // Per-axis reach masks: points within phi(30l.(q.A)) of the i-boundary.
    std::vector<std::vector<char>> reach;
    for (int i = 1; i <= c.ell; ++i) {
        std::vector<char> mask(static_cast<size_t>(w.num_points), 0);
        for (long long b : boundary(w, E, c, qA, i, xh)) {
            for (const GVec& v : enumerate(dil, budget))
                mask[static_cast<size_t>(w.act(c.phi(v), b))] = 1;
        }
        reach.push_back(std::move(mask));
    }

    std::vector<GroupElement> z3;
    for (const GVec& v : enumerate(scale(Rat(3), c.zee), budget)) z3.push_back(c.phi(v));
    std::vector<GroupElement> reach15;
    if (xh != nullptr)
        for (const GVec& v : enumerate(premise_reach, budget)) reach15.push_back(c.phi(v));

    for (long long x = 0; x < w.num_points; ++x) {
        if (!in_xh(xh, x)) continue;
        if (xh != nullptr) {
            bool ok = true;
            for (const auto& g : reach15)
                if (!(*xh)[static_cast<size_t>(w.act(g, x))]) { ok = false; break; }
            if (!ok) continue; // premise phi(15 l q.A).x inside X^H fails
        }
        bool inside = true;
        long long cl = E.class_id[static_cast<size_t>(x)];
        for (const auto& g : z3)
            if (E.class_id[static_cast<size_t>(w.act(g, x))] != cl) { inside = false; break; }
        if (inside) continue;
        ++rep.checked;
        bool near = false;
        for (int i = 0; i < c.ell; ++i)
            if (reach[static_cast<size_t>(i)][static_cast<size_t>(x)]) { near = true; break; }
        if (!near)
            rep.failures.push_back("x=" + pt(x) +
                                   " splits phi(3.Zee).x but is far from every boundary");
    }
    rep.pass = rep.failures.empty();
    return rep;
}

ClusterReport count_boundary_clusters(const Window& w, const EqRel& E, const Chart& c,
                                      const Rect& A, const Rat& eps, const Rat& q, int axis,
                                      long long x, std::optional<Rat> search_mult,
                                      std::optional<Rat> neigh_mult, const Int& budget) {
    if (!(6 * eps < q))
        throw std::invalid_argument("count_boundary_clusters: hypothesis 6 eps < q violated");
    if (!(q < Rat(1, 2)))
        throw std::invalid_argument("count_boundary_clusters: hypothesis q < 1/2 violated");
    Rat smult = search_mult.value_or(Rat(Int(1) << (17 * c.ell)));
    Rat nmult = neigh_mult.value_or(Rat(Int(1) << (19 * c.ell)));

    ClusterReport rep;
    rep.bound = Int(1) << (22 * c.ell * c.ell);
    rep.constants = "search mult " + rat_str(smult) + " (reference 2^(17 l)), neighborhood mult " +
                    rat_str(nmult) + " (reference 2^(19 l))";

    Rect qA = scale(q, A);
    std::vector<char> near_x = orbit_mask(w, c, scale(smult, A), x, budget);
    Rect neigh = minkowski_sum(scale(nmult, face(A, axis)), scale(5 * q, A));

    std::vector<char> used(static_cast<size_t>(w.num_points), 0);
    for (long long y : boundary(w, E, c, qA, axis)) {
        if (!near_x[static_cast<size_t>(y)]) continue;
        std::vector<long long> pts = phi_orbit(w, c, neigh, y, budget);
        bool disjoint = true;
        for (long long p : pts)
            if (used[static_cast<size_t>(p)]) { disjoint = false; break; }
        if (!disjoint) continue;
        for (long long p : pts) used[static_cast<size_t>(p)] = 1;
        rep.reps.push_back(y);
    }
    rep.observed = static_cast<long long>(rep.reps.size());
    return rep;
}

} // namespace nilrect
