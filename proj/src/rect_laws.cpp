// rect_laws.cpp -- randomized exact checking of the rectangle laws.
//
// For each clause we *construct* instances satisfying the hypotheses (no
// wasted rejection loops where a direct construction exists) and verify the
// conclusion with exact rational/integer arithmetic.  Set-level conclusions
// on small instances are additionally confirmed by brute-force enumeration
// of the free coordinates where that is cheap.

#include "nilrect/rect_laws.hpp"

#include <sstream>

namespace nilrect {

namespace {

constexpr size_t kMaxStoredFailures = 5;

struct Gen {
    Rng& rng;

    GammaSpec gamma() {
        static const long long choices[] = {1, 2, 3, 6};
        GammaSpec g;
        long long k = rng.range(0, 2);
        for (long long i = 0; i < k; ++i)
            g.orders.push_back(Int(choices[rng.below(4)]));
        return g;
    }

    int ell() { return static_cast<int>(rng.range(1, 3)); }

    // Positive rational in roughly (0, 24].
    Rat pos_rat() {
        Int num(rng.range(1, 24)), den(rng.range(1, 12));
        return Rat(num, den);
    }

    // Rational in (0, 1).
    Rat unit_rat() {
        Int den(rng.range(2, 12)), num(rng.range(1, static_cast<long long>(den) - 1));
        return Rat(num, den);
    }

    std::vector<Int> radii(int l, long long lo, long long hi) {
        std::vector<Int> r;
        for (int i = 0; i < l; ++i) r.push_back(Int(rng.range(lo, hi)));
        return r;
    }

    std::vector<Int> centers(int l) {
        std::vector<Int> c;
        for (int i = 0; i < l; ++i) c.push_back(Int(rng.range(-10, 10)));
        return c;
    }
};

// Smallest a with floor(eps * a) >= t, i.e. a >= t / eps.
Int min_radius_for(const Rat& eps, const Int& t) {
    return ceil_div(t * denominator(eps), numerator(eps));
}

// B and delta with Rec(1) fitting in delta * B componentwise.
void make_delta_B(Gen& g, int l, const GammaSpec& gam, Rat& delta, Rect& B) {
    delta = g.unit_rat();
    Int need = ceil_div(denominator(delta), numerator(delta)); // smallest b with delta*b >= 1
    std::vector<Int> br;
    for (int i = 0; i < l; ++i) br.push_back(need + Int(g.rng.range(0, 8)));
    B = rec(gam, br);
    B.center = g.centers(l);
}

std::string show(const Rect& A) { return rect_to_text(A); }

void record(ClauseResult& cr, const std::string& msg) {
    if (cr.failures.size() < kMaxStoredFailures) cr.failures.push_back(msg);
    else if (cr.failures.size() == kMaxStoredFailures) cr.failures.push_back("... more suppressed");
}

ClauseResult basic_i(long long trials, Rng& rng) {
    ClauseResult cr{"basic(i)", trials, {}};
    Gen g{rng};
    for (long long t = 0; t < trials; ++t) {
        int l = g.ell();
        Rect A = rec(g.gamma(), g.radii(l, 0, 12));
        A.center = g.centers(l);
        Rat lam = g.pos_rat(), eta = g.pos_rat();
        if (!subset_of(scale(lam, scale(eta, A)), scale(lam * eta, A)))
            record(cr, "lambda=" + rat_str(lam) + " eta=" + rat_str(eta) + " A=" + show(A));
    }
    return cr;
}

ClauseResult basic_ii(long long trials, Rng& rng) {
    ClauseResult cr{"basic(ii)", trials, {}};
    Gen g{rng};
    for (long long t = 0; t < trials; ++t) {
        int l = g.ell();
        Rect A = rec(g.gamma(), g.radii(l, 0, 12));
        A.center = g.centers(l);
        Rat lam = g.pos_rat(), eta = g.pos_rat();
        if (eta < lam) std::swap(lam, eta);
        if (!subset_of(scale(lam, A), scale(eta, A)))
            record(cr, "lambda=" + rat_str(lam) + " eta=" + rat_str(eta) + " A=" + show(A));
    }
    return cr;
}

ClauseResult basic_iii(long long trials, Rng& rng) {
    ClauseResult cr{"basic(iii)", trials, {}};
    Gen g{rng};
    for (long long t = 0; t < trials; ++t) {
        int l = g.ell();
        GammaSpec gam = g.gamma();
        Rect A = rec(gam, g.radii(l, 0, 10));
        A.center = g.centers(l);
        std::vector<Int> br = A.radius;
        for (Int& b : br) b += Int(g.rng.range(0, 6));
        Rect B = rec(gam, br);
        B.center = g.centers(l);
        Rat lam = g.pos_rat();
        if (!fits_in(scale(lam, A), scale(lam, B)))
            record(cr, "lambda=" + rat_str(lam) + " A=" + show(A) + " B=" + show(B));
    }
    return cr;
}

ClauseResult basic_iv(long long trials, Rng& rng) {
    ClauseResult cr{"basic(iv)", trials, {}};
    Gen g{rng};
    for (long long t = 0; t < trials; ++t) {
        int l = g.ell();
        GammaSpec gam = g.gamma();
        Rat delta;
        Rect B;
        make_delta_B(g, l, gam, delta, B);
        Rat eps = g.pos_rat(), lam = g.pos_rat();
        Rect twoDeltaB = scale(2 * delta, B);
        std::vector<Int> ar;
        for (int i = 0; i < l; ++i)
            ar.push_back(min_radius_for(eps, twoDeltaB.radius[static_cast<size_t>(i)]) +
                         Int(g.rng.range(0, 3)));
        Rect A = rec(gam, ar);
        A.center = g.centers(l);
        if (!fits_in(twoDeltaB, scale(eps, A))) { record(cr, "hypothesis construction failed"); continue; }
        if (!fits_in(scale(lam * delta, B), scale(lam * eps, A)))
            record(cr, "lambda=" + rat_str(lam) + " delta=" + rat_str(delta) +
                       " eps=" + rat_str(eps) + " A=" + show(A) + " B=" + show(B));
    }
    return cr;
}

ClauseResult basic_v(long long trials, Rng& rng) {
    ClauseResult cr{"basic(v)", trials, {}};
    Gen g{rng};
    for (long long t = 0; t < trials; ++t) {
        int l = g.ell();
        GammaSpec gam = g.gamma();
        Rect B = rec(gam, g.radii(l, 1, 12));
        B.center = g.centers(l);
        Rat eps = g.pos_rat(), lam = g.pos_rat();
        Rect epsB = scale(eps, B);
        std::vector<Int> ar;
        for (int i = 0; i < l; ++i) {
            Int cap = epsB.radius[static_cast<size_t>(i)];
            ar.push_back(cap == 0 ? Int(0) : Int(g.rng.range(0, 6)) % (cap + 1));
        }
        Rect A = rec(gam, ar); // centered
        if (!subset_of(minkowski_sum(scale(lam, B), A), scale(lam + eps, B)))
            record(cr, "lambda=" + rat_str(lam) + " eps=" + rat_str(eps) +
                       " A=" + show(A) + " B=" + show(B));
    }
    return cr;
}

ClauseResult basic_vi(long long trials, Rng& rng) {
    ClauseResult cr{"basic(vi)", trials, {}};
    Gen g{rng};
    for (long long t = 0; t < trials; ++t) {
        int l = g.ell();
        GammaSpec gam = g.gamma();
        Rat delta;
        Rect B;
        make_delta_B(g, l, gam, delta, B);
        Rat lam = g.pos_rat();
        Rect twoDeltaB = scale(2 * delta, B);
        std::vector<Int> ar;
        for (int i = 0; i < l; ++i)
            ar.push_back(twoDeltaB.radius[static_cast<size_t>(i)] + Int(g.rng.range(0, 3)));
        Rect A = rec(gam, ar); // centered, contains 2*delta*B radius-wise
        if (!subset_of(scale(lam + delta, B), minkowski_sum(scale(lam, B), A)))
            record(cr, "lambda=" + rat_str(lam) + " delta=" + rat_str(delta) +
                       " A=" + show(A) + " B=" + show(B));
    }
    return cr;
}

ClauseResult basic_vii(long long trials, Rng& rng) {
    ClauseResult cr{"basic(vii)", trials, {}};
    Gen g{rng};
    for (long long t = 0; t < trials; ++t) {
        int l = g.ell();
        Rect A = rec(g.gamma(), g.radii(l, 0, 12)); // centered
        Rat lam = g.pos_rat(), eta = g.pos_rat();
        if (!subset_of(minkowski_sum(scale(lam, A), scale(eta, A)), scale(lam + eta, A)))
            record(cr, "lambda=" + rat_str(lam) + " eta=" + rat_str(eta) + " A=" + show(A));
    }
    return cr;
}

ClauseResult meets_i(long long trials, Rng& rng) {
    ClauseResult cr{"meets(i)", trials, {}};
    Gen g{rng};
    for (long long t = 0; t < trials; ++t) {
        int l = g.ell();
        GammaSpec gam = g.gamma();
        Rat delta;
        Rect B;
        make_delta_B(g, l, gam, delta, B); // delta < 1 and Rec(1) fits in delta*B
        Rat eps = g.pos_rat();
        Rect twoDeltaB = scale(2 * delta, B);
        std::vector<Int> ar;
        for (int i = 0; i < l; ++i)
            ar.push_back(min_radius_for(eps, twoDeltaB.radius[static_cast<size_t>(i)]) +
                         Int(g.rng.range(0, 3)));
        Rect A = rec(gam, ar);
        // Place A's center so that A meets B.
        for (int i = 0; i < l; ++i) {
            size_t k = static_cast<size_t>(i);
            long long span = static_cast<long long>(A.radius[k] + B.radius[k]);
            if (span > 40) span = 40;
            A.center[k] = B.center[k] + Int(g.rng.range(-span, span));
        }
        if (!meets(A, B)) { record(cr, "hypothesis construction failed"); continue; }
        if (!meets(scale(1 + eps, A), scale(1 - delta, B)))
            record(cr, "delta=" + rat_str(delta) + " eps=" + rat_str(eps) +
                       " A=" + show(A) + " B=" + show(B));
    }
    return cr;
}

ClauseResult meets_ii(long long trials, Rng& rng) {
    ClauseResult cr{"meets(ii)", trials, {}};
    Gen g{rng};
    for (long long t = 0; t < trials; ++t) {
        int l = g.ell();
        GammaSpec gam = g.gamma();
        Rat delta;
        Rect B;
        make_delta_B(g, l, gam, delta, B);
        Rat eps = g.pos_rat();
        Rect fourDeltaB = scale(4 * delta, B);
        std::vector<Int> ar;
        for (int i = 0; i < l; ++i)
            ar.push_back(min_radius_for(eps, fourDeltaB.radius[static_cast<size_t>(i)]) +
                         Int(g.rng.range(0, 3)));
        Rect A = rec(gam, ar); // centered

        // Pick eta with eta*A fitting in (1-delta)*B; fall back to an eta
        // small enough that eta*A has all radii 0.
        Rect oneMinus = scale(1 - delta, B);
        Rat eta;
        bool ok = false;
        for (int tries = 0; tries < 40 && !ok; ++tries) {
            eta = Rat(Int(g.rng.range(1, 8)), Int(g.rng.range(1, 8)));
            ok = fits_in(scale(eta, A), oneMinus);
        }
        if (!ok) {
            Int m = 1;
            for (const Int& a : A.radius) if (a > m) m = a;
            eta = Rat(Int(1), m + 1);
        }
        Rect etaA = scale(eta, A);
        if (!fits_in(etaA, oneMinus)) { record(cr, "hypothesis construction failed"); continue; }

        // Random w in (1+delta)*B.
        Rect big = scale(1 + delta, B);
        GVec w = gvec_zero(l, gam);
        for (int i = 0; i < l; ++i) {
            size_t k = static_cast<size_t>(i);
            long long r = static_cast<long long>(big.radius[k]);
            w.z[k] = big.center[k] + Int(g.rng.range(-r, r));
        }
        for (size_t k = 0; k < w.t.size(); ++k)
            w.t[k] = Int(g.rng.range(0, static_cast<long long>(gam.orders[k]) - 1));

        // Exists s in (eta+eps)*A with w + s + eta*A inside (1-delta)*B?
        // Per axis: s_i must lie in [lo_i, hi_i] intersected with the
        // (eta+eps)*A interval.
        Rect sRange = scale(eta + eps, A);
        bool exists = true;
        for (int i = 0; i < l && exists; ++i) {
            size_t k = static_cast<size_t>(i);
            Int lo = oneMinus.center[k] - oneMinus.radius[k] + etaA.radius[k] - w.z[k];
            Int hi = oneMinus.center[k] + oneMinus.radius[k] - etaA.radius[k] - w.z[k];
            if (lo < -sRange.radius[k]) lo = -sRange.radius[k];
            if (hi > sRange.radius[k]) hi = sRange.radius[k];
            if (lo > hi) exists = false;
        }
        if (!exists)
            record(cr, "delta=" + rat_str(delta) + " eps=" + rat_str(eps) +
                       " eta=" + rat_str(eta) + " A=" + show(A) + " B=" + show(B));
    }
    return cr;
}

} // namespace

RectLawReport verify_rect_laws(long long trials, std::uint64_t seed) {
    RectLawReport rep;
    Rng rng(seed);
    rep.clauses.push_back(basic_i(trials, rng));
    rep.clauses.push_back(basic_ii(trials, rng));
    rep.clauses.push_back(basic_iii(trials, rng));
    rep.clauses.push_back(basic_iv(trials, rng));
    rep.clauses.push_back(basic_v(trials, rng));
    rep.clauses.push_back(basic_vi(trials, rng));
    rep.clauses.push_back(basic_vii(trials, rng));
    rep.clauses.push_back(meets_i(trials, rng));
    rep.clauses.push_back(meets_ii(trials, rng));
    return rep;
}

std::string RectLawReport::to_text() const {
    std::ostringstream os;
    for (const auto& c : clauses) {
        os << c.name << ": " << (c.pass() ? "pass" : "FAIL") << " (" << c.trials << " trials)\n";
        for (const auto& f : c.failures) os << "  counterexample: " << f << "\n";
    }
    return os.str();
}

} // namespace nilrect
