// rect.cpp -- centered rectangle arithmetic over Z^ell x Gamma.

#include "nilrect/rect.hpp"

#include <sstream>
#include <stdexcept>

namespace nilrect {

static void check_same_shape(const Rect& A, const Rect& B) {
    if (A.ell != B.ell || !(A.gamma == B.gamma))
        throw std::invalid_argument("rect shape mismatch (ell or gamma differ)");
}

static Int mod_pos(const Int& a, const Int& m) {
    Int r = a % m;
    if (r < 0) r += m;
    return r;
}

GVec gvec_zero(int ell, const GammaSpec& g) {
    GVec v;
    v.z.assign(static_cast<size_t>(ell), Int(0));
    v.t.assign(g.orders.size(), Int(0));
    return v;
}

GVec gvec_unit(int ell, const GammaSpec& g, int axis) {
    GVec v = gvec_zero(ell, g);
    v.z.at(static_cast<size_t>(axis - 1)) = 1;
    return v;
}

GVec gvec_add(const GVec& a, const GVec& b, const GammaSpec& g) {
    GVec r = a;
    for (size_t i = 0; i < r.z.size(); ++i) r.z[i] += b.z[i];
    for (size_t i = 0; i < r.t.size(); ++i) r.t[i] = mod_pos(r.t[i] + b.t[i], g.orders[i]);
    return r;
}

GVec gvec_sub(const GVec& a, const GVec& b, const GammaSpec& g) {
    GVec r = a;
    for (size_t i = 0; i < r.z.size(); ++i) r.z[i] -= b.z[i];
    for (size_t i = 0; i < r.t.size(); ++i) r.t[i] = mod_pos(r.t[i] - b.t[i], g.orders[i]);
    return r;
}

GVec gvec_neg(const GVec& a, const GammaSpec& g) {
    return gvec_sub(gvec_zero(static_cast<int>(a.z.size()), g), a, g);
}

Rect rec(const GammaSpec& gamma, const std::vector<Int>& radii) {
    Rect A;
    A.ell = static_cast<int>(radii.size());
    A.gamma = gamma;
    A.center.assign(radii.size(), Int(0));
    A.radius = radii;
    for (const Int& r : A.radius)
        if (r < 0) throw std::invalid_argument("rect radius must be nonnegative");
    return A;
}

Rect rec_uniform(int ell, const GammaSpec& gamma, const Int& radius) {
    return rec(gamma, std::vector<Int>(static_cast<size_t>(ell), radius));
}

Rect scale(const Rat& lambda, const Rect& A) {
    if (lambda == 0) throw std::invalid_argument("scale: lambda must be nonzero");
    Rect R = A;
    Rat mag = lambda;
    if (lambda < 0) {
        mag = -lambda;
        for (Int& c : R.center) c = -c;
    }
    for (size_t i = 0; i < R.radius.size(); ++i)
        R.radius[i] = floor_mul(mag, A.radius[i]);
    return R;
}

Rect face(const Rect& A, int axis) {
    if (axis < 1 || axis > A.ell) throw std::out_of_range("face: axis out of range");
    Rect R = A;
    R.radius[static_cast<size_t>(axis - 1)] = 0;
    return R;
}

bool fits_in(const Rect& A, const Rect& B) {
    check_same_shape(A, B);
    for (int i = 0; i < A.ell; ++i)
        if (A.radius[static_cast<size_t>(i)] > B.radius[static_cast<size_t>(i)]) return false;
    return true;
}

Rect translate(const std::vector<Int>& t, const Rect& A) {
    if (t.size() != A.center.size())
        throw std::invalid_argument("translate: dimension mismatch");
    Rect R = A;
    for (size_t i = 0; i < t.size(); ++i) R.center[i] += t[i];
    return R;
}

Rect translate_axis(const Int& c, int axis, const Rect& A) {
    std::vector<Int> t(A.center.size(), Int(0));
    t.at(static_cast<size_t>(axis - 1)) = c;
    return translate(t, A);
}

Rect negate(const Rect& A) {
    Rect R = A;
    for (Int& c : R.center) c = -c;
    return R;
}

Rect minkowski_sum(const Rect& A, const Rect& B) {
    check_same_shape(A, B);
    Rect R = A;
    for (size_t i = 0; i < R.center.size(); ++i) {
        R.center[i] += B.center[i];
        R.radius[i] += B.radius[i];
    }
    return R;
}

Int cardinality(const Rect& A) {
    Int n = A.gamma.size();
    for (const Int& r : A.radius) n *= 2 * r + 1;
    return n;
}

bool member(const GVec& v, const Rect& A) {
    if (v.z.size() != A.center.size() || v.t.size() != A.gamma.orders.size()) return false;
    for (size_t i = 0; i < v.z.size(); ++i) {
        Int d = v.z[i] - A.center[i];
        if (d < -A.radius[i] || d > A.radius[i]) return false;
    }
    return true; // torsion coordinate is unrestricted
}

bool subset_of(const Rect& A, const Rect& B) {
    check_same_shape(A, B);
    for (int i = 0; i < A.ell; ++i) {
        size_t k = static_cast<size_t>(i);
        if (A.center[k] - A.radius[k] < B.center[k] - B.radius[k]) return false;
        if (A.center[k] + A.radius[k] > B.center[k] + B.radius[k]) return false;
    }
    return true;
}

bool meets(const Rect& A, const Rect& B) {
    check_same_shape(A, B);
    for (int i = 0; i < A.ell; ++i) {
        size_t k = static_cast<size_t>(i);
        Int d = A.center[k] - B.center[k];
        if (d < 0) d = -d;
        if (d > A.radius[k] + B.radius[k]) return false;
    }
    return true;
}

std::vector<GVec> enumerate(const Rect& A, const Int& budget) {
    Int n = cardinality(A);
    if (n > budget) throw std::length_error("rect enumeration budget exceeded: |A| = " + n.str());

    std::vector<GVec> out;
    out.reserve(static_cast<size_t>(static_cast<unsigned long long>(n)));
    GVec v = gvec_zero(A.ell, A.gamma);
    for (int i = 0; i < A.ell; ++i)
        v.z[static_cast<size_t>(i)] = A.center[static_cast<size_t>(i)] - A.radius[static_cast<size_t>(i)];
    // Odometer over free coordinates, then torsion coordinates.
    while (true) {
        out.push_back(v);
        int i = static_cast<int>(v.t.size()) - 1;
        for (; i >= 0; --i) {
            size_t k = static_cast<size_t>(i);
            if (v.t[k] + 1 < A.gamma.orders[k]) { ++v.t[k]; break; }
            v.t[k] = 0;
        }
        if (i >= 0) continue;
        int j = A.ell - 1;
        for (; j >= 0; --j) {
            size_t k = static_cast<size_t>(j);
            if (v.z[k] < A.center[k] + A.radius[k]) { ++v.z[k]; break; }
            v.z[k] = A.center[k] - A.radius[k];
        }
        if (j < 0) break;
    }
    return out;
}

static std::string int_list(const std::vector<Int>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += v[i].str();
    }
    return s;
}

std::string rect_to_text(const Rect& A) {
    return "rect(center=[" + int_list(A.center) + "]; radius=[" + int_list(A.radius) +
           "]; gamma=[" + int_list(A.gamma.orders) + "])";
}

static bool parse_int_list(const std::string& s, std::vector<Int>& out) {
    out.clear();
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            if (cur.empty()) return false;
            out.push_back(Int(cur));
            cur.clear();
        } else if (c == '-' || (c >= '0' && c <= '9')) {
            cur += c;
        } else if (c != ' ') {
            return false;
        }
    }
    if (!cur.empty()) out.push_back(Int(cur));
    return true;
}

std::optional<Rect> rect_from_text(const std::string& s) {
    auto grab = [&](const std::string& key) -> std::optional<std::string> {
        auto p = s.find(key + "=[");
        if (p == std::string::npos) return std::nullopt;
        p += key.size() + 2;
        auto q = s.find(']', p);
        if (q == std::string::npos) return std::nullopt;
        return s.substr(p, q - p);
    };
    auto c = grab("center"), r = grab("radius"), g = grab("gamma");
    if (!c || !r || !g) return std::nullopt;
    Rect A;
    if (!parse_int_list(*c, A.center)) return std::nullopt;
    if (!parse_int_list(*r, A.radius)) return std::nullopt;
    if (!parse_int_list(*g, A.gamma.orders)) return std::nullopt;
    if (A.center.size() != A.radius.size()) return std::nullopt;
    A.ell = static_cast<int>(A.radius.size());
    for (const Int& x : A.radius)
        if (x < 0) return std::nullopt;
    return A;
}

} // namespace nilrect
