// markers.cpp -- greedy marker sets, bounded partition, selector.

#include "nilrect/markers.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace nilrect {

namespace {

void check_symmetric_with_identity(const std::vector<GroupElement>& F) {
    bool has_identity = false;
    for (const auto& g : F) {
        if (is_identity(g)) has_identity = true;
        GroupElement gi = invert(g);
        if (std::find(F.begin(), F.end(), gi) == F.end())
            throw std::invalid_argument("marker: F is not symmetric; missing inverse of " +
                                        element_to_text(g));
    }
    if (!has_identity) throw std::invalid_argument("marker: F must contain the identity");
}

void check_freeness(const Window& w, const std::vector<GroupElement>& F,
                    const std::vector<long long>& Z) {
    for (const auto& g : F) {
        if (is_identity(g)) continue;
        for (long long x : Z)
            if (w.act(g, x) == x)
                throw std::invalid_argument("marker: freeness fails: g=" + element_to_text(g) +
                                            " fixes x=" + std::to_string(x));
    }
}

std::vector<long long> all_points(const Window& w) {
    std::vector<long long> Z(static_cast<size_t>(w.num_points));
    for (long long x = 0; x < w.num_points; ++x) Z[static_cast<size_t>(x)] = x;
    return Z;
}

// Greedy core, preconditions assumed already checked.
std::vector<long long> greedy_pass(const Window& w, const std::vector<GroupElement>& F,
                                   const std::vector<long long>& Z) {
    std::vector<char> covered(static_cast<size_t>(w.num_points), 0);
    std::vector<long long> Y;
    for (long long z : Z) {
        if (covered[static_cast<size_t>(z)]) continue;
        Y.push_back(z);
        for (const auto& g : F) covered[static_cast<size_t>(w.act(g, z))] = 1;
    }
    return Y;
}

} // namespace

MarkerSet build_marker_set(const Window& w, const std::vector<GroupElement>& F,
                           const std::vector<long long>& Z) {
    check_symmetric_with_identity(F);
    check_freeness(w, F, Z);
    MarkerSet m;
    m.F = F;
    m.Z = Z;
    std::sort(m.Z.begin(), m.Z.end());
    m.members = greedy_pass(w, F, m.Z);
    return m;
}

MarkerSet build_marker_set(const Window& w, const std::vector<GroupElement>& F) {
    return build_marker_set(w, F, all_points(w));
}

MarkerCheck verify_marker_set(const Window& w, const MarkerSet& m) {
    MarkerCheck rep;
    rep.separated = true;
    for (long long y : m.members) {
        for (const auto& g : m.F) {
            if (is_identity(g)) continue;
            long long z = w.act(g, y);
            if (z != y && std::binary_search(m.members.begin(), m.members.end(), z)) {
                rep.separated = false;
                rep.witness = "separation: g=" + element_to_text(g) + " maps member " +
                              std::to_string(y) + " to member " + std::to_string(z);
            }
        }
    }
    rep.covering = true;
    for (long long z : m.Z) {
        bool hit = false;
        for (const auto& g : m.F) {
            // z = g . y  <=>  y = g^{-1} . z; F is symmetric so sweep inverses.
            long long y = w.act(invert(g), z);
            if (std::binary_search(m.members.begin(), m.members.end(), y)) {
                hit = true;
                break;
            }
        }
        if (!hit) {
            rep.covering = false;
            if (rep.witness.empty()) rep.witness = "coverage: z=" + std::to_string(z) + " unreached";
        }
    }
    return rep;
}

std::vector<std::vector<long long>> partition_marker(const Window& w,
                                                     const std::vector<GroupElement>& F,
                                                     const std::vector<long long>& Y) {
    check_symmetric_with_identity(F);
    check_freeness(w, F, Y);
    std::vector<long long> rest = Y;
    std::sort(rest.begin(), rest.end());
    std::vector<std::vector<long long>> parts;
    size_t bound = F.size() + 1;
    while (!rest.empty()) {
        if (parts.size() >= bound)
            throw std::logic_error("partition_marker: exceeded the |F|+1 class bound");
        std::vector<long long> part = greedy_pass(w, F, rest);
        std::vector<long long> next;
        std::set_difference(rest.begin(), rest.end(), part.begin(), part.end(),
                            std::back_inserter(next));
        parts.push_back(std::move(part));
        rest = std::move(next);
    }
    return parts;
}

std::vector<long long> build_selector(const Window& w, const EqRel& E,
                                      const std::vector<GroupElement>& K) {
    if (E.num_points != w.num_points)
        throw std::invalid_argument("build_selector: relation size mismatch");
    // Verify the K-bound: [x]_E is contained in K . x for every x.
    auto cls = E.classes();
    for (long long c = 0; c < E.num_classes; ++c) {
        const auto& U = cls[static_cast<size_t>(c)];
        for (long long x : U) {
            std::vector<char> reach(static_cast<size_t>(w.num_points), 0);
            for (const auto& k : K) reach[static_cast<size_t>(w.act(k, x))] = 1;
            for (long long y : U)
                if (!reach[static_cast<size_t>(y)])
                    throw std::invalid_argument("build_selector: class " + std::to_string(c) +
                                                " is not K-bounded at x=" + std::to_string(x) +
                                                " (missing y=" + std::to_string(y) + ")");
        }
    }
    std::vector<long long> least(static_cast<size_t>(E.num_classes), -1);
    for (long long x = 0; x < w.num_points; ++x) {
        long long c = E.class_id[static_cast<size_t>(x)];
        if (least[static_cast<size_t>(c)] < 0) least[static_cast<size_t>(c)] = x;
    }
    std::vector<long long> S(static_cast<size_t>(w.num_points));
    for (long long x = 0; x < w.num_points; ++x)
        S[static_cast<size_t>(x)] = least[static_cast<size_t>(E.class_id[static_cast<size_t>(x)])];
    return S;
}

std::string marker_to_text(const Window& w, const MarkerSet& m) {
    // The enumeration-order hash commits the certificate to the point order.
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&](std::uint64_t v) {
        h ^= v;
        h *= 1099511628211ull;
    };
    mix(static_cast<std::uint64_t>(w.num_points));
    for (long long r : w.rep_of) mix(static_cast<std::uint64_t>(r));
    std::ostringstream os;
    os << "marker-set\n";
    os << "F";
    for (const auto& g : m.F) os << " " << element_to_text(g);
    os << "\n";
    os << "Z size " << m.Z.size() << "\n";
    os << "enumeration-hash " << h << "\n";
    os << "members " << m.members.size() << "\n";
    for (long long y : m.members) os << y << "\n";
    return os.str();
}

} // namespace nilrect
