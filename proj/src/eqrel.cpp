// eqrel.cpp -- finite equivalence relation plumbing.

#include "nilrect/eqrel.hpp"

#include <map>
#include <sstream>
#include <stdexcept>

namespace nilrect {

std::vector<std::vector<long long>> EqRel::classes() const {
    std::vector<std::vector<long long>> out(static_cast<size_t>(num_classes));
    for (long long x = 0; x < num_points; ++x)
        out[static_cast<size_t>(class_id[static_cast<size_t>(x)])].push_back(x);
    return out;
}

std::vector<long long> EqRel::class_members(long long cls) const {
    std::vector<long long> out;
    for (long long x = 0; x < num_points; ++x)
        if (class_id[static_cast<size_t>(x)] == cls) out.push_back(x);
    return out;
}

EqRel eqrel_from_labels(const std::vector<long long>& labels) {
    EqRel E;
    E.num_points = static_cast<long long>(labels.size());
    E.class_id.resize(labels.size());
    std::unordered_map<long long, long long> renum;
    for (size_t x = 0; x < labels.size(); ++x) {
        auto [it, inserted] = renum.emplace(labels[x], E.num_classes);
        if (inserted) ++E.num_classes;
        E.class_id[x] = it->second;
    }
    return E;
}

EqRel eqrel_equality(long long n) {
    EqRel E;
    E.num_points = n;
    E.num_classes = n;
    E.class_id.resize(static_cast<size_t>(n));
    for (long long x = 0; x < n; ++x) E.class_id[static_cast<size_t>(x)] = x;
    return E;
}

EqRel eqrel_full(long long n) {
    EqRel E;
    E.num_points = n;
    E.num_classes = n > 0 ? 1 : 0;
    E.class_id.assign(static_cast<size_t>(n), 0);
    return E;
}

bool eqrel_refines(const EqRel& F, const EqRel& E) {
    if (F.num_points != E.num_points) throw std::invalid_argument("eqrel_refines: size mismatch");
    std::unordered_map<long long, long long> image;
    for (long long x = 0; x < F.num_points; ++x) {
        long long f = F.class_id[static_cast<size_t>(x)];
        long long e = E.class_id[static_cast<size_t>(x)];
        auto [it, inserted] = image.emplace(f, e);
        if (!inserted && it->second != e) return false;
    }
    return true;
}

EqRel eqrel_meet(const EqRel& E, const EqRel& F) {
    if (F.num_points != E.num_points) throw std::invalid_argument("eqrel_meet: size mismatch");
    std::map<std::pair<long long, long long>, long long> renum;
    std::vector<long long> labels(static_cast<size_t>(E.num_points));
    long long next = 0;
    for (long long x = 0; x < E.num_points; ++x) {
        auto key = std::make_pair(E.class_id[static_cast<size_t>(x)],
                                  F.class_id[static_cast<size_t>(x)]);
        auto [it, inserted] = renum.emplace(key, next);
        if (inserted) ++next;
        labels[static_cast<size_t>(x)] = it->second;
    }
    return eqrel_from_labels(labels);
}

bool same_partition(const EqRel& E, const EqRel& F) {
    return eqrel_refines(E, F) && eqrel_refines(F, E);
}

std::string eqrel_to_text(const EqRel& E) {
    std::ostringstream os;
    for (long long x = 0; x < E.num_points; ++x)
        os << x << " " << E.class_id[static_cast<size_t>(x)] << "\n";
    return os.str();
}

} // namespace nilrect
