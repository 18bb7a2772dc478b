// bench_sweeps.cpp -- timings for the parallel window sweeps against their
// serial runs, and for the separable box-invariance sweep against the
// enumeration reference.  Every variant's output is cross-checked before
// its time is reported; a disagreement aborts the benchmark.

#include "nilrect/rough.hpp"

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <string>

using namespace nilrect;

namespace {

double time_of(const std::function<void()>& f) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void row(const std::string& name, double serial, double parallel) {
    std::cout << name << ": serial " << serial << " s, parallel " << parallel << " s, speedup "
              << (parallel > 0 ? serial / parallel : 0.0) << "x\n";
}

} // namespace

int main(int argc, char** argv) {
    const long long N = argc > 1 ? std::atoll(argv[1]) : 288;
    Window w = build_window(free_abelian(2), N);
    Chart c = build_abelian_chart(free_abelian(2), {Int(1), Int(1)}, Rat(4 * N));

    // A grid of 24x24 blocks: plenty of boundary and plenty of interior.
    std::vector<long long> labels(static_cast<size_t>(w.num_points));
    for (long long x = 0; x < w.num_points; ++x) {
        long long i = x / N, j = x % N;
        labels[static_cast<size_t>(x)] = (i / 24) * ((N + 23) / 24) + j / 24;
    }
    EqRel E = eqrel_from_labels(labels);
    std::cout << "window " << w.num_points << " points, " << E.num_classes << " classes\n";

    {
        Rect A = rec(GammaSpec{}, {Int(3), Int(3)});
        std::vector<long long> b1, bp;
        double ts = time_of([&] { b1 = boundary(w, E, c, A, 1, nullptr, 1); });
        double tp = time_of([&] { bp = boundary(w, E, c, A, 1, nullptr, 0); });
        if (b1 != bp) { std::cerr << "boundary: serial/parallel disagree\n"; return 1; }
        row("boundary sweep", ts, tp);
    }

    {
        Rect R = rec(GammaSpec{}, {Int(6), Int(6)});
        std::vector<char> fast1, fastp, ref1, refp;
        Chart ref = c;
        ref.linear = false; // forces the enumeration reference
        double tf1 = time_of([&] { fast1 = box_invariant_mask(w, E, c, R, Int(50000000), 1); });
        double tfp = time_of([&] { fastp = box_invariant_mask(w, E, c, R, Int(50000000), 0); });
        double tr1 =
            time_of([&] { ref1 = box_invariant_mask(w, E, ref, R, Int(50000000), 1); });
        double trp =
            time_of([&] { refp = box_invariant_mask(w, E, ref, R, Int(50000000), 0); });
        if (fast1 != ref1 || fast1 != fastp || ref1 != refp) {
            std::cerr << "box_invariant_mask: variants disagree\n";
            return 1;
        }
        row("box invariance, separable sweep", tf1, tfp);
        row("box invariance, enumeration reference", tr1, trp);
        std::cout << "separable over enumeration (serial): " << (tr1 / tf1) << "x\n";
    }
    return 0;
}
