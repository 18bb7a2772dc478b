// parallel.hpp
// Minimal job-control shim.  Verification sweeps run their grids in
// parallel with a deterministic chunk merge; constructions stay serial.

#pragma once

#ifdef NILRECT_OPENMP
#include <omp.h>
#endif

namespace nilrect {

// jobs <= 0 means "use all hardware threads"; without OpenMP this is 1.
inline int effective_jobs(int jobs) {
#ifdef NILRECT_OPENMP
    if (jobs <= 0) return omp_get_max_threads();
    return jobs;
#else
    (void)jobs;
    return 1;
#endif
}

} // namespace nilrect
