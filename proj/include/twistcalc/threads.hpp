#pragma once

// Worker budget for the parallel checks. TWISTCALC_THREADS overrides the
// hardware count; values below 1 are clamped to 1.

namespace twistcalc {

int thread_budget();

}  // namespace twistcalc
