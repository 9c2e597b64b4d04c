#include "twistcalc/threads.hpp"

#include <cstdlib>
#include <string>
#include <thread>

namespace twistcalc {

int thread_budget() {
  if (const char* env = std::getenv("TWISTCALC_THREADS")) {
    try {
      int n = std::stoi(env);
      return n < 1 ? 1 : n;
    } catch (...) {
      // fall through to the hardware count on unparsable values
    }
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

}  // namespace twistcalc
