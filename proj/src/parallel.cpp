#include "zspose/parallel.hpp"

#include <cstdlib>
#include <string>

namespace zspose {

int thread_cap() {
  static const int cap = [] {
    if (const char* env = std::getenv("ZSPE_THREADS")) {
      try {
        const int v = std::stoi(env);
        if (v >= 1) return v;
      } catch (...) {
      }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
  }();
  return cap;
}

}  // namespace zspose
