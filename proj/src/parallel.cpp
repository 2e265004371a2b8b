#include "qbatt/parallel.hpp"

#include <cstdlib>
#include <string>

namespace qbatt {

int default_workers() {
    if (const char* env = std::getenv("DICKE_BATTERY_WORKERS")) {
        try {
            const int n = std::stoi(env);
            if (n >= 1) return n;
        } catch (...) {
            // fall through to hardware default
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : (int)hw;
}

}  // namespace qbatt
