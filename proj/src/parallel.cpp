#include "deformesh/parallel.hpp"

#include <cstdlib>

namespace deformesh {

int threads_from_env() {
    const char* v = std::getenv("DEFORMESH_THREADS");
    if (!v)
        return 1;
    char* end = nullptr;
    const long n = std::strtol(v, &end, 10);
    if (end == v || *end != '\0' || n < 1)
        return 1;
    return static_cast<int>(std::min<long>(n, 256));
}

}  // namespace deformesh
