#include "rwre/simd.hpp"

#include <cstdlib>
#include <cstring>

namespace rwre::simd {

namespace {
const Backend* pick() {
    const char* want = std::getenv("RWRE_SIMD");
    if (want != nullptr) {
        if (std::strcmp(want, "scalar") == 0) return &scalar_backend();
        if (std::strcmp(want, "avx2") == 0 && avx2_backend() != nullptr) return avx2_backend();
        if (std::strcmp(want, "neon") == 0 && neon_backend() != nullptr) return neon_backend();
        // "auto" or unavailable request falls through to best available
    }
    if (const Backend* b = avx2_backend()) return b;
    if (const Backend* b = neon_backend()) return b;
    return &scalar_backend();
}
}  // namespace

const Backend& active_backend() {
    static const Backend* b = pick();
    return *b;
}

}  // namespace rwre::simd
