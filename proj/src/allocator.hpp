#pragma once

#if defined(__GLIBC__)
#include <malloc.h>
#endif

namespace rsinr::detail {

// Activation buffers are reallocated on every pass; reuse heap pages for them
// instead of fresh mmap regions.
inline void keep_large_allocations_on_heap() {
#if defined(__GLIBC__)
  static const bool once = [] {
    mallopt(M_MMAP_THRESHOLD, 1 << 30);
    mallopt(M_TRIM_THRESHOLD, 1 << 30);
    return true;
  }();
  (void)once;
#endif
}

}  // namespace rsinr::detail
