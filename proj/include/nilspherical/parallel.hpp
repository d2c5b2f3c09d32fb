#pragma once

#include <cstdint>
#include <functional>

namespace nilspherical {

// Worker count from NILSPHERICAL_THREADS, else hardware concurrency.
int thread_count();

// Runs body(chunk) for chunk in [0, chunks). Chunk boundaries never depend on
// the worker count, so callers that reduce per-chunk results in chunk order get
// bit-identical output for any thread setting.
void parallel_for_chunks(int chunks, const std::function<void(int)>& body);

}  // namespace nilspherical
