#pragma once

#include <functional>

namespace atmocirc {

/// Worker cap from ATMOCIRC_THREADS (default 1). Read once per process.
int thread_limit();

/// Runs body(begin, end) over contiguous chunks of [0, n). Chunks are
/// independent; callers must not reduce across them.
void parallel_for(int n, const std::function<void(int, int)>& body);

}  // namespace atmocirc
