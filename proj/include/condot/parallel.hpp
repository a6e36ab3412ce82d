#pragma once

#include <functional>

namespace condot {

// Parallel map over [0, n). jobs == 1 runs the plain serial loop (the
// reference path used in tests), jobs > 1 runs an OpenMP loop with that many
// threads, jobs == 0 uses the OpenMP default. Bodies must write only to their
// own slot; callers aggregate sequentially afterwards, so results are
// identical for every jobs value. Exceptions thrown by bodies are captured
// and the one with the lowest index is rethrown after the loop joins.
void parallel_for(int n, int jobs, const std::function<void(int)>& body);

}  // namespace condot
