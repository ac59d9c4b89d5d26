#pragma once

#include <functional>

namespace fractower {

// Global switch consulted by every data-parallel kernel. Each output element
// is produced wholly by one thread with a serial inner reduction, so results
// are bit-identical for any thread count (and for the serial path).
void set_parallel(bool on);
bool parallel_enabled();

void parallel_for(int n, const std::function<void(int)>& body, bool parallel);

}  // namespace fractower
