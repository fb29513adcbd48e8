#pragma once

#include <cstddef>
#include <functional>

namespace annuli {

/*!
 * Worker count from ANNULI_THREADS (0 or unset = all cores).
 *
 * Results never depend on this value: parallel loops write into
 * index-addressed slots and reductions run serially in index order.
 */
int configured_threads();

//! Run body(i) for i in [0, n) on up to configured_threads() workers.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace annuli
