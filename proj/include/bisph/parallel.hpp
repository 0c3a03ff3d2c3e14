// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace bisph {

/// Worker threads used by grid kernels; 0 restores the OpenMP default.
void set_thread_count(int threads);
int thread_count();

} // namespace bisph
