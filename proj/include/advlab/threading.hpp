#pragma once

namespace advlab {

// Worker count for data-parallel loops (kernels, per-image batches).
// Default 1: serial execution. Every parallel loop in the library assigns
// whole output elements to threads, so results are bit-identical for any
// job count.
int max_jobs();
void set_max_jobs(int jobs);

// Hardware threads available, >= 1.
int hardware_jobs();

}  // namespace advlab
