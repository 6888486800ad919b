#include "infocoh/exec.hpp"

#include <omp.h>

namespace infocoh {

int worker_count() { return omp_get_max_threads(); }

}  // namespace infocoh
