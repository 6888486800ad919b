#pragma once

namespace infocoh {

// Serial is the reference; parallel uses OpenMP when built with it and must
// produce identical results.
enum class Exec { serial, parallel };

int worker_count();

}  // namespace infocoh
