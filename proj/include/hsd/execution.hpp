#pragma once

namespace hsd {

/// Selects the serial reference loop or the OpenMP kernel for batch work.
enum class Execution { serial, parallel };

}  // namespace hsd
