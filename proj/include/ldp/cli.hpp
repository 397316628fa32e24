#pragma once

#include <ostream>

namespace ldp {

/// Entry point of the ldpkit tool. Data goes to `out`, diagnostics to `err`.
/// Returns 0 on success, 2 on domain/feasibility/quantization/budget errors,
/// 1 on usage and format errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ldp
