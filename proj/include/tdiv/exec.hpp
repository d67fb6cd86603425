#pragma once

namespace tdiv {

// Every kernel evaluates into a buffer (in parallel when requested) and reduces
// with the same serial compensated sum, so the two modes give bitwise-equal results.
enum class exec_mode { serial, parallel };

// parallel when compiled with OpenMP, serial otherwise
exec_mode default_exec_mode();

} // namespace tdiv
