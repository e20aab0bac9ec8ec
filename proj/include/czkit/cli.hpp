#pragma once

namespace czkit {

/// Entry point of the czkit tool. Exit codes: 0 success, 1 a checked property
/// failed (witness in the report), 2 input or range error.
int run_cli(int argc, char** argv);

}  // namespace czkit
