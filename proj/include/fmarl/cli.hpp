#pragma once

namespace fmarl {

// Entry point behind the fmarl binary. Exit codes: 0 success, 2 usage or
// configuration error, 1 runtime error.
int cli_main(int argc, const char* const* argv);

}  // namespace fmarl
