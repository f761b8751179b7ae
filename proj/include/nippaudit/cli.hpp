#pragma once

#include <iosfwd>

namespace nippaudit {

// Entry point of the nippaudit command. Exit codes: 0 success (audit: no
// findings), 2 audit findings present, 1 operational error.
int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace nippaudit
