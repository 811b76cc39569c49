#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace permeq::cli {

// args excludes the program name. Exit codes: 0 ok, 1 numerical/constraint error (JSON on err), 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace permeq::cli
