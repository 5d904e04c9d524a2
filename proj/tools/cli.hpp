#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace prent::cli {

/// Entry point of the `prent` command. 0 on success, 2 on usage errors and 1
/// on runtime errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace prent::cli
