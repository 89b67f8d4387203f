#pragma once

#include <string_view>

namespace gridfdi::net {

/// WSCC 3-machine 9-bus case with the published load table as printed
/// (Q at load L3 = 350 MVAr) and Anderson-Fouad machine constants.
/// This is the default case used by the CLI when no file is given.
std::string_view embedded_wscc9();

/// Canonical WSCC variant: Q at L3 = 35 MVAr, 0.9/1.1 voltage bounds.
std::string_view embedded_wscc9_canonical();

}  // namespace gridfdi::net
