#pragma once

namespace qsync {

inline const char* version_string() { return "0.1.0"; }

} // namespace qsync
