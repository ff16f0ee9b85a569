#pragma once

namespace adrx {

// Version string injected by the build (git describe); falls back to the
// bare project version when built outside a git checkout.
inline const char* version_string() {
#ifdef ADRX_VERSION_STRING
    return ADRX_VERSION_STRING;
#else
    return "0.1.0-unknown";
#endif
}

} // namespace adrx
