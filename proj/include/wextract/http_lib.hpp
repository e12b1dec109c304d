#pragma once

// Single include point for cpp-httplib so feature macros stay consistent
// across translation units.
#ifdef WEXTRACT_HAVE_OPENSSL
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif

#include <httplib.h>
