#pragma once

#include <httplib.h>

// <resolv.h>, pulled in by httplib, defines `_res` as a macro; Eigen uses it
// as a parameter name.
#ifdef _res
#undef _res
#endif
