#pragma once

#include <string>

#include "min2lin/system.hpp"

namespace fixtures {

// Two chains from a and b meeting at r, over Z_4. Ids: 0 a=1, 1 b=1, 2 c=2a, 3 c=2u, 4 u=r, 5 d=2b, 6 d=r.
inline const char* kChains =
    "ring 4\n"
    "crisp 1*a = 1\n"
    "crisp 1*b = 1\n"
    "soft 2*a + -1*c = 0\n"
    "soft 1*c + -2*u = 0\n"
    "soft 1*u + -1*r = 0\n"
    "soft 2*b + -1*d = 0\n"
    "soft 1*d + -1*r = 0\n";

// The odd cycle over Z_8. Ids: 0 x=4, 1 2a=x, 2 3a=b, 3 3b=c, 4 3c=a.
inline const char* kTriangle =
    "ring 8\n"
    "crisp 1*x = 4\n"
    "soft 2*a + -1*x = 0\n"
    "soft 3*a + -1*b = 0\n"
    "soft 3*b + -1*c = 0\n"
    "soft 3*c + -1*a = 0\n";

inline min2lin::System chains() { return min2lin::parse(kChains); }
inline min2lin::System triangle() { return min2lin::parse(kTriangle); }

}  // namespace fixtures
