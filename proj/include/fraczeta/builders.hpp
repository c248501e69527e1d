#pragma once

// Canonical scenes used by the verify suites, the tests and the shipped
// scene files: the middle-thirds Cantor set (unit and paper-normalized
// variants) and the three matrix-family examples.

#include "fraczeta/geometry.hpp"
#include "fraczeta/ncfunc.hpp"
#include "fraczeta/strings.hpp"

namespace fraczeta::builders {

// {x/3, x/3 + 2/3} on [0,1]: the middle-thirds Cantor set
geometry::IfsSystem cantor_ifs();
// {x/3, x/3 + 2} on [0,3]: the Cantor set scaled by 3, whose gap series
// matches the closed form 2^{1-s} 3^s / (s (3^s - 2))
geometry::IfsSystem cantor_ifs_scaled3();

// gaps 1/3^(i+1) with multiplicity 2^i (host [0,1])
strings::FractalString cantor_string(double collar = 0.5);
// gaps 3^-i with multiplicity 2^i (host [0,3])
strings::FractalString cantor_string_scaled3(double collar = 0.5);

// 2x2 symmetric matrix [[a, b], [b, c]]
nc::Mat sym2(double a, double b, double c);

// tau = (1/2) tr over { [[0,p],[p,0]] : p in Cantor }
nc::NcState example2_state(double R);
// tau = (1/2) tr over { [[q,p],[p,q]] : p, q in Cantor }
nc::NcState example3_state(double R);
// tau = (1/2) tr over { [[q,p],[p,r]] : p in Cantor, q, r in [-1/2, 1/2] }
nc::NcState example4_state(double R);

// nu = (1/2) tr against exp(-alpha (a^2+b^2+c^2)) da db dc on [-half, half]^3
// embedded as [[a, b], [b, c]]
nc::NcWeight abc_gaussian_weight(double alpha, double half);

nc::NcScene example2_scene(double alpha = 0.001, double half = 6.0,
                           std::uint64_t seed = 42);
nc::NcScene example3_scene(double alpha = 0.001, double half = 6.0,
                           std::uint64_t seed = 42);
nc::NcScene example4_scene(double alpha = 0.001, double half = 6.0,
                           std::uint64_t seed = 42);

}  // namespace fraczeta::builders
