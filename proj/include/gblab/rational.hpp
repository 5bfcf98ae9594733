#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace gblab {

// Exact big-integer rational. boost::multiprecision keeps values in lowest
// terms with a positive denominator, which is exactly the invariant the
// exact-identity tests rely on.
using BigInt = boost::multiprecision::cpp_int;
using RationalQ = boost::multiprecision::cpp_rational;

inline BigInt rational_num(const RationalQ& r) {
    return boost::multiprecision::numerator(r);
}

inline BigInt rational_den(const RationalQ& r) {
    return boost::multiprecision::denominator(r);
}

inline double to_double(const RationalQ& r) {
    return r.template convert_to<double>();
}

}  // namespace gblab
