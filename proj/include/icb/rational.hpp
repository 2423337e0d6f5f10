#pragma once
// Exact rationals for the elimination code, backed by GMP. Doubles are
// rationalized losslessly (every finite double is p/2^k), comparisons and
// arithmetic are exact.

#include <gmpxx.h>

#include <cmath>
#include <stdexcept>
#include <string>

namespace icb {

using Rat = mpq_class;

inline Rat rat_from_double(double x) {
    if (!std::isfinite(x)) throw std::domain_error("rat_from_double: non-finite value");
    Rat q;
    mpq_set_d(q.get_mpq_t(), x);
    return q;
}

inline double rat_to_double(const Rat& q) { return q.get_d(); }

// Parses "p", "-p", or "p/q". Throws on malformed input or zero denominator.
inline Rat rat_parse(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty rational");
    for (char ch : text)
        if (!(std::isdigit(static_cast<unsigned char>(ch)) || ch == '/' || ch == '-' || ch == '+'))
            throw std::invalid_argument("malformed rational '" + text + "'");
    Rat q;
    if (mpq_set_str(q.get_mpq_t(), text.c_str(), 10) != 0)
        throw std::invalid_argument("malformed rational '" + text + "'");
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
    q.canonicalize();
    return q;
}

inline std::string rat_to_string(const Rat& q) { return q.get_str(); }

} // namespace icb
