#ifndef QES_FORMAT_HPP
#define QES_FORMAT_HPP

#include <charconv>
#include <complex>
#include <string>
#include <system_error>

namespace qes {

/// Shortest round-trip decimal representation (reproducible across runs).
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string format_complex(std::complex<double> v) {
    if (v.imag() == 0.0) return format_double(v.real());
    std::string s = format_double(v.real());
    if (v.imag() >= 0.0) s += "+";
    s += format_double(v.imag());
    s += "i";
    return s;
}

}  // namespace qes

#endif
