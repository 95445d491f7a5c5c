#ifndef HELIXLAB_FORMAT_HPP
#define HELIXLAB_FORMAT_HPP

#include <charconv>
#include <string>

namespace helix {

/// Shortest decimal string that round-trips the double. Deterministic,
/// locale-independent; used everywhere output must be byte-stable.
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

} // namespace helix

#endif // HELIXLAB_FORMAT_HPP
