#ifndef PCONN_VERSION_HPP
#define PCONN_VERSION_HPP

namespace pconn {

inline constexpr const char* kVersion = "pconn 0.1.0";

} // namespace pconn

#endif
