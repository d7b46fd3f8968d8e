#ifndef RECKIT_VERSION_HPP_
#define RECKIT_VERSION_HPP_

namespace reckit {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace reckit

#endif  // RECKIT_VERSION_HPP_
