#ifndef CLOSEDLOFT_VERSION_HPP
#define CLOSEDLOFT_VERSION_HPP

namespace closedloft {

inline constexpr const char* tool_name = "closedloft";
inline constexpr const char* tool_version = "1.0.0";

}  // namespace closedloft

#endif  // CLOSEDLOFT_VERSION_HPP
