#include "nsaudit/vec.hpp"

#include <ostream>

namespace nsaudit {

std::ostream& operator<<(std::ostream& os, const Vec3& v) {
    return os << "(" << v.x << ", " << v.y << ", " << v.z << ")";
}

} // namespace nsaudit
