#pragma once

#include <compare>
#include <cstddef>
#include <string>

namespace drip {

/// Position of a statement in the IR: procedure, block id and statement index.
struct Origin {
    std::string procedure;
    std::string block;
    std::size_t index = 0;

    auto operator<=>(const Origin&) const = default;
    bool operator==(const Origin&) const = default;

    [[nodiscard]] std::string to_string() const {
        return procedure + "/" + block + "/" + std::to_string(index);
    }
};

} // namespace drip
