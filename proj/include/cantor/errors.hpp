#pragma once

#include <stdexcept>
#include <string>

namespace cantor {

// Exit-code contract used by the CLI: 2 invariant failure, 3 refusal,
// 4 budget exhaustion, 1 usage/parse.

struct invariant_error : std::runtime_error {
    explicit invariant_error(const std::string& what) : std::runtime_error(what) {}
};

struct refusal_error : std::runtime_error {
    explicit refusal_error(const std::string& what) : std::runtime_error(what) {}
};

struct budget_error : std::runtime_error {
    explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

struct parse_error : std::runtime_error {
    explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cantor
