#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace qstr {

/// Error carrying the pipeline stage it originated from, so the CLI can emit
/// stage-tagged diagnostics.
class Error : public std::runtime_error {
public:
    Error(std::string stage, const std::string& message)
        : std::runtime_error(message), stage_(std::move(stage)) {}

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

}  // namespace qstr
