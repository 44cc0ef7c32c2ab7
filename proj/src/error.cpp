#include "urbanscope/error.hpp"

namespace urbanscope {

ParseError::ParseError(const std::string& file, std::size_t line, const std::string& what)
    : InvalidInput(file + ":" + std::to_string(line) + ": " + what), line_(line) {}

StageFailure::StageFailure(std::string stage, const std::string& cause)
    : std::runtime_error("stage '" + stage + "' failed: " + cause), stage_(std::move(stage)) {}

}  // namespace urbanscope
