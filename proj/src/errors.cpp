#include "tca/errors.hpp"

namespace tca {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::parse:
      return "parse";
    case ErrorKind::integrity:
      return "integrity";
    case ErrorKind::lookup:
      return "lookup";
    case ErrorKind::contract:
      return "contract";
    case ErrorKind::config:
      return "config";
    case ErrorKind::transport:
      return "transport";
    case ErrorKind::cache_miss:
      return "cache_miss";
    case ErrorKind::assignment:
      return "assignment";
  }
  return "unknown";
}

namespace {

std::string describe_missing(const std::vector<std::string>& missing) {
  std::string what = "embedding cache miss for " + std::to_string(missing.size()) + " text(s):";
  for (const auto& text : missing) what += " \"" + text + "\"";
  return what;
}

}  // namespace

CacheMissError::CacheMissError(std::vector<std::string> missing)
    : Error(ErrorKind::cache_miss, describe_missing(missing)), missing_(std::move(missing)) {}

}  // namespace tca
