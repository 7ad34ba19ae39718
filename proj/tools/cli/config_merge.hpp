#pragma once

#include <string>
#include <vector>

namespace cho::cli {

/// Expands `--config file.json` into ordinary flags. Each top-level key
/// becomes `--key value...` unless the same flag already appears in args, so
/// explicit flags win. Arrays expand to several values; `true` becomes a bare
/// flag and `false` is dropped.
std::vector<std::string> merge_config_args(std::vector<std::string> args);

}  // namespace cho::cli
