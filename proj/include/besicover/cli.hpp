#pragma once

#include <optional>
#include <string>

#include "besicover/json_io.hpp"

namespace besicover {

// Exit codes: 0 success, 2 invariant/certificate violation (a scientific
// finding), 64 usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 2;
inline constexpr int kExitUsage = 64;

int run_cover(const Json& config, const std::string& out_path, uint64_t seed, int threads);
int run_concentration(const Json& config, const std::string& out_path, uint64_t seed, int threads);
int run_ratio(const Json& config, const std::string& out_path, uint64_t seed, int threads);
int run_maximal(const Json& config, const std::string& out_path, uint64_t seed, int threads);

// Loads the config file, dispatches, and maps exceptions to exit codes.
int run_subcommand(const std::string& name, const std::string& config_path,
                   const std::string& out_path, std::optional<uint64_t> seed, int threads);

}  // namespace besicover
