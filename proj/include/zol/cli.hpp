#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace zol {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs one `zol` subcommand. args[0] is the program name.
///
///   sweep   --config F --out DIR [--seed S] [--threads N]
///   predict --model F [--r R] [--mean X]
///   diag    --config F --n N [--model-id I] [--sample S] [--seed S]
///   gen     --n N (--config F | --r R | --sparse-log | --ba M) [--sample S] [--seed S] [--out F]
///   plot    --csv F --out F [--linear]
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace zol
