#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <dkscale/rational.hpp>
#include <dkscale/rescale.hpp>

namespace dkscale::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInfeasible = 2;

enum class Format { Json, Tsv, Text };

struct RunConfig {
  std::string input;
  std::string sample_path;  // verify only
  std::string record_path;  // sample: where the record goes; verify: record to check
  std::string k_text = "1";
  Rational k = 1;
  std::uint64_t seed = 0;
  RoundingMode rounding = RoundingMode::Paper;
  bool refined_bounds = true;
  std::optional<std::string> dump_dir;
  Format format = Format::Text;
  std::string out;  // empty: stdout
};

/// Operational failure: bad flags, unreadable files, malformed input.
class CliError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

int cmd_stats(const RunConfig& cfg, std::ostream& out);
int cmd_matrices(const RunConfig& cfg, std::ostream& out);
int cmd_sample(const RunConfig& cfg, std::ostream& out);
int cmd_verify(const RunConfig& cfg, std::ostream& out);

/// Parses argv and dispatches. Errors are printed to err and mapped to
/// exit status 1.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dkscale::cli
