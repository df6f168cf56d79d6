#ifndef TRUNCMAP_CLI_MANIFEST_HPP
#define TRUNCMAP_CLI_MANIFEST_HPP

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace truncmap::cli {

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// Reproducibility record written next to every run's outputs. It holds no
/// timestamps or host data, so identical runs produce identical manifests.
struct Manifest {
  std::string subcommand;
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
  std::vector<std::filesystem::path> inputs;
  std::vector<std::filesystem::path> outputs;

  nlohmann::ordered_json to_json() const;
};

}  // namespace truncmap::cli

#endif  // TRUNCMAP_CLI_MANIFEST_HPP
