#ifndef TRUNCMAP_CLI_OUTPUT_SET_HPP
#define TRUNCMAP_CLI_OUTPUT_SET_HPP

#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

namespace truncmap::cli {

/// Stages output files next to their destination and moves them into place
/// only on commit(). Anything not committed is deleted on destruction, so a
/// failed run leaves no partial artifacts behind.
class OutputSet {
 public:
  OutputSet() = default;
  OutputSet(const OutputSet&) = delete;
  OutputSet& operator=(const OutputSet&) = delete;
  ~OutputSet();

  /// Opens a staging stream for `path`. Throws ConfigError if the parent
  /// directory does not exist or the file cannot be created.
  std::ofstream& open(const std::filesystem::path& path);

  /// Creates `dir` if needed; directories created here are removed again on
  /// rollback when left empty.
  void ensure_directory(const std::filesystem::path& dir);

  /// Closes all streams and renames staged files to their final names.
  void commit();

  /// Final paths, in the order they were opened.
  std::vector<std::filesystem::path> paths() const;

 private:
  struct Staged {
    std::filesystem::path final_path;
    std::filesystem::path temp_path;
    std::unique_ptr<std::ofstream> stream;
  };
  std::vector<Staged> staged_;
  std::vector<std::filesystem::path> created_dirs_;
  bool committed_ = false;
};

}  // namespace truncmap::cli

#endif  // TRUNCMAP_CLI_OUTPUT_SET_HPP
