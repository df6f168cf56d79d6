#include "output_set.hpp"

#include <system_error>

#include "truncmap/error.hpp"

namespace truncmap::cli {

namespace fs = std::filesystem;

OutputSet::~OutputSet() {
  if (committed_) return;
  std::error_code ec;
  for (auto& s : staged_) {
    s.stream.reset();
    fs::remove(s.temp_path, ec);
  }
  for (auto it = created_dirs_.rbegin(); it != created_dirs_.rend(); ++it) {
    if (fs::is_empty(*it, ec)) fs::remove(*it, ec);
  }
}

void OutputSet::ensure_directory(const fs::path& dir) {
  if (dir.empty() || fs::is_directory(dir)) return;
  const auto parent = dir.parent_path();
  if (!parent.empty() && !fs::is_directory(parent)) {
    throw ConfigError("output directory '" + dir.string() + "': parent does not exist");
  }
  std::error_code ec;
  if (!fs::create_directory(dir, ec) || ec) {
    throw ConfigError("cannot create output directory '" + dir.string() + "'");
  }
  created_dirs_.push_back(dir);
}

std::ofstream& OutputSet::open(const fs::path& path) {
  const auto parent = path.parent_path();
  if (!parent.empty() && !fs::is_directory(parent)) {
    throw ConfigError("output '" + path.string() + "': directory '" + parent.string() + "' does not exist");
  }
  Staged s;
  s.final_path = path;
  s.temp_path = path;
  s.temp_path += ".partial";
  s.stream = std::make_unique<std::ofstream>(s.temp_path, std::ios::binary | std::ios::trunc);
  if (!*s.stream) throw ConfigError("cannot create output '" + path.string() + "'");
  staged_.push_back(std::move(s));
  return *staged_.back().stream;
}

void OutputSet::commit() {
  for (auto& s : staged_) {
    s.stream->flush();
    if (!*s.stream) throw DataError("write failed for '" + s.final_path.string() + "'");
    s.stream->close();
  }
  for (auto& s : staged_) {
    std::error_code ec;
    fs::rename(s.temp_path, s.final_path, ec);
    if (ec) throw ConfigError("cannot move output into place: '" + s.final_path.string() + "': " + ec.message());
  }
  committed_ = true;
}

std::vector<fs::path> OutputSet::paths() const {
  std::vector<fs::path> out;
  for (const auto& s : staged_) out.push_back(s.final_path);
  return out;
}

}  // namespace truncmap::cli
