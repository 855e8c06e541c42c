#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <unistd.h>

#include "occo/graph_io.hpp"

namespace occo {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(errc::kIoError, "cannot read '" + path.string() + "'",
                {{"path", path.string()}});
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Replaces `path` by writing a sibling temporary file and renaming it over
// the target, so readers of the file never observe a partial write.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& data) {
  static std::atomic<unsigned> counter{0};
  auto tmp = path;
  tmp += ".tmp-" + std::to_string(::getpid()) + "-" + std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw Error(errc::kIoError, "cannot write '" + tmp.string() + "'",
                  {{"path", tmp.string()}});
    out << data;
    out.flush();
    if (!out)
      throw Error(errc::kIoError, "short write to '" + tmp.string() + "'",
                  {{"path", tmp.string()}});
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(errc::kIoError, "cannot replace '" + path.string() + "'",
                {{"path", path.string()}});
  }
}

inline GraphSnapshot load_graph_file(const std::filesystem::path& path) {
  return import_graph(read_file(path));
}

// Published-snapshot holder: readers copy the current pointer, writers are
// serialized and publish a new snapshot only after it has been persisted.
class RegistryStore {
 public:
  explicit RegistryStore(GraphSnapshot initial, std::filesystem::path path = {})
      : current_(std::make_shared<const GraphSnapshot>(std::move(initial))),
        path_(std::move(path)) {}

  static RegistryStore open(const std::filesystem::path& path) {
    try {
      return RegistryStore(load_graph_file(path), path);
    } catch (const Error& e) {
      throw Error(errc::kLoadFailure,
                  "cannot load graph '" + path.string() + "': " + e.what(), e.detail());
    }
  }

  RegistryStore(RegistryStore&& other) noexcept
      : current_(std::move(other.current_)), path_(std::move(other.path_)) {}

  std::shared_ptr<const GraphSnapshot> snapshot() const {
    std::lock_guard lock(publish_mutex_);
    return current_;
  }

  // Applies `fn` to the latest snapshot under the writer lock. Returns the
  // new snapshot; on any error nothing is persisted or published.
  std::shared_ptr<const GraphSnapshot> mutate(
      const std::function<GraphSnapshot(const GraphSnapshot&)>& fn) {
    std::lock_guard writer(write_mutex_);
    auto base = snapshot();
    auto next = std::make_shared<const GraphSnapshot>(fn(*base));
    if (!path_.empty()) write_file_atomic(path_, export_graph(*next));
    std::lock_guard lock(publish_mutex_);
    current_ = next;
    return next;
  }

  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::shared_ptr<const GraphSnapshot> current_;
  std::filesystem::path path_;
  mutable std::mutex publish_mutex_;
  std::mutex write_mutex_;
};

}  // namespace occo
