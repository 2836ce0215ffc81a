#pragma once

#include <cstdint>
#include <filesystem>

namespace testsupport {

// RAII scratch directory under the system temp path.
class TempDir {
public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

private:
  std::filesystem::path path_;
};

// Writes a five-set surrogate corpus (Z/O/N/F/S prefixes, 100 files each,
// 4097 integer lines per file) with EEG-like per-set amplitude and band
// profiles: surface sets A/B, interictal intracranial sets C/D with sharp
// transients, high-amplitude rhythmic seizure set E. Deterministic in seed.
void write_surrogate_corpus(const std::filesystem::path& dir, std::uint64_t seed = 9001);

// Evaluation corpus resolution: EPIWAVE_DATA_DIR when it points at a usable
// corpus, otherwise a surrogate generated once under `fallback_dir`.
struct CorpusInfo {
  std::filesystem::path dir;
  bool surrogate = false;
};
CorpusInfo resolve_corpus(const std::filesystem::path& fallback_dir);

}  // namespace testsupport
