#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sdftrack/frame.hpp"
#include "sdftrack/geometry.hpp"
#include "sdftrack/tracker.hpp"
#include "sdftrack/trajectory.hpp"

namespace sdftrack {

namespace fs = std::filesystem;

// Color: binary PPM (P6, maxval 255). Channels are quantized as round(255 c).
void write_ppm(const fs::path& path, const RgbdFrame& frame);
/// Reads color into `frame` (dimensions must match when non-empty).
void read_ppm(const fs::path& path, RgbdFrame& frame);

// Depth: single-channel PFM ("Pf"), float32, scale -1.0 (little-endian),
// scanlines stored bottom-to-top. 0 marks an invalid pixel.
void write_pfm(const fs::path& path, const RgbdFrame& frame);
/// Reads depth into `frame` and refreshes the valid mask. Positive scale
/// headers are read as big-endian.
void read_pfm(const fs::path& path, RgbdFrame& frame);

// Intrinsics: one line `fx fy cx cy width height`.
void write_intrinsics(const fs::path& path, const Intrinsics& k);
Intrinsics read_intrinsics(const fs::path& path);

/// TUM trajectory line `timestamp tx ty tz qx qy qz qw` with timestamp =
/// frame_index / rate_hz printed with 6 decimals.
std::string format_tum_line(int frame_index, const Pose& pose, double rate_hz);
void write_tum(const fs::path& path, const Trajectory& traj, double rate_hz);
/// Frame indices are recovered as round(timestamp * rate_hz).
Trajectory read_tum(const fs::path& path, double rate_hz);

struct ManifestFrame {
  int index = 0;
  std::string color_file;
  std::string depth_file;
};

/// Directory layout descriptor, stored as `manifest.txt` (`key = value`
/// lines plus one `frame = <i> <color> <depth>` line per frame).
struct DatasetManifest {
  int frame_count = 0;
  double rate_hz = 10.0;
  std::string intrinsics_file = "intrinsics.txt";
  std::string groundtruth_file = "groundtruth.tum";
  std::string scene_file;  // empty when the dataset has no scene
  std::vector<ManifestFrame> frames;
};

DatasetManifest read_manifest(const fs::path& dir);
void write_manifest(const fs::path& dir, const DatasetManifest& m);

/// Writes frames, intrinsics, trajectory and manifest under `dir`.
/// `scene_source`, when given, is copied to `dir/scene.txt`.
void write_dataset(const fs::path& dir, const Dataset& data, const std::optional<fs::path>& scene_source = {});
Dataset read_dataset(const fs::path& dir);

/// Header `frame_index,iterations,queries,final_loss,skipped[,elapsed_ms]`.
std::string frame_stats_csv(const TrackingRun& run, bool include_timing);

void write_text_file(const fs::path& path, const std::string& contents);
std::string read_text_file(const fs::path& path);

}  // namespace sdftrack
