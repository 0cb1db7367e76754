#include "sdftrack/dataset_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "sdftrack/config.hpp"
#include "sdftrack/error.hpp"

namespace sdftrack {

namespace {

[[noreturn]] void parse_fail(const fs::path& path, const std::string& where, const std::string& msg) {
  throw ParseError(path.string() + ":" + where + ": " + msg);
}

std::ofstream open_out(const fs::path& path, bool binary) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

std::ifstream open_in(const fs::path& path, bool binary) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

// Reads one whitespace-delimited header token of a netpbm-style file,
// skipping `#` comments.
std::string header_token(std::istream& in, const fs::path& path) {
  std::string tok;
  int c = 0;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  if (tok.empty()) parse_fail(path, "offset " + std::to_string(static_cast<long long>(in.tellg())), "truncated header");
  return tok;
}

int header_int(std::istream& in, const fs::path& path, const char* what) {
  const std::string tok = header_token(in, path);
  try {
    std::size_t used = 0;
    const int v = std::stoi(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    parse_fail(path, "header", std::string("bad ") + what + " '" + tok + "'");
  }
}

void check_dims(const fs::path& path, RgbdFrame& frame, int w, int h) {
  if (w <= 0 || h <= 0) parse_fail(path, "header", "non-positive image size");
  if (frame.width == 0 && frame.height == 0) {
    const int idx = frame.frame_index;
    frame = RgbdFrame::blank(w, h, idx);
    return;
  }
  if (frame.width != w || frame.height != h) {
    std::ostringstream os;
    os << "dimension mismatch: file is " << w << "x" << h << ", expected " << frame.width << "x" << frame.height;
    parse_fail(path, "header", os.str());
  }
}

std::uint8_t quantize(float c) {
  const float v = std::clamp(c, 0.0f, 1.0f) * 255.0f;
  return static_cast<std::uint8_t>(std::lround(v));
}

std::string pose_number(double v) { return format_double(v + 0.0); }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

void write_ppm(const fs::path& path, const RgbdFrame& frame) {
  auto out = open_out(path, true);
  out << "P6\n" << frame.width << " " << frame.height << "\n255\n";
  std::vector<std::uint8_t> bytes(frame.pixel_count() * 3);
  for (std::size_t i = 0; i < frame.pixel_count(); ++i)
    for (int ch = 0; ch < 3; ++ch) bytes[3 * i + ch] = quantize(frame.color[i][ch]);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

void read_ppm(const fs::path& path, RgbdFrame& frame) {
  auto in = open_in(path, true);
  if (header_token(in, path) != "P6") parse_fail(path, "offset 0", "not a binary PPM (expected P6)");
  const int w = header_int(in, path, "width");
  const int h = header_int(in, path, "height");
  const int maxval = header_int(in, path, "maxval");
  if (maxval <= 0 || maxval > 65535) parse_fail(path, "header", "maxval out of range");
  check_dims(path, frame, w, h);
  const std::size_t bytes_per_sample = maxval < 256 ? 1 : 2;
  std::vector<std::uint8_t> bytes(frame.pixel_count() * 3 * bytes_per_sample);
  const auto data_offset = in.tellg();
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (in.gcount() != static_cast<std::streamsize>(bytes.size()))
    parse_fail(path, "offset " + std::to_string(static_cast<long long>(data_offset)), "truncated pixel data");
  for (std::size_t i = 0; i < frame.pixel_count(); ++i) {
    for (int ch = 0; ch < 3; ++ch) {
      const std::size_t s = 3 * i + ch;
      const unsigned v = bytes_per_sample == 1 ? bytes[s] : (unsigned(bytes[2 * s]) << 8) | bytes[2 * s + 1];
      frame.color[i][ch] = static_cast<float>(v) / static_cast<float>(maxval);
    }
  }
}

void write_pfm(const fs::path& path, const RgbdFrame& frame) {
  auto out = open_out(path, true);
  out << "Pf\n" << frame.width << " " << frame.height << "\n-1.0\n";
  std::vector<unsigned char> row(static_cast<std::size_t>(frame.width) * 4);
  for (int v = frame.height - 1; v >= 0; --v) {
    for (int u = 0; u < frame.width; ++u) {
      std::uint32_t bits = std::bit_cast<std::uint32_t>(frame.depth[frame.index(u, v)]);
      for (int b = 0; b < 4; ++b) row[4 * u + b] = static_cast<unsigned char>((bits >> (8 * b)) & 0xFF);
    }
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
  }
  if (!out) throw IoError("write failed: " + path.string());
}

void read_pfm(const fs::path& path, RgbdFrame& frame) {
  auto in = open_in(path, true);
  const std::string magic = header_token(in, path);
  if (magic == "PF") parse_fail(path, "offset 0", "three-channel PFM not supported for depth");
  if (magic != "Pf") parse_fail(path, "offset 0", "not a grayscale PFM (expected Pf)");
  const int w = header_int(in, path, "width");
  const int h = header_int(in, path, "height");
  const std::string scale_tok = header_token(in, path);
  double scale = 0.0;
  try {
    scale = std::stod(scale_tok);
  } catch (const std::exception&) {
    parse_fail(path, "header", "bad scale '" + scale_tok + "'");
  }
  if (scale == 0.0 || !std::isfinite(scale)) parse_fail(path, "header", "scale must be non-zero");
  const bool little_endian = scale < 0.0;
  check_dims(path, frame, w, h);
  std::vector<unsigned char> row(static_cast<std::size_t>(w) * 4);
  for (int v = h - 1; v >= 0; --v) {
    const auto offset = in.tellg();
    in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(row.size()));
    if (in.gcount() != static_cast<std::streamsize>(row.size()))
      parse_fail(path, "offset " + std::to_string(static_cast<long long>(offset)), "truncated pixel data");
    for (int u = 0; u < w; ++u) {
      std::uint32_t bits = 0;
      for (int b = 0; b < 4; ++b) {
        const unsigned byte = row[4 * u + (little_endian ? b : 3 - b)];
        bits |= static_cast<std::uint32_t>(byte) << (8 * b);
      }
      frame.depth[frame.index(u, v)] = std::bit_cast<float>(bits);
    }
  }
  frame.refresh_valid();
}

void write_intrinsics(const fs::path& path, const Intrinsics& k) {
  auto out = open_out(path, false);
  out << format_double(k.fx) << " " << format_double(k.fy) << " " << format_double(k.cx) << " "
      << format_double(k.cy) << " " << k.width << " " << k.height << "\n";
}

Intrinsics read_intrinsics(const fs::path& path) {
  auto in = open_in(path, false);
  Intrinsics k;
  if (!(in >> k.fx >> k.fy >> k.cx >> k.cy >> k.width >> k.height))
    parse_fail(path, "1", "expected 'fx fy cx cy width height'");
  try {
    k.validate();
  } catch (const InvalidArgument& e) {
    parse_fail(path, "1", e.what());
  }
  return k;
}

std::string format_tum_line(int frame_index, const Pose& pose, double rate_hz) {
  char stamp[64];
  std::snprintf(stamp, sizeof(stamp), "%.6f", frame_index / rate_hz);
  std::ostringstream os;
  os << stamp << " " << pose_number(pose.t.x()) << " " << pose_number(pose.t.y()) << " " << pose_number(pose.t.z())
     << " " << pose_number(pose.q.x) << " " << pose_number(pose.q.y) << " " << pose_number(pose.q.z) << " "
     << pose_number(pose.q.w);
  return os.str();
}

void write_tum(const fs::path& path, const Trajectory& traj, double rate_hz) {
  auto out = open_out(path, false);
  for (const auto& e : traj) out << format_tum_line(e.frame_index, e.pose, rate_hz) << "\n";
  if (!out) throw IoError("write failed: " + path.string());
}

Trajectory read_tum(const fs::path& path, double rate_hz) {
  auto in = open_in(path, false);
  Trajectory traj;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::istringstream ls(t);
    double stamp = 0.0;
    Pose p;
    if (!(ls >> stamp >> p.t.x() >> p.t.y() >> p.t.z() >> p.q.x >> p.q.y >> p.q.z >> p.q.w))
      parse_fail(path, std::to_string(line_no), "expected 'timestamp tx ty tz qx qy qz qw'");
    try {
      p.q = normalize(p.q);
    } catch (const DegenerateQuaternion& e) {
      parse_fail(path, std::to_string(line_no), e.what());
    }
    const int index = static_cast<int>(std::lround(stamp * rate_hz));
    if (!traj.empty() && index <= traj.back().frame_index)
      parse_fail(path, std::to_string(line_no), "timestamps must be strictly increasing");
    traj.push_back({index, p});
  }
  return traj;
}

DatasetManifest read_manifest(const fs::path& dir) {
  const fs::path path = dir / "manifest.txt";
  auto in = open_in(path, false);
  DatasetManifest m;
  m.frame_count = -1;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) parse_fail(path, std::to_string(line_no), "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "frames") m.frame_count = std::stoi(value);
      else if (key == "rate_hz") m.rate_hz = parse_double(value, key);
      else if (key == "intrinsics") m.intrinsics_file = value;
      else if (key == "groundtruth") m.groundtruth_file = value;
      else if (key == "scene") m.scene_file = value;
      else if (key == "frame") {
        std::istringstream fs_(value);
        ManifestFrame f;
        if (!(fs_ >> f.index >> f.color_file >> f.depth_file)) throw InvalidArgument("expected '<index> <color> <depth>'");
        m.frames.push_back(f);
      } else {
        throw InvalidArgument("unknown key '" + key + "'");
      }
    } catch (const std::exception& e) {
      parse_fail(path, std::to_string(line_no), e.what());
    }
  }
  if (m.frame_count < 0) parse_fail(path, "EOF", "missing 'frames'");
  if (static_cast<int>(m.frames.size()) != m.frame_count)
    parse_fail(path, "EOF", "frame count " + std::to_string(m.frame_count) + " does not match " +
                                std::to_string(m.frames.size()) + " frame lines");
  for (int i = 0; i < m.frame_count; ++i)
    if (m.frames[i].index != i) parse_fail(path, "EOF", "frame indices must be dense 0..M-1");
  if (!(m.rate_hz > 0.0)) parse_fail(path, "EOF", "rate_hz must be positive");
  return m;
}

void write_manifest(const fs::path& dir, const DatasetManifest& m) {
  auto out = open_out(dir / "manifest.txt", false);
  out << "frames = " << m.frame_count << "\n";
  out << "rate_hz = " << format_double(m.rate_hz) << "\n";
  out << "intrinsics = " << m.intrinsics_file << "\n";
  out << "groundtruth = " << m.groundtruth_file << "\n";
  if (!m.scene_file.empty()) out << "scene = " << m.scene_file << "\n";
  for (const auto& f : m.frames) out << "frame = " << f.index << " " << f.color_file << " " << f.depth_file << "\n";
}

void write_dataset(const fs::path& dir, const Dataset& data, const std::optional<fs::path>& scene_source) {
  fs::create_directories(dir / "rgb");
  fs::create_directories(dir / "depth");
  DatasetManifest m;
  m.frame_count = static_cast<int>(data.frames.size());
  m.rate_hz = data.rate_hz;
  for (int i = 0; i < m.frame_count; ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "%06d", i);
    ManifestFrame f{i, std::string("rgb/") + name + ".ppm", std::string("depth/") + name + ".pfm"};
    write_ppm(dir / f.color_file, data.frames[i]);
    write_pfm(dir / f.depth_file, data.frames[i]);
    m.frames.push_back(f);
  }
  write_intrinsics(dir / m.intrinsics_file, data.intrinsics);
  write_tum(dir / m.groundtruth_file, data.groundtruth, data.rate_hz);
  if (scene_source) {
    m.scene_file = "scene.txt";
    if (fs::absolute(*scene_source) != fs::absolute(dir / m.scene_file))
      fs::copy_file(*scene_source, dir / m.scene_file, fs::copy_options::overwrite_existing);
  }
  write_manifest(dir, m);
}

Dataset read_dataset(const fs::path& dir) {
  const DatasetManifest m = read_manifest(dir);
  Dataset data;
  data.rate_hz = m.rate_hz;
  data.intrinsics = read_intrinsics(dir / m.intrinsics_file);
  data.groundtruth = read_tum(dir / m.groundtruth_file, m.rate_hz);
  for (const auto& f : m.frames) {
    for (const auto& file : {f.color_file, f.depth_file})
      if (!fs::exists(dir / file)) throw IoError("missing frame file " + (dir / file).string());
    RgbdFrame frame = RgbdFrame::blank(data.intrinsics.width, data.intrinsics.height, f.index);
    read_ppm(dir / f.color_file, frame);
    read_pfm(dir / f.depth_file, frame);
    data.frames.push_back(std::move(frame));
  }
  return data;
}

std::string frame_stats_csv(const TrackingRun& run, bool include_timing) {
  std::ostringstream os;
  os << "frame_index,iterations,queries,final_loss,skipped" << (include_timing ? ",elapsed_ms" : "") << "\n";
  for (const auto& f : run.frames) {
    char loss[64];
    std::snprintf(loss, sizeof(loss), "%.9g", f.final_loss);
    os << f.frame_index << "," << f.iterations << "," << f.queries << "," << loss << "," << (f.skipped ? 1 : 0);
    if (include_timing) {
      char ms[64];
      std::snprintf(ms, sizeof(ms), "%.3f", f.elapsed_ms);
      os << "," << ms;
    }
    os << "\n";
  }
  return os.str();
}

void write_text_file(const fs::path& path, const std::string& contents) {
  auto out = open_out(path, false);
  out << contents;
  if (!out) throw IoError("write failed: " + path.string());
}

std::string read_text_file(const fs::path& path) {
  auto in = open_in(path, false);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace sdftrack
