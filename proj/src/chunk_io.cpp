#include "rppg/chunk_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rppg/csv.hpp"
#include "rppg/errors.hpp"

namespace rppg {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

void require_file(const fs::path& p) {
  if (!fs::exists(p)) throw MissingFile("missing " + p.string());
}

void write_bytes(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoFailure("failed writing " + path.string());
}

std::vector<std::uint8_t> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw IoFailure("cannot open " + path.string());
  const std::streamsize size = in.tellg();
  in.seekg(0);
  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(size));
  in.read(reinterpret_cast<char*>(bytes.data()), size);
  if (!in) throw IoFailure("failed reading " + path.string());
  return bytes;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

template <typename T>
T meta_get(const ordered_json& meta, const char* key) {
  if (!meta.contains(key)) {
    throw CorruptHeader(std::string("meta.json: missing key '") + key + "'");
  }
  try {
    return meta.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw CorruptHeader(std::string("meta.json: bad value for '") + key + "': " + e.what());
  }
}

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

}  // namespace

void save_chunk(const VideoChunk& chunk, const fs::path& dir) {
  validate_chunk(chunk);  // throws before any write

  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoFailure("cannot create " + dir.string() + ": " + ec.message());

  const Eigen::Index n = chunk.frame_count();

  ordered_json meta;
  meta["fps"] = chunk.fps;
  meta["width"] = chunk.width;
  meta["height"] = chunk.height;
  meta["frame_count"] = static_cast<std::int64_t>(n);
  meta["age"] = chunk.metadata.age;
  meta["gender_male"] = chunk.metadata.gender_male;
  meta["skin_type"] = chunk.metadata.skin_type;
  meta["movement"] = chunk.metadata.movement;
  meta["illuminance_var"] = chunk.metadata.illuminance_var;
  meta["camera_stationary"] = chunk.metadata.camera_stationary;
  meta["hr_bpm"] = chunk.labels.hr_bpm;
  meta["rr_bpm"] = chunk.labels.rr_bpm;

  const FaceBox full{0, 0, chunk.width, chunk.height};
  const bool all_full = std::all_of(chunk.face_boxes.begin(), chunk.face_boxes.end(),
                                    [&](const FaceBox& b) { return b == full; });
  if (!all_full) {
    auto boxes = ordered_json::array();
    for (const FaceBox& b : chunk.face_boxes) {
      boxes.push_back({b.x, b.y, b.width, b.height});
    }
    meta["face_boxes"] = std::move(boxes);
  }
  write_text_file(dir / "meta.json", meta.dump(2) + "\n");

  write_bytes(dir / "frames.rgb24", chunk.pixels);

  std::ostringstream labels;
  labels << "frame,ppg,resp\n";
  for (Eigen::Index i = 0; i < n; ++i) {
    labels << i << ',' << format_double(chunk.labels.pulse_wave.samples[i]) << ','
           << format_double(chunk.labels.resp_wave.samples[i]) << '\n';
  }
  write_text_file(dir / "labels.csv", labels.str());

  if (chunk.has_landmarks()) {
    std::ostringstream lms;
    lms << "frame,point,x,y\n";
    for (Eigen::Index t = 0; t < n; ++t) {
      const auto& pts = chunk.landmarks[static_cast<std::size_t>(t)];
      for (Eigen::Index k = 0; k < pts.rows(); ++k) {
        lms << t << ',' << k << ',' << format_double(pts(k, 0)) << ','
            << format_double(pts(k, 1)) << '\n';
      }
    }
    write_text_file(dir / "landmarks.csv", lms.str());
  }
}

VideoChunk load_chunk(const fs::path& dir, std::vector<std::string>* warnings) {
  require_file(dir / "meta.json");
  require_file(dir / "frames.rgb24");
  require_file(dir / "labels.csv");

  ordered_json meta;
  try {
    meta = ordered_json::parse(read_text(dir / "meta.json"));
  } catch (const nlohmann::json::exception& e) {
    throw CorruptHeader("meta.json: " + std::string(e.what()));
  }

  VideoChunk c;
  c.fps = meta_get<double>(meta, "fps");
  c.width = meta_get<int>(meta, "width");
  c.height = meta_get<int>(meta, "height");
  const auto frame_count = meta_get<std::int64_t>(meta, "frame_count");
  if (c.width <= 0 || c.height <= 0 || frame_count < 0) {
    throw CorruptHeader("meta.json: non-positive frame geometry");
  }

  c.pixels = read_bytes(dir / "frames.rgb24");
  const std::size_t expected = static_cast<std::size_t>(frame_count) *
                               static_cast<std::size_t>(c.height) *
                               static_cast<std::size_t>(c.width) * 3;
  if (c.pixels.size() != expected) {
    std::ostringstream os;
    os << "frames.rgb24 holds " << c.pixels.size() << " bytes, expected " << expected
       << " (frame_count*height*width*3)";
    throw CorruptHeader(os.str());
  }

  const CsvTable labels = read_csv(dir / "labels.csv");
  if (labels.header != std::vector<std::string>{"frame", "ppg", "resp"}) {
    throw CorruptHeader("labels.csv: header must be 'frame,ppg,resp'");
  }
  Eigen::ArrayXd ppg(static_cast<Eigen::Index>(labels.rows.size()));
  Eigen::ArrayXd resp(static_cast<Eigen::Index>(labels.rows.size()));
  for (std::size_t i = 0; i < labels.rows.size(); ++i) {
    ppg[static_cast<Eigen::Index>(i)] = parse_double(labels.rows[i][1]);
    resp[static_cast<Eigen::Index>(i)] = parse_double(labels.rows[i][2]);
  }
  c.labels.pulse_wave = {std::move(ppg), c.fps};
  c.labels.resp_wave = {std::move(resp), c.fps};
  c.labels.hr_bpm = meta_get<double>(meta, "hr_bpm");
  c.labels.rr_bpm = meta_get<double>(meta, "rr_bpm");

  if (fs::exists(dir / "landmarks.csv")) {
    const CsvTable lms = read_csv(dir / "landmarks.csv");
    if (lms.header != std::vector<std::string>{"frame", "point", "x", "y"}) {
      throw CorruptHeader("landmarks.csv: header must be 'frame,point,x,y'");
    }
    std::vector<std::vector<std::pair<double, double>>> per_frame(
        static_cast<std::size_t>(frame_count));
    for (const auto& row : lms.rows) {
      const double fidx = parse_double(row[0]);
      if (fidx < 0 || fidx >= static_cast<double>(frame_count)) {
        throw CorruptHeader("landmarks.csv: frame index out of range");
      }
      per_frame[static_cast<std::size_t>(fidx)].emplace_back(parse_double(row[2]),
                                                             parse_double(row[3]));
    }
    c.landmarks.reserve(per_frame.size());
    for (const auto& pts : per_frame) {
      Eigen::MatrixX2d m(static_cast<Eigen::Index>(pts.size()), 2);
      for (std::size_t k = 0; k < pts.size(); ++k) {
        m(static_cast<Eigen::Index>(k), 0) = pts[k].first;
        m(static_cast<Eigen::Index>(k), 1) = pts[k].second;
      }
      c.landmarks.push_back(std::move(m));
    }
  }

  if (meta.contains("face_boxes")) {
    const auto& boxes = meta.at("face_boxes");
    if (!boxes.is_array() || boxes.size() != static_cast<std::size_t>(frame_count)) {
      throw CorruptHeader("meta.json: face_boxes must list one box per frame");
    }
    for (const auto& b : boxes) {
      if (!b.is_array() || b.size() != 4) {
        throw CorruptHeader("meta.json: face box entries must be [x,y,w,h]");
      }
      c.face_boxes.push_back(
          {b[0].get<int>(), b[1].get<int>(), b[2].get<int>(), b[3].get<int>()});
    }
  } else {
    c.face_boxes.assign(static_cast<std::size_t>(frame_count),
                        FaceBox{0, 0, c.width, c.height});
  }

  c.metadata.age = meta_get<int>(meta, "age");
  c.metadata.gender_male = meta_get<bool>(meta, "gender_male");
  c.metadata.skin_type = meta_get<int>(meta, "skin_type");
  c.metadata.movement = clamp01(meta_get<double>(meta, "movement"));
  c.metadata.illuminance_var = clamp01(meta_get<double>(meta, "illuminance_var"));
  c.metadata.camera_stationary = meta_get<bool>(meta, "camera_stationary");

  auto warns = validate_chunk(c);
  if (warnings) {
    warnings->insert(warnings->end(), warns.begin(), warns.end());
  }
  return c;
}

}  // namespace rppg
