#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "helpers.hpp"
#include "rppg/chunk_io.hpp"
#include "rppg/errors.hpp"

using namespace rppg;
namespace fs = std::filesystem;

namespace {

bool chunks_equal(const VideoChunk& a, const VideoChunk& b) {
  if (a.width != b.width || a.height != b.height || a.fps != b.fps) return false;
  if (a.pixels != b.pixels) return false;
  if (a.face_boxes != b.face_boxes) return false;
  if (a.landmarks.size() != b.landmarks.size()) return false;
  for (std::size_t t = 0; t < a.landmarks.size(); ++t) {
    if (a.landmarks[t].rows() != b.landmarks[t].rows()) return false;
    if ((a.landmarks[t].array() != b.landmarks[t].array()).any()) return false;
  }
  if ((a.labels.pulse_wave.samples != b.labels.pulse_wave.samples).any()) return false;
  if ((a.labels.resp_wave.samples != b.labels.resp_wave.samples).any()) return false;
  if (a.labels.pulse_wave.fs != b.labels.pulse_wave.fs) return false;
  if (a.labels.resp_wave.fs != b.labels.resp_wave.fs) return false;
  if (a.labels.hr_bpm != b.labels.hr_bpm || a.labels.rr_bpm != b.labels.rr_bpm) return false;
  if (a.metadata.age != b.metadata.age) return false;
  if (a.metadata.gender_male != b.metadata.gender_male) return false;
  if (a.metadata.skin_type != b.metadata.skin_type) return false;
  if (a.metadata.movement != b.metadata.movement) return false;
  if (a.metadata.illuminance_var != b.metadata.illuminance_var) return false;
  if (a.metadata.camera_stationary != b.metadata.camera_stationary) return false;
  return true;
}

}  // namespace

TEST_CASE("well-formed 10 s 30 fps 64x64 chunk loads with 300 frames") {
  testutil::TempDir tmp("chunkio_basic");
  VideoChunk c = testutil::uniform_chunk(64, 64, 300, 30.0, 120, 110, 100);
  save_chunk(c, tmp.path() / "chunk");

  std::vector<std::string> warnings;
  const VideoChunk loaded = load_chunk(tmp.path() / "chunk", &warnings);
  CHECK(loaded.frame_count() == 300);
  CHECK(loaded.duration_s() == doctest::Approx(10.0));
  CHECK(warnings.empty());
}

TEST_CASE("truncated frames.rgb24 raises CorruptHeader") {
  testutil::TempDir tmp("chunkio_trunc");
  VideoChunk c = testutil::uniform_chunk(8, 8, 200, 30.0, 50, 60, 70);
  save_chunk(c, tmp.path() / "chunk");

  const fs::path frames = tmp.path() / "chunk" / "frames.rgb24";
  const auto size = fs::file_size(frames);
  fs::resize_file(frames, size - 1);
  CHECK_THROWS_AS(load_chunk(tmp.path() / "chunk"), CorruptHeader);
}

TEST_CASE("missing files raise MissingFile") {
  testutil::TempDir tmp("chunkio_missing");
  VideoChunk c = testutil::uniform_chunk(8, 8, 200, 30.0, 50, 60, 70);
  save_chunk(c, tmp.path() / "chunk");
  fs::remove(tmp.path() / "chunk" / "labels.csv");
  CHECK_THROWS_AS(load_chunk(tmp.path() / "chunk"), MissingFile);
  CHECK_THROWS_AS(load_chunk(tmp.path() / "nothing_here"), MissingFile);
}

TEST_CASE("round trip reproduces every field exactly") {
  std::mt19937_64 rng(20240817);
  for (int i = 0; i < 15; ++i) {
    testutil::TempDir tmp("chunkio_roundtrip");
    const VideoChunk original = testutil::random_chunk(rng);
    save_chunk(original, tmp.path() / "chunk");
    const VideoChunk loaded = load_chunk(tmp.path() / "chunk");
    CHECK(chunks_equal(original, loaded));

    // Re-saving the loaded chunk reproduces every byte.
    save_chunk(loaded, tmp.path() / "chunk2");
    for (const char* name : {"meta.json", "frames.rgb24", "labels.csv"}) {
      CHECK(testutil::read_file_bytes(tmp.path() / "chunk" / name) ==
            testutil::read_file_bytes(tmp.path() / "chunk2" / name));
    }
    if (original.has_landmarks()) {
      CHECK(testutil::read_file_bytes(tmp.path() / "chunk" / "landmarks.csv") ==
            testutil::read_file_bytes(tmp.path() / "chunk2" / "landmarks.csv"));
    }
  }
}

TEST_CASE("save rejects invalid chunks before writing") {
  testutil::TempDir tmp("chunkio_invalid");

  SUBCASE("empty frame list") {
    VideoChunk c = testutil::uniform_chunk(8, 8, 200, 30.0, 1, 2, 3);
    c.pixels.clear();
    CHECK_THROWS_AS(save_chunk(c, tmp.path() / "empty"), InvariantViolation);
    CHECK(!fs::exists(tmp.path() / "empty"));
  }

  SUBCASE("single frame") {
    VideoChunk c = testutil::uniform_chunk(8, 8, 200, 30.0, 1, 2, 3);
    c.pixels.resize(static_cast<std::size_t>(8) * 8 * 3);
    c.face_boxes.resize(1);
    c.labels.pulse_wave.samples.conservativeResize(1);
    c.labels.resp_wave.samples.conservativeResize(1);
    CHECK_THROWS_AS(save_chunk(c, tmp.path() / "one"), InvariantViolation);
    CHECK(!fs::exists(tmp.path() / "one"));
  }
}

TEST_CASE("validation rejects out-of-range labels and metadata") {
  VideoChunk c = testutil::uniform_chunk(8, 8, 200, 30.0, 1, 2, 3);

  SUBCASE("hr below 35") {
    c.labels.hr_bpm = 20.0;
    CHECK_THROWS_AS(validate_chunk(c), InvariantViolation);
  }
  SUBCASE("rr above 45") {
    c.labels.rr_bpm = 50.0;
    CHECK_THROWS_AS(validate_chunk(c), InvariantViolation);
  }
  SUBCASE("skin type out of scale") {
    c.metadata.skin_type = 7;
    CHECK_THROWS_AS(validate_chunk(c), InvariantViolation);
  }
  SUBCASE("face box outside bounds") {
    c.face_boxes[3] = FaceBox{4, 4, 8, 8};
    CHECK_THROWS_AS(validate_chunk(c), InvariantViolation);
  }
  SUBCASE("landmark count varies across frames") {
    c.landmarks.assign(200, Eigen::MatrixX2d::Zero(3, 2));
    c.landmarks[10] = Eigen::MatrixX2d::Zero(4, 2);
    CHECK_THROWS_AS(validate_chunk(c), InvariantViolation);
  }
  SUBCASE("label waveform shorter than the video") {
    c.labels.pulse_wave.samples.conservativeResize(100);
    CHECK_THROWS_AS(validate_chunk(c), InvariantViolation);
  }
  SUBCASE("label waveform on a different time base") {
    c.labels.resp_wave.fs = 25.0;
    CHECK_THROWS_AS(validate_chunk(c), InvariantViolation);
  }
}

TEST_CASE("malformed labels header raises CorruptHeader") {
  testutil::TempDir tmp("chunkio_badlabels");
  VideoChunk c = testutil::uniform_chunk(8, 8, 200, 30.0, 50, 60, 70);
  save_chunk(c, tmp.path() / "chunk");
  std::ofstream(tmp.path() / "chunk" / "labels.csv") << "frame,ppg\n0,1\n";
  CHECK_THROWS_AS(load_chunk(tmp.path() / "chunk"), CorruptHeader);
}

TEST_CASE("malformed meta.json raises CorruptHeader") {
  testutil::TempDir tmp("chunkio_badmeta");
  VideoChunk c = testutil::uniform_chunk(8, 8, 200, 30.0, 50, 60, 70);
  save_chunk(c, tmp.path() / "chunk");
  std::ofstream(tmp.path() / "chunk" / "meta.json") << "{not json";
  CHECK_THROWS_AS(load_chunk(tmp.path() / "chunk"), CorruptHeader);
}

TEST_CASE("duration outside 5-20 s warns but loads") {
  testutil::TempDir tmp("chunkio_warn");
  VideoChunk c = testutil::uniform_chunk(8, 8, 90, 30.0, 9, 9, 9);  // 3 s
  save_chunk(c, tmp.path() / "chunk");
  std::vector<std::string> warnings;
  const VideoChunk loaded = load_chunk(tmp.path() / "chunk", &warnings);
  CHECK(loaded.frame_count() == 90);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("duration") != std::string::npos);
}

TEST_CASE("loader clamps movement and illuminance metadata to [0,1]") {
  testutil::TempDir tmp("chunkio_clamp");
  VideoChunk c = testutil::uniform_chunk(8, 8, 200, 30.0, 9, 9, 9);
  save_chunk(c, tmp.path() / "chunk");

  const fs::path meta = tmp.path() / "chunk" / "meta.json";
  std::string text = testutil::read_file_bytes(meta);
  const std::string needle = "\"movement\": 0.0,";
  const auto pos = text.find(needle);
  REQUIRE(pos != std::string::npos);
  text.replace(pos, needle.size(), "\"movement\": 1.5,");
  std::ofstream(meta, std::ios::binary) << text;

  const VideoChunk loaded = load_chunk(tmp.path() / "chunk");
  CHECK(loaded.metadata.movement == 1.0);
}

TEST_CASE("non-full-frame face boxes round-trip through meta.json") {
  testutil::TempDir tmp("chunkio_boxes");
  VideoChunk c = testutil::uniform_chunk(16, 12, 200, 30.0, 9, 9, 9);
  for (std::size_t t = 0; t < c.face_boxes.size(); ++t) {
    c.face_boxes[t] = FaceBox{2, 1, 10, 8};
  }
  save_chunk(c, tmp.path() / "chunk");
  const VideoChunk loaded = load_chunk(tmp.path() / "chunk");
  CHECK(loaded.face_boxes == c.face_boxes);
}
