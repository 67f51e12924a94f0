// Copyright 2026 The evsnn authors
// SPDX-License-Identifier: Apache-2.0

// Subprocess tests for the evsnn binary. EVSNN_CLI_PATH is injected by the
// build; every case runs the real executable and inspects exit code, captured
// streams, and the artifacts it writes.

#include <sys/wait.h>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <span>
#include <vector>

#include "doctest.h"
#include "evsnn/config.hpp"
#include "evsnn/event_io.hpp"
#include "evsnn/frame_store.hpp"
#include "evsnn/image.hpp"
#include "evsnn/network.hpp"

using namespace evsnn;

namespace {

namespace fs = std::filesystem;

struct TmpDir {
  fs::path path;
  explicit TmpDir(std::string name) : path(std::move(name)) {
    fs::create_directories(path);
  }
  ~TmpDir() { fs::remove_all(path); }
};

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spit(const fs::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary);
  out << text;
}

RunResult run_cli(const std::string& args, const fs::path& scratch) {
  fs::path out_file = scratch / "cli_stdout.txt";
  fs::path err_file = scratch / "cli_stderr.txt";
  std::string cmd = std::string(EVSNN_CLI_PATH) + " " + args + " >" +
                    out_file.string() + " 2>" + err_file.string();
  int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_file);
  r.err = slurp(err_file);
  return r;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

/// Uniform gray frame for static-scene manifests.
IntensityFrame flat_frame(double value) {
  IntensityFrame f;
  f.width = 240;
  f.height = 180;
  f.values.assign(static_cast<std::size_t>(f.width) * f.height,
                  static_cast<float>(value));
  return f;
}

/// Dark left half, bright right half, with the boundary at `edge_col`.
IntensityFrame edge_frame(int edge_col) {
  IntensityFrame f = flat_frame(0.2);
  for (int y = 0; y < f.height; ++y) {
    for (int x = edge_col; x < f.width; ++x) f.at(x, y) = 0.8f;
  }
  return f;
}

/// Untrained default network written as a CLI-compatible weight file.
fs::path write_untrained_weights(const TmpDir& dir) {
  fs::path path = dir.path / "weights.snnw";
  Network net = build_network(SensorGeometry{240, 180}, default_layer_configs(), 1);
  write_network_file(path.string(), net, config_hash(RunConfig{}));
  return path;
}

/// Four spread-out events spanning 200 ms on distinct pixels.
EventStream four_event_stream() {
  EventStream stream;
  stream.geometry = SensorGeometry{240, 180};
  stream.events = {{10, 10, 0, Polarity::kOn},
                   {20, 20, 60000, Polarity::kOff},
                   {30, 30, 120000, Polarity::kOn},
                   {40, 40, 199999, Polarity::kOn}};
  return stream;
}

constexpr const char* kSingleWindowConfig =
    "[windows]\nlengths_us = 100000\noverlaps = 0.5\n";

}  // namespace

TEST_CASE("help prints usage and malformed invocations exit 2") {
  TmpDir dir("test_cli_tmp_usage");
  RunResult help = run_cli("--help", dir.path);
  CHECK(help.exit_code == 0);
  CHECK(help.out.find("Subcommands") != std::string::npos);

  CHECK(run_cli("", dir.path).exit_code == 2);
  CHECK(run_cli("bogus-subcommand", dir.path).exit_code == 2);
  CHECK(run_cli("detect", dir.path).exit_code == 2);
  CHECK(run_cli("--format xml simulate x -o y", dir.path).exit_code == 2);
}

TEST_CASE("a missing config file exits 2") {
  TmpDir dir("test_cli_tmp_cfg");
  RunResult r = run_cli("--config " + (dir.path / "absent.ini").string() +
                            " gen-synthetic -o " + (dir.path / "c").string(),
                        dir.path);
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("config file not found") != std::string::npos);
}

TEST_CASE("simulate emits zero events for a static scene in both encodings") {
  TmpDir dir("test_cli_tmp_sim_static");
  IntensityFrame f = flat_frame(0.5);
  write_intensity_pgm((dir.path / "f0.pgm").string(), f);
  write_intensity_pgm((dir.path / "f1.pgm").string(), f);
  spit(dir.path / "frames.txt", "f0.pgm 0\nf1.pgm 100000\n");

  fs::path csv = dir.path / "out.csv";
  RunResult r = run_cli("simulate " + dir.path.string() + " -o " + csv.string(),
                        dir.path);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("0 events over 0 us") == 0);
  EventStream back = read_event_file(csv.string());
  CHECK(back.events.empty());
  CHECK(back.geometry == SensorGeometry{240, 180});

  fs::path bin = dir.path / "out.bin";
  r = run_cli("--format bin simulate " + dir.path.string() + " -o " + bin.string(),
              dir.path);
  CHECK(r.exit_code == 0);
  std::string bin_bytes = slurp(bin);
  CHECK(detect_event_format(std::as_bytes(std::span(bin_bytes))) == EventFormat::kBin);
  CHECK(read_event_file(bin.string()).events.empty());
}

TEST_CASE("simulate captures a moving edge identically in csv and bin") {
  TmpDir dir("test_cli_tmp_sim_edge");
  write_intensity_pgm((dir.path / "f0.pgm").string(), edge_frame(100));
  write_intensity_pgm((dir.path / "f1.pgm").string(), edge_frame(110));
  spit(dir.path / "frames.txt", "f0.pgm 0\nf1.pgm 50000\n");

  fs::path csv = dir.path / "out.csv";
  fs::path bin = dir.path / "out.bin";
  RunResult rc = run_cli("simulate " + dir.path.string() + " -o " + csv.string(),
                         dir.path);
  RunResult rb = run_cli("--format bin simulate " + dir.path.string() + " -o " +
                             bin.string(),
                         dir.path);
  REQUIRE(rc.exit_code == 0);
  REQUIRE(rb.exit_code == 0);

  EventStream from_csv = read_event_file(csv.string());
  EventStream from_bin = read_event_file(bin.string());
  REQUIRE_FALSE(from_csv.events.empty());
  CHECK(from_csv.events == from_bin.events);
  CHECK(rc.out.find(std::to_string(from_csv.events.size()) + " events") == 0);
}

TEST_CASE("simulate without a manifest exits 2") {
  TmpDir dir("test_cli_tmp_sim_missing");
  fs::create_directories(dir.path / "empty");
  RunResult r = run_cli("simulate " + (dir.path / "empty").string() + " -o " +
                            (dir.path / "out.csv").string(),
                        dir.path);
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("manifest not found") != std::string::npos);

  r = run_cli("simulate " + (dir.path / "absent").string() + " -o " +
                  (dir.path / "out.csv").string(),
              dir.path);
  CHECK(r.exit_code == 2);
}

TEST_CASE("integrate slices a stream into the configured window grid") {
  TmpDir dir("test_cli_tmp_integrate");
  spit(dir.path / "cfg.ini", kSingleWindowConfig);
  fs::path events = dir.path / "stream.csv";
  write_event_file(events.string(), four_event_stream(), EventFormat::kCsv);

  fs::path out = dir.path / "corpus";
  RunResult r = run_cli("--config " + (dir.path / "cfg.ini").string() +
                            " integrate " + events.string() + " -o " + out.string(),
                        dir.path);
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("4 frames from 4 events") == 0);

  FrameCorpus corpus = read_corpus(out.string());
  REQUIRE(corpus.frames.size() == 4);
  CHECK_FALSE(corpus.labeled());
  CHECK(corpus.config_hash ==
        config_hash(load_config((dir.path / "cfg.ini").string())));
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(corpus.frames[i].window_start() == i * 50000);
    CHECK(corpus.frames[i].window_length() == 100000);
  }
  CHECK(corpus.frames[0].at(10, 10) == 0.0f);
  CHECK(corpus.frames[0].at(20, 20) == 0.6f);
  CHECK(corpus.frames[1].at(20, 20) == 0.1f);
  CHECK(corpus.frames[1].at(30, 30) == 0.7f);
  CHECK_FALSE(corpus.frames[3].has(10, 10));
  CHECK(corpus.frames[3].has(40, 40));
}

TEST_CASE("integrate of an empty stream writes an empty corpus detect refuses") {
  TmpDir dir("test_cli_tmp_empty");
  fs::path events = dir.path / "empty.csv";
  write_event_file(events.string(), EventStream{SensorGeometry{240, 180}, {}},
                   EventFormat::kCsv);

  fs::path out = dir.path / "corpus";
  RunResult r = run_cli("integrate " + events.string() + " -o " + out.string(),
                        dir.path);
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("0 frames from 0 events") == 0);
  CHECK(read_corpus(out.string()).frames.empty());

  fs::path weights = write_untrained_weights(dir);
  r = run_cli("detect " + out.string() + " -w " + weights.string(), dir.path);
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("no frames") != std::string::npos);
}

TEST_CASE("integrate refuses corrupt or absent event files") {
  TmpDir dir("test_cli_tmp_corrupt");
  spit(dir.path / "bad.csv", "evtcsv,1,240,180\n5,5\n");
  RunResult r = run_cli("integrate " + (dir.path / "bad.csv").string() + " -o " +
                            (dir.path / "c").string(),
                        dir.path);
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("error:") == 0);

  r = run_cli("integrate " + (dir.path / "absent.csv").string() + " -o " +
                  (dir.path / "c").string(),
              dir.path);
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("event file not found") != std::string::npos);
}

TEST_CASE("integrate refuses a stream whose geometry differs from the config") {
  TmpDir dir("test_cli_tmp_geom_stream");
  EventStream small{SensorGeometry{120, 90}, {{5, 5, 1000, Polarity::kOn}}};
  fs::path events = dir.path / "small.csv";
  write_event_file(events.string(), small, EventFormat::kCsv);
  RunResult r = run_cli("integrate " + events.string() + " -o " +
                            (dir.path / "c").string(),
                        dir.path);
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("geometry") != std::string::npos);
}

TEST_CASE("gen-synthetic reproduces byte-identical corpora and stamps labels") {
  TmpDir dir("test_cli_tmp_gen");
  std::string args = "gen-synthetic --uav 3 --distractors 2 -o ";
  RunResult ra = run_cli(args + (dir.path / "a").string(), dir.path);
  RunResult rb = run_cli(args + (dir.path / "b").string(), dir.path);
  REQUIRE(ra.exit_code == 0);
  REQUIRE(rb.exit_code == 0);
  CHECK(ra.out.find("3 uav + 2 distractor frames") == 0);

  for (const char* name : {"index.txt", "frames.bin", "labels.txt"}) {
    CHECK(slurp(dir.path / "a" / name) == slurp(dir.path / "b" / name));
  }
  CHECK(slurp(dir.path / "a" / "labels.txt") == "0,1\n1,0\n2,1\n3,0\n4,1\n");

  RunConfig expected;
  expected.synthetic.uav_frames = 3;
  expected.synthetic.distractor_frames = 2;
  FrameCorpus corpus = read_corpus((dir.path / "a").string());
  CHECK(corpus.config_hash == config_hash(expected));

  RunResult rc = run_cli("--seed 7 " + args + (dir.path / "c").string(), dir.path);
  REQUIRE(rc.exit_code == 0);
  CHECK(slurp(dir.path / "a" / "frames.bin") != slurp(dir.path / "c" / "frames.bin"));
}

TEST_CASE("train writes byte-identical weights and logs across runs") {
  TmpDir dir("test_cli_tmp_train");
  spit(dir.path / "tiny.ini",
       "[schedule]\nframes_layer1 = 40\nframes_layer2 = 40\nframes_layer3 = 40\n");
  std::string cfg = "--config " + (dir.path / "tiny.ini").string() + " ";
  RunResult gen = run_cli(cfg + "gen-synthetic --uav 4 --distractors 4 -o " +
                              (dir.path / "corpus").string(),
                          dir.path);
  REQUIRE(gen.exit_code == 0);

  std::string train = cfg + "train " + (dir.path / "corpus").string() + " -o ";
  RunResult r1 = run_cli(train + (dir.path / "w1.snnw").string(), dir.path);
  RunResult r2 = run_cli(train + (dir.path / "w2.snnw").string(), dir.path);
  REQUIRE(r1.exit_code == 0);
  REQUIRE(r2.exit_code == 0);
  CHECK(r1.out.substr(0, r1.out.find("weights ->")) ==
        r2.out.substr(0, r2.out.find("weights ->")));
  CHECK(r1.out.find("layer 2: 40 presentations") != std::string::npos);
  CHECK(r1.out.find("layer 4: 40 presentations") != std::string::npos);
  CHECK(r1.out.find("layer 0:") == std::string::npos);

  std::string w1 = slurp(dir.path / "w1.snnw");
  CHECK(w1 == slurp(dir.path / "w2.snnw"));
  CHECK(w1.find("# config,") != std::string::npos);
  CHECK(slurp(dir.path / "w1.snnw.log") == slurp(dir.path / "w2.snnw.log"));
  CHECK(parse_network(w1).layers.size() == 5);

  RunResult r3 = run_cli(train + (dir.path / "w3.snnw").string() + " --layer1",
                         dir.path);
  REQUIRE(r3.exit_code == 0);
  CHECK(r3.out.find("layer 0: 40 presentations") != std::string::npos);
}

TEST_CASE("detect reports stamp the config hash in both modes") {
  TmpDir dir("test_cli_tmp_detect");
  RunResult gen = run_cli("gen-synthetic --uav 2 --distractors 2 -o " +
                              (dir.path / "corpus").string(),
                          dir.path);
  REQUIRE(gen.exit_code == 0);
  fs::path weights = write_untrained_weights(dir);

  RunResult scored = run_cli("detect " + (dir.path / "corpus").string() + " -w " +
                                 weights.string() + " --labels",
                             dir.path);
  REQUIRE(scored.exit_code == 0);
  auto lines = lines_of(scored.out);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "# config," + config_hash(RunConfig{}));
  CHECK(lines[1] == "tp,fn,fp,tn,accuracy");
  unsigned tp = 0, fn = 0, fp = 0, tn = 0;
  REQUIRE(std::sscanf(lines[2].c_str(), "%u,%u,%u,%u", &tp, &fn, &fp, &tn) == 4);
  CHECK(tp + fn + fp + tn == 4);

  RunResult per_frame = run_cli("detect " + (dir.path / "corpus").string() + " -w " +
                                    weights.string(),
                                dir.path);
  REQUIRE(per_frame.exit_code == 0);
  lines = lines_of(per_frame.out);
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == "# config," + config_hash(RunConfig{}));
  for (std::size_t i = 1; i < lines.size(); ++i) {
    unsigned idx = 0, present = 0, spikes = 0;
    REQUIRE(std::sscanf(lines[i].c_str(), "%u,%u,%u", &idx, &present, &spikes) == 3);
    CHECK(idx == i - 1);
    CHECK(present <= 1);
  }
}

TEST_CASE("detect integrates an event file input on the fly") {
  TmpDir dir("test_cli_tmp_detect_stream");
  spit(dir.path / "cfg.ini", kSingleWindowConfig);
  fs::path events = dir.path / "stream.csv";
  write_event_file(events.string(), four_event_stream(), EventFormat::kCsv);
  fs::path weights = write_untrained_weights(dir);

  RunResult r = run_cli("--config " + (dir.path / "cfg.ini").string() + " detect " +
                            events.string() + " -w " + weights.string(),
                        dir.path);
  REQUIRE(r.exit_code == 0);
  auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 5);
  CHECK(lines[0].find("# config,") == 0);
}

TEST_CASE("detect refuses a corpus whose geometry differs from the config") {
  TmpDir dir("test_cli_tmp_geom_corpus");
  spit(dir.path / "small.ini", "[sensor]\nwidth = 120\nheight = 90\n");
  RunResult gen = run_cli("--config " + (dir.path / "small.ini").string() +
                              " gen-synthetic --uav 1 --distractors 1 -o " +
                              (dir.path / "small").string(),
                          dir.path);
  REQUIRE(gen.exit_code == 0);

  fs::path weights = write_untrained_weights(dir);
  RunResult r = run_cli("detect " + (dir.path / "small").string() + " -w " +
                            weights.string() + " --labels",
                        dir.path);
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("geometry 120x90 differs from configured 240x180") !=
        std::string::npos);
}

TEST_CASE("noise-sweep emits the documented csv and validates fractions") {
  TmpDir dir("test_cli_tmp_sweep");
  RunResult gen = run_cli("gen-synthetic --uav 2 --distractors 2 -o " +
                              (dir.path / "corpus").string(),
                          dir.path);
  REQUIRE(gen.exit_code == 0);
  fs::path weights = write_untrained_weights(dir);
  std::string base = "noise-sweep " + (dir.path / "corpus").string() + " -w " +
                     weights.string() + " --no-pent --fractions ";

  RunResult r = run_cli(base + "0,0.01", dir.path);
  REQUIRE(r.exit_code == 0);
  auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "# config," + config_hash(RunConfig{}));
  CHECK(lines[1] == "fraction,mean_snr_db,tp,fn,fp,tn,accuracy");
  CHECK(lines[2].find("0,") == 0);
  CHECK(lines[3].find("0.01,") == 0);

  RunResult bad = run_cli(base + "1.5", dir.path);
  CHECK(bad.exit_code == 2);
  CHECK(bad.err.find("noise fraction") != std::string::npos);

  RunResult descending = run_cli(base + "0.02,0.01", dir.path);
  CHECK(descending.exit_code == 2);
  CHECK(descending.err.find("ascending") != std::string::npos);
}
