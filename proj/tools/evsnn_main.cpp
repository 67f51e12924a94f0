// Copyright 2026 The evsnn authors
// SPDX-License-Identifier: Apache-2.0

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "evsnn/config.hpp"
#include "evsnn/detect.hpp"
#include "evsnn/errors.hpp"
#include "evsnn/event_io.hpp"
#include "evsnn/frame_store.hpp"
#include "evsnn/network.hpp"
#include "evsnn/parallel.hpp"
#include "evsnn/sim.hpp"
#include "evsnn/stdp.hpp"
#include "evsnn/synthetic.hpp"
#include "evsnn/window.hpp"

namespace {

using namespace evsnn;

std::string format_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

void require_file(const std::string& path, const char* what) {
  if (!std::filesystem::is_regular_file(path)) {
    throw ConfigError(std::string(what) + " not found: " + path);
  }
}

void require_dir(const std::string& path, const char* what) {
  if (!std::filesystem::is_directory(path)) {
    throw ConfigError(std::string(what) + " not found: " + path);
  }
}

struct GlobalOpts {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int jobs = 0;
  std::string format = "csv";
};

RunConfig make_config(const GlobalOpts& g) {
  if (!g.config_path.empty()) require_file(g.config_path, "config file");
  RunConfig cfg = load_config(g.config_path);
  if (g.seed_given) {
    cfg.seed = g.seed;
    cfg.synthetic.seed = g.seed;
    cfg.validate();
  }
  return cfg;
}

/// Frames flowing through a pipeline must match the configured sensor.
/// The embedded config hash is a provenance stamp, not a gate; geometry is
/// what breaks a run.
void require_geometry(const SensorGeometry& have, const SensorGeometry& want,
                      const char* what) {
  if (!(have == want)) {
    throw ConfigError(std::string(what) + " geometry " + std::to_string(have.width) +
                      "x" + std::to_string(have.height) + " differs from configured " +
                      std::to_string(want.width) + "x" + std::to_string(want.height));
  }
}

/// Slices the event stream into one frame per enumerated window. The window
/// grid spans [first event, last event]; an empty stream yields no frames.
FrameCorpus integrate_stream(const EventStream& stream, const RunConfig& cfg) {
  FrameCorpus corpus;
  corpus.geometry = stream.geometry;
  corpus.config_hash = config_hash(cfg);
  if (!stream.events.empty()) {
    const std::uint64_t t_min = stream.events.front().t;
    const std::uint64_t t_max = stream.events.back().t + 1;
    for (const Window& w : enumerate_windows(t_min, t_max, cfg.windows)) {
      corpus.frames.push_back(
          integrate_frame(stream.events, stream.geometry, w.start, w.length));
    }
  }
  return corpus;
}

/// Accepts either a corpus directory or an event file; event files are
/// integrated on the fly with the run's window schedule.
FrameCorpus load_input_corpus(const std::string& path, const RunConfig& cfg) {
  if (std::filesystem::is_directory(path)) return read_corpus(path);
  require_file(path, "input");
  EventStream stream = read_event_file(path);
  require_geometry(stream.geometry, cfg.geometry, "event stream");
  return integrate_stream(stream, cfg);
}

int cmd_simulate(const GlobalOpts& g, const std::string& frames_dir,
                 const std::string& out_path) {
  RunConfig cfg = make_config(g);
  require_dir(frames_dir, "frames directory");
  require_file((std::filesystem::path(frames_dir) / "frames.txt").string(), "manifest");

  std::vector<IntensityFrame> frames = load_frame_sequence(frames_dir, cfg.sim);
  std::vector<Event> events = simulate_events(frames, cfg.sim);
  events = sparsify_edges(events, frames, cfg.sim);

  EventStream stream{cfg.sim.target_geometry, std::move(events)};
  EventFormat fmt = g.format == "bin" ? EventFormat::kBin : EventFormat::kCsv;
  write_event_file(out_path, stream, fmt);

  const std::uint64_t duration =
      stream.events.empty() ? 0 : stream.events.back().t - stream.events.front().t;
  std::cout << stream.events.size() << " events over " << duration << " us -> "
            << out_path << "\n";
  return 0;
}

int cmd_integrate(const GlobalOpts& g, const std::string& event_path,
                  const std::string& out_dir) {
  RunConfig cfg = make_config(g);
  require_file(event_path, "event file");
  EventStream stream = read_event_file(event_path);
  require_geometry(stream.geometry, cfg.geometry, "event stream");
  FrameCorpus corpus = integrate_stream(stream, cfg);
  write_corpus(out_dir, corpus);
  std::cout << corpus.frames.size() << " frames from " << stream.events.size()
            << " events -> " << out_dir << "\n";
  return 0;
}

int cmd_gen_synthetic(const GlobalOpts& g, int uav, int distractors,
                      const std::string& out_dir) {
  RunConfig cfg = make_config(g);
  if (uav >= 0) cfg.synthetic.uav_frames = uav;
  if (distractors >= 0) cfg.synthetic.distractor_frames = distractors;

  std::vector<LabeledFrame> labeled = generate_synthetic_corpus(cfg.synthetic);
  FrameCorpus corpus;
  corpus.geometry = cfg.synthetic.geometry;
  corpus.config_hash = config_hash(cfg);
  for (const LabeledFrame& lf : labeled) {
    corpus.frames.push_back(lf.frame);
    corpus.labels.push_back(lf.uav_present ? 1 : 0);
  }
  write_corpus(out_dir, corpus);
  std::cout << cfg.synthetic.uav_frames << " uav + " << cfg.synthetic.distractor_frames
            << " distractor frames -> " << out_dir << "\n";
  return 0;
}

int cmd_train(const GlobalOpts& g, const std::string& corpus_dir,
              const std::string& out_weights, const std::string& out_log,
              bool train_first_conv) {
  RunConfig cfg = make_config(g);
  require_dir(corpus_dir, "corpus");
  FrameCorpus corpus = read_corpus(corpus_dir);
  if (corpus.frames.empty()) throw ValidationError("corpus " + corpus_dir + " is empty");
  require_geometry(corpus.geometry, cfg.geometry, "corpus");

  Network net = build_network(corpus.geometry, cfg.layers, cfg.seed);
  auto frame_at = [&corpus](std::uint64_t i) -> const TimestampFrame& {
    return corpus.frames[static_cast<std::size_t>(i)];
  };

  // Training is strictly sequential regardless of --jobs. The first conv
  // layer ships as a fixed Gabor bank and only trains on request.
  std::string log_text;
  std::uint64_t total_presentations = 0;
  std::uint64_t total_winners = 0;
  int conv_ordinal = 0;
  for (std::size_t li = 0; li < net.layers.size(); ++li) {
    if (net.layers[li].config.kind != LayerKind::kConv) continue;
    ++conv_ordinal;
    if (conv_ordinal == 1 && !train_first_conv) continue;
    const std::uint64_t budget = cfg.schedule.budget_for_conv(conv_ordinal);
    TrainLog log = train_layer(net, static_cast<int>(li), frame_at,
                               corpus.frames.size(), cfg.stdp, budget, cfg.pent);
    log_text += format_train_log(log);
    total_presentations += log.presentations;
    for (const TrainLogEntry& e : log.entries) {
      total_winners += static_cast<std::uint64_t>(e.winners);
    }
    std::cout << "layer " << li << ": " << log.presentations << " presentations, C="
              << format_double(log.final_convergence)
              << (log.converged ? ", converged" : "") << "\n";
  }

  write_network_file(out_weights, net, config_hash(cfg));
  const std::string log_path = out_log.empty() ? out_weights + ".log" : out_log;
  std::ofstream log_file(log_path, std::ios::binary);
  if (!log_file) throw IoError("cannot open " + log_path + " for writing");
  log_file << log_text;
  std::cout << "weights -> " << out_weights << ", log -> " << log_path << "\n";

  if (total_presentations > 0 && total_winners == 0) {
    std::cerr << "warning: no winner spikes in " << total_presentations
              << " presentations; weights left at initialization\n";
  }
  return 0;
}

int cmd_detect(const GlobalOpts& g, const std::string& input_path,
               const std::string& weights_path, bool pent_on, bool use_labels) {
  RunConfig cfg = make_config(g);
  require_file(weights_path, "weight file");
  Network net = read_network_file(weights_path);

  FrameCorpus corpus = load_input_corpus(input_path, cfg);
  if (corpus.frames.empty()) throw ValidationError("no frames to detect on");
  require_geometry(corpus.geometry, cfg.geometry, "corpus");
  bind_geometry(net, corpus.geometry);

  PentState pent = cfg.pent;
  pent.enabled = pent_on;

  std::string report = "# config," + config_hash(cfg) + "\n";
  if (use_labels) {
    if (!corpus.labeled()) {
      throw ValidationError("corpus " + input_path + " carries no labels");
    }
    std::vector<LabeledFrame> labeled(corpus.frames.size());
    for (std::size_t i = 0; i < corpus.frames.size(); ++i) {
      labeled[i] = LabeledFrame{corpus.frames[i], corpus.labels[i] == 1};
    }
    ConfusionMatrix cm = evaluate(net, labeled, pent, g.jobs);
    report += "tp,fn,fp,tn,accuracy\n";
    report += std::to_string(cm.tp) + ',' + std::to_string(cm.fn) + ',' +
              std::to_string(cm.fp) + ',' + std::to_string(cm.tn) + ',' +
              format_double(cm.accuracy()) + "\n";
  } else {
    std::vector<Detection> detections(corpus.frames.size());
    parallel_for(corpus.frames.size(), g.jobs, [&](std::size_t i) {
      auto spikes = forward(corpus.frames[i], net, pent);
      detections[i] = detect(spikes.back());
    });
    for (std::size_t i = 0; i < detections.size(); ++i) {
      report += std::to_string(i) + ',' + (detections[i].present ? '1' : '0') + ',' +
                std::to_string(detections[i].spike_count) + "\n";
    }
  }
  std::cout << report;
  return 0;
}

int cmd_noise_sweep(const GlobalOpts& g, const std::string& corpus_dir,
                    const std::string& weights_path,
                    const std::vector<double>& fraction_override, bool pent_on) {
  RunConfig cfg = make_config(g);
  require_dir(corpus_dir, "corpus");
  require_file(weights_path, "weight file");
  Network net = read_network_file(weights_path);

  FrameCorpus corpus = read_corpus(corpus_dir);
  if (corpus.frames.empty()) throw ValidationError("corpus " + corpus_dir + " is empty");
  if (!corpus.labeled()) throw ValidationError("corpus " + corpus_dir + " carries no labels");
  require_geometry(corpus.geometry, cfg.geometry, "corpus");
  bind_geometry(net, corpus.geometry);

  std::vector<LabeledFrame> labeled(corpus.frames.size());
  for (std::size_t i = 0; i < corpus.frames.size(); ++i) {
    labeled[i] = LabeledFrame{corpus.frames[i], corpus.labels[i] == 1};
  }
  PentState pent = cfg.pent;
  pent.enabled = pent_on;
  const std::vector<double>& fractions =
      fraction_override.empty() ? cfg.noise_fractions : fraction_override;
  for (double f : fractions) {
    if (f < 0.0 || f > 1.0) {
      throw ValidationError("noise fraction must lie in [0, 1]");
    }
  }

  std::vector<SweepRow> rows =
      noise_sweep(net, labeled, fractions, pent, cfg.seed, g.jobs);
  std::cout << "# config," << config_hash(cfg) << "\n" << format_sweep_csv(rows);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"UAV detection on event-camera streams with a spiking conv network"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOpts g;
  app.add_option("--config", g.config_path, "run config file (defaults when omitted)");
  auto* seed_opt = app.add_option("--seed", g.seed, "override the config seed");
  app.add_option("--jobs", g.jobs,
                 "worker threads for inference, 0 = all cores; training runs on one");
  app.add_option("--format", g.format, "event file encoding for simulate")
      ->check(CLI::IsMember({"csv", "bin"}));

  std::string frames_dir, event_path, corpus_dir, input_path;
  std::string out_path, weights_path, log_path;
  int uav = -1, distractors = -1;
  bool pent_on = true, use_labels = false, train_first_conv = false;
  std::vector<double> fractions;

  CLI::App* simulate = app.add_subcommand(
      "simulate", "convert a video frame sequence into a DVS event stream");
  simulate->add_option("frames_dir", frames_dir, "directory with frames.txt manifest")
      ->required();
  simulate->add_option("-o,--out", out_path, "output event file")->required();

  CLI::App* integrate = app.add_subcommand(
      "integrate", "slice an event stream into timestamp frames");
  integrate->add_option("events", event_path, "input event file")->required();
  integrate->add_option("-o,--out", out_path, "output corpus directory")->required();

  CLI::App* gen = app.add_subcommand(
      "gen-synthetic", "generate a labeled corpus of UAV and distractor frames");
  gen->add_option("-o,--out", out_path, "output corpus directory")->required();
  gen->add_option("--uav", uav, "UAV frame count (config default when omitted)");
  gen->add_option("--distractors", distractors,
                  "distractor frame count (config default when omitted)");

  CLI::App* train = app.add_subcommand(
      "train", "train conv layers with STDP and write a weight file");
  train->add_option("corpus", corpus_dir, "training corpus directory")->required();
  train->add_option("-o,--out", weights_path, "output weight file")->required();
  train->add_option("--log", log_path, "training log path (default: <out>.log)");
  train->add_flag("--layer1", train_first_conv,
                  "also train the first conv layer instead of keeping the Gabor bank");

  CLI::App* detect_cmd = app.add_subcommand(
      "detect", "run detection over a corpus or event file");
  detect_cmd->add_option("input", input_path, "corpus directory or event file")
      ->required();
  detect_cmd->add_option("-w,--weights", weights_path, "weight file")->required();
  detect_cmd->add_flag("--pent,!--no-pent", pent_on,
                       "pre-emptive neuron thresholding (default on)");
  detect_cmd->add_flag("--labels", use_labels,
                       "score against corpus labels and print a confusion report");

  CLI::App* sweep = app.add_subcommand(
      "noise-sweep", "accuracy and SNR across additive noise fractions");
  sweep->add_option("corpus", corpus_dir, "labeled corpus directory")->required();
  sweep->add_option("-w,--weights", weights_path, "weight file")->required();
  sweep->add_option("--fractions", fractions,
                    "noise pixel fractions to sweep (config default when omitted)")
      ->delimiter(',');
  sweep->add_flag("--pent,!--no-pent", pent_on,
                  "pre-emptive neuron thresholding (default on)");

  try {
    app.parse(argc, argv);
    g.seed_given = seed_opt->count() > 0;
    if (simulate->parsed()) return cmd_simulate(g, frames_dir, out_path);
    if (integrate->parsed()) return cmd_integrate(g, event_path, out_path);
    if (gen->parsed()) return cmd_gen_synthetic(g, uav, distractors, out_path);
    if (train->parsed()) {
      return cmd_train(g, corpus_dir, weights_path, log_path, train_first_conv);
    }
    if (detect_cmd->parsed()) {
      return cmd_detect(g, input_path, weights_path, pent_on, use_labels);
    }
    if (sweep->parsed()) return cmd_noise_sweep(g, corpus_dir, weights_path, fractions, pent_on);
    return 2;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
