// Copyright 2026 The evsnn authors
// SPDX-License-Identifier: Apache-2.0

// Benchmark pitting the optimized kernels against the serial reference
// implementations on a synthetic workload: event-driven conv vs the dense
// per-neuron oracle, and the parallel evaluation loop vs its serial twin.
// Outputs are compared exactly before timing starts, so every reported
// speedup is between runs that produce identical results.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "evsnn/detect.hpp"
#include "evsnn/forward.hpp"
#include "evsnn/network.hpp"
#include "evsnn/parallel.hpp"
#include "evsnn/synthetic.hpp"
#include "evsnn_ref/oracle.hpp"

namespace {

using namespace evsnn;

template <typename Fn>
double mean_ms(int reps, Fn&& fn) {
  auto start = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) fn();
  auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(stop - start).count() / reps;
}

/// One conv workload: the same spike batches pushed through both engines.
struct ConvWorkload {
  std::string name;
  std::vector<std::vector<SpikeRecord>> inputs;
  int in_width = 0;
  int in_height = 0;
  const Layer* layer = nullptr;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"evsnn kernel benchmark: optimized vs serial reference"};
  int frames = 64;
  int reps = 3;
  int jobs = 0;
  std::uint64_t seed = 1;
  app.add_option("--frames", frames, "corpus size (half UAV, half distractor)")
      ->check(CLI::PositiveNumber);
  app.add_option("--reps", reps, "timed repetitions per measurement")
      ->check(CLI::PositiveNumber);
  app.add_option("--jobs", jobs, "worker threads for the parallel side (0 = hardware)");
  app.add_option("--seed", seed, "corpus and weight seed");
  CLI11_PARSE(app, argc, argv);

  SyntheticConfig syn;
  syn.seed = seed;
  syn.uav_frames = frames / 2;
  syn.distractor_frames = frames - frames / 2;
  const std::vector<LabeledFrame> corpus = generate_synthetic_corpus(syn);
  const Network net = build_network(syn.geometry, default_layer_configs(), seed);
  PentState pent;
  pent.enabled = false;

  std::printf("workload: %d frames %dx%d (%d uav / %d distractor), seed %llu\n", frames,
              syn.geometry.width, syn.geometry.height, syn.uav_frames,
              syn.distractor_frames, static_cast<unsigned long long>(seed));
  std::printf("reps: %d, parallel jobs: %d\n\n", reps, resolve_jobs(jobs));

  // Conv workloads: layer 0 consumes raw frame spikes, the deeper conv
  // consumes each frame's first pooling output (index 2 of the forward
  // trace; index 0 is the input itself).
  std::vector<ConvWorkload> workloads(2);
  workloads[0].name = "conv1";
  workloads[0].in_width = net.input_geometry.width;
  workloads[0].in_height = net.input_geometry.height;
  workloads[0].layer = &net.layer(0);
  workloads[1].name = "conv2";
  workloads[1].in_width = net.layer(1).out_width;
  workloads[1].in_height = net.layer(1).out_height;
  workloads[1].layer = &net.layer(2);
  for (const LabeledFrame& lf : corpus) {
    workloads[0].inputs.push_back(frame_spikes(lf.frame));
    workloads[1].inputs.push_back(forward(lf.frame, net, pent)[2]);
  }

  std::printf("%-28s %12s %12s %10s\n", "kernel", "mean ms", "spikes", "speedup");
  for (const ConvWorkload& w : workloads) {
    const Layer& layer = *w.layer;
    std::uint64_t event_spikes = 0;
    std::uint64_t dense_spikes = 0;
    for (const std::vector<SpikeRecord>& in : w.inputs) {
      auto fast = conv_forward(in, w.in_width, w.in_height, layer.weights,
                               layer.config.stride, layer.config.threshold, false);
      auto slow = ref::dense_conv_forward(in, w.in_width, w.in_height, layer.weights,
                                          layer.config.stride, layer.config.threshold);
      if (fast != slow) {
        std::fprintf(stderr, "%s: event-driven and dense outputs differ\n",
                     w.name.c_str());
        return 1;
      }
      event_spikes += fast.size();
      dense_spikes += slow.size();
    }
    double fast_ms = mean_ms(reps, [&] {
      for (const std::vector<SpikeRecord>& in : w.inputs)
        conv_forward(in, w.in_width, w.in_height, layer.weights, layer.config.stride,
                     layer.config.threshold, false);
    });
    double slow_ms = mean_ms(reps, [&] {
      for (const std::vector<SpikeRecord>& in : w.inputs)
        ref::dense_conv_forward(in, w.in_width, w.in_height, layer.weights,
                                layer.config.stride, layer.config.threshold);
    });
    std::printf("%-28s %12.2f %12llu %9.1fx\n", (w.name + " event-driven").c_str(),
                fast_ms, static_cast<unsigned long long>(event_spikes),
                slow_ms / fast_ms);
    std::printf("%-28s %12.2f %12llu %10s\n", (w.name + " dense reference").c_str(),
                slow_ms, static_cast<unsigned long long>(dense_spikes), "");
  }

  ConfusionMatrix parallel_cm = evaluate(net, corpus, pent, jobs);
  ConfusionMatrix serial_cm = ref::serial_evaluate(net, corpus, pent);
  if (parallel_cm.tp != serial_cm.tp || parallel_cm.fn != serial_cm.fn ||
      parallel_cm.fp != serial_cm.fp || parallel_cm.tn != serial_cm.tn) {
    std::fprintf(stderr, "evaluate: parallel and serial confusion matrices differ\n");
    return 1;
  }
  double par_ms = mean_ms(reps, [&] { evaluate(net, corpus, pent, jobs); });
  double ser_ms = mean_ms(reps, [&] { ref::serial_evaluate(net, corpus, pent); });
  std::printf("\n%-28s %12s %12s %10s\n", "evaluation", "mean ms", "frames/s", "speedup");
  std::printf("%-28s %12.2f %12.0f %9.1fx\n", "parallel evaluate", par_ms,
              1000.0 * frames / par_ms, ser_ms / par_ms);
  std::printf("%-28s %12.2f %12.0f %10s\n", "serial reference", ser_ms,
              1000.0 * frames / ser_ms, "");
  return 0;
}
