// SPDX-License-Identifier: Apache-2.0
//
// dtris: dual-tier RIS-assisted downlink network simulator
// Copyright (C) 2026 dtris contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
//
// Drives the installed binary end to end and checks the documented exit
// codes and output files. argv[1] = binary path, argv[2] = scratch dir.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

namespace {

int failures = 0;

int run(const std::string &command) {
  const int status = std::system(command.c_str());
  if (status < 0)
    return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void expect_exit(const std::string &command, int expected,
                 const std::string &label) {
  const int code = run(command);
  if (code == expected) {
    std::printf("[PASS] %s (exit %d)\n", label.c_str(), code);
  } else {
    std::printf("[FAIL] %s: expected exit %d, got %d\n", label.c_str(),
                expected, code);
    ++failures;
  }
}

void expect(bool ok, const std::string &label) {
  std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", label.c_str());
  if (!ok)
    ++failures;
}

std::string slurp(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

} // namespace

int main(int argc, char **argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: cli_exit_check <binary> <scratch-dir>\n");
    return 2;
  }
  const std::string binary = argv[1];
  const std::string scratch = argv[2];
  std::filesystem::remove_all(scratch);
  std::filesystem::create_directories(scratch);

  const std::string quiet = " >/dev/null 2>&1";

  expect_exit(binary + " --help" + quiet, 0, "--help exits 0");
  expect_exit(binary + " validate" + quiet, 0, "validate exits 0");
  expect_exit(binary + " bogus-subcommand" + quiet, 2,
              "unknown subcommand is a usage error");
  expect_exit(binary + " sweep-power --config /no/such/file.cfg" + quiet, 2,
              "missing config file is a parse error");

  const std::string bad_cfg = scratch + "/bad.cfg";
  {
    std::ofstream out(bad_cfg);
    out << "devices = 0\n";
  }
  expect_exit(binary + " sweep-power --config " + bad_cfg + quiet, 3,
              "invalid config is a validation error");

  const std::string conflict_cfg = scratch + "/conflict.cfg";
  {
    std::ofstream out(conflict_cfg);
    out << "sweep = devices\n";
  }
  expect_exit(binary + " sweep-power --config " + conflict_cfg + quiet, 3,
              "config axis conflicting with the subcommand is rejected");

  const std::string tiny_cfg = scratch + "/tiny.cfg";
  {
    std::ofstream out(tiny_cfg);
    out << "devices = 3\nantennas = 8\nelements_y = 4\nelements_z = 4\n"
        << "trials = 4\nschemes = jbpda,gs,rs\ngrid = 0,23\n";
  }
  expect_exit(binary + " sweep-power --config " + tiny_cfg + " --out " +
                  scratch + "/run_a" + quiet,
              0, "small sweep succeeds");
  expect(std::filesystem::exists(scratch + "/run_a/sweep_power.csv"),
         "sweep CSV written");
  expect(std::filesystem::exists(scratch + "/run_a/run_manifest.json"),
         "manifest written");

  expect_exit(binary + " sweep-power --config " + tiny_cfg + " --out " +
                  scratch + "/run_b" + quiet,
              0, "repeated sweep succeeds");
  expect(slurp(scratch + "/run_a/sweep_power.csv") ==
             slurp(scratch + "/run_b/sweep_power.csv"),
         "identical seeds give byte-identical CSVs");

  expect_exit(binary + " sweep-power --config " + tiny_cfg +
                  " --out /dev/null/impossible" + quiet,
              4, "unwritable output directory is an I/O error");

  const std::string conv_cfg = scratch + "/conv.cfg";
  {
    std::ofstream out(conv_cfg);
    out << "devices = 3\nantennas = 8\nelements_y = 4\nelements_z = 4\n"
        << "trials = 3\nschemes = jbpda\n";
  }
  expect_exit(binary + " converge --config " + conv_cfg + " --out " + scratch +
                  "/conv" + quiet,
              0, "converge succeeds");
  expect(std::filesystem::exists(scratch + "/conv/converge_trace.csv"),
         "trace CSV written");
  {
    const std::string trace = slurp(scratch + "/conv/converge_trace.csv");
    expect(trace.rfind("trial,iteration,sum_rate_bps_hz,best_sum_rate_bps_hz",
                       0) == 0,
           "trace CSV header");
  }

  // device sweeps auto-exclude the exhaustive baseline above the guard
  const std::string devs_cfg = scratch + "/devs.cfg";
  {
    std::ofstream out(devs_cfg);
    out << "devices = 3\nantennas = 32\nelements_y = 4\nelements_z = 4\n"
        << "trials = 2\nschemes = jbpda,es\ngrid = 4,16\n";
  }
  expect_exit(binary + " sweep-devices --config " + devs_cfg + " --out " +
                  scratch + "/devs" + quiet,
              0, "device sweep succeeds with es auto-excluded");
  {
    const std::string csv = slurp(scratch + "/devs/sweep_devices.csv");
    expect(csv.find(",es,") == std::string::npos,
           "es absent from the device-sweep CSV");
  }

  const std::string ant_cfg = scratch + "/ant.cfg";
  {
    std::ofstream out(ant_cfg);
    out << "devices = 3\nantennas = 8\nelements_y = 4\nelements_z = 4\n"
        << "trials = 2\nschemes = jbpda,rs\ngrid = 8,16\n";
  }
  expect_exit(binary + " sweep-antennas --config " + ant_cfg + " --out " +
                  scratch + "/ant" + quiet,
              0, "antenna sweep succeeds");
  expect(std::filesystem::exists(scratch + "/ant/sweep_antennas.csv"),
         "antenna sweep CSV written");

  if (failures == 0)
    std::printf("all CLI checks passed\n");
  return failures == 0 ? 0 : 1;
}
