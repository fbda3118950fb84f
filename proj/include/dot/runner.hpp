#pragma once

#include <string>
#include <vector>

#include "dot/config.hpp"

namespace dot {

/// Simulates noisy boundary data on the simulation mesh and writes
/// data.csv, truth.txt, mesh_sim.txt and manifest_simulate.txt into the
/// output directory.
void cmd_simulate(const RunConfig& cfg);

/// Reconstructs from a data CSV on the inversion mesh; writes recon.txt,
/// mesh_inv.txt, iterations.csv, history.txt, images and
/// manifest_reconstruct.txt.
void cmd_reconstruct(const RunConfig& cfg, const std::string& data_path);

/// Aggregates runs (directories holding both simulate and reconstruct
/// outputs): writes report.csv and, when the labels span low/intermediate/
/// high, a pivoted table.csv; emits convergence.csv per run.
void cmd_report(const std::vector<std::string>& run_dirs, const std::string& out_path,
                const std::string& reference_path = "");

}  // namespace dot
