#pragma once

#include <string>
#include <vector>

#include "pilotnn/runconfig.hpp"

namespace pilotnn {

// Run the experiment named by cfg["experiment"] and write its outputs into
// out_dir (created if missing). Returns the paths written. All configuration
// is validated before any computation starts; if anything fails after output
// files have been opened, the partial files are removed before the exception
// propagates.
//
// Experiments and their outputs:
//   scenario     scenario.json
//   interp-error interp_error.csv
//   prelog       prelog.csv, prelog_fit.json
//   decode-sim   decode_sim.csv
//   mac-region   mac_region.csv
//   mac-verdict  mac_verdict.json
//   dump-fading  fading.bin
std::vector<std::string> run_experiment(const RunConfig& cfg,
                                        const std::string& out_dir,
                                        int threads);

}  // namespace pilotnn
