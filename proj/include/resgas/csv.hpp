#pragma once

#include <string>
#include <vector>

#include "resgas/datasets.hpp"
#include "resgas/eval.hpp"
#include "resgas/neural_gas.hpp"

namespace resgas {

// Shortest round-trip decimal form of a double.
std::string format_double(double v);

// Fixed-schema result table:
// dataset,variant,n,t_h,lambda_i,lambda_f,seed_count,nrmse_mean,nrmse_var,best_grid_point
std::string results_csv(const std::vector<SweepRow>& rows, bool timestamp);

std::string ring_demo_csv(const std::vector<RingDemoRow>& rows, bool timestamp);

// Sequence CSV: "# meta: {json}" comment, header x0..x{d-1},y, one row per
// timestep.
std::string sequence_csv(const LabeledSequence& seq);
LabeledSequence sequence_from_csv_text(const std::string& text);
LabeledSequence read_sequence_csv(const std::string& path);

// Binary cache with embedded meta and CRC32 tail.
void write_sequence_cache(const std::string& path, const LabeledSequence& seq);
LabeledSequence read_sequence_cache(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace resgas
