#ifndef PCONN_LAB_HPP
#define PCONN_LAB_HPP

#include <string>
#include <vector>

#include "pconn/io.hpp"

namespace pconn::lab {

// Shared scenario knobs. The PCONN_SEED environment variable, when set,
// overrides `seed`. Reports embed every parameter actually used, so a
// rerun with the same options is byte-identical except for the
// "generated_at" field.
struct LabOptions {
    unsigned long p = 2;
    long precision = 1024;
    long deg = 300;     // solution truncation for solves
    long horizon = 300; // type-estimate horizon
    long window = 64;   // integer detection window
    unsigned long seed = 1;
    std::string csv_dir; // when nonempty, valuation profiles land here
};

std::vector<std::string> scenario_names();

// Builds and runs one named scenario; throws std::runtime_error for an
// unknown name. The returned report carries scenario, engine, timestamp,
// parameters, and a scenario-specific results block.
io::json run_scenario(const std::string& name, LabOptions opt = {});

LabOptions options_from_json(const io::json& j);

} // namespace pconn::lab

#endif
