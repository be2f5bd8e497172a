#pragma once

#include <string>

#include "nlpf/harness.hpp"

namespace nlpf {

/// Parse or validation failure; messages name the offending key and line.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Flat key-value run configuration with dotted sections, e.g.
///   equation = nch
///   grid.m = 128
///   kernel.type = gaussian
///   kernel.sigma = 0.05
struct RunConfig {
    Equation equation = Equation::nch;
    DomainSpec domain;
    int m = 128, n = 128;
    KernelSpec kernel;
    double gamma_c = 0.0;
    double gamma_e = 0.0;
    double M = 1.0;
    double s = 0.0;
    double T = 0.0;
    InitSpec init;
    SolverConfig solver;
    std::string energy_csv = "energy.csv";
    int snapshot_every = 0;  // steps between snapshots; 0 = final state only
    std::string snapshot_dir = "snapshots";

    static RunConfig load(const std::string& path);
};

struct StudyConfig {
    StudySpec study;
    std::string table_csv = "table.csv";
    std::string table_txt = "table.txt";

    static StudyConfig load(const std::string& path);
};

struct DecayFileConfig {
    DecayConfig decay;
    std::string energy_csv = "energy.csv";

    static DecayFileConfig load(const std::string& path);
};

}  // namespace nlpf
