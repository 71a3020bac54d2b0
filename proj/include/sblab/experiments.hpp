#pragma once

#include "sblab/bernstein.hpp"
#include "sblab/exterior.hpp"
#include "sblab/geometry.hpp"
#include "sblab/montecarlo.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace sblab::exp {

using nlohmann::json;

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Declarative experiment description, loaded from a JSON file. A top-level
// "include" key (path or list of paths, relative to the including file)
// pulls in shared blocks; the including file's top-level keys win.
//
// Theorem hypotheses are enforced at load time unless "counterexample" is
// set: p in (1, inf], beta > 1/p, 0 < gamma < beta - 1/p, and the fitted
// A-3 exponent delta > 1/p; lemma-suite configs with an explicit q must
// keep q < 1/(1 - delta).
struct ExperimentConfig {
    json raw;
    std::string experiment;
    bool counterexample = false;

    static ExperimentConfig load(const std::string& path);
    static ExperimentConfig from_json(const json& j);

    // Throws config_error with a hypothesis-violation diagnostic.
    void validate() const;

    bernstein::BernsteinFunction family() const;
    bernstein::BernsteinFunction family_at(const json& spec) const;
    geometry::Domain domain() const;
    geometry::Point xi() const;
    exterior::ExteriorFunction exterior_function() const;

    double gamma() const;
    double region_a() const;
    double region_m() const;

    std::uint64_t mc_n(std::uint64_t dflt) const;
    std::uint64_t seed() const;
    double mc_eps() const;
    mc::StepControl step_control() const;

    double num(const std::string& key, double dflt) const;
    std::uint64_t unum(const std::string& key, std::uint64_t dflt) const;
};

struct CheckResult {
    std::string name;
    std::string verdict;  // consistent | violated | inconclusive
    std::string test;     // the statistical or numerical test applied
    json details;
};

struct ExperimentReport {
    std::string experiment;
    json config_echo;
    std::vector<CheckResult> checks;
    json constants;
    std::vector<std::string> tables;  // CSV file names inside the run dir
    json meta;                        // timing and counts; not compared
    std::string overall;

    int exit_code() const;  // 0 consistent, 2 violated, 3 inconclusive
    json to_json() const;
};

// Resolves the output directory: explicit config/CLI value, else
// $LAB_OUT_ROOT/runs/<experiment>-<seed>, else ./runs/<experiment>-<seed>.
std::string default_out_dir(const ExperimentConfig& cfg);

// Runs the configured experiment, writes report.json and the CSV tables
// into out_dir, and returns the report.
ExperimentReport run_experiment(const ExperimentConfig& cfg,
                                const std::string& out_dir, int workers);

ExperimentReport run_assumptions_report(const ExperimentConfig& cfg,
                                        const std::string& out_dir,
                                        int workers);
ExperimentReport run_kernel_bounds(const ExperimentConfig& cfg,
                                   const std::string& out_dir, int workers);
ExperimentReport run_stable_oracle(const ExperimentConfig& cfg,
                                   const std::string& out_dir, int workers);
ExperimentReport run_tangential_limit(const ExperimentConfig& cfg,
                                      const std::string& out_dir, int workers);
ExperimentReport run_lemma_suite(const ExperimentConfig& cfg,
                                 const std::string& out_dir, int workers);

}  // namespace sblab::exp
