#ifndef LEVICOOL_REPORT_HPP
#define LEVICOOL_REPORT_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "levicool/budget.hpp"
#include "levicool/config.hpp"
#include "levicool/cooling.hpp"
#include "levicool/decohere.hpp"
#include "levicool/thermo.hpp"

namespace levicool {

inline constexpr const char* version = "1.0.0";

nlohmann::json budget_json(const HeatingBudget& b);
nlohmann::json free_fall_json(const FreeFallReport& r);
nlohmann::json occupation_json(const OccupationResult& r);
nlohmann::json sweep_json(const std::vector<SweepPoint>& sweep);

// One JSON report per run: config snapshot, command line, input hashes,
// per-module results, version and seed.
struct RunReport {
    ExperimentConfig config;
    std::string command;
    std::uint64_t seed = 0;
    std::map<std::string, std::string> input_hashes;
    nlohmann::json results = nlohmann::json::object();

    nlohmann::json to_json() const;
    void write(const std::string& path) const;
};

std::string file_sha_like_hash(const std::string& path); // FNV-1a over bytes

struct ComparisonRow {
    std::string name;
    double computed = 0;
    double reference = 0;
    std::string tolerance; // human-readable acceptance window
    bool pass = false;
};

struct PaperComparison {
    std::vector<ComparisonRow> rows;
    bool all_pass = false;
};

// Runs the full prediction chain on the bundled defaults and compares
// against the reference values at the documented tolerances.
PaperComparison reproduce_paper(const ExperimentConfig& cfg);

std::string format_comparison(const PaperComparison& cmp);
nlohmann::json comparison_json(const PaperComparison& cmp);

} // namespace levicool

#endif
