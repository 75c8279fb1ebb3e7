#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "hjb/conditions.hpp"
#include "hjb/ergodic.hpp"
#include "hjb/oracle.hpp"
#include "hjb/solver.hpp"

namespace hjb {

inline constexpr const char* kVersion = "1.0.0";

nlohmann::json to_json(const ConditionReport& rep);
nlohmann::json to_json(const GrowthReport& rep);
nlohmann::json to_json(const DiscountedSolve& solve);
nlohmann::json to_json(const ErgodicResult& result, const std::string& chi_csv_path);
nlohmann::json to_json(const ParabolicRun& run);
nlohmann::json to_json(const McResult& mc);

// One row per node: x[,y],value.
void write_field_csv(std::ostream& out, const ScalarField& field);
// One row per (snapshot, node): t,x[,y],value.
void write_snapshots_csv(std::ostream& out, const ParabolicRun& run);
// One row per node: x[,y],tail_sup,tail_inf.
void write_tail_csv(std::ostream& out, const ParabolicRun& run);

void write_text_file(const std::string& path, const std::string& content);
void write_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace hjb
