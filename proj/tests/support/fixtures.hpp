#pragma once

#include <string>
#include <vector>

#include "drip/oracle.hpp"
#include "drip/repair.hpp"

namespace drip::test {

std::string data_path(const std::string& relative);
AppModel fixture(const std::string& name);  // data/apps/<name>.json
ResourceSpec resource(const std::string& name);  // data/resources/<name>.json
std::vector<ResourceSpec> all_resources();  // sorted by name

/// Whitespace-separated word.
std::vector<std::string> words(const std::string& text);

std::set<OracleLeak> leak_keys(const std::vector<LeakReport>& reports);
std::set<OracleViolation> violation_keys(const ValidationResult& result);

/// Statements that differ between two apps: inserted, removed or rewritten.
std::size_t changed_statements(const AppModel& before, const AppModel& after);

} // namespace drip::test
