#pragma once

#include <string>
#include <vector>

#include "pmuobs/scenario.hpp"

namespace pmuobs {

struct ColumnDef {
    const char* name;
    double Record::* field;
};

// Every recorded quantity, in record order; "all" expands to this.
const std::vector<ColumnDef>& column_registry();

bool is_known_column(const std::string& name);

// Canonical emitted set: time, plant state, measurements, derived signals,
// then estimate/error blocks for each enabled observer.
std::vector<std::string> default_columns(const Scenario& s);

std::vector<std::string> all_column_names();

// Writes one header row plus one row per record, values rendered with 17
// significant digits. Unknown column names throw ConfigError; I/O failures
// throw IoError naming the path.
void emit_csv(const Trajectory& t, const std::vector<std::string>& columns,
              const std::string& path);

}  // namespace pmuobs
