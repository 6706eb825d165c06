#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pbdstein/bounds.hpp"
#include "pbdstein/coupling.hpp"
#include "pbdstein/metrics.hpp"
#include "pbdstein/pmf.hpp"
#include "pbdstein/profile.hpp"

namespace pbdstein {

// Every JSON document carries this version tag under "schema".
inline constexpr const char* kSchemaTag = "pbd-stein/1";

std::string to_json(const TruncatedPmf& pmf, int indent = 2);
std::string to_json(const BoundReport& report, int indent = 2);
std::string to_json(const DistanceResult& d, int indent = 2);
std::string to_json(const CouplingEstimate& e, int indent = 2);

TruncatedPmf pmf_from_json(const std::string& text);

// k,prob rows with absolute indices
void write_csv(std::ostream& out, const TruncatedPmf& pmf);
// bound_id,value rows; inapplicable entries carry the literal null
void write_csv(std::ostream& out, const BoundReport& report);
// time,state rows
void write_csv(std::ostream& out, const std::vector<PathPoint>& path);

// {"p": [...]} documents resp. one probability per line
BernoulliProfile profile_from_json(const std::string& text);
BernoulliProfile profile_from_csv(const std::string& text);
// Dispatches on extension, falling back to content sniffing.
BernoulliProfile load_profile(const std::string& path);

// Shortest decimal that round-trips; locale independent.
std::string format_double(double x);

}  // namespace pbdstein
