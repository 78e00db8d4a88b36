#pragma once

// JSON and CSV renderings. Exact scalars are written as "p/q" strings, float
// scalars as decimal strings with their error bound alongside.

#include <string>
#include <vector>

#include <gmpxx.h>

#include "json.hpp"

#include "countdown/distributions.hpp"
#include "countdown/harness.hpp"
#include "countdown/process.hpp"
#include "countdown/tv.hpp"

namespace countdown::io {

using nlohmann::json;

std::string scalarText(const Rational& v);
std::string scalarText(const Tracked& v);

json trajectoryJson(const Trajectory& traj);
std::string trajectoryCsv(const Trajectory& traj);

template <Scalar S>
json pmfJson(const Pmf<S>& pmf, const S& x, const json& params);
template <Scalar S>
std::string pmfCsv(const Pmf<S>& pmf);

template <Scalar S>
json tvJson(const TvReport<S>& report);

json fgJson(const FgRow& row);

json rankCountsJson(long q, long rows, long cols, const std::vector<mpz_class>& counts);
std::string rankCountsCsv(long q, long rows, long cols, const std::vector<mpz_class>& counts);

json reportJson(const ComparisonReport& report);
json criterionJson(const CriterionResult& result);

} // namespace countdown::io
