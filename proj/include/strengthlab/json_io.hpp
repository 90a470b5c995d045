#pragma once

#include <json.hpp>

#include "strengthlab/expsum.hpp"
#include "strengthlab/family.hpp"
#include "strengthlab/rank.hpp"
#include "strengthlab/variety.hpp"

namespace strengthlab {

using json = nlohmann::json;

// Report serializers. Every report carries a "schema" id matching a file under
// schemas/; infinite sentinels serialize as the string "inf". Timing fields
// are zero unless with_timing is set, so default reports are byte-identical
// across runs.

json bias_report_json(const BiasReport& rep, std::optional<double> arank_value, bool arank_infinite,
                      bool has_arank, bool with_timing);
json gowers_report_json(const GowersResult& res, uint32_t d, const std::string& path, uint64_t q,
                        uint32_t n);
json fibers_report_json(const FiberDistribution& dist, bool include_fourier);
json family_rank_report_json(const MinArankResult& res);
json shift_search_report_json(const ShiftSearchResult& res, const Field& f);
json certificate_json(const PartitionCertificate& cert);
PartitionCertificate certificate_from_json(const json& j, const FieldPtr& field, uint32_t width);
json variety_report_json(const VarietyReport& rep, bool with_timing);
std::string point_count_csv(const PointCountTable& table, bool with_timing);
json gen_sidecar_json(const std::string& kind, const json& params,
                      const std::vector<std::string>& names);

// Minimal JSON-schema checker covering the subset the shipped schemas use:
// type, properties, required, items, enum, const, anyOf, additionalProperties.
// Returns an empty string on success, else a description of the first failure.
std::string validate_against_schema(const json& value, const json& schema);

}  // namespace strengthlab
