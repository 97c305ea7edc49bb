#pragma once

#include <string>

#include <json.hpp>

#include "detflop/chambers.hpp"

namespace detflop {

using ojson = nlohmann::ordered_json;

// Instance file layout: {"n", "N", "seed", "bound", "tensor"} with the tensor
// flat in lexicographic (m_0, ..., m_N) order. Readers validate the length.
ojson instance_to_json(const Instance& inst);
Instance instance_from_json(const ojson& j);

ojson point_to_json(const MultiProjPoint& pt);
ojson smoothness_report_to_json(const SmoothnessReport& rep);
ojson rank_report_to_json(const RankLocusReport& rep);
ojson diagram_report_to_json(const DiagramReport& rep);

// Matrix fixture: {"flop": [j, i], "matrix": [[...]], "provenance": ...,
// "primes": [...]}; fixture files hold a flat array of these.
ojson fixture_to_json(const PushforwardMatrix& m);
PushforwardMatrix fixture_from_json(const Instance& inst, const ojson& j);
ojson fixture_set_to_json(const PushforwardSet& set);
PushforwardSet fixture_set_from_json(const Instance& inst, const ojson& j);

ojson certificate_to_json(const TilingCertificate& cert);
ojson domain_to_json(const FundamentalDomainCandidate& dom);

void write_json_file(const std::string& path, const ojson& j);
ojson read_json_file(const std::string& path);

}  // namespace detflop
