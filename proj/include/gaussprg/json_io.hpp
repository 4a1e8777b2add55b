// JSON schemas for polynomials, families, parameters, and reports.  Keys are
// emitted in sorted order, so every serialization is canonical and
// byte-reproducible.
#pragma once

#include <string>

#include "json.hpp"

#include "gaussprg/harness.hpp"
#include "gaussprg/mollifier.hpp"
#include "gaussprg/prg.hpp"
#include "gaussprg/ptf.hpp"

namespace gaussprg {

using Json = nlohmann::json;

// polynomial schema: {"dimension": n, "terms": [{"exponents": {"coord": power}, "coeff": c}]}
Json poly_to_json(const MonomialPoly& p);
MonomialPoly poly_from_json(const Json& j);

// family schema: {"polys": [poly...], "combiner_hex": "..."}; table entry i
// sits at bit (i % 8) of byte (i / 8)
std::string combiner_to_hex(const std::vector<uint8_t>& table);
std::vector<uint8_t> combiner_from_hex(const std::string& hex, uint32_t k);
Json family_to_json(const PtfFunction& f);
PtfFunction family_from_json(const Json& j);

Json params_to_json(const PrgParams& p);
Json estimate_to_json(const EstimateCI& e);
Json gap_report_to_json(const GapReport& r);
Json independence_to_json(const IndependenceReport& r);
Json coupling_to_json(const CouplingReport& r);
Json anticonc_to_json(const AntiConcentrationReport& r);
Json lemma_suite_to_json(const LemmaSuiteReport& r);

/// Digest of a double vector (FNV-1a over the IEEE bit patterns), for reports
/// that elide large vectors.
std::string vector_digest(std::span<const double> x);

/// Common report envelope: schema_version, tool_version, command, master_seed,
/// resolved config, result.
Json make_report(const std::string& command, const Json& config, const std::string& master_seed_hex,
                 Json result);

}  // namespace gaussprg
