#include "gaussprg/json_io.hpp"

#include <cstdio>
#include <cstring>
#include <stdexcept>

#include "gaussprg/version.hpp"

namespace gaussprg {

Json poly_to_json(const MonomialPoly& p) {
  Json terms = Json::array();
  for (const auto& [idx, c] : p.terms()) {
    Json exps = Json::object();
    for (const auto& [coord, exp] : idx.entries()) exps[std::to_string(coord)] = exp;
    terms.push_back(Json{{"exponents", exps}, {"coeff", c}});
  }
  return Json{{"dimension", p.dimension()}, {"terms", terms}};
}

MonomialPoly poly_from_json(const Json& j) {
  MonomialPoly p(j.at("dimension").get<uint32_t>());
  for (const auto& term : j.at("terms")) {
    std::vector<MultiIndex::Entry> entries;
    for (const auto& [key, val] : term.at("exponents").items()) {
      entries.emplace_back(static_cast<uint32_t>(std::stoul(key)), val.get<uint32_t>());
    }
    p.add_term(MultiIndex(std::move(entries)), term.at("coeff").get<double>());
  }
  return p;
}

std::string combiner_to_hex(const std::vector<uint8_t>& table) {
  std::vector<uint8_t> bytes((table.size() + 7) / 8, 0);
  for (size_t i = 0; i < table.size(); ++i) {
    if (table[i]) bytes[i / 8] |= static_cast<uint8_t>(1u << (i % 8));
  }
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (uint8_t b : bytes) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xf]);
  }
  return out;
}

std::vector<uint8_t> combiner_from_hex(const std::string& hex, uint32_t k) {
  size_t entries = size_t{1} << k;
  size_t need_bytes = (entries + 7) / 8;
  if (hex.size() != need_bytes * 2) {
    throw std::invalid_argument("combiner_hex: expected " + std::to_string(need_bytes * 2) +
                                " hex characters for k = " + std::to_string(k));
  }
  auto nibble = [](char c) -> unsigned {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw std::invalid_argument("combiner_hex: invalid character");
  };
  std::vector<uint8_t> table(entries, 0);
  for (size_t i = 0; i < entries; ++i) {
    unsigned byte = (nibble(hex[2 * (i / 8)]) << 4) | nibble(hex[2 * (i / 8) + 1]);
    table[i] = static_cast<uint8_t>((byte >> (i % 8)) & 1u);
  }
  return table;
}

Json family_to_json(const PtfFunction& f) {
  Json polys = Json::array();
  for (const auto& p : f.polys) polys.push_back(poly_to_json(p));
  return Json{{"polys", polys}, {"combiner_hex", combiner_to_hex(f.combiner)}};
}

PtfFunction family_from_json(const Json& j) {
  PtfFunction f;
  for (const auto& pj : j.at("polys")) f.polys.push_back(poly_from_json(pj));
  f.combiner = combiner_from_hex(j.at("combiner_hex").get<std::string>(), f.k());
  f.validate();
  return f;
}

Json params_to_json(const PrgParams& p) {
  return Json{{"n", p.n},
              {"k", p.k},
              {"d", p.d},
              {"eps", p.eps},
              {"R", p.R},
              {"L", p.L},
              {"M", p.M},
              {"wiseness", p.wiseness},
              {"C", p.C},
              {"C_L", p.C_L},
              {"C_M", p.C_M},
              {"L_log_exponent", 3},  // fixed exponent of the log factor in the L formula
              {"bias_margin", p.bias_margin},
              {"field_modulus", p.field_modulus},
              {"field_bit_width", p.field_bit_width},
              {"overridden", p.overridden},
              {"seed_length_bits", seed_length_bits(p)}};
}

Json estimate_to_json(const EstimateCI& e) {
  return Json{{"mean", e.mean},
              {"n_samples", e.n_samples},
              {"half_width", e.half_width},
              {"confidence", e.confidence}};
}

Json gap_report_to_json(const GapReport& r) {
  return Json{{"prg_estimate", estimate_to_json(r.prg_estimate)},
              {"gaussian_estimate", estimate_to_json(r.gaussian_estimate)},
              {"gap", r.gap},
              {"gap_bound", r.gap_bound},
              {"target_eps", r.target_eps},
              {"params", params_to_json(r.params)},
              {"family_digest", r.family_digest},
              {"master_seed", r.master_seed_hex},
              {"pass", r.pass}};
}

Json independence_to_json(const IndependenceReport& r) {
  return Json{{"field_modulus", r.field_modulus},
              {"source_wiseness", r.source_wiseness},
              {"tested_wiseness", r.tested_wiseness},
              {"indices", r.indices},
              {"seed_tuples", r.seed_tuples},
              {"pass", r.pass},
              {"detail", r.detail}};
}

Json coupling_to_json(const CouplingReport& r) {
  return Json{{"M", r.precision_bits},
              {"delta", r.delta},
              {"n_samples", r.n_samples},
              {"rate", r.rate},
              {"threshold", r.threshold},
              {"note", "double-precision ln/cos error (~1e-15) is absorbed into delta"},
              {"pass", r.pass}};
}

Json anticonc_to_json(const AntiConcentrationReport& r) {
  return Json{{"degree", r.degree},
              {"eps", r.eps},
              {"c", r.c},
              {"dimension", r.dimension},
              {"trials", r.trials},
              {"n_samples", r.n_samples},
              {"bound", r.bound},
              {"worst_rate", r.worst_rate},
              {"pass", r.pass}};
}

Json lemma_suite_to_json(const LemmaSuiteReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    checks.push_back(Json{{"name", c.name}, {"pass", c.pass}, {"margin", c.margin}, {"detail", c.detail}});
  }
  return Json{{"checks", checks}, {"pass", r.all_pass}};
}

std::string vector_digest(std::span<const double> x) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (double v : x) {
    uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    for (int i = 0; i < 8; ++i) {
      h ^= (bits >> (8 * i)) & 0xff;
      h *= 0x100000001b3ull;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

Json make_report(const std::string& command, const Json& config, const std::string& master_seed_hex,
                 Json result) {
  return Json{{"schema_version", kSchemaVersion},
              {"tool_version", kToolVersion},
              {"command", command},
              {"master_seed", master_seed_hex},
              {"config", config},
              {"result", std::move(result)}};
}

}  // namespace gaussprg
