#pragma once

#include <json.hpp>

#include "classifier.hpp"
#include "dsl.hpp"
#include "oracle.hpp"
#include "theories.hpp"

namespace vfnip {

using json = nlohmann::json;

namespace json_detail {

inline json envelope(const char* verb, const std::string& input) {
  json out;
  out["schema"] = 1;
  out["verb"] = verb;
  out["input"] = input;
  return out;
}

inline json rat_list(const std::vector<Rat>& coords) {
  json out = json::array();
  for (const auto& r : coords) out.push_back(rat_str(r));
  return out;
}

}  // namespace json_detail

inline json classify_json(const std::string& input, const Classification& cls) {
  json out = json_detail::envelope("classify", input);
  out["outcome"] = to_string(cls.verdict);
  out["case"] = cls.case_tag ? json(std::string(1, cls.case_tag)) : json();
  if (cls.verdict == Verdict::IP)
    out["witness"] = {{"rule", cls.failing}, {"detail", cls.reason}};
  else
    out["witness"] = nullptr;
  out["missing"] = cls.missing;
  json trail = json::array();
  for (const auto& e : cls.trail)
    trail.push_back({{"rule", e.id},
                     {"result", to_string(e.value)},
                     {"detail", e.note}});
  out["trail"] = trail;
  return out;
}

inline json decompose_json(const std::string& input, const Decomposition& dec) {
  json out = json_detail::envelope("decompose", input);
  out["cut_p"] = dec.cut_p.index;
  out["cut_0"] = dec.cut_0.index;
  out["delta_p"] = print_group(dec.delta_p);
  out["delta_0"] = print_group(dec.delta_0);
  out["arch_quot"] = dsl_detail::print_summand(dec.arch_quot);
  out["quotient_discrete"] = dec.quotient_discrete;
  out["pieces"] = {{"K_v0", print_descriptor(dec.K_v0)},
                   {"Kv0_vbar_p", print_descriptor(dec.Kv0_vbar_p)},
                   {"Kvp_vbar", print_descriptor(dec.Kvp_vbar)}};
  return out;
}

inline json theory_tag_json(const TheoryTag& tag) {
  auto imp_str = [](const std::optional<ImpDeg>& e) -> json {
    if (!e) return nullptr;
    return dsl_detail::print_impdeg(*e);
  };
  return std::visit(
      [&](const auto& t) -> json {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, EqChar0>) {
          return {{"kind", "EqChar0"},
                  {"notation", "T(k,G)"},
                  {"residue", print_field(t.k)},
                  {"group", print_group(t.g)}};
        } else if constexpr (std::is_same_v<T, EqCharPSd>) {
          return {{"kind", "EqCharPSd"},
                  {"notation", "Tsd_e(k,G)"},
                  {"p", t.p},
                  {"imp", imp_str(t.e)},
                  {"residue", print_field(t.k)},
                  {"group", print_group(t.g)}};
        } else if constexpr (std::is_same_v<T, MixedFinRam>) {
          return {{"kind", "MixedFinRam"},
                  {"notation", "T_e(k,G,g)"},
                  {"p", t.p},
                  {"imp", imp_str(t.e)},
                  {"residue", print_field(t.k)},
                  {"group", print_group(t.g)},
                  {"vp", print_element(t.gamma)}};
        } else if constexpr (std::is_same_v<T, MixedAlgMax>) {
          return {{"kind", "MixedAlgMax"},
                  {"notation", "T(k,G,g,F)"},
                  {"p", t.p},
                  {"residue", print_field(t.k)},
                  {"group", print_group(t.g)},
                  {"vp", print_element(t.gamma)},
                  {"core",
                   {{"summand", dsl_detail::print_summand(t.core_spec.summand)},
                    {"gamma", rat_str(t.core_spec.gamma)}}}};
        } else {
          json base = theory_tag_json(TheoryTag{t.base});
          return {{"kind", "FiniteExtOf"},
                  {"notation", "L/T_e(k,G,g)"},
                  {"base", std::move(base)},
                  {"degree", t.degree ? json(*t.degree) : json()}};
        }
      },
      tag);
}

inline json theory_json(const std::string& input, const TheoryTag& tag,
                        const CompletenessReport& comp) {
  json out = json_detail::envelope("theory", input);
  out["tag"] = theory_tag_json(tag);
  out["completeness"] = {{"complete", to_string(comp.complete)},
                         {"reasons", comp.reasons}};
  return out;
}

inline json shelah_json(const std::string& input, const ShelahRoute& route) {
  json out = json_detail::envelope("shelah", input);
  out["family"] = route.family;
  out["description"] = route.description;
  out["note"] = route.note;
  return out;
}

inline json audit_json(const std::string& input, const CoarseningAudit& audit) {
  json out = json_detail::envelope("audit", input);
  json entries = json::array();
  for (const auto& e : audit.entries)
    entries.push_back(
        {{"cut", e.cut}, {"residue_perfect", to_string(e.residue_perfect)}});
  out["entries"] = entries;
  out["allowed_cut"] = audit.allowed_cut ? json(*audit.allowed_cut) : json();
  out["ok"] = audit.ok;
  return out;
}

inline json eval_json(const std::string& input, const SeriesValue& v,
                      long order) {
  json out = json_detail::envelope("eval", input);
  out["order"] = order;
  out["rank"] = v.rank;
  json terms = json::array();
  for (const auto& [e, coef] : v.series.c)
    terms.push_back(
        {{"exponent", json_detail::rat_list(e.coords)}, {"coeff", rat_str(coef)}});
  out["terms"] = terms;
  auto val = series_val(v.series);
  out["valuation"] = val ? json_detail::rat_list(val->coords) : json();
  RatRing R;
  OAGDesc g;
  for (size_t i = 0; i < v.rank; ++i) g.summands.push_back(summand_Q());
  out["residue"] = rat_str(series_residue(R, g, v.series));
  out["display"] = print_series(v.series);
  return out;
}

inline json oracle_case_json(size_t index, const FundEqReport& rep) {
  return {{"index", index},
          {"lhs", rep.lhs},
          {"rhs", rep.rhs},
          {"equal", rep.equal},
          {"conclusive", rep.conclusive},
          {"ram_index", rep.ram_index},
          {"res_degree", rep.res_degree},
          {"detail", rep.detail}};
}

inline json oracle_json(const std::string& input,
                        const std::vector<FundEqReport>& reports) {
  json out = json_detail::envelope("oracle", input);
  json cases = json::array();
  for (size_t i = 0; i < reports.size(); ++i)
    cases.push_back(oracle_case_json(i, reports[i]));
  out["cases"] = cases;
  return out;
}

}  // namespace vfnip
