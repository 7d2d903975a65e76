#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "json_io.hpp"

namespace vfnip {

// Exit codes, sysexits-flavored: 0 success (NIP / equal / done), 1 a negative
// verdict (IP / unequal / audit violation), 2 undecided at this input,
// 64 usage, 65 unreadable input, 70 internal fault.
namespace cli_exit {
constexpr int ok = 0;
constexpr int refuted = 1;
constexpr int undecided = 2;
constexpr int usage = 64;
constexpr int data = 65;
constexpr int internal = 70;
}  // namespace cli_exit

namespace cli_detail {

struct Options {
  bool json = false;
  bool explain = false;
  bool batch = false;
  long order = 8;
  long precision = 0;  // 0: take each case's own precision
};

inline std::string case_label(char tag) { return std::string(1, tag); }

inline int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::NIP: return cli_exit::ok;
    case Verdict::IP: return cli_exit::refuted;
    default: return cli_exit::undecided;
  }
}

inline std::string join(const std::vector<std::string>& parts,
                        const char* sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

inline std::string verdict_line(const Classification& cls) {
  switch (cls.verdict) {
    case Verdict::NIP:
      return cls.case_tag ? "NIP: case " + case_label(cls.case_tag) : "NIP";
    case Verdict::IP:
      return "IP: clause " + cls.failing + " — " + cls.reason;
    default:
      return "Unknown: " + join(cls.missing, "; ");
  }
}

inline void print_trail(const Classification& cls, std::ostream& out) {
  for (const auto& e : cls.trail) {
    out << "  clause " << e.id << ": " << to_string(e.value);
    if (!e.note.empty()) out << " — " << e.note;
    out << "\n";
  }
}

inline int do_classify(const std::string& text, const Options& opt,
                       std::ostream& out) {
  auto vf = parse_descriptor(text);
  auto cls = classify_nip(vf);
  if (opt.json) {
    out << classify_json(print_descriptor(vf), cls).dump(2) << "\n";
  } else {
    out << verdict_line(cls) << "\n";
    if (opt.explain) print_trail(cls, out);
  }
  return verdict_exit(cls.verdict);
}

inline int do_decompose(const std::string& text, const Options& opt,
                        std::ostream& out) {
  auto vf = parse_descriptor(text);
  auto dec = standard_decomposition(vf);
  if (opt.json) {
    out << decompose_json(print_descriptor(vf), dec).dump(2) << "\n";
    return cli_exit::ok;
  }
  out << "chain: K -> Kv_0 -> Kv_p -> Kv\n";
  out << "delta_p = " << print_group(dec.delta_p) << " (cut "
      << dec.cut_p.index << ")\n";
  out << "delta_0 = " << print_group(dec.delta_0) << " (cut "
      << dec.cut_0.index << ")\n";
  out << "delta_0/delta_p = " << dsl_detail::print_summand(dec.arch_quot)
      << ", " << (dec.quotient_discrete ? "discrete" : "dense") << "\n";
  out << "(Kv_0, vbar)   = " << print_descriptor(dec.K_v0) << "\n";
  out << "(Kv_0, vbar_p) = " << print_descriptor(dec.Kv0_vbar_p) << "\n";
  out << "(Kv_p, vbar)   = " << print_descriptor(dec.Kvp_vbar) << "\n";
  return cli_exit::ok;
}

// theory and shelah only speak about NIP descriptors; anything else reports
// the classification instead and exits with its code
inline bool nip_gate(const std::string& text, const Options& opt,
                     std::ostream& out, ValuedFieldDesc& vf, int& code) {
  vf = parse_descriptor(text);
  auto cls = classify_nip(vf);
  if (cls.verdict == Verdict::NIP) return true;
  if (opt.json)
    out << classify_json(print_descriptor(vf), cls).dump(2) << "\n";
  else
    out << verdict_line(cls) << "\n";
  code = verdict_exit(cls.verdict);
  return false;
}

inline void print_scalar(const json& v, std::ostream& out) {
  if (v.is_string()) out << v.get<std::string>();
  else if (v.is_null()) out << "none";
  else out << v.dump();
}

inline int do_theory(const std::string& text, const Options& opt,
                     std::ostream& out) {
  ValuedFieldDesc vf;
  int code = cli_exit::ok;
  if (!nip_gate(text, opt, out, vf, code)) return code;
  auto tag = theory_of(vf);
  auto comp = completeness_check(tag);
  if (opt.json) {
    out << theory_json(print_descriptor(vf), tag, comp).dump(2) << "\n";
    return cli_exit::ok;
  }
  auto j = theory_tag_json(tag);
  out << "theory: " << j["notation"].get<std::string>() << " ["
      << j["kind"].get<std::string>() << "]\n";
  for (auto& [key, value] : j.items()) {
    if (key == "kind" || key == "notation") continue;
    out << "  " << key << " = ";
    if (key == "base")
      out << value["notation"].get<std::string>();
    else if (key == "core")
      out << value["summand"].get<std::string>() << " at "
          << value["gamma"].get<std::string>();
    else
      print_scalar(value, out);
    out << "\n";
  }
  out << "complete: " << to_string(comp.complete);
  if (!comp.reasons.empty()) out << " — " << join(comp.reasons, "; ");
  out << "\n";
  return cli_exit::ok;
}

inline int do_shelah(const std::string& text, const Options& opt,
                     std::ostream& out) {
  ValuedFieldDesc vf;
  int code = cli_exit::ok;
  if (!nip_gate(text, opt, out, vf, code)) return code;
  auto route = shelah_family(vf);
  if (opt.json) {
    out << shelah_json(print_descriptor(vf), route).dump(2) << "\n";
    return cli_exit::ok;
  }
  out << "family " << route.family << ": " << route.description << "\n";
  if (!route.note.empty()) out << "note: " << route.note << "\n";
  return cli_exit::ok;
}

inline int do_audit(const std::string& text, const Options& opt,
                    std::ostream& out) {
  auto vf = parse_descriptor(text);
  auto audit = imperfect_coarsening_audit(vf);
  if (opt.json) {
    out << audit_json(print_descriptor(vf), audit).dump(2) << "\n";
  } else {
    for (const auto& e : audit.entries)
      out << "cut " << e.cut
          << ": residue perfect = " << to_string(e.residue_perfect) << "\n";
    out << "allowed cut: ";
    if (audit.allowed_cut) out << *audit.allowed_cut;
    else out << "none";
    out << "\n";
    out << "ok: " << (audit.ok ? "true" : "false") << "\n";
  }
  return audit.ok ? cli_exit::ok : cli_exit::refuted;
}

inline int do_eval(const std::string& text, const Options& opt,
                   std::ostream& out) {
  auto v = parse_series(text, opt.order);
  if (opt.json) {
    out << eval_json(text, v, opt.order).dump(2) << "\n";
    return cli_exit::ok;
  }
  out << print_series(v.series) << "\n";
  auto val = series_val(v.series);
  out << "valuation = ";
  if (val) out << print_element(*val);
  else out << "none";
  out << "\n";
  RatRing R;
  OAGDesc g;
  for (size_t i = 0; i < v.rank; ++i) g.summands.push_back(summand_Q());
  out << "residue = " << rat_str(series_residue(R, g, v.series)) << "\n";
  return cli_exit::ok;
}

inline long case_long(const json& obj, const char* key, long fallback,
                      size_t index) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer())
    throw input_error("oracle case " + std::to_string(index) + ": '" + key +
                      "' must be an integer");
  return obj[key].get<long>();
}

inline int do_oracle(const std::string& path, const Options& opt,
                     std::ostream& out) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open oracle case file: " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw input_error(std::string("oracle case file: ") + e.what());
  }
  if (!doc.is_array())
    throw input_error("oracle case file must hold an array of cases");

  std::vector<FundEqReport> reports;
  for (size_t i = 0; i < doc.size(); ++i) {
    const auto& entry = doc[i];
    if (!entry.is_object() || !entry.contains("base") ||
        !entry["base"].is_object())
      throw input_error("oracle case " + std::to_string(i) +
                        ": expected an object with a 'base'");
    const auto& base = entry["base"];
    auto kind = base.value("kind", std::string());
    ExtensionSpec ext;
    if (entry.contains("ext")) {
      const auto& e = entry["ext"];
      if (!e.is_object())
        throw input_error("oracle case " + std::to_string(i) +
                          ": 'ext' must be an object");
      ext.radical = case_long(e, "radical", 1, i);
      if (e.contains("residue_poly")) {
        if (!e["residue_poly"].is_array())
          throw input_error("oracle case " + std::to_string(i) +
                            ": 'residue_poly' must be an array");
        for (const auto& c : e["residue_poly"]) {
          if (!c.is_number_integer())
            throw input_error("oracle case " + std::to_string(i) +
                              ": 'residue_poly' must hold integers");
          ext.residue_poly.push_back(c.get<long>());
        }
      }
    }
    if (kind == "series") {
      HahnBase hb{case_long(base, "p", 0, i), case_long(base, "d", 1, i)};
      reports.push_back(fundamental_equality_oracle(hb, ext));
    } else if (kind == "padic") {
      PadicBase pb{case_long(base, "p", 0, i),
                   opt.precision > 0 ? opt.precision
                                     : case_long(base, "precision", 1, i)};
      reports.push_back(fundamental_equality_oracle(pb, ext));
    } else {
      throw input_error("oracle case " + std::to_string(i) +
                        ": base kind must be 'series' or 'padic'");
    }
  }

  if (opt.json) {
    out << oracle_json(path, reports).dump(2) << "\n";
  } else {
    for (size_t i = 0; i < reports.size(); ++i) {
      const auto& r = reports[i];
      out << "case " << i << ": ";
      if (!r.conclusive) out << "inconclusive";
      else out << (r.equal ? "equal" : "UNEQUAL");
      out << ", lhs=" << r.lhs << ", rhs=" << r.rhs << " — " << r.detail
          << "\n";
    }
  }
  bool any_unequal = false, any_open = false;
  for (const auto& r : reports) {
    if (r.conclusive && !r.equal) any_unequal = true;
    if (!r.conclusive) any_open = true;
  }
  if (any_unequal) return cli_exit::refuted;
  if (any_open) return cli_exit::undecided;
  return cli_exit::ok;
}

using Handler = int (*)(const std::string&, const Options&, std::ostream&);

// batch mode: the positional names a file of descriptors, one per line;
// blank lines and #-comments are skipped. Reports stream per line; a bad
// line is reported and the run keeps going, failing the whole batch at the
// end with the data exit code.
inline int run_batch(const std::string& path, const Options& opt,
                     Handler handler, std::ostream& out, std::ostream& err) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open batch file: " + path);
  std::string line;
  size_t lineno = 0;
  bool any_bad = false;
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    if (!opt.json) out << "== " << line << "\n";
    try {
      handler(line, opt, out);
    } catch (const input_error& e) {
      err << "line " << lineno << ": " << e.what() << "\n";
      any_bad = true;
    }
  }
  return any_bad ? cli_exit::data : cli_exit::ok;
}

}  // namespace cli_detail

inline int run_cli(std::vector<std::string> args, std::ostream& out,
                   std::ostream& err) {
  using cli_detail::Options;
  CLI::App app{"symbolic toolkit for henselian valued fields"};
  app.name("vfnip");
  app.require_subcommand(1);

  Options opt;
  std::string input;

  struct Verb {
    CLI::App* cmd;
    cli_detail::Handler handler;
    bool batchable;
  };
  std::vector<Verb> verbs;

  auto add_verb = [&](const char* name, const char* help,
                      cli_detail::Handler handler, const char* positional,
                      bool batchable) {
    auto* cmd = app.add_subcommand(name, help);
    cmd->add_option("input", input, positional)->required();
    cmd->add_flag("--json", opt.json, "machine readable report");
    if (batchable)
      cmd->add_flag("--batch", opt.batch,
                    "treat input as a file of descriptors, one per line");
    verbs.push_back({cmd, handler, batchable});
    return cmd;
  };

  auto* classify =
      add_verb("classify", "decide NIP for a valued field descriptor",
               cli_detail::do_classify, "descriptor", true);
  classify->add_flag("--explain", opt.explain, "show the full clause trail");
  add_verb("decompose", "standard decomposition of a mixed characteristic valuation",
           cli_detail::do_decompose, "descriptor", true);
  add_verb("theory", "complete theory tag and completeness hypotheses",
           cli_detail::do_theory, "descriptor", true);
  add_verb("shelah", "conjectural family routing for NIP descriptors",
           cli_detail::do_shelah, "descriptor", true);
  add_verb("audit", "imperfect residue coarsening audit",
           cli_detail::do_audit, "descriptor", true);
  auto* eval = add_verb("eval", "evaluate a series expression exactly",
                        cli_detail::do_eval, "expression", false);
  eval->add_option("--order", opt.order,
                   "truncation order for quotients (default 8)");
  auto* oracle = add_verb("oracle", "check degree bookkeeping on a case file",
                          cli_detail::do_oracle, "case file", false);
  oracle->add_option("--precision", opt.precision,
                     "override the working precision of p-adic cases");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return cli_exit::ok;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return cli_exit::usage;
  }

  try {
    for (const auto& v : verbs) {
      if (!v.cmd->parsed()) continue;
      if (opt.batch) return cli_detail::run_batch(input, opt, v.handler, out, err);
      return v.handler(input, opt, out);
    }
    throw internal_error("no verb parsed");
  } catch (const input_error& e) {
    err << "error: " << e.what() << "\n";
    return cli_exit::data;
  } catch (const internal_error& e) {
    err << "internal error: " << e.what() << "\n";
    return cli_exit::internal;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return cli_exit::internal;
  }
}

}  // namespace vfnip
