#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "bfp/config.h"

namespace bfp {

namespace {

Json cjson(cplx z) { return Json::array({z.real(), z.imag()}); }

Json word_json(const std::vector<Letter>& alphabet, const std::vector<std::size_t>& w) {
  Json out = Json::array();
  for (std::size_t idx : w) out.push_back(alphabet.at(idx).label);
  return out;
}

std::unique_ptr<MomentModel> ambient_model(const ExperimentConfig& cfg, const FaceFamily& family, std::size_t trunc,
                                           std::string& kind) {
  if (cfg.ambient_density) {
    kind = "matrix";
    return std::make_unique<MatrixAmbient>(StateOnMatrices(*cfg.ambient_density, cfg.tol));
  }
  kind = "bifree_product";
  return std::make_unique<BiFreeAmbient>(std::make_shared<const BiFreeProduct>(family, trunc, cfg.tol));
}

Json split_defects(const ExperimentConfig& cfg) {
  Json out = Json::array();
  for (std::size_t i = 0; i < cfg.faces.size(); ++i) {
    const auto& f = cfg.faces[i];
    if (!f.product_split) continue;
    out.push_back({{"face", i},
                   {"density_split_defect",
                    split_density_defect(f.density, f.product_split->first, f.product_split->second)}});
  }
  return out;
}

Json run_check(const std::string& name, const ExperimentConfig& cfg, const FaceFamily& family) {
  const auto& tol = cfg.tol;
  Json r = Json::object();
  if (name == "commutation") {
    Json per = Json::array();
    double worst = 0.0;
    for (const auto& p : family.pairs) {
      const double d = commutation_defect(p);
      per.push_back(d);
      worst = std::max(worst, d);
    }
    r["defects"] = per;
    r["max_defect"] = worst;
    r["verdict"] = worst <= tol.eq_tol ? "commuting" : "noncommuting";
  } else if (name == "biindependence") {
    std::string kind;
    const auto model = ambient_model(cfg, family, cfg.word_len_max, kind);
    const auto alphabet = generator_alphabet(family);
    BiIndependenceOptions o;
    o.trunc_len = cfg.truncation;
    o.word_len_max = cfg.word_len_max;
    o.words = cfg.biindependence_words;
    o.max_words = cfg.biindependence_max_words;
    o.seed = cfg.seed;
    const auto rep = check_biindependence(family, *model, alphabet, o, tol);
    r["ambient"] = kind;
    r["max_defect"] = rep.max_defect;
    r["worst_word"] = word_json(alphabet, rep.worst_word);
    r["worst_ambient_moment"] = cjson(rep.worst_ambient);
    r["worst_bifree_moment"] = cjson(rep.worst_bifree);
    r["words_compared"] = rep.words_compared;
    r["sampled"] = rep.sampled;
    r["budget_warning"] = rep.budget_warning;
    r["verdict"] = rep.bifree ? "bifree" : "not_bifree";
  } else if (name == "witness") {
    const auto rep = nonfaithfulness_witness(family, cfg.truncation, cfg.witness, tol);
    r["vacuum_norm"] = rep.vacuum_norm;
    r["witness_norm_lower"] = rep.witness_norm_lower;
    r["expected_lower"] = rep.expected_lower;
    r["verdict"] = to_string(rep.verdict);
    r["witness_description"] = rep.description;
  } else if (name == "vh_compression") {
    const auto rep = vh_compression_check(family, cfg.vh_face_i, cfg.vh_face_j, cfg.vh_h, cfg.truncation, tol);
    r["defect"] = rep.defect;
    r["isometry_defect"] = rep.isometry_defect;
    r["pairs_checked"] = rep.pairs_checked;
    r["verdict"] = rep.defect <= tol.eq_tol && rep.isometry_defect <= tol.eq_tol ? "identity_holds" : "identity_fails";
  } else if (name == "tensor_injectivity") {
    Json per = Json::array();
    bool all = true;
    for (std::size_t i = 0; i < family.pairs.size(); ++i) {
      try {
        const auto rep = tensor_injectivity_defect(family.pairs[i], tol);
        per.push_back({{"face", i},
                       {"dim_kron", rep.dim_kron},
                       {"dim_products", rep.dim_products},
                       {"injective", rep.injective()}});
        all = all && rep.injective();
      } catch (const InvalidInput& e) {
        per.push_back({{"face", i}, {"error", e.what()}});
        all = false;
      }
    }
    r["faces"] = per;
    r["verdict"] = all ? "injective" : "not_injective";
  } else if (name == "thm32_iso") {
    const auto rep = thm32_iso_check(family, cfg.truncation, cfg.word_len_max, tol);
    r["max_moment_defect"] = rep.max_moment_defect;
    r["worst_word"] = word_json(generator_alphabet(family), rep.worst_word);
    r["words_compared"] = rep.words_compared;
    r["dims"] = Json::array({rep.dim_a, rep.dim_b});
    r["product_split"] = split_defects(cfg);
    r["verdict"] = rep.verdict ? "isomorphic" : "not_isomorphic";
  } else if (name == "kernel_probe") {
    const std::size_t wlm = cfg.kernel_probe_word_len.value_or(cfg.word_len_max);
    const BiFreeProduct prod(family, cfg.truncation, tol);
    const auto rep = state_kernel_probe(prod, wlm, cfg.seed, tol);
    const auto alphabet = generator_alphabet(family);
    r["word_len_max"] = wlm;
    r["min_ratio"] = rep.min_ratio;
    r["words"] = rep.words;
    r["rank"] = rep.rank;
    r["genuine_relations"] = rep.genuine_relations;
    const bool found = rep.has_witness(tol.eq_tol);
    r["witness_found"] = found;
    r["witness_value"] = rep.witness_value;
    r["witness_terms"] = rep.witness.size();
    Json terms = Json::array();
    for (std::size_t k = 0; k < rep.witness.size() && k < 16; ++k) {
      terms.push_back({{"coef", cjson(rep.witness[k].coef)}, {"word", word_json(alphabet, rep.witness[k].word)}});
    }
    r["witness"] = terms;
    r["verdict"] = found ? "kernel_witness" : "no_witness_at_scale";
  } else if (name == "corollary") {
    std::string kind;
    const auto model = ambient_model(cfg, family, std::max(cfg.truncation, cfg.word_len_max), kind);
    CorollaryOptions o;
    o.trunc_len = cfg.truncation;
    o.word_len_max = cfg.word_len_max;
    o.probe_word_len = cfg.probe_word_len;
    o.seed = cfg.seed;
    const auto rep = corollary_report(family, *model, generator_alphabet(family), o, tol);
    r["ambient"] = kind;
    r["max_moment_defect"] = rep.iso.max_moment_defect;
    r["ambient_vs_bifree"] = rep.ambient_vs_bifree;
    r["bifree_vs_tensor"] = rep.bifree_vs_tensor;
    r["ambient_vs_tensor"] = rep.ambient_vs_tensor;
    r["biindependence_defect"] = rep.biindependence_defect;
    r["faithfulness_margin"] = rep.faithfulness_margin;
    r["words_compared"] = rep.iso.words_compared;
    r["dims"] = Json::array({rep.iso.dim_a, rep.iso.dim_b});
    r["verdict"] = rep.iso.verdict ? "isomorphic" : "not_isomorphic";
  } else {
    throw InvalidInput("unknown check '" + name + "'");
  }
  return r;
}

const Json* lookup(const Json& obj, const std::string& path) {
  const Json* cur = &obj;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (cur->is_object() && cur->contains(key)) {
      cur = &(*cur)[key];
    } else if (cur->is_array() && !key.empty() && std::all_of(key.begin(), key.end(), ::isdigit) &&
               std::stoul(key) < cur->size()) {
      cur = &(*cur)[std::stoul(key)];
    } else {
      return nullptr;
    }
    if (dot == std::string::npos) return cur;
    start = dot + 1;
  }
}

std::string compact(const Json& j) { return dump_json(j, -1); }

// Empty string when the actual value satisfies the expectation.
std::string compare(const Json& expected, const Json* actual) {
  if (!actual) return "field missing";
  if (expected.is_object()) {
    if (!actual->is_number()) return "expected a number, got " + compact(*actual);
    const double a = actual->get<double>();
    if (expected.contains("min") && !(a >= expected["min"].get<double>())) return "below min: " + compact(*actual);
    if (expected.contains("max") && !(a <= expected["max"].get<double>())) return "above max: " + compact(*actual);
    if (expected.contains("value")) {
      const double t = expected.value("tol", 0.0);
      if (!(std::abs(a - expected["value"].get<double>()) <= t)) return "off target: " + compact(*actual);
    }
    return {};
  }
  if (expected == *actual) return {};
  return "got " + compact(*actual);
}

void format_json(const Json& j, int indent, int depth, std::string& out) {
  const bool pretty = indent >= 0;
  const auto newline = [&](int d) {
    if (!pretty) return;
    out += '\n';
    out.append(static_cast<std::size_t>(d * indent), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(k).dump();
        out += pretty ? ": " : ":";
        format_json(v, indent, depth + 1, out);
      }
      newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      for (std::size_t k = 0; k < j.size(); ++k) {
        if (k) out += pretty ? ", " : ",";
        format_json(j[k], indent, depth + 1, out);
      }
      out += ']';
      return;
    }
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      if (!std::isfinite(x)) {
        out += "null";
        return;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", x);
      out += buf;
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string dump_json(const Json& j, int indent) {
  std::string out;
  format_json(j, indent, 0, out);
  return out;
}

RunReport run(const ExperimentConfig& cfg) {
  RunReport rep;
  rep.provenance = {{"config_digest", cfg.digest},
                    {"truncation", cfg.truncation},
                    {"word_len_max", cfg.word_len_max},
                    {"tolerance", {{"eq_tol", cfg.tol.eq_tol}, {"rank_tol", cfg.tol.rank_tol}}},
                    {"seed", cfg.seed},
                    {"faces", cfg.faces.size()},
                    {"checks", cfg.checks}};
  rep.warnings = cfg.warnings;

  FaceFamily family;
  std::optional<std::string> family_error;
  try {
    family = build_family(cfg);
  } catch (const std::exception& e) {
    family_error = e.what();
  }

  for (const auto& name : cfg.checks) {
    CheckResult cr;
    cr.name = name;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      if (family_error) throw InvalidInput("face family: " + *family_error);
      cr.result = run_check(name, cfg, family);
    } catch (const UnsupportedStructure& e) {
      cr.error = std::string("unsupported-structure: ") + e.what();
    } catch (const InvalidInput& e) {
      cr.error = std::string("invalid-input: ") + e.what();
    } catch (const std::exception& e) {
      cr.error = std::string("error: ") + e.what();
    }
    cr.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rep.checks.push_back(std::move(cr));
  }

  rep.expectations_declared = !cfg.expected.empty();
  for (const auto& [name, block] : cfg.expected.items()) {
    const auto it = std::find_if(rep.checks.begin(), rep.checks.end(), [&](const CheckResult& c) { return c.name == name; });
    if (it == rep.checks.end()) {
      rep.mismatches.push_back(name + ": check did not run");
      continue;
    }
    for (const auto& [field, want] : block.items()) {
      if (field == "error") {
        const std::string needle = want.is_string() ? want.get<std::string>() : "";
        if (!it->error) {
          rep.mismatches.push_back(name + ".error: expected an error containing '" + needle + "'");
        } else if (it->error->find(needle) == std::string::npos) {
          rep.mismatches.push_back(name + ".error: '" + *it->error + "' does not contain '" + needle + "'");
        }
        continue;
      }
      if (it->error) {
        rep.mismatches.push_back(name + "." + field + ": check failed with " + *it->error);
        continue;
      }
      const std::string why = compare(want, lookup(it->result, field));
      if (!why.empty()) rep.mismatches.push_back(name + "." + field + ": " + why);
    }
  }
  return rep;
}

std::string report_to_json(const RunReport& report, bool include_timing) {
  Json j = Json::object();
  j["provenance"] = report.provenance;
  j["warnings"] = report.warnings;
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    Json cj = {{"name", c.name}};
    if (c.error) {
      cj["status"] = "error";
      cj["error"] = *c.error;
    } else {
      cj["status"] = "ok";
      cj["result"] = c.result;
    }
    checks.push_back(std::move(cj));
  }
  j["checks"] = checks;
  j["expectations"] = {{"declared", report.expectations_declared},
                       {"mismatches", report.mismatches},
                       {"ok", report.ok()}};
  if (include_timing) {
    Json t = Json::object();
    for (const auto& c : report.checks) t[c.name] = c.seconds;
    j["timing"] = t;
  }
  return dump_json(j) + "\n";
}

}  // namespace bfp
