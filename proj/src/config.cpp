#include "bfp/config.h"

#include <algorithm>
#include <sstream>

namespace bfp {

namespace {

std::string fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

bool read_count(const Json& j, const char* key, std::size_t& out, std::vector<std::string>& errors) {
  if (!j.contains(key)) return false;
  const auto& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    errors.push_back(std::string("'") + key + "' must be a non-negative integer");
    return false;
  }
  out = v.get<std::size_t>();
  return true;
}

std::vector<CMatrix> parse_matrix_list(const Json& j, const std::string& where, std::vector<std::string>& errors) {
  std::vector<CMatrix> out;
  if (!j.is_array()) {
    errors.push_back(where + ": expected a list of matrices");
    return out;
  }
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(parse_matrix(j[k], where + "[" + std::to_string(k) + "]", errors));
  return out;
}

std::vector<cplx> parse_vector(const Json& j, const std::string& where, std::vector<std::string>& errors) {
  std::vector<cplx> out;
  if (!j.is_array()) {
    errors.push_back(where + ": expected a list of complex numbers");
    return out;
  }
  for (const auto& e : j) {
    if (e.is_number()) {
      out.emplace_back(e.get<double>(), 0.0);
    } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
      out.emplace_back(e[0].get<double>(), e[1].get<double>());
    } else {
      errors.push_back(where + ": entries must be [re, im] pairs or numbers");
      return {};
    }
  }
  return out;
}

void check_square(const CMatrix& m, std::size_t d, const std::string& where, std::vector<std::string>& errors) {
  if (m.size() == 0) return;  // already reported
  if (!m.is_square()) {
    errors.push_back(where + ": matrix is not square");
  } else if (d != 0 && m.rows() != d) {
    errors.push_back(where + ": matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                     " but the face acts on dimension " + std::to_string(d));
  }
}

}  // namespace

CMatrix parse_matrix(const Json& j, const std::string& where, std::vector<std::string>& errors) {
  if (!j.is_array() || j.empty()) {
    errors.push_back(where + ": matrix literal must be a non-empty list of rows");
    return {};
  }
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  std::vector<cplx> data;
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<std::string> local;
    const auto row = parse_vector(j[r], where + " row " + std::to_string(r), local);
    if (!local.empty()) {
      errors.insert(errors.end(), local.begin(), local.end());
      return {};
    }
    if (r == 0) cols = row.size();
    if (row.size() != cols || cols == 0) {
      errors.push_back(where + ": rows have inconsistent lengths");
      return {};
    }
    data.insert(data.end(), row.begin(), row.end());
  }
  CMatrix m(rows, cols, std::move(data));
  if (!m.all_finite()) {
    errors.push_back(where + ": matrix has non-finite entries");
    return {};
  }
  return m;
}

ParseResult parse_config(const std::string& text) {
  ParseResult res;
  auto& errors = res.errors;
  Json j;
  try {
    j = Json::parse(text);
  } catch (const std::exception& e) {
    errors.push_back(std::string("config is not valid JSON: ") + e.what());
    return res;
  }
  if (!j.is_object()) {
    errors.push_back("config must be a JSON object");
    return res;
  }
  static const std::vector<std::string> top_keys{"faces", "ambient_density",  "truncation", "word_len_max",
                                                 "checks", "tolerance",       "seed",       "expected",
                                                 "witness", "vh_compression", "biindependence", "kernel_probe",
                                                 "corollary"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(top_keys.begin(), top_keys.end(), key) == top_keys.end()) {
      errors.push_back("unknown top-level key '" + key + "'");
    }
  }

  ExperimentConfig cfg;
  cfg.digest = fnv1a(text);

  if (j.contains("ambient_density")) {
    CMatrix a = parse_matrix(j["ambient_density"], "ambient_density", errors);
    if (a.size() > 0) {
      check_square(a, 0, "ambient_density", errors);
      for (const auto& v : density_violations(a, cfg.tol)) errors.push_back("ambient_density: " + v);
      cfg.ambient_density = std::move(a);
    }
  }

  if (!j.contains("faces") || !j["faces"].is_array() || j["faces"].empty()) {
    errors.push_back("'faces' must be a non-empty list");
  } else {
    for (std::size_t i = 0; i < j["faces"].size(); ++i) {
      const auto& fj = j["faces"][i];
      const std::string where = "faces[" + std::to_string(i) + "]";
      if (!fj.is_object()) {
        errors.push_back(where + ": must be an object");
        continue;
      }
      FaceConfig fc;
      if (fj.contains("density")) {
        fc.density = parse_matrix(fj["density"], where + ".density", errors);
      } else if (cfg.ambient_density) {
        fc.density = *cfg.ambient_density;
      } else {
        errors.push_back(where + ": 'density' is required when no ambient_density is given");
      }
      std::size_t d = 0;
      if (fc.density.size() > 0) {
        check_square(fc.density, 0, where + ".density", errors);
        if (fc.density.is_square()) {
          d = fc.density.rows();
          for (const auto& v : density_violations(fc.density, cfg.tol)) errors.push_back(where + ".density: " + v);
        }
      }
      for (const char* side : {"left_generators", "right_generators"}) {
        if (!fj.contains(side)) continue;
        auto mats = parse_matrix_list(fj[side], where + "." + side, errors);
        for (std::size_t k = 0; k < mats.size(); ++k) {
          check_square(mats[k], d, where + "." + side + "[" + std::to_string(k) + "]", errors);
        }
        (std::string(side) == "left_generators" ? fc.left_generators : fc.right_generators) = std::move(mats);
      }
      if (fj.contains("product_split")) {
        const auto& ps = fj["product_split"];
        if (!ps.is_array() || ps.size() != 2 || !ps[0].is_number_integer() || !ps[1].is_number_integer()) {
          errors.push_back(where + ".product_split: expected [dimL, dimR]");
        } else {
          fc.product_split = {ps[0].get<std::size_t>(), ps[1].get<std::size_t>()};
          if (d != 0 && fc.product_split->first * fc.product_split->second != d) {
            errors.push_back(where + ".product_split: dimL*dimR must equal the face dimension");
          }
        }
      }
      cfg.faces.push_back(std::move(fc));
    }
  }

  read_count(j, "truncation", cfg.truncation, errors);
  read_count(j, "word_len_max", cfg.word_len_max, errors);
  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer()) {
      errors.push_back("'seed' must be an integer");
    } else {
      cfg.seed = j["seed"].get<std::uint64_t>();
    }
  }
  if (j.contains("tolerance")) {
    const auto& t = j["tolerance"];
    for (const char* key : {"eq_tol", "rank_tol"}) {
      if (!t.contains(key)) continue;
      if (!t[key].is_number() || t[key].get<double>() <= 0.0) {
        errors.push_back(std::string("tolerance.") + key + " must be a positive number");
      } else {
        (std::string(key) == "eq_tol" ? cfg.tol.eq_tol : cfg.tol.rank_tol) = t[key].get<double>();
      }
    }
  }

  if (!j.contains("checks") || !j["checks"].is_array() || j["checks"].empty()) {
    errors.push_back("'checks' must be a non-empty list");
  } else {
    for (const auto& c : j["checks"]) {
      if (!c.is_string()) {
        errors.push_back("'checks' entries must be strings");
        continue;
      }
      const auto name = c.get<std::string>();
      if (std::find(known_checks().begin(), known_checks().end(), name) == known_checks().end()) {
        errors.push_back("unknown check '" + name + "'");
      } else if (std::find(cfg.checks.begin(), cfg.checks.end(), name) != cfg.checks.end()) {
        errors.push_back("check '" + name + "' is listed twice");
      } else {
        cfg.checks.push_back(name);
      }
    }
  }

  if (j.contains("witness")) {
    const auto& w = j["witness"];
    cfg.witness_given = true;
    read_count(w, "face_i", cfg.witness.face_i, errors);
    read_count(w, "face_j", cfg.witness.face_j, errors);
    for (const char* key : {"a_l", "a_r", "b"}) {
      if (!w.contains(key)) {
        errors.push_back(std::string("witness.") + key + " is required");
        continue;
      }
      CMatrix m = parse_matrix(w[key], std::string("witness.") + key, errors);
      const std::string k = key;
      (k == "a_l" ? cfg.witness.a_l : k == "a_r" ? cfg.witness.a_r : cfg.witness.b) = std::move(m);
    }
    if (w.contains("b_side")) {
      const auto s = w["b_side"].is_string() ? w["b_side"].get<std::string>() : "";
      if (s == "l" || s == "left") {
        cfg.witness.b_side = Side::Left;
      } else if (s == "r" || s == "right") {
        cfg.witness.b_side = Side::Right;
      } else {
        errors.push_back("witness.b_side must be 'l' or 'r'");
      }
    }
  }
  if (j.contains("vh_compression")) {
    const auto& v = j["vh_compression"];
    read_count(v, "face_i", cfg.vh_face_i, errors);
    read_count(v, "face_j", cfg.vh_face_j, errors);
    if (v.contains("h")) cfg.vh_h = parse_vector(v["h"], "vh_compression.h", errors);
  }
  if (j.contains("biindependence")) {
    const auto& b = j["biindependence"];
    read_count(b, "max_words", cfg.biindependence_max_words, errors);
    if (b.contains("words")) {
      if (!b["words"].is_array()) {
        errors.push_back("biindependence.words must be a list of letter-index lists");
      } else {
        for (const auto& w : b["words"]) {
          std::vector<std::size_t> word;
          bool good = w.is_array();
          if (good)
            for (const auto& x : w) {
              if (!x.is_number_integer() || x.get<long long>() < 0) good = false;
              else word.push_back(x.get<std::size_t>());
            }
          if (!good) errors.push_back("biindependence.words entries must be lists of non-negative integers");
          else cfg.biindependence_words.push_back(std::move(word));
        }
      }
    }
  }
  if (j.contains("kernel_probe")) {
    std::size_t n = 0;
    if (read_count(j["kernel_probe"], "word_len_max", n, errors)) cfg.kernel_probe_word_len = n;
  }
  if (j.contains("corollary")) read_count(j["corollary"], "probe_word_len", cfg.probe_word_len, errors);

  if (j.contains("expected")) {
    if (!j["expected"].is_object()) {
      errors.push_back("'expected' must be an object keyed by check name");
    } else {
      for (const auto& [name, block] : j["expected"].items()) {
        if (std::find(cfg.checks.begin(), cfg.checks.end(), name) == cfg.checks.end()) {
          errors.push_back("expected block for check '" + name + "' which is not requested");
        } else if (!block.is_object()) {
          errors.push_back("expected." + name + " must be an object");
        }
      }
      cfg.expected = j["expected"];
    }
  }

  if (std::find(cfg.checks.begin(), cfg.checks.end(), "witness") != cfg.checks.end() && !cfg.witness_given) {
    errors.push_back("check 'witness' requires a 'witness' block");
  }

  if (!errors.empty()) return res;

  if (cfg.truncation < cfg.word_len_max) {
    cfg.warnings.push_back("truncation is below word_len_max; long moments are not truncation-exact");
  }
  try {
    const FaceFamily family = build_family(cfg);
    if (!family.nontrivial()) cfg.warnings.push_back("face family is trivial (fewer than two pairs or a scalar pair)");
  } catch (const std::exception& e) {
    errors.push_back(std::string("faces: ") + e.what());
    return res;
  }
  res.config = std::move(cfg);
  return res;
}

FaceFamily build_family(const ExperimentConfig& config) {
  FaceFamily family;
  for (const auto& f : config.faces) {
    family.pairs.push_back(make_face_pair(f.left_generators, f.right_generators, f.density, config.tol));
  }
  return family;
}

}  // namespace bfp
