#include "apq/config_io.hpp"

#include "apq/errors.hpp"
#include "apq/hypotheses.hpp"

#include <json.hpp>

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace apq {

namespace {

using nlohmann::json;

[[noreturn]] void fail_validation(const std::string& field, const std::string& constraint) {
  throw ValidationError("config field '" + field + "': " + constraint);
}

// Tracks consumed keys of one JSON object; unknown keys are rejected in
// strict mode and reported otherwise.
class ObjectReader {
public:
  ObjectReader(const json& obj, std::string path, bool strict)
      : obj_(obj), path_(std::move(path)), strict_(strict) {
    if (!obj_.is_object()) fail_validation(path_, "must be a JSON object");
  }

  const json* get(const char* key) {
    seen_.insert(key);
    const auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (seen_.count(key)) continue;
      const std::string where = path_.empty() ? key : path_ + "." + key;
      if (strict_) throw ParseError("unknown config key '" + where + "'");
      std::cerr << "warning: ignoring unknown config key '" << where << "'\n";
    }
  }

private:
  const json& obj_;
  std::string path_;
  bool strict_;
  std::set<std::string> seen_;
};

double require_number(const json& j, const std::string& field) {
  if (!j.is_number()) fail_validation(field, "must be a number");
  return j.get<double>();
}

long require_integer(const json& j, const std::string& field) {
  if (!j.is_number_integer()) fail_validation(field, "must be an integer");
  return j.get<long>();
}

FieldSpec parse_field(const json& j, const std::string& path, bool strict) {
  ObjectReader rd(j, path, strict);
  const json* kind = rd.get("kind");
  if (!kind || !kind->is_string()) fail_validation(path + ".kind", "must be a string");
  FieldSpec fs;
  const std::string k = kind->get<std::string>();
  if (k == "constant") {
    fs.kind = FieldSpec::Kind::Constant;
    const json* v = rd.get("value");
    if (!v) fail_validation(path + ".value", "required for constant fields");
    fs.value = require_number(*v, path + ".value");
  } else if (k == "affine") {
    fs.kind = FieldSpec::Kind::Affine;
    const json* a = rd.get("a");
    const json* b = rd.get("b");
    const json* c = rd.get("c");
    if (!a) fail_validation(path + ".a", "required for affine fields");
    fs.a = require_number(*a, path + ".a");
    fs.b = b ? require_number(*b, path + ".b") : 0.0;
    fs.c = c ? require_number(*c, path + ".c") : 0.0;
  } else if (k == "table") {
    fs.kind = FieldSpec::Kind::Table;
    const json* v = rd.get("values");
    if (!v || !v->is_array()) fail_validation(path + ".values", "must be an array");
    for (const auto& x : *v) fs.table.push_back(require_number(x, path + ".values[]"));
  } else {
    fail_validation(path + ".kind", "must be one of constant|affine|table");
  }
  rd.finish();
  return fs;
}

ThetaSpec parse_theta(const json& j, const std::string& path, bool strict) {
  ThetaSpec ts;
  if (j.is_object() && j.contains("kind") && j["kind"] == "auto-fraction") {
    ObjectReader rd(j, path, strict);
    rd.get("kind");
    const json* v = rd.get("value");
    if (!v) fail_validation(path + ".value", "required for auto-fraction");
    ts.kind = ThetaSpec::Kind::AutoFraction;
    ts.fraction = require_number(*v, path + ".value");
    if (!(ts.fraction > 0.0 && ts.fraction < 1.0)) {
      fail_validation(path + ".value", "auto-fraction must lie in (0, 1)");
    }
    rd.finish();
    return ts;
  }
  ts.kind = ThetaSpec::Kind::Field;
  ts.field = parse_field(j, path, strict);
  return ts;
}

ProblemSpec parse_spec(const json& root, bool strict) {
  ProblemSpec spec;
  ObjectReader rd(root, "", strict);

  if (const json* dom = rd.get("domain")) {
    ObjectReader d(*dom, "domain", strict);
    if (const json* v = d.get("dim")) {
      const long dim = require_integer(*v, "domain.dim");
      if (dim != 1 && dim != 2) fail_validation("domain.dim", "must be 1 or 2");
      spec.domain.dim = static_cast<int>(dim);
    }
    if (const json* v = d.get("lengths")) {
      if (!v->is_array()) fail_validation("domain.lengths", "must be an array");
      spec.domain.lengths.clear();
      for (const auto& x : *v) {
        spec.domain.lengths.push_back(require_number(x, "domain.lengths[]"));
      }
    }
    if (const json* v = d.get("resolution")) {
      if (!v->is_array()) fail_validation("domain.resolution", "must be an array");
      spec.domain.resolution.clear();
      for (const auto& x : *v) {
        spec.domain.resolution.push_back(
            static_cast<int>(require_integer(x, "domain.resolution[]")));
      }
    }
    d.finish();
    if (spec.domain.lengths.size() != static_cast<std::size_t>(spec.domain.dim)) {
      fail_validation("domain.lengths", "must supply one extent per axis");
    }
    if (spec.domain.resolution.size() != static_cast<std::size_t>(spec.domain.dim)) {
      fail_validation("domain.resolution", "must supply one cell count per axis");
    }
    for (const double len : spec.domain.lengths) {
      if (!(len > 0.0)) fail_validation("domain.lengths", "extents must be positive");
    }
    for (const int n : spec.domain.resolution) {
      if (n < 2) fail_validation("domain.resolution", "needs at least 2 cells per axis");
    }
  }

  if (const json* exps = rd.get("exponents")) {
    ObjectReader e(*exps, "exponents", strict);
    if (const json* v = e.get("p")) spec.p = parse_field(*v, "exponents.p", strict);
    if (const json* v = e.get("q")) spec.q = parse_field(*v, "exponents.q", strict);
    if (const json* v = e.get("tau")) spec.tau = parse_field(*v, "exponents.tau", strict);
    if (const json* v = e.get("mu")) spec.mu = parse_field(*v, "exponents.mu", strict);
    e.finish();
  }

  if (const json* coef = rd.get("coefficients")) {
    ObjectReader c(*coef, "coefficients", strict);
    if (const json* v = c.get("r_hat")) {
      spec.coefficients.r_hat = parse_field(*v, "coefficients.r_hat", strict);
    }
    if (const json* v = c.get("theta")) {
      spec.coefficients.theta = parse_theta(*v, "coefficients.theta", strict);
    }
    if (const json* v = c.get("c0")) {
      spec.coefficients.c0 = require_number(*v, "coefficients.c0");
      if (!(spec.coefficients.c0 > 0.0)) fail_validation("coefficients.c0", "must be positive");
    }
    if (const json* v = c.get("delta")) {
      spec.coefficients.delta = require_number(*v, "coefficients.delta");
      if (!(spec.coefficients.delta > 0.0)) {
        fail_validation("coefficients.delta", "must be positive");
      }
    }
    if (const json* v = c.get("C8")) {
      spec.coefficients.C8 = require_number(*v, "coefficients.C8");
    }
    if (const json* v = c.get("r_aux")) {
      spec.coefficients.r_aux = require_number(*v, "coefficients.r_aux");
    }
    c.finish();
  }

  if (const json* sol = rd.get("solver")) {
    ObjectReader s(*sol, "solver", strict);
    auto number = [&](const char* key, double& slot, bool positive) {
      if (const json* v = s.get(key)) {
        slot = require_number(*v, std::string("solver.") + key);
        if (positive && !(slot > 0.0)) {
          fail_validation(std::string("solver.") + key, "must be positive");
        }
      }
    };
    auto count = [&](const char* key, long& slot) {
      if (const json* v = s.get(key)) {
        slot = require_integer(*v, std::string("solver.") + key);
        if (slot < 1) fail_validation(std::string("solver.") + key, "must be >= 1");
      }
    };
    if (const json* v = s.get("eps_reg")) {
      spec.solver.eps_reg = require_number(*v, "solver.eps_reg");
      if (!(spec.solver.eps_reg >= 0.0 && spec.solver.eps_reg < 1e-6)) {
        fail_validation("solver.eps_reg", "must lie in [0, 1e-6)");
      }
    }
    number("tol_inner", spec.solver.tol_inner, true);
    number("tol_middle", spec.solver.tol_middle, true);
    number("tol_outer", spec.solver.tol_outer, true);
    number("tol_eigen", spec.solver.tol_eigen, true);
    count("max_inner", spec.solver.max_inner);
    count("max_middle", spec.solver.max_middle);
    count("max_outer", spec.solver.max_outer);
    count("max_eigen", spec.solver.max_eigen);
    if (const json* v = s.get("damping")) {
      spec.solver.damping = require_number(*v, "solver.damping");
      if (!(spec.solver.damping > 0.0 && spec.solver.damping <= 1.0)) {
        fail_validation("solver.damping", "must lie in (0, 1]");
      }
    }
    if (const json* v = s.get("homotopy_grid")) {
      if (!v->is_array()) fail_validation("solver.homotopy_grid", "must be an array");
      spec.solver.homotopy_grid.clear();
      for (const auto& x : *v) {
        const double t = require_number(x, "solver.homotopy_grid[]");
        if (!(t > 0.0 && t < 1.0)) {
          fail_validation("solver.homotopy_grid", "values must lie in (0, 1)");
        }
        spec.solver.homotopy_grid.push_back(t);
      }
    }
    number("homotopy_bound", spec.solver.homotopy_bound, true);
    s.finish();
  }

  if (const json* outp = rd.get("output")) {
    ObjectReader o(*outp, "output", strict);
    if (const json* v = o.get("directory")) {
      if (!v->is_string()) fail_validation("output.directory", "must be a string");
      spec.output.directory = v->get<std::string>();
    }
    if (const json* v = o.get("formats")) {
      if (!v->is_array()) fail_validation("output.formats", "must be an array");
      spec.output.formats.clear();
      for (const auto& x : *v) {
        if (!x.is_string()) fail_validation("output.formats", "entries must be strings");
        const std::string fmt = x.get<std::string>();
        if (fmt != "csv" && fmt != "vtk") {
          fail_validation("output.formats", "supported formats are csv and vtk");
        }
        spec.output.formats.push_back(fmt);
      }
    }
    o.finish();
  }
  rd.finish();
  return spec;
}

json field_to_json(const FieldSpec& fs) {
  switch (fs.kind) {
    case FieldSpec::Kind::Constant:
      return {{"kind", "constant"}, {"value", fs.value}};
    case FieldSpec::Kind::Affine:
      return {{"kind", "affine"}, {"a", fs.a}, {"b", fs.b}, {"c", fs.c}};
    case FieldSpec::Kind::Table:
      break;
  }
  return {{"kind", "table"}, {"values", fs.table}};
}

} // namespace

ProblemSpec parse_config_text(std::string_view text, bool strict) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < std::min(e.byte, text.size()); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError("config parse error at line " + std::to_string(line) + ", column " +
                     std::to_string(col) + ": " + e.what());
  }
  ProblemSpec spec = parse_spec(root, strict);
  // Statically checkable hypothesis clauses gate the configuration here;
  // the lambda1-dependent ones are enforced after the eigen stage.
  Problem probe(spec);
  enforce_hypotheses(probe);
  return spec;
}

ProblemSpec parse_config(const std::string& path, bool strict) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), strict);
}

std::string resolved_config_text(const ProblemSpec& spec) {
  json root;
  root["domain"] = {{"dim", spec.domain.dim},
                    {"lengths", spec.domain.lengths},
                    {"resolution", spec.domain.resolution}};
  root["exponents"] = {{"p", field_to_json(spec.p)},
                       {"q", field_to_json(spec.q)},
                       {"tau", field_to_json(spec.tau)},
                       {"mu", field_to_json(spec.mu)}};
  json theta;
  if (spec.coefficients.theta.kind == ThetaSpec::Kind::AutoFraction) {
    theta = {{"kind", "auto-fraction"}, {"value", spec.coefficients.theta.fraction}};
  } else {
    theta = field_to_json(spec.coefficients.theta.field);
  }
  root["coefficients"] = {{"r_hat", field_to_json(spec.coefficients.r_hat)},
                          {"theta", theta},
                          {"c0", spec.coefficients.c0},
                          {"delta", spec.coefficients.delta}};
  if (spec.coefficients.C8) root["coefficients"]["C8"] = *spec.coefficients.C8;
  if (spec.coefficients.r_aux) root["coefficients"]["r_aux"] = *spec.coefficients.r_aux;
  root["solver"] = {{"eps_reg", spec.solver.eps_reg},
                    {"tol_inner", spec.solver.tol_inner},
                    {"tol_middle", spec.solver.tol_middle},
                    {"tol_outer", spec.solver.tol_outer},
                    {"tol_eigen", spec.solver.tol_eigen},
                    {"max_inner", spec.solver.max_inner},
                    {"max_middle", spec.solver.max_middle},
                    {"max_outer", spec.solver.max_outer},
                    {"max_eigen", spec.solver.max_eigen},
                    {"damping", spec.solver.damping},
                    {"homotopy_grid", spec.solver.homotopy_grid},
                    {"homotopy_bound", spec.solver.homotopy_bound}};
  root["output"] = {{"directory", spec.output.directory}, {"formats", spec.output.formats}};
  return root.dump(2) + "\n";
}

} // namespace apq
