#include "pdde/config_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace pdde {

namespace {

PeriodicFn fn_from_json(const json& j, double omega, bool nonneg,
                        const std::string& name) {
  if (!j.is_object() || !j.contains("mean"))
    throw ModelError("config", "coefficient '" + name + "' must be an object "
                               "with mean/cos/sin");
  std::vector<double> cs, sn;
  if (j.contains("cos")) cs = j.at("cos").get<std::vector<double>>();
  if (j.contains("sin")) sn = j.at("sin").get<std::vector<double>>();
  return PeriodicFn(omega, j.at("mean").get<double>(), std::move(cs),
                    std::move(sn), nonneg, name);
}

json fn_to_json(const PeriodicFn& f) {
  json j;
  j["mean"] = f.mean();
  j["cos"] = f.cos_coeffs();
  j["sin"] = f.sin_coeffs();
  return j;
}

ImpulseMap map_from_json(const json& j) {
  const std::string kind = j.value("kind", "none");
  if (kind == "none") return ImpulseMap::none();
  if (kind == "linear") return ImpulseMap::linear(j.at("eta").get<double>());
  if (kind == "saturating")
    return ImpulseMap::saturating(j.at("eta").get<double>(),
                                  j.at("scale").get<double>());
  if (kind == "bounded_slope") {
    std::vector<std::pair<double, double>> knots;
    for (const auto& row : j.at("table"))
      knots.emplace_back(row.at(0).get<double>(), row.at(1).get<double>());
    std::optional<double> r0;
    if (j.contains("ratio0")) r0 = j.at("ratio0").get<double>();
    return ImpulseMap::bounded_slope(j.at("alpha").get<double>(),
                                     j.at("eta").get<double>(), std::move(knots),
                                     r0);
  }
  throw ModelError("config", "unknown impulse kind '" + kind + "'");
}

json map_to_json(const ImpulseMap& m) {
  json j;
  j["kind"] = to_string(m.kind());
  switch (m.kind()) {
    case ImpulseKind::none:
      break;
    case ImpulseKind::linear:
      j["eta"] = m.upper_slope();
      break;
    case ImpulseKind::saturating:
      j["eta"] = 1.0 / m.ratio0() - 1.0;
      j["scale"] = m.scale();
      break;
    case ImpulseKind::bounded_slope: {
      j["alpha"] = m.lower_slope();
      j["eta"] = m.upper_slope();
      json table = json::array();
      for (const auto& [u, f] : m.knots()) table.push_back({u, f});
      j["table"] = table;
      j["ratio0"] = m.ratio0();
      break;
    }
  }
  return j;
}

double limit_from_json(const json& j) {
  if (j.is_string() && j.get<std::string>() == "inf")
    return std::numeric_limits<double>::infinity();
  return j.get<double>();
}

json limit_to_json(double v) {
  if (std::isinf(v)) return json("inf");
  return json(v);
}

} // namespace

SystemSpec load_system(const json& j) {
  SystemSpec s;
  if (j.value("schema", "") != "pdde-system-v1")
    throw ModelError("config", "missing or unsupported schema marker");
  s.omega = j.at("omega").get<double>();
  s.n = j.at("n").get<int>();
  const auto& comps = j.at("components");
  if (int(comps.size()) != s.n)
    throw ModelError("config", "components array does not match n");

  for (int i = 0; i < s.n; ++i) {
    const auto& c = comps[std::size_t(i)];
    const std::string ci = std::to_string(i + 1);
    s.death.push_back(fn_from_json(c.at("death"), s.omega, true, "d" + ci));
    std::vector<PeriodicFn> row;
    const auto& coup = c.at("coupling");
    if (int(coup.size()) != s.n)
      throw ModelError("config", "coupling row " + ci + " must have n entries");
    for (int jj = 0; jj < s.n; ++jj)
      row.push_back(fn_from_json(coup[std::size_t(jj)], s.omega, true,
                                 "a" + ci + std::to_string(jj + 1)));
    s.coupling.push_back(std::move(row));

    NonlinearityDescriptor d;
    const auto& birth = c.at("birth");
    d.kind = nonlin_kind_from_string(birth.at("kind").get<std::string>());
    for (const auto& tj : birth.at("terms")) {
      NonlinTerm term;
      term.beta = fn_from_json(tj.at("beta"), s.omega, true, "beta" + ci);
      if (tj.contains("c"))
        term.c = fn_from_json(tj.at("c"), s.omega, true, "c" + ci);
      term.tau = fn_from_json(tj.at("tau"), s.omega, true, "tau" + ci);
      if (tj.contains("theta"))
        term.theta = fn_from_json(tj.at("theta"), s.omega, true, "theta" + ci);
      if (tj.contains("gamma"))
        term.gamma = fn_from_json(tj.at("gamma"), s.omega, true, "gamma" + ci);
      if (tj.contains("alpha")) term.alpha = tj.at("alpha").get<double>();
      if (tj.contains("table")) {
        for (const auto& row2 : tj.at("table")) {
          term.table.u.push_back(row2.at(0).get<double>());
          term.table.f.push_back(row2.at(1).get<double>());
        }
      }
      d.terms.push_back(std::move(term));
    }
    s.birth.push_back(std::move(d));
  }

  if (j.contains("impulses")) {
    const auto& imp = j.at("impulses");
    s.impulses.instants = imp.at("instants").get<std::vector<double>>();
    for (const auto& row : imp.at("maps")) {
      std::vector<ImpulseMap> maps;
      for (const auto& mj : row) maps.push_back(map_from_json(mj));
      s.impulses.maps.push_back(std::move(maps));
    }
  }

  if (j.contains("envelopes")) {
    EnvelopePair env;
    const auto& ej = j.at("envelopes");
    for (int i = 0; i < s.n; ++i) {
      env.b1.push_back(fn_from_json(ej.at("b1")[std::size_t(i)], s.omega, true,
                                    "b1" + std::to_string(i + 1)));
      env.b2.push_back(fn_from_json(ej.at("b2")[std::size_t(i)], s.omega, true,
                                    "b2" + std::to_string(i + 1)));
    }
    env.r0 = ej.at("r0").get<double>();
    env.R0 = ej.at("R0").get<double>();
    s.envelopes = env;
  }

  if (j.contains("limits")) {
    LimitProfile lp;
    const auto& lj = j.at("limits");
    for (const auto& key : {"f0", "F0", "finf", "Finf"}) {
      std::vector<double> vals;
      for (const auto& x : lj.at(key)) vals.push_back(limit_from_json(x));
      if (std::string(key) == "f0") lp.f0 = vals;
      else if (std::string(key) == "F0") lp.F0 = vals;
      else if (std::string(key) == "finf") lp.finf = vals;
      else lp.Finf = vals;
    }
    s.limits = lp;
  }

  s.validate();
  return s;
}

SystemSpec load_system_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("config", "cannot read '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const std::exception& ex) {
    throw ModelError("config", "parse failure in '" + path + "': " + ex.what());
  }
  return load_system(j);
}

json save_system(const SystemSpec& spec) {
  json j;
  j["schema"] = "pdde-system-v1";
  j["omega"] = spec.omega;
  j["n"] = spec.n;
  json comps = json::array();
  for (int i = 0; i < spec.n; ++i) {
    json c;
    c["death"] = fn_to_json(spec.death[std::size_t(i)]);
    json coup = json::array();
    for (int jj = 0; jj < spec.n; ++jj)
      coup.push_back(fn_to_json(spec.coupling[std::size_t(i)][std::size_t(jj)]));
    c["coupling"] = coup;
    const auto& d = spec.birth[std::size_t(i)];
    json birth;
    birth["kind"] = to_string(d.kind);
    json terms = json::array();
    for (const auto& term : d.terms) {
      json tj;
      tj["beta"] = fn_to_json(term.beta);
      switch (d.kind) {
        case NonlinKind::nicholson_discrete:
          tj["c"] = fn_to_json(term.c);
          tj["tau"] = fn_to_json(term.tau);
          break;
        case NonlinKind::nicholson_distributed:
          tj["gamma"] = fn_to_json(term.gamma);
          tj["c"] = fn_to_json(term.c);
          tj["tau"] = fn_to_json(term.tau);
          break;
        case NonlinKind::nicholson_mixed:
          tj["c"] = fn_to_json(term.c);
          tj["tau"] = fn_to_json(term.tau);
          tj["theta"] = fn_to_json(term.theta);
          break;
        case NonlinKind::hematopoiesis_discrete:
        case NonlinKind::hematopoiesis_distributed:
        case NonlinKind::mackey_glass_distributed:
          tj["c"] = fn_to_json(term.c);
          tj["tau"] = fn_to_json(term.tau);
          tj["alpha"] = term.alpha;
          break;
        case NonlinKind::custom_table: {
          tj["tau"] = fn_to_json(term.tau);
          json table = json::array();
          for (std::size_t k = 0; k < term.table.u.size(); ++k)
            table.push_back({term.table.u[k], term.table.f[k]});
          tj["table"] = table;
          break;
        }
      }
      terms.push_back(tj);
    }
    birth["terms"] = terms;
    c["birth"] = birth;
    comps.push_back(c);
  }
  j["components"] = comps;

  if (!spec.impulses.empty()) {
    json imp;
    imp["instants"] = spec.impulses.instants;
    json rows = json::array();
    for (const auto& row : spec.impulses.maps) {
      json r = json::array();
      for (const auto& m : row) r.push_back(map_to_json(m));
      rows.push_back(r);
    }
    imp["maps"] = rows;
    j["impulses"] = imp;
  }

  if (spec.envelopes) {
    json ej;
    json b1 = json::array(), b2 = json::array();
    for (const auto& f : spec.envelopes->b1) b1.push_back(fn_to_json(f));
    for (const auto& f : spec.envelopes->b2) b2.push_back(fn_to_json(f));
    ej["b1"] = b1;
    ej["b2"] = b2;
    ej["r0"] = spec.envelopes->r0;
    ej["R0"] = spec.envelopes->R0;
    j["envelopes"] = ej;
  }

  if (spec.limits) {
    json lj;
    for (const auto& [key, vec] :
         std::vector<std::pair<std::string, const std::vector<double>*>>{
             {"f0", &spec.limits->f0},
             {"F0", &spec.limits->F0},
             {"finf", &spec.limits->finf},
             {"Finf", &spec.limits->Finf}}) {
      json arr = json::array();
      for (double v : *vec) arr.push_back(limit_to_json(v));
      lj[key] = arr;
    }
    j["limits"] = lj;
  }
  return j;
}

std::string spec_digest(const SystemSpec& spec) {
  const std::string s = save_system(spec).dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

} // namespace pdde
