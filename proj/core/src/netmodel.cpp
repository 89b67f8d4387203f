#include "gridfdi/netmodel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gridfdi/errors.hpp"

namespace gridfdi::net {

using json = nlohmann::ordered_json;

const char* to_string(BusKind kind) {
  switch (kind) {
    case BusKind::slack: return "slack";
    case BusKind::pv: return "pv";
    case BusKind::pq: return "pq";
  }
  return "pq";
}

BusKind bus_kind_from_string(const std::string& s) {
  if (s == "slack") return BusKind::slack;
  if (s == "pv") return BusKind::pv;
  if (s == "pq") return BusKind::pq;
  throw ParseError("unknown bus kind '" + s + "'");
}

int NetworkCase::bus_index(int id) const {
  // normalized cases have ids 1..n in order; fall back to a scan for
  // hand-built structs that have not gone through parse_case
  if (id >= 1 && id <= static_cast<int>(buses.size()) && buses[id - 1].id == id)
    return id - 1;
  for (std::size_t i = 0; i < buses.size(); ++i)
    if (buses[i].id == id) return static_cast<int>(i);
  throw ValidationError("bus id " + std::to_string(id) + " not in case");
}

const Bus& NetworkCase::bus(int id) const { return buses[bus_index(id)]; }

int NetworkCase::slack_bus() const {
  for (const auto& b : buses)
    if (b.kind == BusKind::slack) return b.id;
  throw ValidationError("case has no slack bus");
}

const GeneratorSpec* NetworkCase::generator_at(int bus_id) const {
  for (const auto& g : generators)
    if (g.bus == bus_id) return &g;
  return nullptr;
}

std::vector<int> NetworkCase::generator_buses() const {
  std::vector<int> out;
  for (const auto& g : generators) out.push_back(g.bus);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> NetworkCase::load_buses() const {
  const auto gen_vec = generator_buses();
  std::set<int> gen(gen_vec.begin(), gen_vec.end());
  std::vector<int> out;
  for (const auto& b : buses)
    if (!gen.count(b.id)) out.push_back(b.id);
  std::sort(out.begin(), out.end());
  return out;
}

void validate(const NetworkCase& c) {
  if (c.base_mva <= 0.0) throw ValidationError("base_mva must be positive");
  if (c.buses.empty()) throw ValidationError("case has no buses");

  std::set<int> ids;
  std::vector<int> slacks;
  for (const auto& b : c.buses) {
    if (!ids.insert(b.id).second)
      throw ValidationError("duplicate bus id " + std::to_string(b.id));
    if (b.v_min <= 0.0)
      throw ValidationError("bus " + std::to_string(b.id) + ": v_min must be positive");
    if (b.v_min > b.v_max)
      throw ValidationError("bus " + std::to_string(b.id) + ": v_min exceeds v_max");
    if (b.kind == BusKind::slack) slacks.push_back(b.id);
  }
  const int n = static_cast<int>(c.buses.size());
  for (int i = 0; i < n; ++i)
    if (c.buses[i].id != i + 1)
      throw ValidationError("bus ids not contiguous after normalization");
  if (slacks.empty()) throw ValidationError("case has no slack bus");
  if (slacks.size() > 1) {
    std::ostringstream os;
    os << "multiple slack buses:";
    for (int id : slacks) os << " " << id;
    throw ValidationError(os.str());
  }

  for (std::size_t k = 0; k < c.branches.size(); ++k) {
    const auto& br = c.branches[k];
    const std::string tag = "branch " + std::to_string(k + 1);
    if (!ids.count(br.from) || !ids.count(br.to))
      throw ValidationError(tag + ": dangling bus reference");
    if (br.from == br.to) throw ValidationError(tag + ": from equals to");
    if (br.r == 0.0 && br.x == 0.0) throw ValidationError(tag + ": r and x both zero");
    if (br.b_sh < 0.0) throw ValidationError(tag + ": negative b_sh");
    if (br.tap <= 0.0) throw ValidationError(tag + ": nonpositive tap");
  }

  std::set<int> gen_buses;
  for (const auto& g : c.generators) {
    const std::string tag = "generator at bus " + std::to_string(g.bus);
    if (!ids.count(g.bus)) throw ValidationError(tag + ": dangling bus reference");
    if (!gen_buses.insert(g.bus).second)
      throw ValidationError(tag + ": more than one generator on the bus");
    if (g.h_s <= 0.0) throw ValidationError(tag + ": nonpositive inertia");
    if (g.x_q_pu <= 0.0) throw ValidationError(tag + ": nonpositive x_q");
    if (g.d_pu < 0.0) throw ValidationError(tag + ": negative damping");
    if (g.r_a_pu < 0.0) throw ValidationError(tag + ": negative armature resistance");
    if (g.omega_s_rad_s <= 0.0) throw ValidationError(tag + ": nonpositive omega_s");
    if (g.v_set_pu <= 0.0) throw ValidationError(tag + ": nonpositive v_set");
    const auto kind = c.bus(g.bus).kind;
    if (kind == BusKind::pq)
      throw ValidationError(tag + ": generator on a pq bus");
  }
  for (const auto& b : c.buses) {
    if (b.kind != BusKind::pq && !gen_buses.count(b.id))
      throw ValidationError("bus " + std::to_string(b.id) + ": " +
                            std::string(to_string(b.kind)) + " bus without a generator");
  }

  for (const auto& l : c.loads) {
    const std::string tag = "load at bus " + std::to_string(l.bus);
    if (!ids.count(l.bus)) throw ValidationError(tag + ": dangling bus reference");
    if (gen_buses.count(l.bus))
      throw ValidationError(tag + ": loads must sit on non-generator buses");
  }
}

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.count(key))
      throw ParseError(where + ": unknown key '" + key + "'");
  }
}

double require_number(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw ParseError(where + ": missing key '" + key + "'");
  if (!obj[key].is_number()) throw ParseError(where + ": key '" + key + "' must be a number");
  return obj[key].get<double>();
}

double number_or(const json& obj, const std::string& key, double fallback,
                 const std::string& where) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) throw ParseError(where + ": key '" + key + "' must be a number");
  return obj[key].get<double>();
}

int require_int(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw ParseError(where + ": missing key '" + key + "'");
  if (!obj[key].is_number_integer())
    throw ParseError(where + ": key '" + key + "' must be an integer");
  return obj[key].get<int>();
}

/// Remap arbitrary unique bus ids to contiguous 1..n, ascending.
void normalize_bus_ids(NetworkCase& c) {
  std::vector<int> order;
  for (const auto& b : c.buses) order.push_back(b.id);
  std::sort(order.begin(), order.end());
  std::map<int, int> remap;
  for (std::size_t i = 0; i < order.size(); ++i) remap[order[i]] = static_cast<int>(i) + 1;
  if (remap.size() != c.buses.size()) return;  // duplicate ids; validate() reports them

  std::sort(c.buses.begin(), c.buses.end(),
            [](const Bus& a, const Bus& b) { return a.id < b.id; });
  for (auto& b : c.buses) b.id = remap[b.id];
  auto map_ref = [&](int id) {
    auto it = remap.find(id);
    return it == remap.end() ? id : it->second;
  };
  for (auto& br : c.branches) {
    br.from = map_ref(br.from);
    br.to = map_ref(br.to);
  }
  for (auto& g : c.generators) g.bus = map_ref(g.bus);
  for (auto& l : c.loads) l.bus = map_ref(l.bus);
}

}  // namespace

NetworkCase parse_case(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ParseError("top level must be an object");
  reject_unknown_keys(root, {"base_mva", "buses", "branches", "generators", "loads"}, "case");

  NetworkCase c;
  c.base_mva = number_or(root, "base_mva", 100.0, "case");

  if (!root.contains("buses") || !root["buses"].is_array())
    throw ParseError("case: missing 'buses' array");
  int idx = 0;
  for (const auto& jb : root["buses"]) {
    const std::string where = "buses[" + std::to_string(idx++) + "]";
    if (!jb.is_object()) throw ParseError(where + ": must be an object");
    reject_unknown_keys(jb, {"id", "kind", "v_min", "v_max", "name"}, where);
    Bus b;
    b.id = require_int(jb, "id", where);
    if (!jb.contains("kind") || !jb["kind"].is_string())
      throw ParseError(where + ": missing string key 'kind'");
    b.kind = bus_kind_from_string(jb["kind"].get<std::string>());
    b.v_min = number_or(jb, "v_min", 0.9, where);
    b.v_max = number_or(jb, "v_max", 1.1, where);
    if (jb.contains("name")) {
      if (!jb["name"].is_string()) throw ParseError(where + ": 'name' must be a string");
      b.name = jb["name"].get<std::string>();
    }
    c.buses.push_back(std::move(b));
  }

  idx = 0;
  if (root.contains("branches")) {
    if (!root["branches"].is_array()) throw ParseError("case: 'branches' must be an array");
    for (const auto& jb : root["branches"]) {
      const std::string where = "branches[" + std::to_string(idx++) + "]";
      if (!jb.is_object()) throw ParseError(where + ": must be an object");
      reject_unknown_keys(jb, {"from", "to", "r", "x", "b_sh", "tap"}, where);
      Branch br;
      br.from = require_int(jb, "from", where);
      br.to = require_int(jb, "to", where);
      br.r = require_number(jb, "r", where);
      br.x = require_number(jb, "x", where);
      br.b_sh = number_or(jb, "b_sh", 0.0, where);
      br.tap = number_or(jb, "tap", 1.0, where);
      c.branches.push_back(br);
    }
  }

  idx = 0;
  if (root.contains("generators")) {
    if (!root["generators"].is_array())
      throw ParseError("case: 'generators' must be an array");
    for (const auto& jg : root["generators"]) {
      const std::string where = "generators[" + std::to_string(idx++) + "]";
      if (!jg.is_object()) throw ParseError(where + ": must be an object");
      reject_unknown_keys(jg,
                          {"bus", "p_set_mw", "v_set_pu", "h_s", "d_pu", "r_a_pu",
                           "x_q_pu", "omega_s_rad_s"},
                          where);
      GeneratorSpec g;
      g.bus = require_int(jg, "bus", where);
      g.p_set_mw = number_or(jg, "p_set_mw", 0.0, where);
      g.v_set_pu = require_number(jg, "v_set_pu", where);
      g.h_s = require_number(jg, "h_s", where);
      g.d_pu = number_or(jg, "d_pu", 0.01, where);
      g.r_a_pu = number_or(jg, "r_a_pu", 0.0, where);
      g.x_q_pu = require_number(jg, "x_q_pu", where);
      g.omega_s_rad_s =
          number_or(jg, "omega_s_rad_s", 2.0 * std::numbers::pi * 60.0, where);
      c.generators.push_back(g);
    }
  }

  idx = 0;
  if (root.contains("loads")) {
    if (!root["loads"].is_array()) throw ParseError("case: 'loads' must be an array");
    for (const auto& jl : root["loads"]) {
      const std::string where = "loads[" + std::to_string(idx++) + "]";
      if (!jl.is_object()) throw ParseError(where + ": must be an object");
      reject_unknown_keys(jl, {"bus", "p_mw", "q_mvar"}, where);
      LoadSpec l;
      l.bus = require_int(jl, "bus", where);
      l.p_mw = require_number(jl, "p_mw", where);
      l.q_mvar = require_number(jl, "q_mvar", where);
      c.loads.push_back(l);
    }
  }

  // slack generators must not carry a power schedule
  for (std::size_t k = 0; k < c.generators.size(); ++k) {
    const auto& g = c.generators[k];
    bool is_slack = false;
    for (const auto& b : c.buses)
      if (b.id == g.bus && b.kind == BusKind::slack) is_slack = true;
    if (is_slack && root.contains("generators") &&
        root["generators"][k].contains("p_set_mw"))
      throw ParseError("generators[" + std::to_string(k) +
                       "]: p_set_mw is not allowed on the slack generator");
  }

  normalize_bus_ids(c);
  validate(c);
  return c;
}

std::string serialize_case(const NetworkCase& c) {
  json root;
  root["base_mva"] = c.base_mva;
  root["buses"] = json::array();
  for (const auto& b : c.buses) {
    json jb;
    jb["id"] = b.id;
    jb["kind"] = to_string(b.kind);
    jb["v_min"] = b.v_min;
    jb["v_max"] = b.v_max;
    jb["name"] = b.name;
    root["buses"].push_back(jb);
  }
  root["branches"] = json::array();
  for (const auto& br : c.branches) {
    json jb;
    jb["from"] = br.from;
    jb["to"] = br.to;
    jb["r"] = br.r;
    jb["x"] = br.x;
    jb["b_sh"] = br.b_sh;
    jb["tap"] = br.tap;
    root["branches"].push_back(jb);
  }
  root["generators"] = json::array();
  for (const auto& g : c.generators) {
    json jg;
    jg["bus"] = g.bus;
    if (c.bus(g.bus).kind != BusKind::slack) jg["p_set_mw"] = g.p_set_mw;
    jg["v_set_pu"] = g.v_set_pu;
    jg["h_s"] = g.h_s;
    jg["d_pu"] = g.d_pu;
    jg["r_a_pu"] = g.r_a_pu;
    jg["x_q_pu"] = g.x_q_pu;
    jg["omega_s_rad_s"] = g.omega_s_rad_s;
    root["generators"].push_back(jg);
  }
  root["loads"] = json::array();
  for (const auto& l : c.loads) {
    json jl;
    jl["bus"] = l.bus;
    jl["p_mw"] = l.p_mw;
    jl["q_mvar"] = l.q_mvar;
    root["loads"].push_back(jl);
  }
  return root.dump(2) + "\n";
}

Eigen::MatrixXd AdmittanceMatrix::block_form() const {
  const auto n = y.rows();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double g = y(i, j).real();
      const double b = y(i, j).imag();
      m(2 * i, 2 * j) = g;
      m(2 * i, 2 * j + 1) = -b;
      m(2 * i + 1, 2 * j) = b;
      m(2 * i + 1, 2 * j + 1) = g;
    }
  }
  return m;
}

AdmittanceMatrix build_ybus(const NetworkCase& c) {
  const auto n = static_cast<Eigen::Index>(c.buses.size());
  AdmittanceMatrix out;
  out.y = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t k = 0; k < c.branches.size(); ++k) {
    const auto& br = c.branches[k];
    if (br.r == 0.0 && br.x == 0.0)
      throw NumericError("branch " + std::to_string(k + 1) + ": singular (r = x = 0)");
    const std::complex<double> ys = 1.0 / std::complex<double>(br.r, br.x);
    const std::complex<double> ysh(0.0, br.b_sh / 2.0);
    const int f = c.bus_index(br.from);
    const int t = c.bus_index(br.to);
    out.y(f, f) += ys / (br.tap * br.tap) + ysh;
    out.y(t, t) += ys + ysh;
    out.y(f, t) -= ys / br.tap;
    out.y(t, f) -= ys / br.tap;
  }
  return out;
}

YbusPartition partition_ybus(const AdmittanceMatrix& y, const NetworkCase& c) {
  YbusPartition p;
  p.gen_buses = c.generator_buses();
  p.load_buses = c.load_buses();
  const auto ng = static_cast<Eigen::Index>(p.gen_buses.size());
  const auto nl = static_cast<Eigen::Index>(p.load_buses.size());

  std::vector<int> order;
  order.reserve(ng + nl);
  for (int id : p.gen_buses) order.push_back(c.bus_index(id));
  for (int id : p.load_buses) order.push_back(c.bus_index(id));

  const Eigen::MatrixXd m = y.block_form();
  Eigen::MatrixXd perm(2 * (ng + nl), 2 * (ng + nl));
  for (Eigen::Index i = 0; i < ng + nl; ++i)
    for (Eigen::Index j = 0; j < ng + nl; ++j)
      perm.block<2, 2>(2 * i, 2 * j) = m.block<2, 2>(2 * order[i], 2 * order[j]);

  p.y1 = perm.topLeftCorner(2 * ng, 2 * ng);
  p.y2 = perm.topRightCorner(2 * ng, 2 * nl);
  p.y3 = perm.bottomLeftCorner(2 * nl, 2 * ng);
  p.y4 = perm.bottomRightCorner(2 * nl, 2 * nl);
  return p;
}

Eigen::MatrixXd reassemble_partition(const YbusPartition& p) {
  const auto ng = p.y1.rows();
  const auto nl = p.y4.rows();
  Eigen::MatrixXd m(ng + nl, ng + nl);
  m.topLeftCorner(ng, ng) = p.y1;
  m.topRightCorner(ng, nl) = p.y2;
  m.bottomLeftCorner(nl, ng) = p.y3;
  m.bottomRightCorner(nl, nl) = p.y4;
  return m;
}

Eigen::MatrixXd augment_load_admittance(const Eigen::MatrixXd& y4,
                                        const std::vector<int>& load_buses,
                                        const std::vector<LoadSpec>& loads,
                                        double base_mva,
                                        const Eigen::VectorXcd& v_load) {
  Eigen::MatrixXd out = y4;
  for (const auto& load : loads) {
    const auto it = std::find(load_buses.begin(), load_buses.end(), load.bus);
    if (it == load_buses.end())
      throw ValidationError("load at bus " + std::to_string(load.bus) +
                            " is not on a load bus");
    const auto k = static_cast<Eigen::Index>(it - load_buses.begin());
    const double vm = std::abs(v_load(k));
    if (vm <= 0.0)
      throw NumericError("zero voltage magnitude at load bus " + std::to_string(load.bus));
    const double gl = (load.p_mw / base_mva) / (vm * vm);
    const double bl = (load.q_mvar / base_mva) / (vm * vm);
    out(2 * k, 2 * k) += gl;
    out(2 * k, 2 * k + 1) += bl;
    out(2 * k + 1, 2 * k) -= bl;
    out(2 * k + 1, 2 * k + 1) += gl;
  }
  return out;
}

}  // namespace gridfdi::net
