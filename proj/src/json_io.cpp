#include "detflop/json_io.hpp"

#include <fstream>

namespace detflop {

ojson instance_to_json(const Instance& inst) {
  ojson j;
  j["n"] = inst.n;
  j["N"] = inst.N;
  j["seed"] = inst.seed;
  j["bound"] = inst.bound;
  j["tensor"] = inst.tensor.entries;
  return j;
}

Instance instance_from_json(const ojson& j) {
  Instance inst;
  inst.n = j.at("n").get<int>();
  inst.N = j.at("N").get<int>();
  inst.seed = j.at("seed").get<std::uint64_t>();
  inst.bound = j.at("bound").get<int>();
  inst.tensor.n = inst.n;
  inst.tensor.N = inst.N;
  inst.tensor.entries = j.at("tensor").get<std::vector<long long>>();
  if (inst.n < 1 || inst.N < 2) throw Error("instance parameters out of range");
  if (inst.tensor.entries.size() != inst.tensor.flat_size())
    throw Error("tensor length must be (n+1)^(N+1)");
  return inst;
}

ojson point_to_json(const MultiProjPoint& pt) {
  ojson j;
  j["field"] = {pt.F.p(), pt.F.k()};
  j["slots"] = pt.slots;
  ojson coords = ojson::array();
  for (const auto& vec : pt.coords) {
    ojson cv = ojson::array();
    for (const auto& e : vec) cv.push_back(e.c);
    coords.push_back(cv);
  }
  j["coords"] = coords;
  return j;
}

ojson smoothness_report_to_json(const SmoothnessReport& rep) {
  ojson j;
  j["model"] = rep.model;
  ojson fields = ojson::array();
  for (const auto& f : rep.fields) fields.push_back({f.p, f.k});
  j["fields"] = fields;
  j["tested"] = rep.tested;
  ojson wit = ojson::array();
  for (const auto& w : rep.witnesses) wit.push_back(point_to_json(w));
  j["witnesses"] = wit;
  j["verdict"] = rep.verdict;
  j["assumption"] = "7.3";
  return j;
}

ojson rank_report_to_json(const RankLocusReport& rep) {
  ojson j;
  j["pair"] = {rep.j, rep.i};
  ojson fields = ojson::array();
  for (const auto& f : rep.fields) fields.push_back({f.p, f.k});
  j["fields"] = fields;
  j["tested"] = rep.tested;
  ojson wit = ojson::array();
  for (const auto& w : rep.witnesses) wit.push_back(point_to_json(w));
  j["witnesses"] = wit;
  j["verdict"] = rep.verdict;
  j["assumption"] = "7.5";
  return j;
}

ojson diagram_report_to_json(const DiagramReport& rep) {
  ojson j;
  j["word"] = {rep.j, rep.i};
  j["tested"] = rep.tested;
  j["exceptional_skipped"] = rep.exceptional_skipped;
  ojson fails = ojson::array();
  for (const auto& [pt, why] : rep.failures) {
    ojson f;
    f["point"] = point_to_json(pt);
    f["reason"] = why;
    fails.push_back(f);
  }
  j["failures"] = fails;
  return j;
}

ojson fixture_to_json(const PushforwardMatrix& m) {
  ojson j;
  j["flop"] = {m.j, m.i};
  j["matrix"] = m.m;
  j["provenance"] = m.provenance;
  j["primes"] = m.primes;
  return j;
}

PushforwardMatrix fixture_from_json(const Instance& inst, const ojson& j) {
  PushforwardMatrix m;
  auto flop = j.at("flop").get<std::vector<int>>();
  if (flop.size() != 2) throw Error("fixture flop must be a pair");
  m.j = flop[0];
  m.i = flop[1];
  if (m.j == m.i || m.j < 0 || m.j > inst.N || m.i < 0 || m.i > inst.N)
    throw Error("fixture flop indices out of range");
  m.src_basis = inst.model_factors(m.j);
  m.dst_basis = inst.model_factors(m.i);
  m.m = j.at("matrix").get<IMat>();
  if (static_cast<int>(m.m.size()) != inst.N) throw Error("fixture matrix must be N x N");
  for (const auto& row : m.m)
    if (static_cast<int>(row.size()) != inst.N) throw Error("fixture matrix must be N x N");
  m.provenance = j.at("provenance").get<std::string>();
  if (j.contains("primes")) m.primes = j.at("primes").get<std::vector<std::uint32_t>>();
  return m;
}

ojson fixture_set_to_json(const PushforwardSet& set) {
  ojson arr = ojson::array();
  for (const auto& [key, m] : set) arr.push_back(fixture_to_json(m));
  return arr;
}

PushforwardSet fixture_set_from_json(const Instance& inst, const ojson& j) {
  PushforwardSet set;
  for (const auto& item : j) {
    PushforwardMatrix m = fixture_from_json(inst, item);
    set[{m.j, m.i}] = m;
  }
  return set;
}

ojson certificate_to_json(const TilingCertificate& cert) {
  ojson j;
  ojson orbits = ojson::array();
  for (int idx : cert.orbit_reps) {
    const ChamberNode& ch = cert.chambers[static_cast<std::size_t>(idx)];
    ojson o;
    o["model"] = ch.model;
    o["word"] = ch.word;
    o["transport"] = ch.transport;
    o["generators"] = ch.chamber.generators;
    orbits.push_back(o);
  }
  j["orbits"] = orbits;
  ojson gens = ojson::array();
  for (const auto& g : cert.generators) {
    ojson e;
    e["matrix"] = g.m;
    e["word"] = g.word;
    e["order"] = g.order;
    gens.push_back(e);
  }
  j["generators"] = gens;
  j["status"] = cert.status;
  ojson walls = ojson::array();
  for (const auto& w : cert.walls) {
    ojson e;
    e["from"] = w.from;
    e["wall"] = w.wall;
    e["to"] = w.to;
    e["generator"] = w.generator;
    walls.push_back(e);
  }
  j["walls"] = walls;
  j["explored_depth"] = cert.explored_depth;
  j["chamber_count"] = cert.chambers.size();
  return j;
}

ojson domain_to_json(const FundamentalDomainCandidate& dom) {
  ojson j;
  j["generators"] = dom.pi.generators;
  j["facets"] = dom.pi.facets;
  j["ball_radius"] = dom.ball_radius;
  j["certified"] = dom.certifications;
  j["stabilizer_free_in_ball"] = dom.stabilizer_assumption;
  j["all_passed"] = dom.all_passed;
  return j;
}

void write_json_file(const std::string& path, const ojson& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << j.dump(2) << "\n";
}

ojson read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  ojson j;
  in >> j;
  return j;
}

}  // namespace detflop
