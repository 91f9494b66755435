#include "kwlab/graph_io.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace kwlab {

namespace {

using nlohmann::json;

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

double number(const json& j, const char* key) {
  require(j.contains(key) && j[key].is_number(), std::string("missing numeric field '") + key + "'");
  return j[key].get<double>();
}

int integer(const json& j, const char* key) {
  require(j.contains(key) && j[key].is_number_integer(), std::string("missing integer field '") + key + "'");
  return j[key].get<int>();
}

}  // namespace

GraphDocument parse_graph_document(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
  require(doc.is_object(), "graph document must be an object");

  const std::string surface = doc.value("surface", std::string("planar"));
  require(surface == "planar" || surface == "torus", "surface must be 'planar' or 'torus'");
  const SurfaceKind kind = surface == "torus" ? SurfaceKind::torus : SurfaceKind::planar;

  Lattice lattice{{{1.0, 0.0}, {0.0, 1.0}}};
  if (kind == SurfaceKind::torus) {
    require(doc.contains("lattice") && doc["lattice"].is_array() && doc["lattice"].size() == 2,
            "torus graphs need a 2x2 lattice");
    for (int r = 0; r < 2; ++r) {
      const json& row = doc["lattice"][r];
      require(row.is_array() && row.size() == 2 && row[0].is_number() && row[1].is_number(),
              "lattice rows must be numeric pairs");
      lattice[r] = {row[0].get<double>(), row[1].get<double>()};
    }
  }

  require(doc.contains("vertices") && doc["vertices"].is_array(), "missing vertices array");
  require(doc.contains("edges") && doc["edges"].is_array(), "missing edges array");

  std::vector<Vertex> vertices;
  std::map<int, int> index_of;
  for (const json& jv : doc["vertices"]) {
    require(jv.is_object(), "vertex entries must be objects");
    const Vertex v{integer(jv, "id"), {number(jv, "x"), number(jv, "y")}};
    require(index_of.emplace(v.id, static_cast<int>(vertices.size())).second,
            "duplicate vertex id " + std::to_string(v.id));
    vertices.push_back(v);
  }

  const bool has_beta = doc.contains("beta");
  const double beta = has_beta ? number(doc, "beta") : 0.0;
  std::vector<EdgeSpec> edges;
  std::vector<double> x;
  std::vector<double> couplings;
  std::map<int, int> edge_ids;
  for (const json& je : doc["edges"]) {
    require(je.is_object(), "edge entries must be objects");
    EdgeSpec es;
    es.id = integer(je, "id");
    require(edge_ids.emplace(es.id, static_cast<int>(edges.size())).second,
            "duplicate edge id " + std::to_string(es.id));
    const int u = integer(je, "u");
    const int v = integer(je, "v");
    require(index_of.count(u) && index_of.count(v), "edge refers to an unknown vertex");
    es.u = index_of[u];
    es.v = index_of[v];
    if (je.contains("shift")) {
      const json& s = je["shift"];
      require(s.is_array() && s.size() == 2 && s[0].is_number_integer() && s[1].is_number_integer(),
              "shift must be an integer pair");
      es.shift = {s[0].get<int>(), s[1].get<int>()};
    }
    const int given = je.contains("x") + je.contains("theta") + je.contains("J");
    require(given == 1, "each edge needs exactly one of x, theta, J");
    double xe = 0.0;
    if (je.contains("x")) {
      xe = number(je, "x");
    } else if (je.contains("theta")) {
      const double t = number(je, "theta");
      require(t >= 0.0 && t <= kPi / 2 + 1e-15, "theta outside [0, pi/2]");
      xe = std::tan(std::min(t, kPi / 2) / 2);
    } else {
      require(has_beta, "J weights need a top-level beta");
      const double j = number(je, "J");
      require(j >= 0.0, "couplings must be nonnegative");
      couplings.push_back(j);
      xe = std::tanh(beta * j);
    }
    require(std::isfinite(xe) && xe >= 0.0 && xe <= 1.0, "edge weight x outside [0,1]");
    edges.push_back(es);
    x.push_back(xe);
  }

  GraphParts parts = straight_line_parts(kind, lattice, vertices, edges, WeightSystem(x));
  if (doc.contains("dart_angles")) {
    const json& da = doc["dart_angles"];
    require(da.is_object(), "dart_angles must map dart ids to radians");
    for (auto it = da.begin(); it != da.end(); ++it) {
      int id = -1;
      try {
        id = std::stoi(it.key());
      } catch (const std::exception&) {
        throw ValidationError("dart id '" + it.key() + "' is not an integer");
      }
      require(id >= 0 && id < static_cast<int>(parts.dart_angles.size()), "dart id out of range");
      require(it.value().is_number(), "dart angle must be numeric");
      parts.dart_angles[id] = it.value().get<double>();
    }
  }
  GraphDocument out{EmbeddedGraph::assemble(std::move(parts)), std::nullopt, std::nullopt};
  if (has_beta) out.beta = beta;
  if (!couplings.empty()) {
    require(couplings.size() == edges.size(), "J must be given on every edge or on none");
    out.couplings = std::move(couplings);
  }
  return out;
}

EmbeddedGraph parse_graph_json(const std::string& text) { return parse_graph_document(text).graph; }

GraphDocument read_graph_document(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "cannot open graph file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_graph_document(ss.str());
}

EmbeddedGraph read_graph_file(const std::string& path) { return read_graph_document(path).graph; }

std::string graph_to_json(const EmbeddedGraph& g, bool with_dart_angles) {
  return graph_to_json(GraphDocument{g, std::nullopt, std::nullopt}, with_dart_angles);
}

std::string graph_to_json(const GraphDocument& d, bool with_dart_angles) {
  const EmbeddedGraph& g = d.graph;
  const bool coupled = d.couplings && d.beta;
  json doc;
  doc["surface"] = g.surface() == SurfaceKind::torus ? "torus" : "planar";
  if (g.surface() == SurfaceKind::torus) {
    const Lattice& L = g.lattice();
    doc["lattice"] = {{L[0][0], L[0][1]}, {L[1][0], L[1][1]}};
  }
  json vs = json::array();
  for (const Vertex& v : g.vertices()) vs.push_back({{"id", v.id}, {"x", v.pos.x}, {"y", v.pos.y}});
  doc["vertices"] = vs;
  json es = json::array();
  for (int k = 0; k < g.num_edges(); ++k) {
    const EdgeSpec& e = g.edge(k);
    json je{{"id", e.id}, {"u", g.vertex(e.u).id}, {"v", g.vertex(e.v).id}};
    if (coupled)
      je["J"] = (*d.couplings)[k];
    else
      je["x"] = g.weights().x(k);
    if (g.surface() == SurfaceKind::torus) je["shift"] = {e.shift[0], e.shift[1]};
    es.push_back(je);
  }
  doc["edges"] = es;
  if (coupled) doc["beta"] = *d.beta;
  if (with_dart_angles) {
    json da = json::object();
    for (int d = 0; d < g.num_darts(); ++d) da[std::to_string(d)] = g.angle(d);
    doc["dart_angles"] = da;
  }
  return doc.dump(2);
}

}  // namespace kwlab
