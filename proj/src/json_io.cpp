#include "json_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace spansim {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(path + ": cannot open file for writing");
  out << text;
}

json parse_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(origin + ": " + e.what());
  }
}

[[noreturn]] void fail(const std::string& origin, const std::string& where,
                       const std::string& message) {
  throw ParseError(origin + ": " + where + ": " + message);
}

int require_int(const json& j, const std::string& origin, const std::string& where) {
  if (!j.is_number_integer()) fail(origin, where, "expected an integer");
  return j.get<int>();
}

Complex parse_complex(const json& j, const std::string& origin, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    fail(origin, where, "expected a [re, im] pair");
  }
  return Complex(j[0].get<double>(), j[1].get<double>());
}

Vector parse_vector(const json& j, Eigen::Index expected_dim, const std::string& origin,
                    const std::string& where) {
  if (!j.is_array()) fail(origin, where, "expected an array of [re, im] pairs");
  if (expected_dim >= 0 && static_cast<Eigen::Index>(j.size()) != expected_dim) {
    fail(origin, where,
         "expected " + std::to_string(expected_dim) + " entries, got " +
             std::to_string(j.size()));
  }
  Vector out(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) =
        parse_complex(j[i], origin, where + "[" + std::to_string(i) + "]");
  }
  return out;
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out.push_back(json::array({v(i).real(), v(i).imag()}));
  }
  return out;
}

json matrix_to_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    }
    out.push_back(row);
  }
  return out;
}

const json& require_field(const json& j, const char* name, const std::string& origin) {
  if (!j.contains(name)) fail(origin, name, "missing field");
  return j.at(name);
}

}  // namespace

SpanProgram parse_span_program(const std::string& text, const std::string& origin) {
  const json doc = parse_text(text, origin);
  if (!doc.is_object()) fail(origin, "$", "expected an object");

  const int n = require_int(require_field(doc, "n", origin), origin, "n");
  const int q = require_int(require_field(doc, "q", origin), origin, "q");
  if (q > kMaxStringAlphabet) fail(origin, "q", "alphabets above 10 are not supported");

  const json& dims_json = require_field(doc, "input_dims", origin);
  if (!dims_json.is_array() || static_cast<int>(dims_json.size()) != n) {
    fail(origin, "input_dims", "expected an array of length n");
  }
  std::vector<int> dims;
  for (std::size_t j = 0; j < dims_json.size(); ++j) {
    dims.push_back(require_int(dims_json[j], origin, "input_dims[" + std::to_string(j) + "]"));
  }
  const int true_dim = require_int(require_field(doc, "true_dim", origin), origin, "true_dim");
  const int false_dim = require_int(require_field(doc, "false_dim", origin), origin, "false_dim");

  int dim_h = true_dim + false_dim;
  for (int d : dims) dim_h += d;

  const Vector tau = parse_vector(require_field(doc, "target", origin), -1, origin, "target");

  const json& map_json = require_field(doc, "map", origin);
  if (!map_json.is_array() || map_json.empty()) fail(origin, "map", "expected a nonempty array of rows");
  Matrix a(static_cast<Eigen::Index>(map_json.size()), dim_h);
  for (std::size_t r = 0; r < map_json.size(); ++r) {
    const Vector row =
        parse_vector(map_json[r], dim_h, origin, "map[" + std::to_string(r) + "]");
    a.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  if (tau.size() != a.rows()) fail(origin, "target", "dimension must match the map rows");

  const json& letters_json = require_field(doc, "letters", origin);
  if (!letters_json.is_array() || static_cast<int>(letters_json.size()) != n) {
    fail(origin, "letters", "expected an array of length n");
  }
  std::vector<std::vector<Matrix>> bases;
  for (int j = 0; j < n; ++j) {
    const json& per_letter = letters_json[static_cast<std::size_t>(j)];
    const std::string where_j = "letters[" + std::to_string(j) + "]";
    if (!per_letter.is_array() || static_cast<int>(per_letter.size()) != q) {
      fail(origin, where_j, "expected an array of length q");
    }
    std::vector<Matrix> per;
    for (int letter = 0; letter < q; ++letter) {
      const json& vecs = per_letter[static_cast<std::size_t>(letter)];
      const std::string where = where_j + "[" + std::to_string(letter) + "]";
      if (!vecs.is_array()) fail(origin, where, "expected an array of basis vectors");
      Matrix basis(dims[static_cast<std::size_t>(j)], static_cast<Eigen::Index>(vecs.size()));
      for (std::size_t k = 0; k < vecs.size(); ++k) {
        basis.col(static_cast<Eigen::Index>(k)) =
            parse_vector(vecs[k], dims[static_cast<std::size_t>(j)], origin,
                         where + "[" + std::to_string(k) + "]");
      }
      if (basis.cols() > 0) {
        // Accept any spanning set: orthonormalize, reject dependent vectors.
        const Matrix q_basis = range_basis(basis);
        if (q_basis.cols() != basis.cols()) {
          fail(origin, where, "basis vectors are linearly dependent");
        }
        basis = q_basis;
      }
      per.push_back(std::move(basis));
    }
    bases.push_back(std::move(per));
  }

  try {
    return SpanProgram(n, q, std::move(dims), true_dim, false_dim, std::move(bases),
                       std::move(a), tau);
  } catch (const InvalidInput& e) {
    throw ParseError(origin + ": " + e.what());
  }
}

SpanProgram load_span_program(const std::string& path) {
  return parse_span_program(read_file(path), path);
}

std::string span_program_to_json(const SpanProgram& p) {
  json doc;
  doc["n"] = p.n();
  doc["q"] = p.q();
  doc["input_dims"] = p.input_dims();
  doc["true_dim"] = p.true_dim();
  doc["false_dim"] = p.false_dim();
  doc["target"] = vector_to_json(p.tau());
  doc["map"] = matrix_to_json(p.a_matrix());
  json letters = json::array();
  for (int j = 0; j < p.n(); ++j) {
    json per_letter = json::array();
    for (int a = 0; a < p.q(); ++a) {
      const Matrix& basis = p.letter_basis(j, a);
      json vecs = json::array();
      for (Eigen::Index c = 0; c < basis.cols(); ++c) {
        vecs.push_back(vector_to_json(basis.col(c)));
      }
      per_letter.push_back(vecs);
    }
    letters.push_back(per_letter);
  }
  doc["letters"] = letters;
  return doc.dump(2) + "\n";
}

void save_span_program(const SpanProgram& p, const std::string& path) {
  write_file(path, span_program_to_json(p));
}

GraphSpec parse_graph(const std::string& text, const std::string& origin) {
  const json doc = parse_text(text, origin);
  if (!doc.is_object()) fail(origin, "$", "expected an object");
  GraphSpec g;
  g.vertices = require_int(require_field(doc, "vertices", origin), origin, "vertices");
  g.s = require_int(require_field(doc, "s", origin), origin, "s");
  g.t = require_int(require_field(doc, "t", origin), origin, "t");
  const json& edges = require_field(doc, "edges", origin);
  if (!edges.is_array()) fail(origin, "edges", "expected an array of [u, v] pairs");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const json& e = edges[i];
    const std::string where = "edges[" + std::to_string(i) + "]";
    if (!e.is_array() || e.size() != 2) fail(origin, where, "expected a [u, v] pair");
    g.edges.emplace_back(require_int(e[0], origin, where + "[0]"),
                         require_int(e[1], origin, where + "[1]"));
  }
  try {
    g.validate();
  } catch (const InvalidInput& e) {
    throw ParseError(origin + ": " + e.what());
  }
  return g;
}

GraphSpec load_graph(const std::string& path) { return parse_graph(read_file(path), path); }

std::string graph_to_json(const GraphSpec& g) {
  json doc;
  doc["vertices"] = g.vertices;
  doc["s"] = g.s;
  doc["t"] = g.t;
  json edges = json::array();
  for (const auto& [u, v] : g.edges) edges.push_back(json::array({u, v}));
  doc["edges"] = edges;
  return doc.dump(2) + "\n";
}

void save_graph(const GraphSpec& g, const std::string& path) {
  write_file(path, graph_to_json(g));
}

CvsDocument parse_cvs(const std::string& text, const std::string& origin) {
  const json doc = parse_text(text, origin);
  if (!doc.is_object()) fail(origin, "$", "expected an object");

  CvsDocument out;
  out.cvs.n = require_int(require_field(doc, "n", origin), origin, "n");
  out.cvs.q = require_int(require_field(doc, "q", origin), origin, "q");
  out.cvs.m = require_int(require_field(doc, "m", origin), origin, "m");
  const int state_dim =
      require_int(require_field(doc, "state_dim", origin), origin, "state_dim");

  const json& inputs = require_field(doc, "inputs", origin);
  if (!inputs.is_array() || inputs.empty()) fail(origin, "inputs", "expected a nonempty array");
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (!inputs[i].is_string()) {
      fail(origin, "inputs[" + std::to_string(i) + "]", "expected a digit string");
    }
    out.cvs.inputs.push_back(inputs[i].get<std::string>());
  }

  auto parse_family = [&](const char* name) {
    const json& family = require_field(doc, name, origin);
    if (!family.is_array() || family.size() != out.cvs.inputs.size()) {
      fail(origin, name, "expected one entry per input");
    }
    std::vector<std::vector<Vector>> rows;
    for (std::size_t xi = 0; xi < family.size(); ++xi) {
      const json& per_j = family[xi];
      const std::string where_x = std::string(name) + "[" + std::to_string(xi) + "]";
      if (!per_j.is_array() || static_cast<int>(per_j.size()) != out.cvs.n) {
        fail(origin, where_x, "expected one vector per input index");
      }
      std::vector<Vector> row;
      for (int j = 0; j < out.cvs.n; ++j) {
        row.push_back(parse_vector(per_j[static_cast<std::size_t>(j)], out.cvs.m, origin,
                                   where_x + "[" + std::to_string(j) + "]"));
      }
      rows.push_back(std::move(row));
    }
    return rows;
  };
  out.cvs.u = parse_family("u");
  out.cvs.v = parse_family("v");

  auto parse_states = [&](const char* name) {
    const json& states = require_field(doc, name, origin);
    if (!states.is_array() || states.size() != out.cvs.inputs.size()) {
      fail(origin, name, "expected one state per input");
    }
    std::vector<Vector> parsed;
    for (std::size_t xi = 0; xi < states.size(); ++xi) {
      parsed.push_back(parse_vector(states[xi], state_dim, origin,
                                    std::string(name) + "[" + std::to_string(xi) + "]"));
    }
    return parsed;
  };

  try {
    out.gram = GramPair::from_states(parse_states("rho"), parse_states("sigma"));
    const CvsValidation check = validate_cvs(out.cvs, out.gram);
    if (!check.ok) {
      fail(origin, "$",
           "converting-vector-set identity violated, max residual " +
               std::to_string(check.max_residual));
    }
  } catch (const InvalidInput& e) {
    throw ParseError(origin + ": " + e.what());
  }
  return out;
}

CvsDocument load_cvs(const std::string& path) { return parse_cvs(read_file(path), path); }

std::string cvs_to_json(const ConvertingVectorSet& cvs, const GramPair& gram) {
  json doc;
  doc["n"] = cvs.n;
  doc["q"] = cvs.q;
  doc["m"] = cvs.m;
  doc["state_dim"] = gram.state_dim();
  doc["inputs"] = cvs.inputs;
  auto family_to_json = [&](const std::vector<std::vector<Vector>>& family) {
    json rows = json::array();
    for (const auto& per_j : family) {
      json row = json::array();
      for (const Vector& vec : per_j) row.push_back(vector_to_json(vec));
      rows.push_back(row);
    }
    return rows;
  };
  doc["u"] = family_to_json(cvs.u);
  doc["v"] = family_to_json(cvs.v);
  json rho = json::array();
  json sigma = json::array();
  for (const Vector& s : gram.rho) rho.push_back(vector_to_json(s));
  for (const Vector& s : gram.sigma) sigma.push_back(vector_to_json(s));
  doc["rho"] = rho;
  doc["sigma"] = sigma;
  return doc.dump(2) + "\n";
}

void save_cvs(const ConvertingVectorSet& cvs, const GramPair& gram, const std::string& path) {
  write_file(path, cvs_to_json(cvs, gram));
}

}  // namespace spansim
