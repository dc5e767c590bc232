#include "etr/problem_io.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "etr/error.h"

namespace etr {
namespace {

using nlohmann::json;

[[noreturn]] void Fail(const std::string& what) {
  throw Error(ErrorCode::kParseError, what);
}

json ParseJson(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into a line and column.
    const size_t at = std::min<size_t>(e.byte, text.size());
    int line = 1;
    size_t line_start = 0;
    for (size_t i = 0; i + 1 < at; ++i) {
      if (text[i] == '\n') {
        ++line;
        line_start = i + 1;
      }
    }
    const size_t line_end = text.find('\n', line_start);
    std::ostringstream msg;
    msg << "line " << line << ", column " << (at - line_start) << ": " << e.what()
        << "\n  " << text.substr(line_start, line_end - line_start);
    Fail(msg.str());
  }
}

double Number(const json& v, const std::string& key) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "-inf" || s == "+inf") Fail(key + ": infinite entries are not allowed");
  }
  Fail(key + ": expected a number, got " + v.dump());
}

Vector ReadVector(const json& v, const std::string& key) {
  if (!v.is_array()) Fail(key + ": expected an array");
  Vector out(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    out(i) = Number(v[i], key + "[" + std::to_string(i) + "]");
  }
  return out;
}

Matrix ReadMatrix(const json& v, const std::string& key, int cols) {
  if (!v.is_array()) Fail(key + ": expected an array of rows");
  Matrix out(v.size(), cols);
  for (size_t i = 0; i < v.size(); ++i) {
    const Vector row = ReadVector(v[i], key + "[" + std::to_string(i) + "]");
    if (row.size() != cols) {
      Fail(key + "[" + std::to_string(i) + "]: expected " + std::to_string(cols) +
           " entries, got " + std::to_string(row.size()));
    }
    out.row(i) = row.transpose();
  }
  return out;
}

SymMat ReadSym(const json& v, const std::string& key, int n) {
  const Matrix m = ReadMatrix(v, key, n);
  if (m.rows() != n) Fail(key + ": expected " + std::to_string(n) + " rows");
  try {
    return SymMat(m, 1e-8);
  } catch (const Error& e) {
    Fail(key + ": " + e.what());
  }
}

json ToJson(const Vector& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json ToJson(const Matrix& m) {
  json out = json::array();
  for (int i = 0; i < m.rows(); ++i) out.push_back(ToJson(Vector(m.row(i).transpose())));
  return out;
}

}  // namespace

ETRProblem ParseProblem(const std::string& text) {
  const json doc = ParseJson(text);
  if (!doc.is_object()) Fail("problem file must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    static const char* kKeys[] = {"n", "Q0", "q0", "Q1", "q1", "A", "a", "B", "b"};
    if (std::find(std::begin(kKeys), std::end(kKeys), key) == std::end(kKeys)) {
      Fail("unknown key \"" + key + "\"");
    }
  }
  int n = 0;
  if (doc.contains("n")) {
    if (!doc["n"].is_number_integer() || doc["n"].get<int>() < 1) {
      Fail("n: expected a positive integer");
    }
    n = doc["n"].get<int>();
  } else if (doc.contains("Q0") && doc["Q0"].is_array()) {
    n = static_cast<int>(doc["Q0"].size());
  }
  if (n < 1) Fail("n missing and not implied by Q0");

  ETRProblem p = ETRProblem::Empty(n);
  if (doc.contains("Q0")) p.Q0 = ReadSym(doc["Q0"], "Q0", n);
  if (doc.contains("q0")) p.q0 = ReadVector(doc["q0"], "q0");
  if (doc.contains("Q1")) p.Q1 = ReadSym(doc["Q1"], "Q1", n);
  if (doc.contains("q1")) p.q1 = ReadVector(doc["q1"], "q1");
  if (doc.contains("A")) p.A = ReadMatrix(doc["A"], "A", n);
  if (doc.contains("a")) p.a = ReadVector(doc["a"], "a");
  if (doc.contains("B")) p.B = ReadMatrix(doc["B"], "B", n);
  if (doc.contains("b")) p.b = ReadVector(doc["b"], "b");
  try {
    p.Validate();
  } catch (const Error& e) {
    Fail(e.what());
  }
  return p;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ETRProblem LoadProblem(const std::string& path) {
  try {
    return ParseProblem(ReadFile(path));
  } catch (const Error& e) {
    Fail(path + ": " + e.what());
  }
}

std::string DumpProblem(const ETRProblem& p) {
  json doc;
  doc["n"] = p.n;
  doc["Q0"] = ToJson(p.Q0.dense());
  doc["q0"] = ToJson(p.q0);
  doc["Q1"] = ToJson(p.Q1.dense());
  doc["q1"] = ToJson(p.q1);
  doc["A"] = ToJson(p.A);
  doc["a"] = ToJson(p.a);
  doc["B"] = ToJson(p.B);
  doc["b"] = ToJson(p.b);
  return doc.dump(2) + "\n";
}

Vector ParsePoint(const std::string& text) {
  const json doc = ParseJson(text);
  if (doc.is_object()) {
    if (!doc.contains("x")) Fail("point file needs an \"x\" array");
    return ReadVector(doc["x"], "x");
  }
  return ReadVector(doc, "x");
}

Multipliers ParseMultipliers(const std::string& text) {
  const json doc = ParseJson(text);
  if (!doc.is_object() || !doc.contains("u")) {
    Fail("multiplier file needs a \"u\" array");
  }
  const Vector u = ReadVector(doc["u"], "u");
  if (u.size() != 3) Fail("u: expected 3 entries");
  Multipliers m;
  m.u = u;
  if (doc.contains("v")) m.v = ReadVector(doc["v"], "v");
  return m;
}

}  // namespace etr
