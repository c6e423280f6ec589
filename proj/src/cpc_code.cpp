#include "cpcdec/cpc_code.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace cpcdec {

namespace {

void check_matrix(const BinaryMatrix& m, const char* name, int rows, int cols) {
  if (m.rows != rows || m.cols != cols) {
    std::ostringstream os;
    os << name << " has shape " << m.rows << "x" << m.cols << ", expected " << rows << "x"
       << cols;
    throw CodeError(os.str());
  }
  if (m.data.size() != static_cast<size_t>(rows) * cols) {
    throw CodeError(std::string(name) + " storage does not match its shape");
  }
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (m.at(r, c) > 1) {
        std::ostringstream os;
        os << name << "[" << r << "][" << c << "] = " << int(m.at(r, c)) << " is not binary";
        throw CodeError(os.str());
      }
    }
  }
}

BinaryMatrix matrix_from_json(const nlohmann::json& j, const char* name) {
  if (!j.is_array()) throw CodeError(std::string(name) + " must be an array of rows");
  BinaryMatrix m;
  m.rows = static_cast<int>(j.size());
  m.cols = m.rows > 0 ? static_cast<int>(j[0].size()) : 0;
  m.data.reserve(static_cast<size_t>(m.rows) * m.cols);
  for (int r = 0; r < m.rows; ++r) {
    if (static_cast<int>(j[r].size()) != m.cols) {
      std::ostringstream os;
      os << name << " row " << r << " has " << j[r].size() << " entries, expected " << m.cols;
      throw CodeError(os.str());
    }
    for (const auto& e : j[r]) {
      if (!e.is_number_integer()) throw CodeError(std::string(name) + " has a non-integer entry");
      m.data.push_back(static_cast<std::uint8_t>(e.get<int>()));
    }
  }
  return m;
}

nlohmann::json matrix_to_json(const BinaryMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r < m.rows; ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < m.cols; ++c) row.push_back(int(m.at(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

BinaryMatrix from_rows(std::initializer_list<std::initializer_list<int>> rows) {
  BinaryMatrix m(static_cast<int>(rows.size()), static_cast<int>(rows.begin()->size()));
  int r = 0;
  for (const auto& row : rows) {
    int c = 0;
    for (int v : row) m.set(r, c++, static_cast<std::uint8_t>(v));
    ++r;
  }
  return m;
}

}  // namespace

void validate_code(const CpcCode& code) {
  if (code.k < 1) throw CodeError("k must be at least 1");
  if (code.n <= code.k) throw CodeError("n must exceed k");
  if (code.n > 32) throw CodeError("codes above 32 qubits are not supported");
  const int r = code.num_parity();
  check_matrix(code.mb, "mb", r, code.k);
  check_matrix(code.mp, "mp", r, code.k);
  check_matrix(code.mc, "mc", r, r);
  for (int j = 0; j < r; ++j) {
    if (code.mc.at(j, j) != 0) {
      std::ostringstream os;
      os << "mc has a self cross-check on the diagonal at [" << j << "][" << j << "]";
      throw CodeError(os.str());
    }
  }
}

CpcCode code_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw CodeError(std::string("code file is not valid JSON: ") + e.what());
  }
  for (const auto& [key, value] : j.items()) {
    if (key != "n" && key != "k" && key != "mb" && key != "mp" && key != "mc" &&
        key != "convention") {
      throw CodeError("unknown key in code file: " + key);
    }
  }
  CpcCode code;
  if (!j.contains("n") || !j.contains("k")) throw CodeError("code file must define n and k");
  code.n = j.at("n").get<int>();
  code.k = j.at("k").get<int>();
  code.mb = matrix_from_json(j.at("mb"), "mb");
  code.mp = matrix_from_json(j.at("mp"), "mp");
  code.mc = matrix_from_json(j.at("mc"), "mc");
  validate_code(code);
  return code;
}

std::string code_to_json_text(const CpcCode& code) {
  nlohmann::json j;
  j["n"] = code.n;
  j["k"] = code.k;
  j["mb"] = matrix_to_json(code.mb);
  j["mp"] = matrix_to_json(code.mp);
  j["mc"] = matrix_to_json(code.mc);
  return j.dump(2) + "\n";
}

CpcCode load_code(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CodeError("cannot open code file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return code_from_json_text(buf.str());
}

void save_code(const CpcCode& code, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw CodeError("cannot write code file: " + path);
  out << code_to_json_text(code);
}

CpcCode code_513() {
  CpcCode code;
  code.n = 5;
  code.k = 1;
  code.mb = from_rows({{0}, {0}, {1}, {1}});
  code.mp = from_rows({{1}, {0}, {0}, {1}});
  code.mc = from_rows({{0, 1, 0, 1}, {0, 0, 1, 1}, {0, 0, 0, 1}, {0, 0, 0, 0}});
  return code;
}

CpcCode code_933() {
  CpcCode code;
  code.n = 9;
  code.k = 3;
  code.mb = from_rows({{0, 1, 1}, {1, 0, 0}, {1, 0, 1}, {1, 0, 1}, {0, 1, 1}, {0, 0, 1}});
  code.mp = from_rows({{1, 1, 1}, {1, 0, 1}, {0, 0, 0}, {1, 1, 0}, {0, 0, 0}, {1, 1, 1}});
  code.mc = from_rows({{0, 1, 0, 0, 1, 0},
                       {0, 0, 1, 0, 0, 0},
                       {0, 0, 0, 0, 1, 0},
                       {0, 0, 0, 0, 0, 1},
                       {0, 0, 0, 0, 0, 0},
                       {0, 0, 0, 0, 0, 0}});
  return code;
}

}  // namespace cpcdec
