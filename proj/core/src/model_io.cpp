#include "zeno/model_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace zeno {

namespace {

struct LineReader {
  std::istream& in;
  std::string path;
  int line_no = 0;

  // Next non-empty, non-comment line.
  bool next(std::string& out) {
    std::string raw;
    while (std::getline(in, raw)) {
      ++line_no;
      const auto hash = raw.find('#');
      if (hash != std::string::npos) raw.erase(hash);
      const auto first = raw.find_first_not_of(" \t\r");
      if (first == std::string::npos) continue;
      out = raw.substr(first);
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(path + ":" + std::to_string(line_no) + ": " + what);
  }
};

std::vector<double> parse_reals(LineReader& r, const std::string& line) {
  std::istringstream ss(line);
  std::vector<double> vals;
  double v;
  while (ss >> v) vals.push_back(v);
  std::string trailing;
  if (ss.clear(), ss >> trailing) r.fail("unexpected token '" + trailing + "'");
  return vals;
}

ComplexMatrix read_matrix(LineReader& r, Index dim) {
  ComplexMatrix m(dim, dim);
  for (Index row = 0; row < dim; ++row) {
    std::string line;
    if (!r.next(line)) r.fail("unexpected end of file inside a matrix");
    const auto vals = parse_reals(r, line);
    if (static_cast<Index>(vals.size()) != 2 * dim)
      r.fail("matrix row " + std::to_string(row) + " has " + std::to_string(vals.size()) +
             " reals, expected " + std::to_string(2 * dim) + " (re im pairs)");
    for (Index col = 0; col < dim; ++col)
      m(row, col) = Complex(vals[2 * col], vals[2 * col + 1]);
  }
  return m;
}

ComplexVector read_vector(LineReader& r, Index dim, const char* what) {
  std::string line;
  if (!r.next(line)) r.fail(std::string("unexpected end of file reading ") + what);
  const auto vals = parse_reals(r, line);
  if (static_cast<Index>(vals.size()) != 2 * dim)
    r.fail(std::string(what) + " has " + std::to_string(vals.size()) + " reals, expected " +
           std::to_string(2 * dim));
  ComplexVector v(dim);
  for (Index i = 0; i < dim; ++i) v(i) = Complex(vals[2 * i], vals[2 * i + 1]);
  return v;
}

PureState checked_state(LineReader& r, ComplexVector v, const char* what) {
  const double n = v.norm();
  if (std::abs(n - 1.0) > 1e-6)
    r.fail(std::string(what) + " norm deviates from 1 by more than 1e-6");
  // renormalize only when actually off, so export/ingest round trips stay exact
  if (std::abs(n - 1.0) > 1e-12) v /= n;
  return PureState{std::move(v)};
}

void append_complex_row(std::string& out, const ComplexMatrix& m, Index row) {
  char buf[64];
  for (Index c = 0; c < m.cols(); ++c) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g", m(row, c).real(), m(row, c).imag());
    if (c) out += ' ';
    out += buf;
  }
  out += '\n';
}

}  // namespace

ModelBundle read_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  LineReader r{in, path};

  std::string line;
  if (!r.next(line) || line.rfind("zenotarget-model", 0) != 0)
    r.fail("expected header line 'zenotarget-model v1'");

  Index d0 = 0, d1 = 0;
  double gamma = 1.0;
  std::vector<Index> factors;
  std::vector<int> h0;

  if (!r.next(line)) r.fail("missing 'dims' line");
  {
    std::istringstream ss(line);
    std::string key;
    ss >> key >> d0 >> d1;
    if (key != "dims" || d0 < 1 || d1 < 1 || ss.fail()) r.fail("malformed 'dims d0 d1' line");
  }

  if (!r.next(line)) r.fail("unexpected end of file");
  if (line.rfind("factors", 0) == 0) {
    std::istringstream ss(line);
    std::string key;
    ss >> key;
    Index f;
    while (ss >> f) factors.push_back(f);
    if (factors.empty()) r.fail("'factors' line lists no dimensions");
    if (!r.next(line)) r.fail("unexpected end of file");
  } else {
    factors = {d0, d1};
  }
  if (line.rfind("h0_factors", 0) == 0) {
    std::istringstream ss(line);
    std::string key;
    ss >> key;
    int f;
    while (ss >> f) h0.push_back(f);
    if (h0.empty()) r.fail("'h0_factors' line lists no factors");
    if (!r.next(line)) r.fail("unexpected end of file");
  } else {
    h0 = {0};
  }

  HilbertLayout layout;
  try {
    layout = HilbertLayout(factors, h0);
  } catch (const Error& e) {
    r.fail(std::string("invalid layout: ") + e.what());
  }
  if (layout.d0() != d0 || layout.d1() != d1)
    r.fail("factors/h0_factors are inconsistent with 'dims'");

  if (line.rfind("gamma", 0) != 0) r.fail("expected 'gamma <value>' line");
  {
    std::istringstream ss(line);
    std::string key;
    ss >> key >> gamma;
    if (ss.fail() || gamma < 0) r.fail("malformed 'gamma' line");
  }

  if (!r.next(line) || line != "H") r.fail("expected 'H' section");
  const ComplexMatrix h = read_matrix(r, layout.dim());
  if (!is_hermitian(h, 1e-10)) r.fail("H is not Hermitian within 1e-10; rejected");

  if (!r.next(line) || line.rfind("L", 0) != 0) r.fail("expected 'L <count>' section");
  int count = 0;
  {
    std::istringstream ss(line);
    std::string key;
    ss >> key >> count;
    if (key != "L" || count < 1 || ss.fail()) r.fail("malformed 'L <count>' line");
  }
  std::vector<ComplexMatrix> jumps;
  for (int k = 0; k < count; ++k) jumps.push_back(read_matrix(r, layout.dim()));

  if (!r.next(line) || line != "psi_zeno") r.fail("expected 'psi_zeno' section");
  PureState zeno_state = checked_state(r, read_vector(r, layout.d0(), "psi_zeno"), "psi_zeno");
  if (!r.next(line) || line != "psi_target") r.fail("expected 'psi_target' section");
  PureState target = checked_state(r, read_vector(r, layout.d1(), "psi_target"), "psi_target");

  ModelBundle bundle;
  bundle.model.hamiltonian = h;
  bundle.model.jumps = std::move(jumps);
  bundle.model.gamma = gamma;
  bundle.model.layout = layout;
  bundle.zeno_state = std::move(zeno_state);
  bundle.target_state = std::move(target);
  bundle.model.validate();
  return bundle;
}

void write_model_file(const std::string& path, const ModelBundle& bundle) {
  bundle.model.validate();
  const auto& layout = bundle.model.layout;
  std::string out;
  out += "zenotarget-model v1\n";
  out += "dims " + std::to_string(layout.d0()) + " " + std::to_string(layout.d1()) + "\n";
  out += "factors";
  for (Index f : layout.factor_dims()) out += " " + std::to_string(f);
  out += "\nh0_factors";
  for (int f : layout.h0_factors()) out += " " + std::to_string(f);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", bundle.model.gamma);
  out += "\ngamma " + std::string(buf) + "\n";

  out += "H\n";
  for (Index row = 0; row < layout.dim(); ++row)
    append_complex_row(out, bundle.model.hamiltonian, row);
  out += "L " + std::to_string(bundle.model.jumps.size()) + "\n";
  for (const auto& l : bundle.model.jumps)
    for (Index row = 0; row < layout.dim(); ++row) append_complex_row(out, l, row);
  out += "psi_zeno\n";
  append_complex_row(out, bundle.zeno_state.amplitudes.transpose(), 0);
  out += "psi_target\n";
  append_complex_row(out, bundle.target_state.amplitudes.transpose(), 0);

  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("write_model_file: cannot open " + tmp);
    f << out;
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace zeno
