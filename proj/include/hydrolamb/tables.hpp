#pragma once

/// Reproduction of the published tables: reference fixture parsing and
/// row-by-row evaluation.
///
/// Fixture columns: table_id,row_key,N,L,J,quantity,unit,value.  Quantities:
/// lamb_shift, lamb_shift_tilde, total_rate, partial_rate_n<k>, bethe_log,
/// mean_excitation.

#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "energy_shift.hpp"

namespace hydrolamb {

struct ReferenceRow {
  int table_id = 0;
  std::string row_key;
  int N = 1, L = 0;
  std::optional<double> J;
  std::string quantity;
  std::string unit;
  double value = 0.0;
};

struct TableRow {
  int table_id = 0;
  std::string row_key;
  int N = 1, L = 0;
  std::optional<double> J;
  std::string quantity;
  std::string unit;
  double computed = 0.0;
  std::optional<double> reference;
  std::optional<double> rel_dev;  ///< empty when the reference is 0
  double error_estimate = 0.0;    ///< quadrature error in the unit of the row, 0 for closed forms
  bool converged = true;
};

struct TableOptions {
  QuadratureSpec spec{};
  std::vector<double> cutoffs = default_bethe_cutoffs();
  PhysicalConstants constants{};
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"')
      quoted = !quoted;
    else if (ch == ',' && !quoted) {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r')
      cur += ch;
  }
  if (quoted) throw std::invalid_argument("unterminated quote");
  out.push_back(cur);
  return out;
}

inline double parse_double(const std::string& s, int lineno) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size())
    throw std::invalid_argument("reference fixture line " + std::to_string(lineno) + ": bad number '" + s + "'");
  return v;
}

/// k from "partial_rate_n<k>", or 0.
inline int partial_rate_index(const std::string& q) {
  const std::string prefix = "partial_rate_n";
  if (q.rfind(prefix, 0) != 0) return 0;
  return std::stoi(q.substr(prefix.size()));
}

}  // namespace detail

inline std::vector<ReferenceRow> read_references(std::istream& in) {
  std::vector<ReferenceRow> rows;
  std::string line;
  int lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto f = detail::split_csv_line(line);
    if (!header_seen) {
      if (f.size() != 8 || f[0] != "table_id")
        throw std::invalid_argument("reference fixture: unexpected header on line " + std::to_string(lineno));
      header_seen = true;
      continue;
    }
    if (f.size() != 8)
      throw std::invalid_argument("reference fixture line " + std::to_string(lineno) + ": expected 8 fields");
    ReferenceRow r;
    r.table_id = int(detail::parse_double(f[0], lineno));
    r.row_key = f[1];
    r.N = int(detail::parse_double(f[2], lineno));
    r.L = int(detail::parse_double(f[3], lineno));
    if (!f[4].empty()) r.J = detail::parse_double(f[4], lineno);
    r.quantity = f[5];
    r.unit = f[6];
    r.value = detail::parse_double(f[7], lineno);
    rows.push_back(std::move(r));
  }
  return rows;
}

inline std::vector<ReferenceRow> read_references_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open reference fixture '" + path + "'");
  return read_references(in);
}

/// Computes every fixture row of table `id` (1: non-dipole, 2 and 3: dipole).
inline std::vector<TableRow> generate_table(int id, const std::vector<ReferenceRow>& refs,
                                            const TableOptions& opt = {}) {
  if (id < 1 || id > 3) throw std::invalid_argument("table id must be 1, 2 or 3");
  const PhysicalConstants& c = opt.constants;
  const bool dipole = id != 1;
  const DipoleOptions rate_mode{dipole, dipole ? opt.cutoffs.back() : 0.0};

  std::map<std::pair<int, int>, ShiftResult> shifts;
  std::map<std::pair<int, int>, BetheResult> bethes;
  auto shift_of = [&](int N, int L) -> const ShiftResult& {
    auto it = shifts.find({N, L});
    if (it == shifts.end()) it = shifts.emplace(std::pair{N, L}, lamb_shift({N, L}, {}, opt.spec, c)).first;
    return it->second;
  };
  auto bethe_of = [&](int N, int L) -> const BetheResult& {
    auto it = bethes.find({N, L});
    if (it == bethes.end())
      it = bethes.emplace(std::pair{N, L}, bethe_log({N, L}, opt.cutoffs, opt.spec, c)).first;
    return it->second;
  };

  std::vector<TableRow> out;
  for (const auto& ref : refs) {
    if (ref.table_id != id) continue;
    TableRow row;
    row.table_id = id;
    row.row_key = ref.row_key;
    row.N = ref.N;
    row.L = ref.L;
    row.J = ref.J;
    row.quantity = ref.quantity;
    row.unit = ref.unit;
    row.reference = ref.value;
    const QuantumState s{ref.N, ref.L, ref.J, 1};
    s.validate();

    if (const int k = detail::partial_rate_index(ref.quantity); k > 0) {
      row.computed = 0.0;
      for (const auto& p : decay_rates(s, rate_mode, c))
        if (p.n == k) row.computed = p.rate;
    } else if (ref.quantity == "total_rate") {
      row.computed = total_rate(decay_rates(s, rate_mode, c));
    } else if (ref.quantity == "lamb_shift" && !dipole) {
      const ShiftResult& r = shift_of(ref.N, ref.L);
      row.computed = r.lamb_shift_MHz;
      row.error_estimate = r.error_estimate_MHz;
      row.converged = r.converged;
    } else if (ref.quantity == "lamb_shift" || ref.quantity == "lamb_shift_tilde") {
      const BetheResult& b = bethe_of(ref.N, ref.L);
      const bool full = ref.quantity == "lamb_shift";
      row.computed = dipole_lamb_full(s, b.gamma_NL, c, full);
      row.error_estimate = std::abs(dipole_shift_unit_MHz(s.N, s.Z, c)) * b.extrapolation_residual;
      row.converged = b.converged;
    } else if (ref.quantity == "bethe_log") {
      const BetheResult& b = bethe_of(ref.N, ref.L);
      row.computed = b.gamma_NL;
      row.error_estimate = b.extrapolation_residual;
      row.converged = b.converged;
    } else if (ref.quantity == "mean_excitation") {
      const BetheResult& b = bethe_of(ref.N, ref.L);
      row.computed = b.mean_excitation_Ry;
      row.error_estimate = b.mean_excitation_Ry * b.extrapolation_residual;
      row.converged = b.converged;
    } else {
      throw std::invalid_argument("unknown table quantity '" + ref.quantity + "'");
    }
    if (ref.value != 0.0) row.rel_dev = (row.computed - ref.value) / std::abs(ref.value);
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace hydrolamb
