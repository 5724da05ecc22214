// hydrolamb: Lamb shifts, decay rates, Bethe logarithms and table reproduction.
//
// Exit status: 0 ok, 1 internal error, 2 invalid input, 3 non-convergence.

#include <algorithm>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hydrolamb/hydrolamb.hpp"
#include "hydrolamb/oracle.hpp"
#include "report.hpp"

#ifndef HYDROLAMB_DEFAULT_REFERENCES
#define HYDROLAMB_DEFAULT_REFERENCES "data/reference_tables.csv"
#endif

namespace {

using namespace hydrolamb;
using report::number;
using report::ordered_json;
using report::render;

enum Exit { kOk = 0, kInternal = 1, kInvalid = 2, kUnconverged = 3 };

struct Request {
  int N = 1;
  int L = 0;
  std::optional<double> J;
  int Z = 1;
  bool dipole = false;
  std::optional<double> cutoff_x;
  std::vector<double> cutoffs;
  double rel_tol = 1e-9;
  double abs_tol = 1e-14;
  int max_subdivisions = 2000;
  std::string format = "text";
  std::string constants_file;
  int table_id = 1;
  std::string references = HYDROLAMB_DEFAULT_REFERENCES;
};

struct InvalidInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

QuantumState state_of(const Request& r) {
  QuantumState s{r.N, r.L, r.J, r.Z};
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw InvalidInput(e.what());
  }
  return s;
}

QuadratureSpec spec_of(const Request& r) {
  QuadratureSpec q;
  q.rel_tol = r.rel_tol;
  q.abs_tol = r.abs_tol;
  q.max_subdivisions = r.max_subdivisions;
  try {
    q.validate();
  } catch (const std::invalid_argument& e) {
    throw InvalidInput(e.what());
  }
  return q;
}

PhysicalConstants constants_of(const Request& r) {
  if (r.constants_file.empty()) return default_constants();
  PhysicalConstants c;
  try {
    c = read_constants_file(r.constants_file);
  } catch (const std::exception& e) {
    throw InvalidInput(e.what());
  }
  return c;
}

std::vector<double> cutoffs_of(const Request& r) {
  std::vector<double> c = r.cutoffs.empty() ? default_bethe_cutoffs() : r.cutoffs;
  if (c.size() < 3) throw InvalidInput("--cutoffs needs at least three values");
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!(c[i] > 0.0)) throw InvalidInput("--cutoffs must be positive");
    if (i > 0 && !(c[i] > c[i - 1])) throw InvalidInput("--cutoffs must be strictly ascending");
  }
  return c;
}

std::string j_text(const std::optional<double>& J) {
  if (!J) return "";
  return std::to_string(int(2 * *J)) + "/2";
}

ordered_json state_json(const QuantumState& s) {
  ordered_json j;
  j["N"] = s.N;
  j["L"] = s.L;
  j["J"] = s.J ? number(*s.J) : ordered_json(nullptr);
  j["Z"] = s.Z;
  return j;
}

ordered_json rates_json(const std::vector<PartialRate>& rates) {
  ordered_json a = ordered_json::array();
  for (const auto& p : rates) a.push_back({{"n", p.n}, {"rate", number(p.rate)}});
  return a;
}

// shift

int run_shift_finite(const Request& req) {
  const QuantumState s = state_of(req);
  const PhysicalConstants c = constants_of(req);
  DipoleOptions o{req.dipole, req.dipole ? *req.cutoff_x : 0.0};
  const ShiftResult r = lamb_shift(s, o, spec_of(req), c);
  const std::string mode = req.dipole ? "dipole" : "non-dipole";

  if (req.format == "json") {
    ordered_json j;
    j["state"] = state_json(s);
    j["mode"] = mode;
    if (req.dipole) j["cutoff_x"] = number(o.cutoff_x);
    j["lamb_shift_MHz"] = number(r.lamb_shift_MHz);
    j["tau_phi_integral_term"] = number(r.tau_phi_integral_term);
    j["pv_term"] = number(r.pv_term);
    j["error_estimate_MHz"] = number(r.error_estimate_MHz);
    j["converged"] = r.converged;
    j["partial_rates"] = rates_json(r.partial_rates);
    j["total_rate"] = number(r.total_rate);
    j["diagnostics"] = {{"tau_phi_error_MHz", number(r.diagnostics.tau_phi_error_MHz)},
                        {"pv_error_MHz", number(r.diagnostics.pv_error_MHz)},
                        {"outer_evaluations", r.diagnostics.outer_evaluations},
                        {"inner_evaluations", r.diagnostics.inner_evaluations},
                        {"inner_unconverged", r.diagnostics.inner_unconverged}};
    std::cout << j.dump(2) << "\n";
  } else if (req.format == "csv") {
    const std::string head = std::to_string(s.N) + "," + std::to_string(s.L) + "," + std::to_string(s.Z) + ",";
    std::cout << "N,L,Z,quantity,unit,value\n";
    std::cout << head << "lamb_shift,MHz," << render(r.lamb_shift_MHz) << "\n";
    std::cout << head << "tau_phi_integral_term,MHz," << render(r.tau_phi_integral_term) << "\n";
    std::cout << head << "pv_term,MHz," << render(r.pv_term) << "\n";
    std::cout << head << "error_estimate,MHz," << render(r.error_estimate_MHz) << "\n";
    for (const auto& p : r.partial_rates)
      std::cout << head << "partial_rate_n" << p.n << ",1e6/s," << render(p.rate) << "\n";
    std::cout << head << "total_rate,1e6/s," << render(r.total_rate) << "\n";
  } else {
    std::cout << "(N,L) = (" << s.N << "," << s.L << "), Z = " << s.Z << ", " << mode;
    if (req.dipole) std::cout << ", x = " << render(o.cutoff_x);
    std::cout << "\n";
    std::cout << "  Lamb shift   " << render(r.lamb_shift_MHz) << " MHz  (+- " << render(r.error_estimate_MHz)
              << ")\n";
    std::cout << "    tau/Phi    " << render(r.tau_phi_integral_term) << " MHz\n";
    std::cout << "    PV         " << render(r.pv_term) << " MHz\n";
    for (const auto& p : r.partial_rates)
      std::cout << "  Gamma_" << p.n << "      " << render(p.rate) << " 1e6/s\n";
    std::cout << "  Gamma total  " << render(r.total_rate) << " 1e6/s\n";
    if (!r.converged) std::cout << "  not converged\n";
  }
  return r.converged ? kOk : kUnconverged;
}

/// Dipole shift through the Bethe logarithm and the relativistic constants.
int run_shift_bethe(Request req) {
  if (req.L == 0 && !req.J) req.J = 0.5;
  const QuantumState s = state_of(req);
  const PhysicalConstants c = constants_of(req);
  const BetheResult b = bethe_log(s, cutoffs_of(req), spec_of(req), c);
  const double tilde = dipole_lamb_full(s, b.gamma_NL, c, false);
  std::optional<double> full;
  if (s.J) full = dipole_lamb_full(s, b.gamma_NL, c, true);
  const auto rates = decay_rates(s, DipoleOptions{true, b.cutoffs_used.back()}, c);

  if (req.format == "json") {
    ordered_json j;
    j["state"] = state_json(s);
    j["mode"] = "dipole";
    j["lamb_shift_MHz"] = full ? number(*full) : ordered_json(nullptr);
    j["lamb_shift_tilde_MHz"] = number(tilde);
    j["gamma_NL"] = number(b.gamma_NL);
    j["extrapolation_residual"] = number(b.extrapolation_residual);
    j["converged"] = b.converged;
    j["partial_rates"] = rates_json(rates);
    j["total_rate"] = number(total_rate(rates));
    std::cout << j.dump(2) << "\n";
  } else if (req.format == "csv") {
    const std::string head =
        std::to_string(s.N) + "," + std::to_string(s.L) + "," + (s.J ? render(*s.J) : "") + "," + std::to_string(s.Z) + ",";
    std::cout << "N,L,J,Z,quantity,unit,value\n";
    if (full) std::cout << head << "lamb_shift,MHz," << render(*full) << "\n";
    std::cout << head << "lamb_shift_tilde,MHz," << render(tilde) << "\n";
    std::cout << head << "bethe_log,1," << render(b.gamma_NL) << "\n";
    for (const auto& p : rates) std::cout << head << "partial_rate_n" << p.n << ",1e6/s," << render(p.rate) << "\n";
    std::cout << head << "total_rate,1e6/s," << render(total_rate(rates)) << "\n";
  } else {
    std::cout << "(N,L,J) = (" << s.N << "," << s.L << "," << j_text(s.J) << "), Z = " << s.Z << ", dipole\n";
    if (full) std::cout << "  Lamb shift        " << render(*full) << " MHz\n";
    std::cout << "  without rel. term " << render(tilde) << " MHz\n";
    std::cout << "  Bethe log         " << render(b.gamma_NL) << "\n";
    for (const auto& p : rates) std::cout << "  Gamma_" << p.n << "           " << render(p.rate) << " 1e6/s\n";
    if (!b.converged) std::cout << "  not converged\n";
  }
  return b.converged ? kOk : kUnconverged;
}

int run_shift(const Request& req) {
  if (req.dipole && !req.cutoff_x) return run_shift_bethe(req);
  if (!req.dipole && req.cutoff_x) throw InvalidInput("--cutoff-x requires --dipole");
  return run_shift_finite(req);
}

// rates

int run_rates(const Request& req) {
  const QuantumState s = state_of(req);
  const PhysicalConstants c = constants_of(req);
  const double x = req.cutoff_x.value_or(default_bethe_cutoffs().back());
  const auto rates = decay_rates(s, DipoleOptions{req.dipole, req.dipole ? x : 0.0}, c);
  const double total = total_rate(rates);
  if (req.format == "json") {
    ordered_json j;
    j["partial_rates"] = rates_json(rates);
    j["total_rate"] = number(total);
    std::cout << j.dump() << "\n";
  } else if (req.format == "csv") {
    std::cout << "N,L,Z,n,quantity,unit,value\n";
    const std::string head = std::to_string(s.N) + "," + std::to_string(s.L) + "," + std::to_string(s.Z) + ",";
    for (const auto& p : rates) std::cout << head << p.n << ",partial_rate,1e6/s," << render(p.rate) << "\n";
    std::cout << head << ",total_rate,1e6/s," << render(total) << "\n";
  } else {
    std::cout << "(N,L) = (" << s.N << "," << s.L << "), Z = " << s.Z << (req.dipole ? ", dipole" : ", non-dipole")
              << "\n";
    for (const auto& p : rates) std::cout << "  Gamma_" << p.n << "      " << render(p.rate) << " 1e6/s\n";
    std::cout << "  Gamma total  " << render(total) << " 1e6/s\n";
  }
  return kOk;
}

// bethe

int run_bethe(const Request& req) {
  const QuantumState s = state_of(req);
  const PhysicalConstants c = constants_of(req);
  const BetheResult b = bethe_log(s, cutoffs_of(req), spec_of(req), c);
  if (req.format == "json") {
    ordered_json j;
    j["state"] = state_json(s);
    j["gamma_NL"] = number(b.gamma_NL);
    j["mean_excitation_Ry"] = number(b.mean_excitation_Ry);
    ordered_json cut = ordered_json::array(), est = ordered_json::array();
    for (double x : b.cutoffs_used) cut.push_back(number(x));
    for (double g : b.estimates) est.push_back(number(g));
    j["cutoffs_used"] = cut;
    j["estimates"] = est;
    j["extrapolation_residual"] = number(b.extrapolation_residual);
    j["converged"] = b.converged;
    std::cout << j.dump(2) << "\n";
  } else if (req.format == "csv") {
    std::cout << "N,L,cutoff_x,gamma\n";
    for (std::size_t i = 0; i < b.estimates.size(); ++i)
      std::cout << s.N << "," << s.L << "," << render(b.cutoffs_used[i]) << "," << render(b.estimates[i]) << "\n";
    std::cout << s.N << "," << s.L << ",inf," << render(b.gamma_NL) << "\n";
  } else {
    std::cout << "(N,L) = (" << s.N << "," << s.L << ")\n";
    for (std::size_t i = 0; i < b.estimates.size(); ++i)
      std::cout << "  x = " << std::left << std::setw(10) << render(b.cutoffs_used[i]) << " gamma = "
                << render(b.estimates[i]) << "\n";
    std::cout << "  gamma(N,L) = " << render(b.gamma_NL) << "  (residual " << render(b.extrapolation_residual)
              << ")\n";
    std::cout << "  <E>        = " << render(b.mean_excitation_Ry) << " Ry\n";
    if (!b.converged) std::cout << "  not converged\n";
  }
  return b.converged ? kOk : kUnconverged;
}

// table

int run_table(const Request& req) {
  if (req.table_id < 1 || req.table_id > 3) throw InvalidInput("--id must be 1, 2 or 3");
  std::vector<ReferenceRow> refs;
  try {
    refs = read_references_file(req.references);
  } catch (const std::exception& e) {
    throw InvalidInput(e.what());
  }
  TableOptions opt;
  opt.spec = spec_of(req);
  opt.cutoffs = cutoffs_of(req);
  opt.constants = constants_of(req);
  const auto rows = generate_table(req.table_id, refs, opt);
  bool converged = true;
  for (const auto& r : rows) converged = converged && r.converged;

  auto opt_num = [](const std::optional<double>& v) { return v ? number(*v) : ordered_json(nullptr); };
  auto opt_txt = [](const std::optional<double>& v) { return v ? render(*v) : std::string(); };

  if (req.format == "json") {
    ordered_json j;
    j["table_id"] = req.table_id;
    ordered_json a = ordered_json::array();
    for (const auto& r : rows) {
      ordered_json o;
      o["row_key"] = r.row_key;
      o["N"] = r.N;
      o["L"] = r.L;
      o["J"] = opt_num(r.J);
      o["quantity"] = r.quantity;
      o["unit"] = r.unit;
      o["computed"] = number(r.computed);
      o["reference"] = opt_num(r.reference);
      o["rel_dev"] = opt_num(r.rel_dev);
      o["error_estimate"] = number(r.error_estimate);
      o["converged"] = r.converged;
      a.push_back(o);
    }
    j["rows"] = a;
    j["converged"] = converged;
    std::cout << j.dump(2) << "\n";
  } else if (req.format == "csv") {
    std::cout << "table_id,N,L,J,quantity,unit,computed,reference,rel_dev\n";
    for (const auto& r : rows)
      std::cout << r.table_id << "," << r.N << "," << r.L << "," << opt_txt(r.J) << "," << r.quantity << ","
                << r.unit << "," << render(r.computed) << "," << opt_txt(r.reference) << "," << opt_txt(r.rel_dev)
                << "\n";
  } else {
    // one line per published row, one column per quantity
    std::vector<std::string> keys, quantities;
    std::map<std::pair<std::string, std::string>, const TableRow*> cell;
    for (const auto& r : rows) {
      if (std::find(keys.begin(), keys.end(), r.row_key) == keys.end()) keys.push_back(r.row_key);
      if (std::find(quantities.begin(), quantities.end(), r.quantity) == quantities.end())
        quantities.push_back(r.quantity);
      cell[{r.row_key, r.quantity}] = &r;
    }
    constexpr int w = 18;
    std::cout << "Table " << req.table_id << "\n" << std::left << std::setw(12) << "row";
    for (const auto& q : quantities) std::cout << std::setw(w) << q;
    std::cout << "\n";
    double worst = 0.0;
    for (const auto& k : keys) {
      std::cout << std::setw(12) << k;
      for (const auto& q : quantities) {
        auto it = cell.find({k, q});
        std::cout << std::setw(w) << (it == cell.end() ? "" : render(it->second->computed));
        if (it != cell.end() && it->second->rel_dev) worst = std::max(worst, std::abs(*it->second->rel_dev));
      }
      std::cout << "\n";
    }
    std::cout << "max |rel_dev| against the published values: " << render(worst) << "\n";
    if (!converged) std::cout << "not converged\n";
  }
  return converged ? kOk : kUnconverged;
}

// verify

int run_verify(const Request& req) {
  const QuantumState s = state_of(req);
  const PhysicalConstants c = constants_of(req);
  ordered_json checks = ordered_json::array();
  bool all = true;
  auto add = [&](const std::string& name, double value, double tol) {
    const bool ok = value <= tol;
    all = all && ok;
    checks.push_back({{"name", name}, {"value", number(value)}, {"tolerance", number(tol)}, {"pass", ok}});
  };

  double worst = 0.0;
  for (double tau : {0.1, 0.5, 1.0, 2.0})
    for (double Phi : {0.2, 0.7, 1.5}) {
      const double q = kernel_q_rotated(s.N, s.L, tau, Phi);
      const auto o = oracle::kernel_via_spectral_series(s.N, s.L, Contour::imaginary_time, tau, Phi, s.N + 400);
      worst = std::max(worst, std::abs(q - o.value.real()) / std::max(std::abs(q), 1e-300));
    }
  add("kernel_vs_spectral_series", worst, 1e-10);

  worst = 0.0;
  for (double T : {0.3, 1.1, 2.9})
    for (double Phi : {0.1, 0.6, 1.4}) {
      const GroupElement u = time_evolution_coords(T, Phi);
      const auto a = oracle::bch_reconstruct_2x2(bch_decompose(u));
      worst = std::max(worst, a.max_abs_diff(oracle::disentangled_form(u)));
    }
  add("bch_reconstruction", worst, 1e-12);

  const ShiftResult primary = lamb_shift(s, {}, spec_of(req), c);
  const oracle::EpsShift eps = oracle::shift_via_eps_extrapolated(s, 0.02, {1e-8, 1e-13, 4000}, c);
  add("shift_vs_eps_real_axis",
      std::abs(eps.shift_MHz.real() - primary.lamb_shift_MHz) / std::abs(primary.lamb_shift_MHz), 1e-3);

  ordered_json j;
  j["state"] = state_json(s);
  j["checks"] = checks;
  j["pass"] = all;
  std::cout << j.dump(2) << "\n";
  return all ? kOk : kUnconverged;
}

void add_state_options(CLI::App* app, Request& r, bool need_n = true) {
  auto* n = app->add_option("--n", r.N, "principal quantum number N")->check(CLI::PositiveNumber);
  if (need_n) n->required();
  app->add_option("--l", r.L, "angular momentum L")->check(CLI::NonNegativeNumber);
  app->add_option("--z", r.Z, "nuclear charge Z")->check(CLI::PositiveNumber);
}

void add_numeric_options(CLI::App* app, Request& r) {
  app->add_option("--cutoffs", r.cutoffs, "ascending Bethe-log cutoffs x")->delimiter(',');
  app->add_option("--rel-tol", r.rel_tol, "relative quadrature tolerance");
  app->add_option("--abs-tol", r.abs_tol, "absolute quadrature tolerance");
  app->add_option("--max-subdivisions", r.max_subdivisions, "adaptive subdivision budget");
}

void add_common_options(CLI::App* app, Request& r) {
  app->add_option("--format", r.format, "text, csv or json")->check(CLI::IsMember({"text", "csv", "json"}));
  app->add_option("--constants-file", r.constants_file, "key = value constants file")
      ->envname("HYDROLAMB_CONSTANTS");
}

}  // namespace

int main(int argc, char** argv) {
  Request req;
  CLI::App app{"Lamb shifts and radiative decay rates of hydrogenic states"};
  app.require_subcommand(1);

  auto* shift = app.add_subcommand("shift", "Lamb shift and partial decay rates of one state");
  add_state_options(shift, req);
  shift->add_option("--j", req.J, "total angular momentum J (dipole formula)");
  shift->add_flag("--dipole", req.dipole, "dipole approximation");
  shift->add_option("--cutoff-x", req.cutoff_x,
                    "dipole photon cutoff x; without it the Bethe-log formula is used");
  add_numeric_options(shift, req);
  add_common_options(shift, req);

  auto* rates = app.add_subcommand("rates", "partial radiative decay rates (closed form)");
  add_state_options(rates, req);
  rates->add_flag("--dipole", req.dipole, "dipole approximation");
  rates->add_option("--cutoff-x", req.cutoff_x, "dipole photon cutoff x");
  add_common_options(rates, req);

  auto* bethe = app.add_subcommand("bethe", "Bethe logarithm and mean excitation energy");
  add_state_options(bethe, req);
  add_numeric_options(bethe, req);
  add_common_options(bethe, req);

  auto* table = app.add_subcommand("table", "reproduce a published table");
  table->add_option("--id", req.table_id, "table number (1, 2 or 3)")->required();
  table->add_option("--references", req.references, "reference fixture CSV")->envname("HYDROLAMB_REFERENCES");
  add_numeric_options(table, req);
  add_common_options(table, req);

  auto* verify = app.add_subcommand("verify", "oracle cross-checks");
  verify->group("");
  add_state_options(verify, req);
  add_numeric_options(verify, req);
  add_common_options(verify, req);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*shift) return run_shift(req);
    if (*rates) return run_rates(req);
    if (*bethe) return run_bethe(req);
    if (*table) return run_table(req);
    if (*verify) return run_verify(req);
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}
