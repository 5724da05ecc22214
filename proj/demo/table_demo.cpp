// Prints a few shifts and rates, then the first published table next to the
// computed values.

#include <cstdio>

#include "hydrolamb/hydrolamb.hpp"

int main() {
  using namespace hydrolamb;

  for (auto [N, L] : {std::pair{1, 0}, {2, 0}, {2, 1}}) {
    const ShiftResult r = lamb_shift({N, L});
    std::printf("N=%d L=%d  shift %.6f MHz  (tau/Phi %.6f, PV %.6f)\n", N, L, r.lamb_shift_MHz,
                r.tau_phi_integral_term, r.pv_term);
    for (const auto& p : r.partial_rates) std::printf("    -> n=%d  %.6f 1e6/s\n", p.n, p.rate);
  }

  const BetheResult b = bethe_log({2, 1});
  std::printf("\nBethe log (2,1) = %.8f\n", b.gamma_NL);
  std::printf("2p1/2 dipole shift %.5f MHz\n", dipole_lamb_full({2, 1, 0.5}, b.gamma_NL));

  std::printf("\n%-10s %-18s %14s %14s %10s\n", "row", "quantity", "computed", "published", "rel dev");
  for (const auto& row : generate_table(1, read_references_file(HYDROLAMB_DEFAULT_REFERENCES)))
    std::printf("%-10s %-18s %14.7g %14.7g %10.2e\n", row.row_key.c_str(), row.quantity.c_str(), row.computed,
                *row.reference, row.rel_dev.value_or(0.0));
}
