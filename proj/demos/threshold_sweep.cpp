// Thresholds, sufficient sample sizes and the Fano ceiling for a family of
// binary chains with uniform edge correlation.

#include <iostream>
#include <vector>

#include "treelearn/treelearn.hpp"

using namespace treelearn;

int main() {
  std::cout << "p=10 binary chain, uniform edge correlation rho\n";
  std::cout << "rho    I_threshold[bits]  sufficient n (finite alphabet, C=0.05, "
               "delta=0.05)\n";
  for (double rho : {0.1, 0.15, 0.2, 0.3, 0.4}) {
    std::vector<double> edges(9, rho);
    const DiscreteTreeModel m = to_discrete(binary_chain(edges));
    const double ith = information_threshold(m, ThresholdMethod::local).value_bits;
    BoundQuery q;
    q.regime = BoundRegime::finite_alphabet;
    q.threshold_bits = ith;
    q.p = 10;
    q.delta = 0.05;
    q.explicit_C = 0.05;
    const SufficientN r = sufficient_n(q);
    std::cout << rho << "  " << ith << "  ";
    if (r.feasible)
      std::cout << r.n << "\n";
    else
      std::cout << "infeasible (" << r.reason << ")\n";
  }
  std::cout << "\nFano: samples below which minimax failure stays >= 1/2\n";
  for (double eta : {0.01, 0.001, 0.0001})
    std::cout << "  p=15, eta=" << eta << ": n_max = " << fano_sample_bound(15, eta)
              << "\n";
  return 0;
}
