// Walks through the library on a small paired-outcome table.

#include <cstdio>

#include "catreg/catreg.hpp"

int main() {
  using namespace catreg;

  // Zero successes in ten trials: the MLE sits on the boundary, the
  // Bayesian estimators pull it inward.
  const BinomialSample zero_of_ten(0, 10);
  std::printf("mle            %.6f\n", mle(zero_of_ten));
  std::printf("bayes-laplace  %.6f\n", bayes_laplace(zero_of_ten));
  std::printf("jeffreys       %.6f\n", jeffreys(zero_of_ten));
  const ShrinkageConfig bl = decompose_shrinkage(BetaPrior::bayes_laplace(), zero_of_ten.trials());
  std::printf("  as shrinkage: lambda=%.6f target=%.2f\n\n", bl.lambda, bl.target);

  const auto paired = ContingencyTable::from_rows({{15, 8}, {2, 25}});
  for (double lambda : {1.0, 0.8, 0.5}) {
    const TestReport r = mcnemar_regularized(paired, lambda, 0.1);
    std::printf("McNemar lambda=%.1f  T*=%.6f  T*/lambda=%.6f  p=%.4f\n", lambda, r.statistic, r.scaled_statistic,
                r.p_two_sided);
  }

  const auto groups = ContingencyTable::from_rows({{10, 20}, {30, 40}});
  const AssociationReport a = regularized_association(groups, 0.5);
  std::printf("\nassociation lambda=0.5: C*=%.6f phi*=%.6f V*=%.6f\n", a.pearson_c, a.phi, a.cramers_v);

  const auto diag = ContingencyTable::from_rows({{1, 0}, {0, 1}});
  const MIResult mi = mi_regularized(diag, 0.5, uniform_targets(2, 2));
  std::printf("regularized MI of [[1,0],[0,1]] at lambda=0.5: %.6f nats (%.6f bits)\n", mi.value, mi.bits());

  BootstrapConfig cfg;
  cfg.replicates = 2000;
  cfg.seed = 7;
  const BootstrapReport boot = bootstrap_mcnemar(paired, 1.0, 0.1, cfg);
  std::printf("\nbootstrap McNemar: observed %.4f, bootstrap p=%.4f, 97.5%% quantile %.4f\n", boot.observed_scaled,
              boot.p_value, boot.quantile(0.975));
  return 0;
}
