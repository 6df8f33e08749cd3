"""Agreement statistics between two raters on a 1-5 scale.

Builds two synthetic judges over twelve poems: judge B mostly follows
judge A with occasional one-point drift, and a third contrarian reverses
the scale. Shows how exact agreement, weighted kappa, and rank correlation
react differently.
"""

import random

from poemetric.agreement import pao, spearman_rho, weighted_kappa

rng = random.Random(7)
judge_a = [rng.randint(1, 5) for _ in range(12)]
judge_b = [min(5, max(1, s + rng.choice((-1, 0, 0, 0, 1)))) for s in judge_a]
contrarian = [6 - s for s in judge_a]

print(f"judge A:    {judge_a}")
print(f"judge B:    {judge_b}")
print(f"contrarian: {contrarian}")


def report(name, a, b):
    print(f"\n{name}")
    print(f"  exact agreement (PAo): {pao(a, b):.3f}")
    print(f"  weighted kappa:        {weighted_kappa(a, b):.3f}")
    print(f"  spearman rho:          {spearman_rho(a, b):.3f}")


# Quadratic weights forgive near misses, so kappa stays high for judge B;
# the contrarian agrees on nothing but ranks in perfect reverse.
report("A vs B (drifting)", judge_a, judge_b)
report("A vs contrarian", judge_a, contrarian)
report("A vs A", judge_a, judge_a)
