"""How many genuinely different subgroups are there, leak-wise?

Enumerates all rank-2 subgroups of the sign-flipping group for n = 4
(there are 35) and groups them by their leak distribution: the multiset
of iota'S iota over the group, displayed on the exact n-scaled integer
axis. Only 6 distinct distributions remain - choosing a subgroup is
really choosing one of a handful of leak profiles, and exactly one of
them (the Walsh pattern) is an oracle with zero leak.
"""

from collections import Counter

from nos import gaussian_binomial, leak_census, leak_summary, subgroup_from_basis_masks

N = 4
RANK = 2

report = leak_census(N, rank=RANK)
print(f"n = {N}: {gaussian_binomial(N, RANK)} subgroups of rank {RANK}, "
      f"{report.distinct_counts[RANK]} distinct leak distributions\n")

for rep in report.representatives:
    if rep["rank"] != RANK:
        continue
    s = subgroup_from_basis_masks(N, rep["basis_masks"])
    summ = leak_summary(s)
    hist = dict(sorted(Counter(summ.scaled_distribution).items(), reverse=True))
    tag = "  <- oracle (zero leak)" if summ.delta_abs == 0.0 else ""
    print(f"  scaled leaks {hist}   delta = {summ.delta:+.2f}, "
          f"delta_abs = {summ.delta_abs:.2f}{tag}")

print("\nScaling up: n = 9 has", sum(gaussian_binomial(9, p) for p in range(10)),
      "subgroups in total, but only a few hundred distinct leak distributions;")
print("run `nos census --n 9` (about half a minute) to see the full breakdown.")
