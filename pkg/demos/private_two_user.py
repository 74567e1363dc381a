"""Two users, two files: a private scheme with three subfiles per file.

Builds the non-private baseline and shows how much a user learns about the
other user's demand, then builds the private three-subfile scheme and its
dual, and prints the private memory-rate vertices.
"""

from fractions import Fraction

from privcache import (
    build_mn,
    build_table1,
    dualize,
    privacy_report,
    rate_and_memory,
    time_share,
    tradeoff_curve,
    verify_correctness,
)


def describe(name, s):
    M, R = rate_and_memory(s)
    rep = privacy_report(s)
    print(f"{name:<22} M={str(M):<4} R={str(R):<4} f={s.params.subpack:<2} "
          f"correct={not verify_correctness(s)} leak={rep.max_mutual_info_bits} bits "
          f"ambiguity={rep.min_ambiguity}")


baseline = build_mn(2, 2, 1)
describe("non-private baseline", baseline)

private = build_table1()
describe("private, f = 3", private)

dual = dualize(private)
describe("dual of private", dual)

describe("half/half time share", time_share(private, dual, Fraction(1, 2)))

print("\nprivate trade-off vertices:")
for p in tradeoff_curve():
    print(f"  (M, R) = ({p.M}, {p.R})  from {p.label}")
