"""From a placement delivery array to a demand-private scheme.

The (6, 4, 2, 4) array serves six users; splitting them into three pairs
of virtual users gives a private scheme for three real users and two files.
"""

from privcache import (
    EXAMPLE_PDA,
    build_from_pda,
    find_realizations,
    format_pda,
    privacy_report,
    privatize,
    rate_and_memory,
    validate_pda,
    verify_correctness,
)

print("array (rows are subfiles, columns are users):")
print(format_pda(EXAMPLE_PDA))
print("violations:", validate_pda(EXAMPLE_PDA))

base = build_from_pda(EXAMPLE_PDA, 2)
s = privatize(base)
M, R = rate_and_memory(s)
print(f"private scheme: K={s.params.users} N={s.params.files} f={s.params.subpack} M={M} R={R}")
print("correct:", not verify_correctness(s), " exactly private:", privacy_report(s).exact_private)

def row(*cols):
    return sum(1 << (7 - c) for c in cols)


# one delivery for demand (A, A, B); A_j is column j and B_j is column 4 + j
target = [row(5, 2, 0), row(0, 3, 5), row(7, 4, 6), row(2, 5, 3)]
for keys, branch in find_realizations(s, (0, 0, 1), target):
    print("rows produced under keys", keys)
