"""Exhaustive searches showing smaller subpacketization cannot be private.

With two subfiles per file no linear scheme reaches (M, R) = (1, 1/2)
privately.  With three subfiles and uncoded caches no two-option key
randomization reaches (1, 2/3).  Each search also runs without the privacy
condition as a control, which does find schemes.
"""

from privcache import search_sub2, search_sub3_uncoded

for name, run in (("two subfiles", search_sub2), ("three subfiles, uncoded", search_sub3_uncoded)):
    private = run()
    control = run(privacy_condition=False)
    print(f"{name}: {private.candidates_examined} candidates, "
          f"{private.feasible_found} private schemes, {control.feasible_found} without privacy, "
          f"{private.elapsed:.2f}s")
    for check, ok in private.sub_lemma_checks.items():
        print(f"  {check}: {ok}")
