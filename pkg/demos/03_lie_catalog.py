"""Left-invariant pairs on nilpotent Lie groups, in exact rational arithmetic."""

from contactpairs.lie import (
    check_jacobi,
    invariant_distribution,
    invariant_involutive,
    invariant_reeb_properties,
    is_nilpotent,
    lookup,
)

for name in ("n4_1", "n6_12", "n6_13"):
    entry = lookup(name)
    g = entry.algebra
    cp = entry.pair()
    rep = cp.check()
    print(f"{name}: dim {g.dim}, Jacobi {check_jacobi(g)}, nilpotent {is_nilpotent(g)[0]}")
    print(f"  pair {cp.name} of type ({cp.h},{cp.k}): {'PASS' if rep.passed else 'FAIL'}, "
          f"volume constant {rep.extra['volume_constant']}")
    print(f"  Reeb identities: {'PASS' if invariant_reeb_properties(cp).passed else 'FAIL'}")
    for which in ("alpha", "eta"):
        dist = invariant_distribution(cp, which)
        print(f"  char. distribution of {which}: dim {len(dist)}, "
              f"involutive {invariant_involutive(cp, which)}")
