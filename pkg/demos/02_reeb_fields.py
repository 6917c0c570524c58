"""Reeb fields of a pair, their defining identities, and flow invariance."""

from contactpairs.catalog import build
from contactpairs.pair import check_reeb_properties, reeb_fields, reeb_flow_invariance

for cid in ("t4_product", "t4_irrational(1/2)", "darboux(1,1)"):
    cp = build(cid).pair
    rp = reeb_fields(cp)
    print(f"{cid}")
    print(f"  X_alpha = ({', '.join(str(c) for c in rp.alpha.field.components)})")
    print(f"  X_eta   = ({', '.join(str(c) for c in rp.eta.field.components)})")
    rep = check_reeb_properties(cp, rp)
    print(f"  {len(rep.conditions)} identities: {'PASS' if rep.passed else 'FAIL'}")
    dev = reeb_flow_invariance(cp, rp, t=0.1, n_points=5)
    print(f"  max coefficient drift along the flows: {max(dev.values()):.2e}")
