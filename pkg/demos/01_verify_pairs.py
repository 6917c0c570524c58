"""Verify the Darboux models and the T^4 pairs, then break one on purpose."""

from contactpairs.catalog import build
from contactpairs.forms import one_form
from contactpairs.pair import ContactPair, darboux_pair, verify

for h, k in [(1, 0), (0, 1), (1, 1), (2, 1)]:
    rep = verify(darboux_pair(h, k))
    print(f"darboux({h},{k}) on R^{2 * h + 2 * k + 2}: {'PASS' if rep.passed else 'FAIL'}, "
          f"volume coefficient {rep.condition('volume').detail['value']}")

t4 = build("t4_product").pair
print()
print(verify(t4).summary())

for lam in ("1/10", "1/2", "1"):
    rep = verify(build(f"t4_irrational({lam})").pair)
    print(f"t4_irrational({lam}): volume coefficient {rep.condition('volume').detail['value']}")

# eta = dth1 makes the top form vanish identically
broken = ContactPair(t4.chart, t4.alpha, one_form(t4.chart, {"th1": 1}), 1, 0, name="t4_broken")
print()
print(verify(broken).summary())
