"""Exact pullback invariance of contact forms under torus diffeomorphisms."""

from contactpairs.catalog import build
from contactpairs.forms import ChartMap, pullback
from contactpairs.invariance import contact_condition, pullback_check

for cid in ("t3_fn(1)", "t3_fn(2)", "t3_reflection", "t5_contact", "fv_germ"):
    ex = build(cid)
    rep = pullback_check(ex.map, ex.form)
    print(f"{cid}: {rep.conditions[0].status}")

ex = build("t3_fn(2)")
other = build("t3_fn(3)").form
diff = pullback(ex.map, other) - other
print(f"f_2 pulling back the n=3 form leaves a difference of {len(diff.terms)} terms")

t5 = build("t5_contact").form
cond = contact_condition(t5, grid=9)
print(f"t5 form: alpha ^ (d alpha)^2 non-vanishing, min |coefficient| = {cond.min_abs:.3f}")

shift = ChartMap(ex.map.source, ex.map.target, ["th1", "th2", "th3 + pi/3"])
print(f"a phase shift of th3: {pullback_check(shift, ex.form).conditions[0].status}")
