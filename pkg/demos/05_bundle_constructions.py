"""Invariant contact-pair data on T^2-bundles over T^2 with a prescribed singular set."""

from contactpairs.bundle import (
    SingularSetSpec,
    area_form,
    construct_sigma_circles,
    construct_sigma_empty,
    construct_sigma_full,
    check_conditions,
    classify_singular_set,
    singular_function,
    verify_assembled,
)
from contactpairs.forms import DifferentialForm

full = construct_sigma_full()
print("singular set everything:", full.to_dict())
print(check_conditions(full).summary())
print(f"assembled on T^4: {'PASS' if verify_assembled(full).passed else 'FAIL'}")

empty, rep = construct_sigma_empty(area_form(), DifferentialForm.zero(area_form().chart, 2))
print()
print("singular set empty:", empty.to_dict())
print(rep.summary())

for levels in ("0,pi", "0,pi/2,pi,3*pi/2"):
    bd, r, rep = construct_sigma_circles(SingularSetSpec.circles(levels))
    print()
    print(f"singular set over th2 in {{{levels}}}: f1 = {bd.f1}, f2 = {bd.f2}, beta scaled by {r}")
    print(f"  classified: {classify_singular_set(singular_function(bd)).to_dict()}")
    print(f"  cc1-cc3: {'PASS' if rep.passed else 'FAIL'}, "
          f"assembled on T^4: {'PASS' if verify_assembled(bd).passed else 'FAIL'}")
