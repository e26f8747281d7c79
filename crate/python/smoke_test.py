#!/usr/bin/env python3
"""Smoke test for the isochrony_py extension module.

Builds nothing itself: run `cargo build --release -p isochrony-python`
first, then `python3 python/smoke_test.py`. The script locates the compiled
cdylib under target/, makes it importable, and exercises one entry point
from each area of the library.
"""

import json
import math
import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def load_module():
    candidates = [
        ROOT / "target" / "release" / "libisochrony_py.so",
        ROOT / "target" / "debug" / "libisochrony_py.so",
        ROOT / "target" / "release" / "libisochrony_py.dylib",
        ROOT / "target" / "debug" / "libisochrony_py.dylib",
    ]
    built = next((p for p in candidates if p.exists()), None)
    if built is None:
        sys.exit(
            "isochrony_py is not built; run "
            "`cargo build --release -p isochrony-python` first"
        )
    stage = Path(tempfile.mkdtemp(prefix="isochrony_py_"))
    shutil.copy(built, stage / "isochrony_py.so")
    sys.path.insert(0, str(stage))
    import isochrony_py

    return isochrony_py


def check(name, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    print(f"[{status}] {name}" + (f"  ({detail})" if detail else ""))
    if not ok:
        sys.exit(1)


def main():
    iso = load_module()

    # exact classification: U = x² is harmonic with ω² = 2
    u = iso.RationalPotential(["0", "0", "1"], ["1"])
    c = iso.classify_potential(u)
    check(
        "classify x^2",
        c.verdict() == "harmonic" and c.omega_sq() == "2",
        c.to_json(),
    )
    check(
        "derived period is sqrt(2)*pi",
        abs(c.period() - math.sqrt(2) * math.pi) < 1e-12,
        f"T = {c.period()}",
    )

    # canonical singular shape round-trips exactly
    u = iso.RationalPotential(["1", "0", "0", "0", "1"], ["0", "0", "1"])
    c = iso.classify_potential(u)
    check(
        "classify (x^4+1)/x^2",
        c.verdict() == "singular" and c.omega_sq() == "8" and c.c_sq() == "1",
        c.to_json(),
    )
    back = iso.reconstruct(c)
    check(
        "reconstruct inverts classify",
        back.numerator() == ["1", "0", "0", "0", "1"]
        and back.denominator() == ["0", "0", "1"],
        repr(back),
    )

    # a cubic is refused with a typed reason
    c = iso.classify_potential(iso.RationalPotential(["0", "0", "0", "1"], ["1"]))
    check(
        "classify x^3 refused",
        c.verdict() == "not_isochronous" and c.reason() == "NumeratorDegree",
        c.to_json(),
    )

    # functional equation: solved family holds, a cubic alpha does not
    alpha, beta = iso.solve_functional_equation_family("1", "1", "1")
    holds, _ = iso.check_functional_equation(alpha, beta)
    check("functional equation holds for solved family", holds)
    holds, residual = iso.check_functional_equation(
        iso.Polynomial(["0", "0", "0", "1"]), iso.Polynomial(["0", "0", "3"])
    )
    check("functional equation rejects alpha = x^3", not holds, residual)

    # quadrature oracle: T(x², E) = √2·π at any energy
    x2 = json.dumps({"kind": "rational", "num": ["0", "0", "1"], "den": ["1"]})
    t = iso.period_at(x2, 7.0)
    check(
        "period quadrature",
        abs(t - math.sqrt(2) * math.pi) < 1e-8,
        f"T(7) = {t}",
    )

    # the built-in algebraic example is isochronous over its whole well
    alg = json.dumps({"kind": "builtin", "name": "algebraic_example"})
    spread = iso.period_spread(alg, 0.01, 0.24, 10)
    check("algebraic example spread", spread < 1e-6, f"spread = {spread:.2e}")

    # trajectory oracle agrees on the ω = 2 singular well
    eq1 = json.dumps(
        {"kind": "rational", "num": ["1", "0", "0", "0", "1/2"], "den": ["0", "0", "1"]}
    )
    t = iso.trajectory_period(eq1, 2.0)
    check("trajectory period", abs(t - math.pi) < 1e-6, f"T = {t}")

    # two-particle chain returns after π/ω
    d = iso.chain_return_distance(2, 1.0, 1.0, [-1.0, 1.0], [0.0, 0.0], math.pi)
    check("chain phase-space return", d < 1e-6, f"distance = {d:.2e}")

    # planar-oscillator reduction: r(t) has period π/ω
    c_sq, t = iso.isotropic_reduction(1.0, 1.0)
    check(
        "isotropic reduction",
        abs(c_sq - 0.5) < 1e-12 and abs(t - math.pi) < 1e-6,
        f"C = {c_sq}, T = {t}",
    )

    # spectra are equidistant with gap 4*sqrt(A)
    evs = iso.spectrum(1.0, 2.0, m=4, method="fd")
    gaps = [b - a for a, b in zip(evs, evs[1:])]
    check(
        "fd spectrum gaps",
        all(abs(g - 4.0) < 1e-2 for g in gaps),
        f"gaps = {['%.4f' % g for g in gaps]}",
    )
    evs = iso.spectrum(1.0, -0.1875, m=3, method="shooting")
    check(
        "shooting spectrum with negative B",
        abs(evs[0] - 2.5) < 1e-5,
        f"E0 = {evs[0]}",
    )

    # classifier and quadrature agree on a small seeded corpus
    total, positives, disagreements = iso.cross_validate(count=24, seed=7)
    check(
        "cross validation",
        total == 24 and positives >= 4 and disagreements == 0,
        f"{positives} positives, {disagreements} disagreements",
    )

    print("all smoke tests passed")


if __name__ == "__main__":
    main()
