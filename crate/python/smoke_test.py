#!/usr/bin/env python3
"""Smoke test for the qcb_py extension module.

Build the module first:

    cargo build --release -p qcb-python

then run this script from anywhere inside the repository:

    python3 python/smoke_test.py
"""

import math
import shutil
import sys
import tempfile
from pathlib import Path


def load_module():
    repo = Path(__file__).resolve().parent.parent
    candidates = [
        repo / "target" / profile / name
        for profile in ("release", "debug")
        for name in ("libqcb_py.so", "qcb_py.so", "libqcb_py.dylib")
    ]
    built = next((p for p in candidates if p.exists()), None)
    if built is None:
        sys.exit("qcb_py not built; run: cargo build --release -p qcb-python")
    stage = Path(tempfile.mkdtemp(prefix="qcb_py_"))
    shutil.copy2(built, stage / "qcb_py.so")
    sys.path.insert(0, str(stage))
    import qcb_py

    return qcb_py


def approx(a, b, rel=1e-9, abs_tol=0.0):
    return abs(a - b) <= max(rel * max(abs(a), abs(b)), abs_tol)


def main():
    qcb = load_module()
    checks = 0

    def ok(name, cond):
        nonlocal checks
        if not cond:
            sys.exit(f"FAIL: {name}")
        checks += 1
        print(f"ok: {name}")

    ks = qcb.modes(3)
    ok("modes(3)", len(ks) == 3 and approx(ks[2], 2 * math.pi / 3) and ks[1] == 0.0)

    value, region = qcb.gap(1.0, 1.5)
    ok("gap region A", region == "A" and approx(value, 0.5))
    value, region = qcb.gap(0.5, 1.0)
    ok("gap critical line", region == "critical" and value <= 1e-12)

    m = qcb.metric_tensor(1.0, 0.0, zero_t=True)
    ok(
        "zero-T Ising metric",
        approx(m["nonclassical"]["ll"], 0.125)
        and approx(m["max_eig"], 0.125)
        and m["classical_zero_t_limit"],
    )

    m = qcb.metric_tensor(1.0, 0.0, beta=10.0)
    ok(
        "finite-T tanh correction",
        approx(m["nonclassical"]["ll"], 0.125 * math.tanh(5.0) ** 2, rel=1e-6),
    )

    m = qcb.metric_tensor(0.0, 0.5, t=0.5)
    ok("XX line exact zero", m["nonclassical"]["ll"] == 0.0)

    q, s_star = qcb.chernoff_q([[0.5, 0.0], [0.0, 0.5]], [[1.0, 0.0], [0.0, 0.0]])
    ok("chernoff boundary minimum", approx(q, 0.5, rel=1e-10) and s_star == 1.0)

    rho = qcb.mode_pair_state(math.pi / 2, 2.0, 1.0, 0.0)
    trace = sum(rho[i][i].real for i in range(4))
    ok("mode pair state trace", approx(trace, 1.0, rel=1e-12))

    check = qcb.fd_metric_check(2.0, 0.8, 0.3, (0.0, 0.0, 1.0), n=11)
    ok("oracle fd check", check["rel_err"] < 1e-4)

    fit = qcb.fit_exponent(1.0, 1.0, "nc_ll")
    ok(
        "critical exponent fit",
        fit["model"] == "critical-power-law" and abs(fit["alpha"] + 1.0) < 0.05,
    )

    a = qcb.metric_tensor(0.8, 0.7, t=0.2)["max_eig"]
    b = qcb.metric_tensor(0.8, -0.7, t=0.2)["max_eig"]
    ok("field-parity of the spectrum", approx(a, b, rel=1e-9))

    ok("calibration constant exposed", qcb.NC_TENSOR_TO_CHERNOFF == 0.5)

    print(f"smoke test: all {checks} checks passed")


if __name__ == "__main__":
    main()
