"""Smoke test for the hyperdet Python bindings and the CLI JSON output.

Run after `pip install --no-build-isolation -e crates/hyperdet-py`:

    python3 python/smoke_test.py
"""

import json
import math
import os
import pathlib
import sys
import tempfile

import hyperdet

ROOT = pathlib.Path(__file__).resolve().parent.parent


def close(a, b, tol):
    return abs(a - b) <= tol * max(1.0, abs(b))


def main():
    p = hyperdet.KernelParams(0.3, 0.2, 0.4, 0.1)
    assert close(p.c(), 1.0, 1e-15)

    d = hyperdet.fredholm_det(p, 0.5)
    curve = hyperdet.tau_curve(p, [0.2, 0.5, 0.8])
    assert curve.failure is None
    assert close(math.exp(curve.ln_d[1]), d.value, 1e-6), (curve.ln_d, d)

    rep = hyperdet.extract_constant(p)
    assert rep.abs_error <= 1e-3, rep.abs_error

    ex2 = hyperdet.example_params("ex2")
    ode = hyperdet.tau_curve(ex2, [0.5])
    assert close(ode.ln_d[0], hyperdet.example_ln_tau("ex2", 0.5), 1e-6)

    # identity check: G-bracket equals 2^(2z^2) e^(-beta)
    z = 0.3
    _, beta = hyperdet.tracy_beta(math.sin(math.pi * z) / math.pi)
    assert close(math.exp(2 * z * z * math.log(2) - beta), hyperdet.conjectured_c_m(z, z), 1e-10)

    try:
        hyperdet.KernelParams(0.3, 0.2, -0.5, -0.1)
    except ValueError:
        pass
    else:
        raise AssertionError("non-positive c must be rejected")

    schema_path = ROOT / "schema" / "report.schema.json"
    with tempfile.TemporaryDirectory() as tmp:
        out = os.path.join(tmp, "constant.json")
        code = hyperdet.run_cli(["constant", "--out", out])
        assert code == 0, code
        report = json.loads(pathlib.Path(out).read_text())
        try:
            import jsonschema
        except ImportError:
            print("jsonschema missing; skipped schema validation")
        else:
            jsonschema.validate(report, json.loads(schema_path.read_text()))
        assert report["abs_error"] <= 1e-3

        missing = os.path.join(tmp, "none.csv")
        assert hyperdet.run_cli(["det", "--grid", "0", "--out", missing]) == 2
        assert not os.path.exists(missing)

    print("python smoke test passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
