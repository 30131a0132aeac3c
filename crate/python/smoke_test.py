"""Smoke test for the wzcert_py extension.

Build and install first:

    maturin build --release -m crates/py/Cargo.toml
    pip install target/wheels/wzcert_py-*.whl
"""

import json
import pathlib
import sys

import wzcert_py as wz

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "crates" / "core" / "tests" / "fixtures"


def main():
    b = wz.CoeffTable.expand(6)
    assert str(b.get(1, 1)) == str(wz.Poly("(1-c)/2")), b.get(1, 1)
    assert b.get(0, 2) == wz.Poly("(1-3*c)^2/4")
    assert b.negatives_on_grid(10) == 0

    a = wz.CoeffTable.expand(4, "-1")
    assert a.get(1, 1) == wz.Poly("1-c")
    assert wz.CoeffTable.from_csv(b.to_csv()).to_json() == b.to_json()

    rho, e_c, e_1mc, l = wz.square_certificate(wz.Poly("3*c*(1-c)/2"))
    assert (rho, e_c, e_1mc, str(l)) == ("3/2", 1, 1, "1")
    assert wz.poly_sqrt(wz.Poly("c+1")) is None

    report = json.loads(wz.verify_fact1(4, "total", "auto"))
    assert report["first_nonzero_order"] is None and report["sign"] == -1
    report = json.loads(wz.verify_fact1(3, "partial"))
    assert report["first_nonzero_order"] == 1
    try:
        wz.verify_fact1(0)
    except ValueError:
        pass
    else:
        raise AssertionError("order 0 accepted")

    cert = wz.Certificate.from_json((FIXTURES / "cert.json").read_text())
    assert cert.verify(seed=1)
    rec = cert.recurrence()
    assert rec.order == 3 and rec.vars == ["n", "k", "c"]
    col = rec.unroll([b.get(1, 1), b.get(1, 2), b.get(1, 3)], 1, 6, [("k", "1")])
    assert all(x == b.get(1, n) for n, x in zip(range(1, 7), col))
    assert wz.Recurrence.from_json(rec.to_json()).equal_up_to_scalar(rec)

    k0 = wz.Certificate.from_json((FIXTURES / "cert_k0.json").read_text())
    code, text = wz.prove_fact2(n_max=12, certificate=cert, certificate_k0=k0)
    steps = {s["name"]: s["status"] for s in json.loads(text)["steps"]}
    assert code == 0, steps
    assert steps["initials_matched[k=2]"] == "proved"
    print("python smoke test: ok")


if __name__ == "__main__":
    sys.exit(main())
