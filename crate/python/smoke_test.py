"""Smoke test for the gitmilnor extension module.

Build and install first:
    maturin develop --release -m crates/py/Cargo.toml
"""

import json

import gitmilnor as gm


def main():
    f = gm.Polynomial("x^3+y^3")
    assert str(f) == "x1^3 + x2^3"
    assert f.n_vars == 2 and f.degree == 3
    assert gm.associated_form_of(f) == "1/36*u1*u2"

    gens = [gm.Polynomial("x^2", 2), gm.Polynomial("y^2", 2)]
    assert gm.is_regular_sequence(gens)
    assert gm.hilbert_function(gens, 3) == [1, 2, 1, 0]
    assert gm.associated_form(gens) == "u1*u2"
    pivots, weight = gm.pivot_set(gens, 2, [-1, 1])
    assert pivots == [[2, 0], [0, 2]] and weight == 0
    report = gm.socle_monomial_report(gens, [-1, 1])
    assert report["dominates"] and report["missing"] == [1, 1]

    cubic = gm.Polynomial("x^2*y")
    assert gm.torus_status(cubic) == "unstable"
    assert gm.binary_oracle(cubic)["max_multiplicity"] == 2
    found = gm.find_destabilizer(cubic, budget=0)
    assert found["status"] == "unstable" and found["lambda"] == [1, -1]
    assert gm.gradient_point(gm.Polynomial("x^3", 2))["status"] == "degenerate"
    assert gm.hm_weight(gm.Polynomial("x^3+y^3+z^3"), [-1, 0, 1]) == 0

    code, out = gm.run(["stability", "--form", "x^2*y", "--budget", "0"])
    assert code == 0
    assert json.loads(out)["certificate"]["lambda"] == [1, -1]
    code, _ = gm.run(["gradient", "--form", "x^2+y^3"])
    assert code == 2

    try:
        gm.Polynomial("x^^2")
    except ValueError:
        pass
    else:
        raise AssertionError("parse error expected")

    print("python smoke test passed")


if __name__ == "__main__":
    main()
