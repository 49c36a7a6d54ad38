"""Smoke test for the extension module.

Build with `cargo build --release -p scattered-py`, copy
`target/release/libscattered.so` next to this file as `scattered.so`
(or `maturin develop` from crates/py), then run it.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

import scattered as sc


def main() -> None:
    x = sc.Space("ord[w^2]")
    stages = x.derive()
    assert stages["height"] == "3", stages["height"]
    assert x.rank("w^2") == "2"
    assert x.in_stage("w*3", "1") and not x.in_stage("w*3+1", "1")
    assert x.characteristic() == ("2", 1)
    assert x.scattered() == (True, "3")

    z = sc.Space("prod(z,ord[w])")
    assert z.rank("(w;w)") == "2"
    assert z.oracle_check(depth=2)["divergence"] is None

    a = sc.family("prop2", ["2", "5"])
    b = sc.family("prop2", ["2", "7"])
    cert = sc.homeomorphic(a, b)
    assert cert["verdict"] == "distinct", cert
    assert sc.pairwise([a, b], select="sigma")["all_distinct"]

    h = sc.family("thm2_regular", ["w+1"], kappa="aleph_1")
    assert set(h.psi("aleph_1")) >= {"w+1"}

    order = sc.ultra_order({
        "points": ["a", "b", "c", "d"],
        "dist": [[0, "1/2", 1, 1], ["1/2", 0, 1, 1], [1, 1, 0, "1/4"], [1, 1, "1/4", 0]],
    })
    assert sorted(order["order"]) == ["a", "b", "c", "d"]

    try:
        sc.Space("ord[w^2")
    except sc.ScatteredError:
        pass
    else:
        raise AssertionError("bad expression accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
