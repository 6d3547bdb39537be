"""Smoke test for the `btl` extension module.

Build and run:

    maturin develop -m crates/py/Cargo.toml --features extension-module
    python python/smoke_test.py

or, without maturin:

    cargo build --release -p btl-py --features extension-module
    cp target/release/libbtl.so python/btl.so   # btl.pyd on Windows, libbtl.dylib → btl.so on macOS
    python python/smoke_test.py
"""

import cmath
import math

import btl


def main() -> None:
    w = btl.Symbol.scalar([(1, 1)])
    wb = btl.Symbol.scalar([(-1, 1)])

    # T_{w w̄} − T_w T_{w̄} is the projection onto constants.
    assert btl.semicommutator(w, wb) == [[1 + 0j]]
    for z in (0j, 0.5, cmath.rect(0.8, 1.0)):
        report = btl.criterion(w, wb, z)
        assert abs(report.norm - (1 - abs(z) ** 2)) < 1e-12, report

    # Genuinely matrix-valued zero semi-commutator.
    f = btl.Symbol(2, [(1, [[1, 1], [0, 0]])])
    g = btl.Symbol(2, [(-1, [[1, 0], [-1, 0]])])
    zero, semi, crit = btl.zero_semicommutator_check(f, g)
    assert zero and semi == 0.0 and crit <= 1e-10
    assert all(o.verified for o in btl.semicommutator_certificates(f, g))

    # Square wave: the criterion is larger on the jump than away from it.
    s = btl.Symbol.squarewave(1, 32)
    r = 1 - 1 / 32
    on = btl.criterion(s, s, r).norm
    off = btl.criterion(s, s, cmath.rect(r, math.pi / 2)).norm
    assert on > 5 * off, (on, off)

    cert = btl.prop4_solve([[[1, 0], [1, 0]]], [[0, 1], [0, -1]])
    assert cert.in_unit_ball() and cert.residual_g <= 1e-10

    xi = btl.xi2([wb, wb], [wb, -wb], 0.3 + 0.1j)
    assert xi.value <= 1e-6

    print("btl smoke test passed")


if __name__ == "__main__":
    main()
