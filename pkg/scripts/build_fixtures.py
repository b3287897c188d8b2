#!/usr/bin/env python3
"""Produce Maass cusp form fixtures for the level-one even and odd ground
states by implicit-automorphy collocation.

The form u(x+iy) = sum_n a_n sqrt(y) K_{iR}(2 pi n y) cs(2 pi n x), with
cs = cos or sin by parity and a_1 = 1, is sampled on a low horocycle
y = Y; each sample point is pulled back into the fundamental domain, where
the same expansion converges quickly, and equality of the two expressions
gives a linear system for the coefficients.  The eigenvalue R is refined
by a secant iteration on the requirement that two different heights Y
yield the same a_2.  Two-height agreement across all kept coefficients and
the multiplicative (Hecke) relations serve as independent quality seals.

Writes JSON fixtures consumed by periodlab.maass_forms.load_form.
"""

import argparse
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from periodlab.maass_forms import MaassFormData, form_to_json  # noqa: E402
from periodlab.special_functions import bessel_k  # noqa: E402


def pull_back(x: float, y: float) -> tuple[float, float]:
    """Translate and invert into |x| <= 1/2, x^2 + y^2 >= 1."""
    z = complex(x, y)
    for _ in range(100):
        z = complex(z.real - round(z.real), z.imag)
        if abs(z) < 1.0:
            z = -1.0 / z
        else:
            return z.real, z.imag
    raise RuntimeError("pullback did not terminate")


def kappa_row(R: float, y: float, n_max: int) -> np.ndarray:
    """sqrt(y) K_{iR}(2 pi n y) for n = 1..n_max."""
    out = np.empty(n_max)
    for n in range(1, n_max + 1):
        out[n - 1] = (bessel_k(1j * R, 2.0 * math.pi * n * y)
                      * math.sqrt(y)).real
    return out


def solve_coefficients(R: float, Y: float, Q: int, M: int,
                       parity: str) -> np.ndarray:
    """Coefficients a_1..a_M (a_1 = 1) from collocation at height Y."""
    cs = np.cos if parity == "even" else np.sin
    xs = (np.arange(1, Q + 1) - 0.5) / (2.0 * Q)
    stars = [pull_back(x, Y) for x in xs]
    kappa_y = kappa_row(R, Y, M)
    n = np.arange(1, M + 1)
    # rows_j,n: cs(2 pi n x_j) - (kappa_n(y*_j)/kappa_n(Y)) cs(2 pi n x*_j)
    rows = cs(2.0 * math.pi * np.outer(xs, n))
    for j, (x_star, y_star) in enumerate(stars):
        ratio = kappa_row(R, y_star, M) / kappa_y
        rows[j] -= ratio * cs(2.0 * math.pi * x_star * n)
    rhs = -rows[:, 0]
    solution, *_ = np.linalg.lstsq(rows[:, 1:], rhs, rcond=None)
    b = np.concatenate([[1.0], solution])
    return b * kappa_y[0] / kappa_y


def eigenvalue_refine(seed: float, parity: str, heights: tuple[float, float],
                      Q: int, M: int, probe: int = 2,
                      max_iter: int = 25) -> tuple[float, np.ndarray, np.ndarray]:
    """Secant iteration on the two-height disagreement of a_probe."""
    def mismatch(R: float) -> tuple[float, np.ndarray, np.ndarray]:
        first = solve_coefficients(R, heights[0], Q, M, parity)
        second = solve_coefficients(R, heights[1], Q, M, parity)
        return first[probe - 1] - second[probe - 1], first, second

    r_prev, r_curr = seed, seed + 0.008
    g_prev, *_ = mismatch(r_prev)
    for _ in range(max_iter):
        g_curr, first, second = mismatch(r_curr)
        if abs(g_curr) < 5e-12:
            return r_curr, first, second
        step = g_curr * (r_curr - r_prev) / (g_curr - g_prev)
        step = max(min(step, 0.05), -0.05)
        r_prev, g_prev = r_curr, g_curr
        r_curr = r_curr - step
        if abs(step) < 5e-13:
            g_curr, first, second = mismatch(r_curr)
            return r_curr, first, second
    raise RuntimeError(f"secant did not settle (last mismatch {g_curr:.2e})")


def hecke_residuals(a: np.ndarray) -> dict[str, float]:
    """Multiplicativity of the first few coefficients (index 1-based)."""
    def at(n):
        return a[n - 1]
    return {
        "a2*a3-a6": abs(at(2) * at(3) - at(6)),
        "a2^2-1-a4": abs(at(2) ** 2 - 1.0 - at(4)),
        "a2*a5-a10": abs(at(2) * at(5) - at(10)),
        "a3^2-1-a9": abs(at(3) ** 2 - 1.0 - at(9)),
    }


def build_fixture(parity: str, seed: float, out_dir: Path, k_keep: int,
                  Q: int, M: int, heights: tuple[float, float]) -> Path:
    t0 = time.perf_counter()
    R, first, second = eigenvalue_refine(seed, parity, heights, Q, M)
    agreement = float(np.max(np.abs(first[:k_keep] - second[:k_keep])))
    hecke = hecke_residuals(first)
    est = max(agreement, max(hecke.values()))
    coeffs = {}
    for n in range(1, k_keep + 1):
        value = first[n - 1]
        if parity == "even":
            coeffs[n] = [0.5 * value]
            coeffs[-n] = [0.5 * value]
        else:
            coeffs[n] = [value / 2j]
            coeffs[-n] = [-value / 2j]
    form = MaassFormData(
        nu=1j * R, N=1, dim=1, coeffs=coeffs,
        source=("level-one cusp form, %s ground state; two-height "
                "collocation solve (Q=%d, M=%d, Y=%s), scripts/"
                "build_fixtures.py" % (parity, Q, M, heights)),
        est_accuracy=est)
    payload = form_to_json(form)
    payload["quality"] = {"two_height_agreement": agreement,
                          "hecke": hecke, "R": R}
    name = f"{parity}_{R:.2f}".replace(".", "_") + ".json"
    path = out_dir / name
    path.write_text(json.dumps(payload, indent=1))
    print(f"{parity}: R = {R:.12f}  agreement {agreement:.2e}  "
          f"hecke {max(hecke.values()):.2e}  -> {path} "
          f"({time.perf_counter() - t0:.1f}s)")
    return path


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path,
                        default=Path(__file__).resolve().parents[1]
                        / "src" / "periodlab" / "fixtures")
    parser.add_argument("--k-keep", type=int, default=100)
    parser.add_argument("--order", type=int, default=160,
                        help="number of solved coefficients M; must exceed "
                        "(R + 40)/(2 pi Y) so dropped terms are negligible")
    parser.add_argument("--points", type=int, default=215,
                        help="collocation points Q")
    parser.add_argument("--heights", type=float, nargs=2,
                        default=(0.055, 0.062))
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    build_fixture("even", 13.78, args.out, args.k_keep, args.points,
                  args.order, tuple(args.heights))
    build_fixture("odd", 9.53, args.out, args.k_keep, args.points,
                  args.order, tuple(args.heights))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
