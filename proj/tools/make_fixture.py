#!/usr/bin/env python3
"""Write a synthetic instance in 'port' format and its unconstrained
efficient frontier in 'portef' format.

usage: make_fixture.py N SEED OUT_PREFIX [POINTS]
"""
import sys

import cvxpy as cp
import numpy as np


def main():
    n, seed, prefix = int(sys.argv[1]), int(sys.argv[2]), sys.argv[3]
    points = int(sys.argv[4]) if len(sys.argv) > 4 else 100
    rng = np.random.default_rng(seed)
    sd = rng.uniform(0.02, 0.09, n)
    mu = 0.001 + 0.011 * (sd - 0.02) / 0.07 * rng.uniform(0.6, 1.0, n)
    load = rng.uniform(-0.2, 1.0, (n, 3))
    c = load @ load.T + np.diag(rng.uniform(0.3, 1.0, n))
    s = 1.0 / np.sqrt(np.diag(c))
    rho = np.clip(s[:, None] * c * s[None, :], -1.0, 1.0)
    np.fill_diagonal(rho, 1.0)

    with open(prefix + ".txt", "w") as f:
        f.write(f"{n}\n")
        for i in range(n):
            f.write(f"{mu[i]:.17g} {sd[i]:.17g}\n")
        for i in range(n):
            for j in range(i, n):
                f.write(f"{i + 1} {j + 1} {rho[i, j]:.17g}\n")

    cov = sd[:, None] * rho * sd[None, :]
    cov = 0.5 * (cov + cov.T)
    x = cp.Variable(n)
    target = cp.Parameter()
    prob = cp.Problem(cp.Minimize(cp.quad_form(x, cp.psd_wrap(cov))),
                      [cp.sum(x) == 1, x >= 0, mu @ x >= target])
    # Start at the minimum-variance portfolio's return.
    target.value = mu.min()
    prob.solve(solver=cp.CLARABEL)
    lo = float(mu @ x.value)
    hi = float(mu.max())
    with open(prefix + "ef.txt", "w") as f:
        for t in np.linspace(lo, hi, points):
            target.value = t
            prob.solve(solver=cp.CLARABEL)
            f.write(f"{t:.17g} {prob.value:.17g}\n")


if __name__ == "__main__":
    main()
