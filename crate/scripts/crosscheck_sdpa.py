#!/usr/bin/env python3
"""Solve an SDPA sparse file with cvxpy and print the optimal value.

The file is read in the SDPA convention: maximize <F0, Y> subject to
<Fi, Y> = ci and Y positive semidefinite (block diagonal).

Exit status 3 means cvxpy (or a conic solver) is unavailable.
"""
import re
import sys

try:
    import cvxpy as cp
    import numpy as np
except ImportError:
    sys.exit(3)


def read_sdpa(path):
    with open(path) as fh:
        lines = [l for l in fh if l.strip() and not l.lstrip().startswith(('"', '*'))]
    toks = []
    pos = 0
    while len(toks) < 3:
        toks += re.sub(r"[,(){}]", " ", lines[pos]).split()
        pos += 1
    m, nb = int(toks[0]), int(toks[1])
    while len(toks) < 2 + nb:
        toks += re.sub(r"[,(){}]", " ", lines[pos]).split()
        pos += 1
    dims = [abs(int(t)) for t in toks[2:2 + nb]]
    rest = toks[2 + nb:]
    while len(rest) < m:
        rest += re.sub(r"[,(){}]", " ", lines[pos]).split()
        pos += 1
    c = [float(t) for t in rest[:m]]
    F = [[np.zeros((d, d)) for d in dims] for _ in range(m + 1)]
    for line in lines[pos:]:
        k, b, i, j, v = line.split()
        k, b, i, j, v = int(k), int(b) - 1, int(i) - 1, int(j) - 1, float(v)
        F[k][b][i, j] = v
        F[k][b][j, i] = v
    return dims, c, F


def main():
    dims, c, F = read_sdpa(sys.argv[1])
    Y = [cp.Variable((d, d), PSD=True) for d in dims]
    inner = lambda Fk: sum(cp.trace(Fk[b] @ Y[b]) for b in range(len(dims)))
    cons = [inner(F[k + 1]) == c[k] for k in range(len(c))]
    prob = cp.Problem(cp.Maximize(inner(F[0])), cons)
    for solver in ("CLARABEL", "SCS"):
        if solver in cp.installed_solvers():
            prob.solve(solver=solver)
            break
    else:
        sys.exit(3)
    print(f"{prob.status} {prob.value:.10f}")


if __name__ == "__main__":
    main()
