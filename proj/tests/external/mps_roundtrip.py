#!/usr/bin/env python3
"""Cross-checks an exported MPS model against an independent MILP solver.

Usage: mps_roundtrip.py MODEL.mps EXPECTED_OBJECTIVE [REL_TOL]

The file is parsed with a self-contained fixed/free-format MPS reader (ROWS,
COLUMNS with INTORG/INTEND markers, RHS, BOUNDS) and handed to
scipy.optimize.milp, which wraps HiGHS. Exit code 0 when HiGHS proves an
optimum whose objective matches EXPECTED_OBJECTIVE within REL_TOL
(default 1e-6), 1 otherwise. The comparison line is printed either way so the
calling test can log it.
"""
import sys

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp


def parse_mps(path):
    section = None
    obj_name = None
    row_rel = {}
    row_order = []
    cols = {}
    col_order = []
    integer_vars = set()
    rhs = {}
    lb = {}
    ub = {}
    in_int = False
    with open(path) as f:
        for line in f:
            if not line.strip() or line.startswith("*"):
                continue
            if not line[0].isspace():
                section = line.split()[0]
                continue
            parts = line.split()
            if section == "ROWS":
                rel, name = parts[0], parts[1]
                if rel == "N":
                    obj_name = name
                else:
                    row_rel[name] = rel
                    row_order.append(name)
            elif section == "COLUMNS":
                if len(parts) >= 3 and parts[1] == "'MARKER'":
                    in_int = parts[2] == "'INTORG'"
                    continue
                var = parts[0]
                if var not in cols:
                    cols[var] = {}
                    col_order.append(var)
                    if in_int:
                        integer_vars.add(var)
                for i in range(1, len(parts) - 1, 2):
                    cols[var][parts[i]] = float(parts[i + 1])
            elif section == "RHS":
                for i in range(1, len(parts) - 1, 2):
                    rhs[parts[i]] = float(parts[i + 1])
            elif section == "BOUNDS":
                btype, _, var = parts[0], parts[1], parts[2]
                val = float(parts[3]) if len(parts) > 3 else 0.0
                if btype == "BV":
                    integer_vars.add(var)
                    lb[var], ub[var] = 0.0, 1.0
                elif btype == "UP":
                    ub[var] = val
                elif btype == "LO":
                    lb[var] = val
                elif btype == "FX":
                    lb[var] = ub[var] = val
                elif btype == "FR":
                    lb[var], ub[var] = -np.inf, np.inf
                else:
                    raise ValueError(f"unsupported bound type {btype}")
    if obj_name is None:
        raise ValueError("no N (objective) row found")
    n = len(col_order)
    vidx = {v: i for i, v in enumerate(col_order)}
    c = np.zeros(n)
    for v, entries in cols.items():
        if obj_name in entries:
            c[vidx[v]] = entries[obj_name]
    ridx = {r: i for i, r in enumerate(row_order)}
    A = np.zeros((len(row_order), n))
    for v, entries in cols.items():
        for r, coeff in entries.items():
            if r != obj_name:
                A[ridx[r], vidx[v]] = coeff
    lo = np.full(len(row_order), -np.inf)
    hi = np.full(len(row_order), np.inf)
    for r in row_order:
        b = rhs.get(r, 0.0)
        if row_rel[r] == "L":
            hi[ridx[r]] = b
        elif row_rel[r] == "G":
            lo[ridx[r]] = b
        else:
            lo[ridx[r]] = hi[ridx[r]] = b
    lbv = np.array([lb.get(v, 0.0) for v in col_order])
    ubv = np.array([ub.get(v, np.inf) for v in col_order])
    integrality = np.array([1 if v in integer_vars else 0 for v in col_order])
    return c, A, lo, hi, lbv, ubv, integrality


def main():
    if len(sys.argv) < 3:
        print(__doc__.strip())
        return 2
    path = sys.argv[1]
    expected = float(sys.argv[2])
    rel_tol = float(sys.argv[3]) if len(sys.argv) > 3 else 1e-6
    c, A, lo, hi, lbv, ubv, integrality = parse_mps(path)
    res = milp(
        c,
        constraints=LinearConstraint(A, lo, hi),
        bounds=Bounds(lbv, ubv),
        integrality=integrality,
        options={"mip_rel_gap": 0.0, "time_limit": 120},
    )
    if res.status != 0:
        print(f"{path}: external solver status {res.status} ({res.message})")
        return 1
    diff = abs(res.fun - expected) / max(1.0, abs(expected))
    verdict = "match" if diff <= rel_tol else "MISMATCH"
    print(
        f"{path}: external {res.fun:.9f} vs bundled {expected:.9f} "
        f"rel diff {diff:.3g} -> {verdict}"
    )
    return 0 if verdict == "match" else 1


if __name__ == "__main__":
    sys.exit(main())
