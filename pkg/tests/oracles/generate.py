"""Regenerate frozen.json: ``python3 tests/oracles/generate.py``."""

import json
from pathlib import Path

import mpmath as M

import oracle

DIGITS = 60
SIG = 30


def s(v):
    return M.nstr(v, SIG, strip_zeros=False, min_fixed=1, max_fixed=0)


def main():
    M.mp.dps = DIGITS
    out = {"digits": DIGITS, "sub_eigs": [], "w_steps": [], "matrix_steps": [], "spectra": []}
    for x, y in (("1.95", "0.005"), ("2.05", "0.001"), ("2", "0.01"), ("1.93", "-0.008"),
                 ("2.07", "0.0095")):
        lo, hi = oracle.sub_eigs(x, y)
        out["sub_eigs"].append({"x": x, "y": y, "lo": s(lo), "hi": s(hi)})
    for x, y, side in (("2", "0.01", "+"), ("2.05", "0.001", "-"), ("1.95", "0.005", "+"),
                       ("2", "0.01", "-"), ("2.03", "-0.004", "-")):
        X, Y, w = oracle.w_branch(x, y, side)
        out["w_steps"].append({"x": x, "y": y, "side": side, "X": s(X), "Y": s(Y), "w": s(w)})
    for x, y, shift in (("2", "0.01", "1/100"), ("1.92", "-0.009", "-1/60"), ("2.08", "0.003", "1/75")):
        t = oracle.chart_matrix(x, y)
        num, den = shift.split("/")
        t1 = oracle.matrix_step(t, M.mpf(num) / int(den))
        out["matrix_steps"].append({"x": x, "y": y, "s": shift,
                                    "d": [s(t1[i, i]) for i in range(3)],
                                    "e": [s(t1[0, 1]), s(t1[1, 2])]})
    for x, y in (("2", "0.01"), ("1.9", "0.01")):
        out["spectra"].append({"x": x, "y": y,
                               "eigs": [s(v) for v in sorted(M.eigsy(oracle.chart_matrix(x, y))[0])]})
    path = Path(__file__).with_name("frozen.json")
    path.write_text(json.dumps(out, indent=2) + "\n")


if __name__ == "__main__":
    main()
