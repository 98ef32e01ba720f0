#!/usr/bin/env python3
"""High-precision recomputation of the calculator reference values.

Uses mpmath at 50 decimal digits and writes the frozen constants to
crates/core/tests/data/derived_oracle.json. The Rust acceptance suite
asserts its own results against these to 4 significant digits.
"""

import json
import math
import os
from mpmath import mp, mpf, log, ln, sqrt, exp, e, binomial, ceil

mp.dps = 50

LOG2E = 1 / ln(2)


def f(x):
    """Render an mpf with plenty of digits for a 4-sig-digit comparison."""
    return float(mpf(x))


out = {}

# Thresholdout parameter calculator: tau=0.24, beta=0.1, m=100
tau, beta, m = mpf("0.24"), mpf("0.1"), 100
out["tho_params_T"] = f(3 * tau / 4)
out["tho_params_sigma"] = f(tau / (96 * ln(4 * m / beta)))


def n0(B, sigma, t, b):
    return max(2 * B / (sigma * t), ln(6 / b) / t**2)


def n1(B, sigma, t, b):
    return 80 * sqrt(B * ln(1 / (t * b))) / (t * sigma)


# n0/n1 branch selection at tau=0.24, beta=0.1, m=1e5: B=1 picks the n0
# branch, B=1e5 picks the n1 branch.
m_big = 100000
sig_big = tau / (96 * ln(4 * m_big / beta))
tp, bp = tau / 8, beta / (2 * m_big)
out["tho_nmin_B1"] = f(ceil(min(n0(1, sig_big, tp, bp), n1(1, sig_big, tp, bp))))
out["tho_n0_B1"] = f(n0(1, sig_big, tp, bp))
out["tho_n1_B1"] = f(n1(1, sig_big, tp, bp))
out["tho_nmin_B1e5"] = f(ceil(min(n0(100000, sig_big, tp, bp), n1(100000, sig_big, tp, bp))))
out["tho_n0_B1e5"] = f(n0(100000, sig_big, tp, bp))
out["tho_n1_B1e5"] = f(n1(100000, sig_big, tp, bp))

# Advanced composition: eps=0.1, delta=0, m=100, delta'=1e-6
eps, dp = mpf("0.1"), mpf("1e-6")
out["adv_comp_eps"] = f(sqrt(2 * 100 * ln(1 / dp)) * eps + 100 * eps * (exp(eps) - 1))
out["adv_comp_delta"] = f(100 * 0 + dp)

# Max-information from DP
out["mi_dp_ln2_n10"] = f(LOG2E * ln(2) * 10)
out["mi_dp_e01_n100"] = f(LOG2E * mpf("0.1") * 100)
b = mpf("0.01")
out["mi_dp_iid"] = f(LOG2E * (mpf("0.1") ** 2 * 100 / 2 + mpf("0.1") * sqrt(100 * ln(2 / b) / 2)))
# iid bound with beta = 2 exp(-tau^2 n) equals (1/2 + 1/sqrt(2)) log2(e) tau^2 n
out["mi_dp_iid_factor"] = f(mpf(1) / 2 + 1 / sqrt(2))

# Max-information from description length
out["mi_dl_1024"] = f(log(1024 / mpf(2) ** -10, 2))
out["mi_dl_2_half"] = f(log(2 / mpf("0.5"), 2))
out["mi_rdl_k10"] = f(10 + log(1 / mpf("0.01"), 2))
out["mi_rdl_k5"] = f(5 + log(1 / mpf(2) ** -3, 2))
# transcript description length of the sampler: k + log2(ln(1/beta'))
out["rdl_transcript_k10"] = f(10 + log(ln(100), 2))

# SparseValidate failure bound: ell_i = sum_{j=0}^{min(i-1,B)} C(i,j)
def ell(i, B):
    return sum(binomial(i, j) for j in range(0, min(i - 1, B) + 1))

out["ell_table_B2"] = [int(ell(i, 2)) for i in range(1, 5)]
out["ell4_B2_beta1e3"] = f(ell(4, 2) * mpf("1e-3"))

# McDiarmid and the DP generalization corollary
out["mcdiarmid_c1_n100_a10"] = f(exp(-2 * mpf(100) / (100 * 1)))
n = 400
c = mpf(1) / n
t = mpf("0.1")
out["dp_gen_eps"] = f(t / (c * n))
out["dp_gen_fail"] = f(exp(-3 * t**2 / (4 * c**2 * n)))

# Rejection sampler: k=1, beta'=0.1
k, bp2 = 1, mpf("0.1")
t_trials = int(ceil(2**k * ln(1 / bp2)))
out["rej_trials_k1"] = t_trials
out["rej_fallback_k1"] = f((1 - mpf(2) ** -k) ** t_trials)
out["rej_waitbound_k1"] = f(exp(-mpf(t_trials) / 2**k))

# Randomized description length of the sampler transcript
out["rdl_k3_em8"] = f(3 + log(ln(exp(8)), 2))

# Median Mechanism sample bound: |X|=2, m=2, tau=0.9, beta=0.1
X, mm_m, mt, mb = 2, 2, mpf("0.9"), mpf("0.1")
raw = 81 * log(X, 2) * log(mm_m, 2) * ln(3 * mm_m / mt) / (2 * mt**4) + 9 * ln(2 * mm_m / mb) / (
    2 * mt**2
)
out["mm_bound_raw"] = f(raw)
out["mm_bound"] = int(ceil(raw))
# t and multiset count for |X|=2, m=2, tau=0.9
alpha = mt / 3
out["mm_t"] = int(ceil(log(mm_m, 2) / alpha**2))
out["mm_multisets"] = out["mm_t"] + 1

# Exact max-information of the symmetric 2x2 joint [[0.4,0.1],[0.1,0.4]]
out["mi_exact_2x2_b0"] = f(log(mpf("0.4") / mpf("0.25"), 2))
out["mi_exact_2x2_b01"] = f(log(mpf("1.4"), 2))
# X uniform on {0,1}, Y=X
out["mi_exact_ident_b0"] = 1.0

# Laplace tail constant used by the noise tests
out["lap_tail_3"] = f(exp(-3))

dest = os.path.join(os.path.dirname(__file__), "..", "crates", "core", "tests", "data")
os.makedirs(dest, exist_ok=True)
path = os.path.join(dest, "derived_oracle.json")
with open(path, "w") as fh:
    json.dump(out, fh, indent=2, sort_keys=True)
    fh.write("\n")
print(f"wrote {path}")
for key in sorted(out):
    print(f"  {key} = {out[key]}")
