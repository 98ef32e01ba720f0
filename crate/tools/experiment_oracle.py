#!/usr/bin/env python3
"""Monte Carlo oracle for the variable-selection overfitting harness.

Simulates the two-step correlation-selection experiment with numpy,
independently of the Rust implementation, to fix acceptance thresholds
before the main build. Run:

    python3 tools/experiment_oracle.py [--full]
"""

import argparse
import numpy as np

CLIP = 4.0  # correlation clip bound used for [0,1] query rescaling


def select(w_t, w_hat, n, k):
    """Return (indices, signs) of the top-k filtered variables."""
    mask = (w_t * w_hat > 0) & (np.abs(w_t) >= 1 / np.sqrt(n)) & (
        np.abs(w_hat) >= 1 / np.sqrt(n)
    )
    cand = np.nonzero(mask)[0]
    # stable sort on -|w_t| keeps lower index first on ties
    order = np.argsort(-np.abs(w_t[cand]), kind="stable")
    chosen = cand[order[:k]]
    return chosen, np.sign(w_t[chosen])


def accuracy(X, y, chosen, signs):
    if len(chosen) == 0:
        margin = np.zeros(X.shape[0])
    else:
        margin = X[:, chosen] @ signs
    pred = np.where(margin >= 0, 1.0, -1.0)  # zero-sum tie -> +1
    return float(np.mean(pred == y))


def run(n, d, reps, ks, mechanism, signal_count=0, signal_bias=0.0,
        T=0.04, sigma=0.01, budget=None, seed=12345):
    rng = np.random.default_rng(seed)
    out = {k: {s: [] for s in ("train", "holdout_reported", "fresh", "holdout_true")}
           for k in ks}
    budgets_used = []
    for rep in range(reps):
        def gen(m):
            y = rng.choice([-1.0, 1.0], size=m)
            X = rng.standard_normal((m, d))
            if signal_count:
                X[:, :signal_count] += signal_bias * y[:, None]
            return X, y

        Xt, yt = gen(n)
        Xh, yh = gen(n)
        Xf, yf = gen(n)

        w_t = Xt.T @ yt / n
        w_h = Xh.T @ yh / n
        ct = np.clip(Xt * yt[:, None], -CLIP, CLIP).sum(axis=0) / n
        ch = np.clip(Xh * yh[:, None], -CLIP, CLIP).sum(axis=0) / n
        et = ct / (2 * CLIP) + 0.5
        eh = ch / (2 * CLIP) + 0.5

        if mechanism == "thresholdout":
            B = budget if budget is not None else int(np.ceil(np.sqrt(n)))
            That = T + 2 * sigma * rng.standard_normal()

            def tho(e_t, e_h):
                nonlocal B, That
                if B < 1:
                    return None
                eta = 4 * sigma * rng.standard_normal()
                if abs(e_h - e_t) > That + eta:
                    xi = sigma * rng.standard_normal()
                    gam = 2 * sigma * rng.standard_normal()
                    B -= 1
                    That = T + gam
                    return e_h + xi
                return e_t

        for k in ks:
            if mechanism == "standard":
                w_hat = w_h
            else:
                w_hat = np.zeros(d)
                cand = np.nonzero(np.abs(w_t) >= 1 / np.sqrt(n))[0]
                for j in cand:
                    a = tho(et[j], eh[j])
                    w_hat[j] = 0.0 if a is None else (a - 0.5) * 2 * CLIP
            chosen, signs = select(w_t, w_hat, n, k)
            a_train = accuracy(Xt, yt, chosen, signs)
            a_hold = accuracy(Xh, yh, chosen, signs)
            a_fresh = accuracy(Xf, yf, chosen, signs)
            if mechanism == "standard":
                a_rep = a_hold
            else:
                r = tho(a_train, a_hold)
                a_rep = float("nan") if r is None else min(1.0, max(0.0, r))
            out[k]["train"].append(a_train)
            out[k]["holdout_reported"].append(a_rep)
            out[k]["fresh"].append(a_fresh)
            out[k]["holdout_true"].append(a_hold)
        if mechanism == "thresholdout":
            budgets_used.append((budget if budget is not None else int(np.ceil(np.sqrt(n)))) - B)
    return out, budgets_used


def report(tag, out, budgets=None):
    print(f"=== {tag} ===")
    for k, ser in out.items():
        tr = np.array(ser["train"])
        rp = np.array(ser["holdout_reported"])
        fr = np.array(ser["fresh"])
        ht = np.array(ser["holdout_true"])
        print(
            f" k={k:4d} train={tr.mean():.4f} reported={rp.mean():.4f}"
            f" fresh={fr.mean():.4f}(sd {fr.std(ddof=1):.4f})"
            f" holdout_true={ht.mean():.4f}"
            f" gap(rep-fresh)={np.mean(rp - fr):.4f}(sd {np.std(rp - fr, ddof=1):.4f})"
            f" |true-fresh|={np.mean(np.abs(ht - fr)):.4f}"
            f" mean|rep-fresh|={np.mean(np.abs(rp - fr)):.4f}"
        )
    if budgets:
        print(f" budget consumed: min={min(budgets)} max={max(budgets)} mean={np.mean(budgets):.1f}")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--full", action="store_true", help="also run n=d=10000 anchor")
    args = ap.parse_args()

    ks = [10, 50, 100, 200, 500]
    out, _ = run(1000, 1000, 20, ks, "standard", seed=1)
    report("standard n=d=1000 reps=20 (seed 1)", out)
    out, _ = run(1000, 1000, 20, ks, "standard", seed=2)
    report("standard n=d=1000 reps=20 (seed 2)", out)

    out, used = run(1000, 1000, 20, ks, "thresholdout", budget=1000, seed=1)
    report("thresholdout(T=0.04 sigma=0.01 gauss B=n) n=d=1000 reps=20", out, used)
    out, used = run(1000, 1000, 20, ks, "thresholdout", budget=32, seed=1)
    report("thresholdout default B=ceil(sqrt n)=32 (exhaustion check)", out, used)

    # signal regime sanity: 20 biased columns at 0.06
    out, _ = run(1000, 1000, 10, [10, 20, 50], "standard",
                 signal_count=20, signal_bias=0.06, seed=3)
    report("standard n=d=1000 signal=biased(20,0.06) reps=10", out)

    if args.full:
        out, _ = run(10000, 10000, 5, [500], "standard", seed=7)
        report("standard n=d=10000 reps=5 (paper anchor)", out)


if __name__ == "__main__":
    main()
