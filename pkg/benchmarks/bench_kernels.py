"""Time the compiled kernels against the pure-Python ones.

    python3 benchmarks/bench_kernels.py [--states 200] [--seed 1]

Both backends run on the same random integer states; results are compared
before timing so a speedup is never reported for diverging answers.  States
are split by whether any step of their trajectory has several critical
classes: those steps run the exact limit computation in Python on both
backends.
"""
import argparse
import random
import time

from tropbbs import _pykernels
from tropbbs.errors import TropBBSError

try:
    from tropbbs import _ckernels
except ImportError:
    _ckernels = None


def random_state(rng, nmax=4, mmax=4, vmax=4):
    N, M = rng.randint(1, nmax), rng.randint(1, mmax)
    first = [rng.randint(0, vmax) for _ in range(M)]
    B = sum(first)
    rows = [first]
    for _ in range(N - 1):
        # random composition of B into M parts
        cuts = sorted(rng.randint(0, B) for _ in range(M - 1))
        rows.append([b - a for a, b in zip([0] + cuts, cuts + [B])])
    return rows, rng.randint(0, B)


def _call(fn, *args):
    try:
        return fn(*args)
    except TropBBSError as exc:
        return type(exc).__name__


def ambiguous(W, A, t_max):
    """True if some state on the trajectory (up to t_max steps) has several
    critical classes."""
    cur = _pykernels._reduce([list(r) for r in W], A, 1)
    start = cur
    for _ in range(t_max):
        try:
            if _pykernels.solve_q(cur[0], cur[1])[2] > 1:
                return True
            cur = _pykernels.evolve_scaled(*cur)
        except TropBBSError:
            return False
        if cur == start:
            break
    return False


def bench(fn, cases, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        for args in cases:
            _call(fn, *args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--states", type=int, default=200)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--t-max", type=int, default=200)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    if _ckernels is None:
        print("compiled kernels not built; nothing to compare")
        return
    rng = random.Random(args.seed)
    states = [random_state(rng) for _ in range(args.states)]
    flags = [ambiguous(W, A, args.t_max) for W, A in states]
    groups = {
        "single": [st for st, f in zip(states, flags) if not f],
        "several": [st for st, f in zip(states, flags) if f],
    }
    for group, members in groups.items():
        if not members:
            continue
        jobs = {
            "solve_q": [(W, A) for W, A in members],
            "find_period": [(W, A, args.t_max) for W, A in members],
        }
        for name, cases in jobs.items():
            py, cy = getattr(_pykernels, name), getattr(_ckernels, name)
            bad = sum(_call(py, *c) != _call(cy, *c) for c in cases)
            label = f"{name} [{group}, {len(cases)}]"
            if bad:
                print(f"{label}: {bad} disagreements, skipping timing")
                continue
            tp = bench(py, cases, args.repeat)
            tc = bench(cy, cases, args.repeat)
            print(f"{label:28s} python {tp * 1e3:9.1f} ms   cython {tc * 1e3:9.1f} ms   x{tp / tc:6.1f}")


if __name__ == "__main__":
    main()
