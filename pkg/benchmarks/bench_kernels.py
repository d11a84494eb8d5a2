"""Compare the compiled and pure-Python sweep kernels.

    python benchmarks/bench_kernels.py --states 2000 --sweeps 200

Both backends run the same number of interval sweeps (epsilon 0 so the gap
never closes early) on the same packed model; the script reports wall time
per backend and checks that the resulting vectors are bit-identical.
"""

import argparse
import random
import time
from array import array

from mdpcert.generators import random_mdp
from mdpcert.solvers import kernels


def _run(name, pk, n, sweeps, safe):
    kernels.use_backend(name)
    lo = array("d", [0.0] * n)
    hi = array("d", [1.0] * n)
    t0 = time.perf_counter()
    kernels.active().interval_sweeps(
        pk.act_ptr, pk.tr_ptr, pk.succ, pk.p_lo, pk.p_hi, pk.rew_lo, pk.rew_hi, pk.free,
        lo, hi, True, 0.05, 0.95, 0.05, 0.95, True, safe, 0.0, sweeps,
    )
    return time.perf_counter() - t0, lo, hi


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--states", type=int, default=2000)
    ap.add_argument("--actions", type=int, default=3)
    ap.add_argument("--sweeps", type=int, default=100)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--rounding", choices=["safe", "none"], default="safe")
    args = ap.parse_args(argv)

    rng = random.Random(args.seed)
    m = random_mdp(rng, n_states=args.states, max_actions=args.actions, max_den=10)
    target = m.label("target")
    free = [s for s in range(m.n_states) if s not in target]
    safe = args.rounding == "safe"
    pk = kernels.pack(m, [0] * m.n_states, free, safe)
    print(f"model: {m.n_states} states, {m.n_choices} choices, {m.n_transitions} transitions")

    results = {}
    for name in sorted(kernels.BACKENDS):
        secs, lo, hi = _run(name, pk, m.n_states, args.sweeps, safe)
        results[name] = (lo, hi)
        rate = args.sweeps * m.n_transitions / secs / 1e6
        print(f"{name:>7}: {secs:8.3f} s  ({rate:7.2f} M transitions/s)")
    if len(results) == 2:
        same = results["cython"] == results["python"]
        print("bit-identical:", same)
    else:
        print("compiled backend not built; only the fallback was timed")


if __name__ == "__main__":
    main()
