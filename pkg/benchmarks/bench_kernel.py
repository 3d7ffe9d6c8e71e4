"""Compare the compiled and pure-Python kernel backends.

Run with ``python3 benchmarks/bench_kernel.py``. Each workload is timed on
every available backend (best of ``--repeat``) and the outputs are checked
for bit-identity.
"""

from __future__ import annotations

import argparse
import time

from exactharmonic import kernel
from exactharmonic.parser import parse
from exactharmonic.trajectories import orthogonality_audit, trace_level_curve, trace_orthogonal

WORKLOADS = {
    "circle level trace": lambda b: trace_level_curve(parse("x^2 + y^2"), (1, 0), 0.01, 10000, backend=b).points,
    "exp*cos orthogonal trace": lambda b: trace_orthogonal(
        parse("exp(x)*cos(y)"), (0, 0.785), 0.001, 20000, box=(-3, 3, -3, 3), backend=b
    ).points,
    "quartic level trace": lambda b: trace_level_curve(
        parse("x^4 - 6*x^2*y^2 + y^4"), (1.2, 0.3), 0.002, 20000, box=(-3, 3, -3, 3), backend=b
    ).points,
    "100x100 audit": lambda b: orthogonality_audit(
        parse("exp(x)*cos(y)"), parse("exp(x)*sin(y)"), (-1, 1, 0.1, 1.4, 100, 100), backend=b
    ).samples,
}


def best_of(fn, repeat: int) -> tuple[float, object]:
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def fingerprint(out) -> bytes:
    if hasattr(out, "tobytes"):
        return out.tobytes()
    return repr(out).encode()


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = kernel.available_backends()
    print(f"backends: {', '.join(backends)}")
    print(f"{'workload':28s}" + "".join(f"{b:>12s}" for b in backends) + "   speedup  identical")
    for name, work in WORKLOADS.items():
        times = {}
        prints = set()
        for b in backends:
            times[b], out = best_of(lambda: work(b), args.repeat)
            prints.add(fingerprint(out))
        row = f"{name:28s}" + "".join(f"{times[b]:11.4f}s" for b in backends)
        if "compiled" in times:
            row += f"  {times['python'] / times['compiled']:7.1f}x"
        else:
            row += "        n/a"
        print(row + f"  {'yes' if len(prints) == 1 else 'NO'}")


if __name__ == "__main__":
    main()
