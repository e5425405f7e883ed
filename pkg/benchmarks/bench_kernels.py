"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Each kernel is run on the same inputs through both backends; outputs are
checked for equality before timings are reported.
"""
import argparse
import random
import time

from ladderfilt import _pykernels
from ladderfilt.diagram import closed_classes, enumerate_diagrams
from ladderfilt.weights import glue_legs_to_circle

try:
    from ladderfilt import _ckernels
except ImportError:
    _ckernels = None


def workloads():
    diagrams = list(enumerate_diagrams(6, 2).values()) + list(closed_classes(6).values())[:200]
    canon = [([0] * D.n3 + [1] * D.u, D.vstart(), list(D.inv), [1] * D.n3 + [0] * D.u)
             for D in diagrams]
    blobs = [(D.vstart(), list(D.inv), [1] * D.n3 + [0] * D.u) for D in diagrams]
    rng = random.Random(1)
    rows = []
    for _ in range(300):
        cols = sorted(rng.sample(range(120), 6))
        rows.append((cols, [rng.randrange(1, 7) for _ in cols]))
    faces = []
    for D in diagrams[:200]:
        nv, vstart, inv, _ = glue_legs_to_circle(D)
        faces.append((nv, vstart, inv, [rng.randrange(2) for _ in range(nv)],
                      [rng.randrange(2) for _ in range(len(inv) // 2)]))
    return {
        "canon_graph": ("canon_graph", canon),
        "has_three_end_blob": ("has_three_end_blob", blobs),
        "blob_masks": ("blob_masks", blobs),
        "echelon_modp": ("echelon_modp", [(rows, 120, 2147483629)]),
        "face_counts": ("face_counts", faces),
    }


def timed(fn, inputs, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        out = [fn(*args) for args in inputs]
        best = min(best, time.perf_counter() - t)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _ckernels is None:
        print("compiled kernels not built; only the fallback is available")
    print(f"{'kernel':20} {'calls':>6} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for name, (attr, inputs) in workloads().items():
        tp, outp = timed(getattr(_pykernels, attr), inputs, args.repeat)
        if _ckernels is None:
            print(f"{name:20} {len(inputs):6} {tp:10.4f}")
            continue
        tc, outc = timed(getattr(_ckernels, attr), inputs, args.repeat)
        if outp != outc:
            raise SystemExit(f"{name}: backends disagree")
        print(f"{name:20} {len(inputs):6} {tp:10.4f} {tc:10.4f} {tp / tc:8.1f}", flush=True)


if __name__ == "__main__":
    main()
