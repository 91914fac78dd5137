"""Compare the compiled kernels with the pure-Python reference on the same inputs."""
from __future__ import annotations

import random
import time

import click

from octantgroups import _pykernels as python
from octantgroups.algebra import DEFAULT_PRIME
from octantgroups.groups import support_masks
from octantgroups.stepset import StepSet

try:
    from octantgroups import _ckernels as compiled
except ImportError:  # pragma: no cover
    compiled = None

MODEL = StepSet.from_steps([(-1, -1, -1), (-1, 1, 1), (1, 0, 1), (1, 1, 0)])


def _state(seed: int) -> list[int]:
    rng = random.Random(seed)
    st = []
    for _ in range(9):
        v = rng.randrange(1, DEFAULT_PRIME)
        st += [v, pow(v, -1, DEFAULT_PRIME)]
    return st


def cases(scale: int):
    sup = support_masks(MODEL)
    st = _state(1)
    starts = [c for p in [(1, 2, 3), (3, -7, 5), (-2, 5, -1)] * 20 for c in p]
    return {
        "scan_masks": lambda k: k.scan_masks(1_500_000, 1_500_000 + 20_000 * scale),
        "closure": lambda k: k.closure(sup, st, DEFAULT_PRIME, 400 * scale),
        "ball_classes": lambda k: k.ball_classes(sup, [[0], [1], [2]], st, DEFAULT_PRIME, 8 + scale),
        "word_order": lambda k: k.word_order(sup, [0, 1, 2], st, DEFAULT_PRIME, 2000 * scale),
        "tropical_scan": lambda k: k.tropical_scan(sup, [2, 1, 0], starts, 64 * scale),
    }


def timed(fn, repeat: int) -> tuple[float, object]:
    best, out = float("inf"), None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


@click.command()
@click.option("--scale", default=1, show_default=True, help="Problem size multiplier.")
@click.option("--repeat", default=3, show_default=True)
def main(scale: int, repeat: int) -> None:
    if compiled is None:
        raise click.ClickException("compiled kernels are not built")
    click.echo(f"{'kernel':<15}{'python s':>12}{'compiled s':>12}{'speedup':>10}")
    for name, fn in cases(scale).items():
        tp, rp = timed(lambda: fn(python), repeat)
        tc, rc = timed(lambda: fn(compiled), repeat)
        if rp != rc:
            raise click.ClickException(f"{name}: backends disagree")
        click.echo(f"{name:<15}{tp:>12.4f}{tc:>12.4f}{tp / tc:>9.1f}x")


if __name__ == "__main__":
    main()
