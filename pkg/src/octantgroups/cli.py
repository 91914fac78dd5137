"""Command-line interface."""
from __future__ import annotations

import json
import sys

import click

from .stepset import StepSet, decompose, degeneracy, has_group


def _model(text: str) -> StepSet:
    try:
        return StepSet.parse(text)
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from exc


def _echo_json(obj) -> None:
    click.echo(json.dumps(obj, indent=1, default=str))


@click.group()
def main() -> None:
    """Birational groups of 3D lattice-walk models."""


@main.command()
@click.argument("diagram")
def decode(diagram: str) -> None:
    """Decode a 26-character diagram into its steps."""
    s = _model(diagram)
    out = {"mask": s.hex, "diagram": s.diagram, "steps": s.steps,
           "has_group": has_group(s), "degeneracy": degeneracy(s)}
    if has_group(s):
        d = decompose(s)
        out["decomposition"] = {ax: {k: str(v) for k, v in zip(("A-", "A0", "A+"), d.axis(i))}
                                for i, ax in enumerate("xyz")}
    _echo_json(out)


@main.command()
@click.argument("model")
@click.option("--deep-match", is_flag=True, help="Full ball matching instead of fingerprints.")
@click.option("--certificates", is_flag=True, help="Search for a tropical escape certificate.")
@click.option("--depth", default=12, show_default=True)
def classify(model: str, deep_match: bool, certificates: bool, depth: int) -> None:
    """Run the classification pipeline on one model (hex mask or diagram)."""
    from .census import CensusConfig, RECORD_KEYS, classify_model

    rec = classify_model(_model(model), CensusConfig(deep_match=deep_match, certificates=certificates,
                                                     depth=depth))
    _echo_json({k: getattr(rec, k) for k in RECORD_KEYS})


@main.command()
@click.option("--shards", default=1, show_default=True)
@click.option("--shard", default=0, show_default=True)
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@click.option("--max-steps", type=int, default=None)
@click.option("--deep-match", is_flag=True)
@click.option("--certificates", is_flag=True)
@click.option("--seed", type=int, default=0, show_default=True,
              help="Evaluation-point seed (OCTANTGROUPS_SEED overrides).")
@click.option("--fresh", is_flag=True, help="Discard an existing output file instead of resuming.")
@click.option("--limit", type=int, default=None, help="Stop after this many records.")
def census(shards, shard, out, max_steps, deep_match, certificates, seed, fresh, limit) -> None:
    """Classify the canonical models of one shard into a JSONL file."""
    from .census import CensusConfig, run_census

    cfg = CensusConfig(shard=shard, shards=shards, out=out, max_steps=max_steps, seed=seed,
                       deep_match=deep_match, certificates=certificates, resume=not fresh)

    def progress(n, mask):
        click.echo(f"{n} records, last mask {mask:07x}", err=True)

    n = run_census(cfg, limit=limit, progress=progress)
    click.echo(f"wrote {n} records to {out}")


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--csv", "as_csv", is_flag=True)
@click.option("--audit", "run_audit", is_flag=True, help="Also list record-level inconsistencies.")
def summarize(file: str, as_csv: bool, run_audit: bool) -> None:
    """Per-presentation, Hadamard and finite-order counts of a census file."""
    from .census import audit, summarize as summary

    s = summary(file)
    click.echo(s.csv() if as_csv else s.text(), nl=not as_csv)
    if run_audit:
        problems = audit(file)
        click.echo(f"audit: {len(problems)} problems")
        for p in problems[:50]:
            click.echo(p)


@main.command()
@click.argument("model")
def hadamard(model: str) -> None:
    """Hadamard decomposition, commutation test and group structure."""
    from .hadamard import commutation_test, detect_hadamard, hadamard_group_structure

    s = _model(model)
    d = detect_hadamard(s)
    comm = commutation_test(s)
    out = {"mask": s.hex, "decomposition": d.to_dict() if d else None,
           "commutation": {"holds": comm.holds, "axis": "xyz"[comm.axis] if comm.holds else None,
                           "confirmed": comm.confirmed}}
    if comm:
        out["group"] = hadamard_group_structure(s).label
    _echo_json(out)


@main.command("enumerate")
@click.argument("model")
@click.option("--n", "N", required=True, type=int)
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Write totals one per line instead of printing.")
def enumerate_walks(model: str, N: int, out: str | None) -> None:
    """Totals c_0..c_N of octant walks."""
    from .walks import walk_totals, write_sequence

    totals = walk_totals(_model(model), N)
    if out:
        write_sequence(out, totals)
    else:
        for c in totals:
            click.echo(c)


@main.command()
@click.argument("seqfile", type=click.Path(exists=True, dir_okay=False))
@click.option("--order", "r", default=6, show_default=True)
@click.option("--degree", "d", default=6, show_default=True)
@click.option("--margin", default=10, show_default=True)
def guess(seqfile: str, r: int, d: int, margin: int) -> None:
    """Search for a P-recurrence satisfied by a sequence file."""
    from .walks import InsufficientTerms, guess_recurrence, read_sequence

    seq = read_sequence(seqfile)
    try:
        rec = guess_recurrence(seq, r, d, margin)
    except InsufficientTerms as exc:
        raise click.ClickException(str(exc)) from exc
    if rec is None:
        _echo_json({"recurrence": None, "max_order": r, "max_degree": d, "terms": len(seq),
                    "note": "no relation within these bounds"})
    else:
        _echo_json({"recurrence": rec.to_dict(), "text": str(rec), "terms": len(seq)})


@main.command("tropical-verify")
@click.argument("model")
@click.option("--cone", default=None, help='Inequalities such as "w > v > -u > 0" or "w>v; v>-u".')
@click.option("--assignment", default=None, help="Letter images, e.g. a=x,b=y,c=z.")
@click.option("--max-word-len", default=6, show_default=True)
def tropical_verify(model: str, cone: str | None, assignment: str | None, max_word_len: int) -> None:
    """Verify a cone proof, or search for an escape certificate when no cone is given."""
    from .tropical import ConeProof, cone_verify, escape_certificate

    s = _model(model)
    if cone:
        amap = dict(kv.split("=") for kv in assignment.split(",")) if assignment else None
        res = cone_verify(s, cone, amap)
        if isinstance(res, ConeProof):
            _echo_json({"result": "ConeProof", **res.to_dict()})
        else:
            _echo_json({"result": "Failure", "reason": res.reason, "detail": res.detail})
            sys.exit(1)
        return
    cert = escape_certificate(s, max_word_len=max_word_len)
    _echo_json({"certificate": cert.to_dict() if cert else None})
    if cert is None:
        sys.exit(1)


if __name__ == "__main__":  # pragma: no cover
    main()
