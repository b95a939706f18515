"""``dynmsf`` command line: verify, bench, gen.

Reports are line-oriented ``key=value`` records.  Exit status is 0 iff every
CHECK matched the oracle and no exclusivity violation was recorded.
"""
from __future__ import annotations

import sys

import click

from .fit import fit_scaling
from .runner import ENGINES, run_trace
from .trace import TraceError, gen_trace, read_trace


def _fmt(value):
    if isinstance(value, float):
        return "%.6g" % value
    return str(value)


def _record(kind, **fields):
    return " ".join([kind] + ["%s=%s" % (k, _fmt(v)) for k, v in fields.items()])


@click.group()
def main():
    """Dynamic minimum spanning forest harness."""


@main.command()
@click.option("--trace", "trace_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--engine", type=click.Choice(ENGINES), default="seq", show_default=True)
@click.option("--k", type=int, default=None, help="Chunk-size parameter K.")
def verify(trace_path, engine, k):
    """Replay a trace and compare with the oracle at every CHECK."""
    try:
        trace = read_trace(trace_path)
    except TraceError as exc:
        click.echo(_record("error", message='"%s"' % exc), err=True)
        sys.exit(2)
    _, rep = run_trace(trace, engine, k=k)
    for c in rep.checks:
        if not c.ok:
            click.echo(_record("check", op=c.op, ok=0, missing=",".join(map(str, c.missing)) or "-",
                               extra=",".join(map(str, c.extra)) or "-"))
    for v in rep.violations:
        click.echo(_record("violation", step=v["step"], cell=v["cell"],
                           procs=",".join(map(str, v["procs"]))))
    click.echo(_record("summary", engine=engine, n=trace.n, **rep.aggregate(), ok=int(rep.ok)))
    sys.exit(0 if rep.ok else 1)


@main.command()
@click.option("--sizes", default="64,256,1024", show_default=True)
@click.option("--ops", type=int, default=500, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--engine", type=click.Choice(ENGINES), default="pram", show_default=True)
@click.option("--mix", type=float, default=0.6, show_default=True)
@click.option("--k", type=int, default=None)
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Write the per-operation report here (default: stdout).")
def bench(sizes, ops, seed, engine, mix, k, out):
    """Run generated traces at several sizes and fit the scaling laws."""
    try:
        ns = [int(s) for s in sizes.split(",") if s.strip()]
    except ValueError:
        raise click.BadParameter("sizes must be comma-separated integers") from None
    lines = []
    ok = True
    medians, peaks, fitted = [], [], []
    for n in ns:
        trace = gen_trace(n, ops, seed, mix)
        _, rep = run_trace(trace, engine, k=k)
        ok &= rep.ok
        for r in rep.ops:
            lines.append("size=%d %s" % (n, r.to_record()))
        agg = rep.aggregate()
        extra = {}
        if rep.n_reduced is not None:
            extra = {"n_reduced": rep.n_reduced, "k": rep.k}
        lines.append(_record("aggregate", size=n, engine=engine, **extra, **agg))
        if rep.parallel:
            medians.append(agg["median_depth"])
            peaks.append(agg["max_processors"])
            fitted.append(n)
    if len(fitted) >= 3:
        try:
            sf = fit_scaling(fitted, medians, peaks)
        except ValueError as exc:
            lines.append(_record("fit", error='"%s"' % exc))
        else:
            lines.append(_record("fit", law="depth~a*log2n+b", a=sf.depth.a, b=sf.depth.b,
                                 max_rel_residual=sf.depth.max_rel_residual))
            lines.append(_record("fit", law="processors~c*sqrtn", c=sf.processors.a,
                                 max_rel_residual=sf.processors.max_rel_residual))
    lines.append(_record("summary", engine=engine, sizes=sizes, ok=int(ok)))
    text = "\n".join(lines) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
        click.echo(lines[-1])
    else:
        click.echo(text, nl=False)
    sys.exit(0 if ok else 1)


@main.command()
@click.option("--n", "n", type=int, required=True)
@click.option("--ops", type=int, required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--mix", type=float, default=0.6, show_default=True,
              help="Fraction of updates that are insertions.")
def gen(n, ops, seed, mix):
    """Print a random trace to stdout."""
    try:
        trace = gen_trace(n, ops, seed, mix)
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from None
    click.echo(trace.render(), nl=False)


if __name__ == "__main__":
    main()
