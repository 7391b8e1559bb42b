"""Command-line entry points: simulate, envelopes, coverage, select.

Config errors (bad method names, invalid levels, malformed input files)
exit with status 2; success with 0.
"""

from __future__ import annotations

import json
import math
import pathlib

import click

from .families import fdx_select
from .model import PValueFamily
from .registry import METHOD_NAMES, envelope_curve
from .sim import CoverageConfig, SimConfig, coverage_mc, run_envelopes, simulate_dohler


def _parse_methods(spec: str) -> tuple[str, ...]:
    names = tuple(s.strip() for s in spec.split(",") if s.strip())
    if not names:
        raise click.UsageError("no methods given")
    unknown = [n for n in names if n not in METHOD_NAMES]
    if unknown:
        raise click.UsageError(f"unknown methods: {', '.join(unknown)}")
    return names


def _load_family(path: str) -> PValueFamily:
    try:
        data = json.loads(pathlib.Path(path).read_text())
        return PValueFamily.from_json(data)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise click.UsageError(f"cannot read family from {path}: {exc}")


@click.group()
def main() -> None:
    """Simultaneous false-discovery envelopes over arbitrary selections."""


@main.command()
@click.option("--m", default=200, show_default=True)
@click.option("--pi0", default=0.2, show_default=True)
@click.option("--pi0prime", default=0.5, show_default=True)
@click.option("--q", default=0.4, show_default=True)
@click.option("--alpha", default=0.2, show_default=True)
@click.option("--methods", default="simes,dkw,bretagnolle", show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--reps", default=1, show_default=True)
@click.option("--out", required=True, type=click.Path(file_okay=False))
def simulate(m, pi0, pi0prime, q, alpha, methods, seed, reps, out) -> None:
    """Draw contingency-table datasets and write families + envelope curves."""
    names = _parse_methods(methods)
    try:
        cfg = SimConfig(
            m=m, pi0=pi0, pi0prime=pi0prime, q=q, alpha=alpha, seed=seed,
            methods=names, replicates=reps,
        )
    except ValueError as exc:
        raise click.UsageError(str(exc))
    outdir = pathlib.Path(out)
    outdir.mkdir(parents=True, exist_ok=True)
    for rep in range(reps):
        fam, truth = simulate_dohler(cfg, rep)
        (outdir / f"dataset-{rep}.json").write_text(
            json.dumps(fam.to_json()) + "\n"
        )
        curves, oracle = run_envelopes(fam, truth, names, alpha)
        for name, curve in curves.items():
            (outdir / f"curve-{rep}-{name}.csv").write_text(curve.to_csv())
        lines = ["k,signals_among_top_k"]
        lines += [f"{k},{v}" for k, v in enumerate(oracle, start=1)]
        (outdir / f"oracle-{rep}.csv").write_text("\n".join(lines) + "\n")
    click.echo(f"wrote {reps} replicate(s) to {outdir}")


@main.command()
@click.option("--input", "input_", required=True, type=click.Path(exists=True))
@click.option("--methods", required=True)
@click.option("--alpha", default=0.2, show_default=True)
@click.option("--out", required=True, type=click.Path())
def envelopes(input_, methods, alpha, out) -> None:
    """Compute envelope curves for a stored p-value family.

    With one method, OUT is the curve CSV; with several, OUT is a
    directory receiving one <method>.csv per method.
    """
    names = _parse_methods(methods)
    fam = _load_family(input_)
    try:
        curves = {n: envelope_curve(n, fam, alpha) for n in names}
    except ValueError as exc:
        raise click.UsageError(str(exc))
    path = pathlib.Path(out)
    if len(names) == 1 and not path.is_dir():
        path.write_text(curves[names[0]].to_csv())
    else:
        path.mkdir(parents=True, exist_ok=True)
        for n, c in curves.items():
            (path / f"{n}.csv").write_text(c.to_csv())
    click.echo(f"wrote {len(names)} curve(s)")


@main.command()
@click.option("--m", default=50, show_default=True)
@click.option("--trials", default="5,15,30", show_default=True)
@click.option("--alpha", default=0.2, show_default=True)
@click.option("--methods", default=",".join(METHOD_NAMES), show_default=False)
@click.option("--reps", default=2000, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", default=None, type=click.Path())
def coverage(m, trials, alpha, methods, reps, seed, out) -> None:
    """Monte-Carlo violation frequency under the full null."""
    names = _parse_methods(methods)
    try:
        trial_tuple = tuple(int(t) for t in trials.split(",") if t.strip())
        cfg = CoverageConfig(
            m=m, trials=trial_tuple, alpha=alpha, methods=names,
            replicates=reps, seed=seed,
        )
    except ValueError as exc:
        raise click.UsageError(str(exc))
    rates = coverage_mc(cfg)
    bound = alpha + 3.0 * math.sqrt(alpha * (1.0 - alpha) / reps)
    lines = ["method,violation_rate,mc_bound"]
    for name in names:
        lines.append(f"{name},{rates[name]},{bound}")
    text = "\n".join(lines) + "\n"
    if out:
        pathlib.Path(out).write_text(text)
    else:
        click.echo(text, nl=False)


@main.command()
@click.option("--input", "input_", required=True, type=click.Path(exists=True))
@click.option("--method", required=True)
@click.option("--alpha", default=0.2, show_default=True)
@click.option("--gamma", required=True, type=float)
def select(input_, method, alpha, gamma) -> None:
    """Largest top-k selection whose FDP bound stays below gamma."""
    names = _parse_methods(method)
    fam = _load_family(input_)
    try:
        curve = envelope_curve(names[0], fam, alpha)
        k_star = fdx_select(curve.vhat, gamma)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    vhat = curve.vhat[k_star - 1] if k_star else 0
    click.echo(
        json.dumps(
            {
                "k": k_star,
                "vhat": vhat,
                "fdp_bound": vhat / max(k_star, 1),
                "p_threshold": curve.pvalues_sorted[k_star - 1] if k_star else None,
            }
        )
    )


if __name__ == "__main__":
    main()
