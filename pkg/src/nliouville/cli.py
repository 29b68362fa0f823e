"""Command-line front end: ``nliouville solve | quantize | verify | family``.

Exit codes: 0 success, 1 a verification check failed, 2 invalid input,
3 solver failure. Options can also come from a JSON file passed with
``--config``; keys are option names (``rel_tol``, ``gamma``, ...), either
flat or grouped under the command name, and flags on the command line win.
Default output files go to ``$NLIOUVILLE_OUTPUT_DIR`` (else the current
directory).
"""

import csv
import json
import os
import sys

import click
import numpy as np

from nliouville import acceptance
from nliouville.closed_forms import (
    ClosedFormFamily,
    Family,
    eval_entire,
    eval_planar,
    eval_singular_radial,
    radial_mass_inside,
    radial_rUprime,
    sample_profile,
)
from nliouville.dimension import Dimension
from nliouville.errors import DomainError, SolverError
from nliouville.profile import write_profile_csv
from nliouville.quantization import (
    gamma_from_alpha0,
    mass_equation_residual,
    mass_equation_root,
    verify_quantization,
    weighted_total_mass,
)
from nliouville.radial_ode import SolveConfig, measure, solve_for_gamma, solve_from_peak

OUTPUT_ENV = "NLIOUVILLE_OUTPUT_DIR"
EXIT_FAILED, EXIT_INVALID, EXIT_SOLVER = 1, 2, 3

POS = click.FloatRange(min=0, min_open=True)
DIM = click.IntRange(min=2)
ALPHA = click.FloatRange(min=-1, min_open=True)


def _output_dir():
    return os.environ.get(OUTPUT_ENV) or "."


def _default_path(name):
    d = _output_dir()
    os.makedirs(d, exist_ok=True)
    return os.path.join(d, name)


def _fail(code, msg):
    click.echo(f"error: {msg}", err=True)
    sys.exit(code)


def _emit(data, fmt):
    if fmt == "json":
        click.echo(json.dumps(data, indent=2))
    else:
        for k, v in data.items():
            click.echo(f"{k} = {v}")


def _load_config(ctx, _param, path):
    if path is None:
        return None
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, ValueError) as exc:
        raise click.BadParameter(f"cannot read JSON config: {exc}") from exc
    if not isinstance(data, dict):
        raise click.BadParameter("config must be a JSON object")
    flat = {k: v for k, v in data.items() if not isinstance(v, dict)}
    ctx.default_map = {cmd: {**flat, **data.get(cmd, {})}
                       for cmd in ("solve", "quantize", "verify", "family")}
    return path


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--config", type=click.Path(dir_okay=False), callback=_load_config,
              is_eager=True, expose_value=False, help="JSON file with default option values.")
def main():
    """Radial solutions and mass quantization for -D_n u = e^u - gamma delta_0."""


@main.command()
@click.option("--n", "n", type=DIM, default=2, show_default=True, help="Dimension n >= 2.")
@click.option("--gamma", type=float, help="Dirac mass at the origin (gamma >= 0; 0 gives the regular solution).")
@click.option("--alpha0", type=float, help="Peak value U(1), instead of --gamma.")
@click.option("--rel-tol", type=POS, default=SolveConfig.rel_tol, show_default=True)
@click.option("--abs-tol", type=POS, default=SolveConfig.abs_tol, show_default=True)
@click.option("--r-min", type=POS, default=SolveConfig.r_min, show_default=True)
@click.option("--r-max", type=POS, default=SolveConfig.r_max, show_default=True)
@click.option("--per-decade", type=click.IntRange(min=4), default=SolveConfig.per_decade,
              show_default=True, help="Output grid points per decade of r.")
@click.option("--backend", type=click.Choice(["auto", "cython", "python"]), default="auto",
              show_default=True)
@click.option("--profile-out", type=click.Path(dir_okay=False), help="Profile CSV [default: profile.csv].")
@click.option("--report-out", type=click.Path(dir_okay=False), help="Report JSON [default: report.json].")
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="json", show_default=True)
def solve(n, gamma, alpha0, rel_tol, abs_tol, r_min, r_max, per_decade, backend,
          profile_out, report_out, fmt):
    """Integrate the radial solution, measure its masses and write profile and report."""
    if (gamma is None) == (alpha0 is None):
        _fail(EXIT_INVALID, "give exactly one of --gamma and --alpha0")
    if gamma is not None and not gamma >= 0:
        _fail(EXIT_INVALID, f"--gamma must satisfy gamma >= 0, got {gamma}")
    if not (r_min <= 1e-2 and r_max >= 1e2):
        _fail(EXIT_INVALID, "need r_min <= 1e-2 and r_max >= 1e2 (two decades on each side of r = 1)")
    dim = Dimension(n)
    try:
        cfg = SolveConfig(r_min=r_min, r_max=r_max, rel_tol=rel_tol, abs_tol=abs_tol,
                          per_decade=per_decade)
        be = None if backend == "auto" else backend
        if gamma == 0:
            fam = ClosedFormFamily(Family.ENTIRE, dim=dim)
            prof = sample_profile(fam, r_min, r_max, per_decade)
            target = 0.0
        elif gamma is not None:
            prof = solve_for_gamma(gamma, dim, cfg, be)
            target = gamma
        else:
            prof = solve_from_peak(alpha0, dim, cfg, be)
            target = gamma_from_alpha0(alpha0, dim)
        report = measure(prof)
        verdict = verify_quantization(report, target, dim)
    except DomainError as exc:
        _fail(EXIT_INVALID, str(exc))
    except SolverError as exc:
        _fail(EXIT_SOLVER, str(exc))
    data = report.to_json_dict(verdict.passed)
    write_profile_csv(prof, profile_out or _default_path("profile.csv"))
    with open(report_out or _default_path("report.json"), "w") as fh:
        json.dump(data, fh, indent=2)
        fh.write("\n")
    _emit(data, fmt)


@main.command()
@click.option("--n", "n", type=DIM, default=2, show_default=True)
@click.option("--gamma", type=float, default=0.0, show_default=True,
              help="Dirac mass at the origin (gamma > -n^n w_n).")
@click.option("--weighted", "--theorem3", "weighted", is_flag=True,
              help="Print the total mass for the weight |x|^{n alpha} instead.")
@click.option("--alpha", type=ALPHA, default=0.0, show_default=True, help="Weight exponent, alpha > -1.")
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="json", show_default=True)
def quantize(n, gamma, weighted, alpha, fmt):
    """Quantized mass at infinity, or the total mass of the weighted equation."""
    dim = Dimension(n)
    try:
        if weighted:
            data = {"n": n, "alpha": alpha, "total_mass": weighted_total_mass(alpha, dim)}
        else:
            g_inf = mass_equation_root(gamma, dim)
            data = {"n": n, "gamma": gamma, "gamma_inf": g_inf,
                    "total_mass": gamma + g_inf,
                    "residual": mass_equation_residual(gamma, g_inf, dim)}
    except DomainError as exc:
        _fail(EXIT_INVALID, str(exc))
    _emit(data, fmt)


@main.command()
@click.option("--suite", "suites", multiple=True, type=click.Choice(list(acceptance.SUITES)),
              help="Suite to run (repeatable) [default: all].")
@click.option("--n", "dims", multiple=True, type=DIM,
              help="Restrict the solved-profile suites to these dimensions (repeatable).")
@click.option("--timings", is_flag=True, help="Also print wall-clock time per suite.")
def verify(suites, dims, timings):
    """Run acceptance suites and print one line per check."""
    failed = total = 0
    for name in suites or acceptance.SUITES:
        try:
            checks, secs = acceptance.run_suite(name, tuple(dims) or None)
        except SolverError as exc:
            _fail(EXIT_SOLVER, f"suite {name}: {exc}")
        click.echo(f"== {name}" + (f" ({secs:.2f} s)" if timings else ""))
        for c in checks:
            click.echo(c.line())
        total += len(checks)
        failed += sum(not c.passed for c in checks)
    click.echo(f"{total - failed}/{total} checks passed")
    sys.exit(EXIT_FAILED if failed else 0)


def _parse_complex(_ctx, _param, value):
    try:
        return complex(value.replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise click.BadParameter(f"not a complex number: {value!r}") from exc


def _fmt(x):
    return format(float(x), ".17g")


@main.command()
@click.option("--kind", type=click.Choice([f.value for f in Family]), required=True)
@click.option("--n", "n", type=DIM, default=2, show_default=True)
@click.option("--alpha", type=ALPHA, default=0.0, show_default=True)
@click.option("--lambda", "lam", type=POS, default=1.0, show_default=True)
@click.option("--c", "c", default="0", callback=_parse_complex, show_default=True,
              help="Planar shift, e.g. 1+0i (needs a nonnegative integer alpha).")
@click.option("--r", "radii", multiple=True, type=click.FloatRange(min=0),
              help="Sample at these radii instead of a log grid (repeatable, r >= 0).")
@click.option("--points", type=click.IntRange(min=2), default=400, show_default=True,
              help="Rows of the radial log grid.")
@click.option("--grid", type=click.IntRange(min=2), default=64, show_default=True,
              help="Points per axis of the planar grid.")
@click.option("--r-min", type=POS, default=1e-6, show_default=True)
@click.option("--r-max", type=POS, default=1e6, show_default=True)
@click.option("--extent", type=POS, default=3.0, show_default=True,
              help="Half-width of the planar square grid.")
@click.option("--out", type=click.Path(dir_okay=False), help="Output CSV [default: standard output].")
def family(kind, n, alpha, lam, c, radii, points, grid, r_min, r_max, extent, out):
    """Sample a closed-form solution.

    Radial kinds give ``r,U,rUprime,mass_cum`` rows with ``mass_cum``
    measured from the first row. The planar kind gives ``x,y,u`` on a
    square grid of cell centres, which never contains the origin.
    """
    kind = Family(kind)
    try:
        if kind is Family.PLANAR and n != 2:
            raise DomainError("the planar family needs --n 2")
        fam = ClosedFormFamily(kind, lam=lam, alpha=alpha, c=c, dim=Dimension(n))
        if kind is Family.PLANAR:
            header, rows = _planar_rows(fam, grid, extent)
        else:
            if not radii and not r_min < r_max:
                raise DomainError(f"need r_min < r_max, got {r_min}, {r_max}")
            r = np.sort(np.asarray(radii, dtype=float)) if radii else np.geomspace(r_min, r_max, points)
            header, rows = _radial_rows(fam, r)
    except DomainError as exc:
        _fail(EXIT_INVALID, str(exc))
    fh = open(out, "w", newline="") if out else sys.stdout
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    finally:
        if out:
            fh.close()


def _radial_rows(fam, r):
    U = eval_entire(fam, r) if fam.kind is Family.ENTIRE else eval_singular_radial(fam, r)
    rup = radial_rUprime(fam, r)
    mass = radial_mass_inside(fam, r)
    return ("r", "U", "rUprime", "mass_cum"), zip(r, U, rup, mass - mass[0])


def _planar_rows(fam, points, extent):
    # cell centres of a points x points grid: the origin is never a node
    t = -extent + (np.arange(points) + 0.5) * (2 * extent / points)
    if points % 2 == 1:
        t = t + 0.5 * (2 * extent / points)
    X, Y = np.meshgrid(t, t, indexing="xy")
    u = eval_planar(fam, X + 1j * Y)
    return ("x", "y", "u"), zip(X.ravel(), Y.ravel(), np.ravel(u))


if __name__ == "__main__":  # pragma: no cover
    main()
