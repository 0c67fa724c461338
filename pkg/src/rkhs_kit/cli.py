"""Command line entry point ``rkhs-kit``.

Every subcommand accepts the global flags ``--seed``, ``--kernel``, ``--in``,
``--out``, ``--format`` and ``--header/--no-header``. Exit status is 0 on
success, 2 on invalid input and 3 on numerical failure, in which case a JSON
report is written to stderr.
"""

import functools
import json
import sys
from dataclasses import dataclass

import click
import numpy as np

from . import io as rio
from ._rng import next_seed
from .exceptions import NumericalError, ValidationError

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


@dataclass
class Options:
    seed: int
    kernel: str
    input: str
    out: str
    format: str
    header: bool

    def kernel_spec(self):
        return rio.load_kernel(self.kernel)

    def read(self, path=None, what="--in"):
        path = self.input if path is None else path
        if path is None:
            raise ValidationError(f"{what} is required")
        if path == "-":
            return rio.read_pointset(sys.stdin, self.header)
        return rio.read_pointset(path, self.header)

    def emit_text(self, text):
        if self.out is None or self.out == "-":
            click.echo(text, nl=not text.endswith("\n"))
        else:
            with open(self.out, "w", newline="") as fh:
                fh.write(text if text.endswith("\n") else text + "\n")

    def emit(self, table=None, names=None, payload=None):
        """Write ``table`` as CSV or ``payload`` as JSON, per ``--format``."""
        if self.format == "json":
            self.emit_text(rio.dump_json(payload))
            return
        lines = ([",".join(names)] if names else []) + rio.format_rows(table)
        self.emit_text("\n".join(lines) + "\n")


def common(func):
    """Attach the global flags to a subcommand."""

    @click.option("--seed", type=click.IntRange(0, 2**64 - 1), default=0, show_default=True,
                  help="Seed of all random draws.")
    @click.option("--kernel", "kernel", default=None,
                  help="Kernel spec: JSON file path or inline JSON object.")
    @click.option("--in", "input", default=None, help="Input CSV point set ('-' for stdin).")
    @click.option("--out", default=None, help="Output path (default stdout).")
    @click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv",
                  show_default=True)
    @click.option("--header/--no-header", default=None,
                  help="Input CSV has a header row (default: detect).")
    @functools.wraps(func)
    def wrapper(seed, kernel, input, out, fmt, header, **kwargs):
        return func(Options(seed, kernel, input, out, fmt, header), **kwargs)

    return wrapper


def _tolist(a):
    return np.asarray(a).tolist()


@click.group()
@click.version_option(package_name="artifact")
def cli():
    """Reproducing-kernel toolkit: regression, clustering, transport and sampling."""


# regression ----------------------------------------------------------------

@cli.command()
@common
@click.option("--labels", "n_labels", type=click.IntRange(min=1), default=1, show_default=True,
              help="Number of trailing columns of --in holding the labels.")
@click.option("--y", "y_path", default=None, help="Labels in a separate CSV (overrides --labels).")
@click.option("--epsilon", type=click.FloatRange(min=0.0), default=None,
              help="Ridge regularization (default 1e-8; 0 interpolates).")
def fit(opts, n_labels, y_path, epsilon):
    """Fit a kernel regressor and write it as JSON."""
    from .operators.regressor import DEFAULT_EPSILON, KernelRegressor

    data, _ = opts.read()
    if y_path is not None:
        X = data
        y, _ = opts.read(y_path, "--y")
    else:
        if data.shape[1] <= n_labels:
            raise ValidationError(f"--in has {data.shape[1]} columns, need more than {n_labels}")
        X, y = data[:, :-n_labels], data[:, -n_labels:]
    if y.shape[1] == 1:
        y = y[:, 0]
    eps = DEFAULT_EPSILON if epsilon is None else epsilon
    reg = KernelRegressor(kernel=opts.kernel_spec(), epsilon=eps).fit(X, y)
    opts.emit_text(reg.to_json())


@cli.command()
@common
@click.option("--model", "model_path", required=True, help="Regressor JSON written by 'fit'.")
def predict(opts, model_path):
    """Evaluate a saved regressor at the points of --in."""
    from .operators.regressor import KernelRegressor

    try:
        with open(model_path) as fh:
            reg = KernelRegressor.from_json(fh.read())
    except OSError as exc:
        raise ValidationError(f"cannot read '{model_path}': {exc.strerror}") from None
    Z, _ = opts.read()
    pred = reg.predict(Z)
    opts.emit(pred, payload={"prediction": _tolist(pred)})


# clustering ----------------------------------------------------------------

CLUSTER_METHODS = ("greedy", "refine", "sharp", "balanced", "kmeans-inertia")


@cli.command()
@common
@click.option("--method", type=click.Choice(CLUSTER_METHODS), default="sharp", show_default=True)
@click.option("--k", "n_clusters", type=click.IntRange(min=1), required=True,
              help="Number of clusters.")
@click.option("--metric", type=click.Choice(["euclidean", "kernel-discrepancy"]),
              default="euclidean", show_default=True)
@click.option("--batch", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--labels-out", default=None, help="Also write the labels to this CSV.")
def cluster(opts, method, n_clusters, metric, batch, labels_out):
    """Cluster --in; writes the centroids (CSV) or a full summary (JSON)."""
    from .clustering import DiscrepancyClustering, inertia

    X, names = opts.read()
    if n_clusters > X.shape[0]:
        raise ValidationError(f"--k {n_clusters} exceeds the {X.shape[0]} input rows")
    if method == "kmeans-inertia":
        from sklearn.cluster import KMeans

        km = KMeans(n_clusters=n_clusters, random_state=opts.seed % 2**32, n_init=10).fit(X)
        centers, labels = km.cluster_centers_, km.labels_
        summary = {"mmd": None, "stage_mmd": {}}
    else:
        model = DiscrepancyClustering(
            n_clusters=n_clusters, kernel=opts.kernel_spec(),
            method="sharp" if method == "balanced" else method, batch=batch,
            balanced=method == "balanced", metric=metric).fit(X)
        centers, labels = model.cluster_centers_, model.labels_
        summary = {"mmd": model.mmd_, "stage_mmd": model.stage_mmd_}
    if labels_out is not None:
        rio.write_pointset(labels_out, labels.astype(float))
    opts.emit(centers, names, payload={
        "method": method, "centroids": _tolist(centers), "labels": _tolist(labels),
        "inertia": inertia(X, centers, labels), **summary})


# transport -----------------------------------------------------------------

TRANSPORT_METHODS = ("lsap", "sinkhorn", "mot", "gm")


@cli.command()
@common
@click.option("--method", type=click.Choice(TRANSPORT_METHODS), default="lsap", show_default=True)
@click.option("--target", default=None,
              help="Target point set. Without it, --in is read as a cost matrix (lsap, sinkhorn).")
@click.option("--epsilon", type=click.FloatRange(min=0.0, min_open=True), default=0.1,
              show_default=True, help="Entropic regularization (sinkhorn).")
@click.option("--tol", type=click.FloatRange(min=0.0, min_open=True), default=None)
@click.option("--max-iter", type=click.IntRange(min=1), default=None)
def transport(opts, method, target, epsilon, tol, max_iter):
    """Transport --in onto --target: permutation (lsap, gm) or plan (sinkhorn, mot)."""
    from .kernels import distance_matrix, fitted
    from .transport import gromov_monge, gromov_objective, lsap, martingale_ot, sinkhorn

    A, _ = opts.read()
    B = opts.read(target, "--target")[0] if target is not None else None
    if B is None and method in ("mot", "gm"):
        raise ValidationError(f"--method {method} needs --target")
    kernel = opts.kernel_spec()
    extra = {} if max_iter is None else {"max_iter": max_iter}
    if tol is not None:
        extra["tol"] = tol
    if method in ("lsap", "sinkhorn"):
        C = A if B is None else distance_matrix(fitted(kernel, A, B), A, B)
        if method == "lsap":
            sigma, cost = lsap(C)
            opts.emit(sigma.astype(float), payload={"permutation": _tolist(sigma), "cost": cost})
        else:
            P = sinkhorn(C, epsilon, **extra)
            opts.emit(P, payload={"plan": _tolist(P)})
    elif method == "mot":
        res = martingale_ot(A, B, kernel=kernel, strict=True, **extra)
        opts.emit(res.plan, payload={"plan": _tolist(res.plan), **res.report()})
    else:
        if A.shape[0] != B.shape[0]:
            raise ValidationError("gm needs point sets of equal size")
        DX = distance_matrix(fitted(kernel, A), A, A)
        DY = distance_matrix(fitted(kernel, B), B, B)
        sigma = gromov_monge(0.5 * (DX + DX.T), 0.5 * (DY + DY.T), **extra)
        opts.emit(sigma.astype(float), payload={
            "permutation": _tolist(sigma), "objective": gromov_objective(DX, DY, sigma)})


# sampling ------------------------------------------------------------------

def _parse_conditions(items, names, n_cols):
    cols, values = [], []
    for item in items:
        key, sep, val = item.partition("=")
        if not sep:
            raise ValidationError(f"--conditional-on expects col=value, got '{item}'")
        key = key.strip()
        if names is not None and key in names:
            col = names.index(key)
        else:
            try:
                col = int(key)
            except ValueError:
                raise ValidationError(f"unknown column '{key}'") from None
        if not 0 <= col < n_cols:
            raise ValidationError(f"column {col} out of range for {n_cols} columns")
        try:
            values.append(float(val))
        except ValueError:
            raise ValidationError(f"conditioning value '{val}' is not a number") from None
        cols.append(col)
    if len(set(cols)) != len(cols):
        raise ValidationError("a column is conditioned twice")
    if len(cols) >= n_cols:
        raise ValidationError("at least one column must stay unconditioned")
    return cols, np.array(values)


def _sample_stats(samples, target):
    from .bench.metrics import ks, moments

    gen_m, tgt_m = moments(samples), moments(target)
    out = {"n_generated": int(samples.shape[0]), "n_target": int(target.shape[0]),
           "generated": {k: _tolist(v) for k, v in gen_m.items()},
           "target": {k: _tolist(v) for k, v in tgt_m.items()}, "ks": [], "ks_critical": []}
    for j in range(samples.shape[1]):
        stat, crit = ks(samples[:, j], target[:, j])
        out["ks"].append(stat)
        out["ks_critical"].append(crit)
    return out


@cli.command()
@common
@click.option("--target", default=None, help="Target sample (defaults to --in).")
@click.option("--latent-dim", type=click.IntRange(min=1), default=None,
              help="Latent dimension (default: target dimension).")
@click.option("--n", "n_draws", type=click.IntRange(min=1), default=None,
              help="Number of draws (default: target size).")
@click.option("--conditional-on", "conditions", multiple=True,
              help="col=value; column index or header name. Repeatable.")
@click.option("--stats", "stats_path", default=None,
              help="Write moments and KS statistics of the draws to this JSON file.")
def sample(opts, target, latent_dim, n_draws, conditions, stats_path):
    """Draw new samples from a transport generator fitted on the target."""
    from .generative import ConditionalSampler, TransportGenerator

    Y, names = opts.read(target if target is not None else opts.input, "--target")
    kernel = opts.kernel_spec()
    n = Y.shape[0] if n_draws is None else n_draws
    if conditions:
        cols, x = _parse_conditions(conditions, names, Y.shape[1])
        rest = [j for j in range(Y.shape[1]) if j not in cols]
        sampler = ConditionalSampler(kernel=kernel, latent_dim=latent_dim, seed=opts.seed)
        draws = sampler.fit(Y[:, cols], Y[:, rest]).sample(x, n, seed=next_seed(opts.seed))
        ref = Y[:, rest]
        out_names = None if names is None else [names[j] for j in rest]
    else:
        dim = Y.shape[1] if latent_dim is None else latent_dim
        gen = TransportGenerator(kernel=kernel, latent_dim=dim, seed=opts.seed).fit(Y)
        draws = gen.sample(n)
        ref, out_names = Y, names
    if stats_path is not None:
        with open(stats_path, "w") as fh:
            fh.write(rio.dump_json(_sample_stats(draws, ref)) + "\n")
    opts.emit(draws, out_names, payload={"samples": _tolist(draws)})


# benchmarks ----------------------------------------------------------------

def _emit_report(opts, report, report_path):
    if report_path is not None:
        with open(report_path, "w") as fh:
            fh.write(rio.dump_json(report.to_dict()) + "\n")
    names = list(report.series)
    table = np.column_stack([np.asarray(report.series[k], dtype=float) for k in names])
    opts.emit(table, names, payload=report.to_dict())


_report_option = click.option("--report", "report_path", default=None,
                              help="Write the metrics JSON to this file.")


@cli.command()
@common
@click.option("--n", "N", type=click.IntRange(min=2), default=256, show_default=True)
@click.option("--d", "D", type=click.IntRange(min=1), default=2, show_default=True)
@click.option("--theta", type=float, default=0.2, show_default=True)
@click.option("--t1", type=float, default=1.0, show_default=True)
@click.option("--t2", type=float, default=2.0, show_default=True)
@click.option("--strike", type=float, default=0.0, show_default=True)
@click.option("--methods", multiple=True,
              type=click.Choice(["mot", "nadaraya-watson", "kernel-ridge-naive"]),
              help="Methods to run (default all). Repeatable.")
@_report_option
def bachelier(opts, N, D, theta, t1, t2, strike, methods, report_path):
    """Conditional expectation benchmark against the Bachelier formula."""
    from .bench.bachelier import METHODS, BachelierScenario, run_bachelier

    scenario = BachelierScenario(N=N, D=D, theta=theta, t1=t1, t2=t2, K=strike, seed=opts.seed)
    kernel = None if opts.kernel is None else opts.kernel_spec()
    report = run_bachelier(scenario, methods=methods or METHODS, kernel=kernel)
    _emit_report(opts, report, report_path)


def _mesh_and_values(opts, values_path):
    data, _ = opts.read()
    if values_path is not None:
        V, _ = opts.read(values_path, "values")
        return data, V
    if data.shape[1] < 2:
        raise ValidationError("--in needs mesh columns plus a trailing value column")
    return data[:, :-1], data[:, -1:]


@cli.command()
@common
@click.option("--rhs", default=None, help="Right-hand side f (default: last column of --in).")
@click.option("--rtol", type=click.FloatRange(min=0.0), default=1e-10, show_default=True)
@_report_option
def poisson(opts, rhs, rtol, report_path):
    """Solve the kernel Poisson problem Laplace_k u = f on the mesh."""
    from .bench.pde import run_poisson

    X, F = _mesh_and_values(opts, rhs)
    report = run_poisson(X, F, kernel=opts.kernel_spec(), rtol=rtol)
    _emit_report(opts, report, report_path)


@cli.command()
@common
@click.option("--u0", "u0_path", default=None, help="Initial values (default: last column of --in).")
@click.option("--operator", "operator_path", default=None,
              help="Square matrix A replacing -Laplace_k; --in then holds u0 only.")
@click.option("--theta", type=click.FloatRange(0.0, 1.0), default=1.0, show_default=True)
@click.option("--tau", type=click.FloatRange(min=0.0, min_open=True), default=0.01,
              show_default=True)
@click.option("--steps", type=click.IntRange(min=0), default=100, show_default=True)
@_report_option
def heat(opts, u0_path, operator_path, theta, tau, steps, report_path):
    """Theta-scheme heat flow; writes the energy per step."""
    from .bench.pde import run_heat

    if operator_path is not None:
        A, _ = opts.read(operator_path, "--operator")
        u0, _ = opts.read()
        report = run_heat(None, u0, theta, tau, steps, operator=A)
    else:
        X, u0 = _mesh_and_values(opts, u0_path)
        report = run_heat(X, u0, theta, tau, steps, kernel=opts.kernel_spec())
    _emit_report(opts, report, report_path)


@cli.command(name="metrics")
@common
@click.option("--truth", required=True, help="Reference values or sample.")
@click.option("--kind", type=click.Choice(["rmse", "normalized", "accuracy", "confusion", "ks"]),
              required=True)
@click.option("--alpha", type=click.FloatRange(0.0, 1.0, min_open=True, max_open=True),
              default=0.05, show_default=True, help="KS significance level.")
def metrics_cmd(opts, truth, kind, alpha):
    """Compare --in (predictions or sample) with --truth."""
    from .bench.metrics import confusion, ks, metrics

    pred, _ = opts.read()
    ref, _ = opts.read(truth, "--truth")
    if kind == "ks":
        stat, crit = ks(pred, ref, alpha)
        opts.emit(np.array([[stat, crit]]), ["statistic", "critical"],
                  payload={"kind": kind, "statistic": stat, "critical": crit, "alpha": alpha})
    elif kind == "confusion":
        M = confusion(_squeeze(pred), _squeeze(ref))
        opts.emit(M.astype(float), payload={"kind": kind, "matrix": _tolist(M)})
    else:
        value = metrics(_squeeze(pred), _squeeze(ref), kind)
        opts.emit(np.array([[value]]), [kind], payload={"kind": kind, "value": value})


def _squeeze(a):
    return a[:, 0] if a.shape[1] == 1 else a


def main(argv=None):
    """Run the CLI and return the exit status."""
    try:
        cli.main(args=argv, prog_name="rkhs-kit", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return EXIT_VALIDATION
    except click.exceptions.Abort:
        click.echo("Aborted!", err=True)
        return 1
    except ValidationError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_VALIDATION
    except NumericalError as exc:
        click.echo(json.dumps(exc.report, default=str), err=True)
        return EXIT_NUMERICAL
    except np.linalg.LinAlgError as exc:
        click.echo(json.dumps({"error": "LinAlgError", "message": str(exc)}), err=True)
        return EXIT_NUMERICAL
    return EXIT_OK

