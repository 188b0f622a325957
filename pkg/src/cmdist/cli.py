"""Command-line interface.

Subcommands: dist, matrix, mine, seq2db, cluster, oracle. Exit codes are
stable: 0 success, 2 input/validation error, 3 numerical failure.
"""

from __future__ import annotations

import functools
import sys

import click
import numpy as np

from . import analysis, dataset, distance, mining, oracle, sequences
from .exceptions import CMDistError, InputError, NumericalError
from .features import ItemsetFamily


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        click.echo(text, nl=False)


def _mapped_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except NumericalError as exc:
            click.echo(f"numerical error: {exc}", err=True)
            sys.exit(3)
        except (InputError, CMDistError, OSError, ValueError) as exc:
            click.echo(f"input error: {exc}", err=True)
            sys.exit(2)
    return wrapper


def _load_family(datasets, features, min_support, target_count):
    """Resolve --features: ind, cov, freq, or a family file path."""
    if features in ("ind", "cov"):
        spec = distance.DistanceSpec(features=features)
        return analysis.resolve_family(datasets, spec)
    if features == "freq":
        cfg = mining.MiningConfig(min_support=min_support or 0.5,
                                  target_count=target_count)
        return mining.select_features(datasets, cfg)
    with open(features, "r", encoding="utf-8") as handle:
        return ItemsetFamily.from_text(handle.read())


_feature_options = [
    click.option("--features", default="ind", show_default=True,
                 help="ind, cov, freq, or a family file path"),
    click.option("--min-support", type=float, default=None,
                 help="support threshold for --features freq"),
    click.option("--target-count", type=int, default=None,
                 help="desired family size for --features freq"),
]


def _with_options(options):
    def deco(fn):
        for option in reversed(options):
            fn = option(fn)
        return fn
    return deco


@click.group()
def cli():
    """Distances between binary transaction data sets and event
    sequences."""


@cli.command("dist")
@click.argument("files", nargs=2, type=click.Path())
@_with_options(_feature_options)
@click.option("--distance", "kind", default="cm", show_default=True,
              type=click.Choice(["cm", "base", "fisher"]))
@click.option("--solver", default="strict", show_default=True,
              type=click.Choice(["strict", "pinv"]))
@_mapped_errors
def cmd_dist(files, features, min_support, target_count, kind, solver):
    """Distance between two FIMI files."""
    d1 = dataset.load_transactions(files[0])
    d2 = dataset.load_transactions(files[1])
    k = max(d1.k, d2.k)
    d1 = dataset.load_transactions(files[0], k=k)
    d2 = dataset.load_transactions(files[1], k=k)
    family = _load_family([d1, d2], features, min_support, target_count)
    if kind == "cm":
        value = distance.cm_distance_fast(d1, d2, family.closure())
    elif kind == "base":
        value = distance.base_distance(d1, d2, family)
    else:
        value = distance.fisher_distance(d1, d2, family, solver=solver)
    click.echo(f"{value:.9f}")


@cli.command("matrix")
@click.argument("files", nargs=-1, required=True, type=click.Path())
@_with_options(_feature_options)
@click.option("--distance", "kind", default="cm", show_default=True,
              type=click.Choice(["cm", "base", "fisher"]))
@click.option("--solver", default="strict", show_default=True,
              type=click.Choice(["strict", "pinv"]))
@click.option("--out", type=click.Path(), default=None)
@_mapped_errors
def cmd_matrix(files, features, min_support, target_count, kind, solver,
               out):
    """Pairwise distance matrix for several FIMI files (TSV)."""
    probe = [dataset.load_transactions(f) for f in files]
    k = max(d.k for d in probe)
    datasets = [dataset.load_transactions(f, k=k) for f in files]
    family = _load_family(datasets, features, min_support, target_count)
    spec = distance.DistanceSpec(kind=kind, features="family",
                                 family=family, solver=solver)
    matrix = analysis.distance_matrix(datasets, spec)
    _emit(matrix.to_tsv(), out)


@cli.command("mine")
@click.argument("files", nargs=-1, required=True, type=click.Path())
@click.option("--min-support", type=float, default=0.5, show_default=True)
@click.option("--target-count", type=int, default=None)
@click.option("--out", type=click.Path(), default=None)
@_mapped_errors
def cmd_mine(files, min_support, target_count, out):
    """Select an itemset family from FIMI files (singletons plus frequent
    itemsets), emitting the family serialization with supports as
    comments."""
    probe = [dataset.load_transactions(f) for f in files]
    k = max(d.k for d in probe)
    datasets = [dataset.load_transactions(f, k=k) for f in files]
    cfg = mining.MiningConfig(min_support=min_support,
                              target_count=target_count)
    family = mining.select_features(datasets, cfg)
    lines = []
    for itemset in family:
        support = max(
            float(dataset.conjunction_values(
                d, ItemsetFamily([itemset]))[0])
            for d in datasets)
        lines.append(" ".join(map(str, itemset))
                     + f"  # support {support:.9f}")
    _emit("\n".join(lines) + "\n", out)


@cli.command("seq2db")
@click.argument("file", type=click.Path())
@click.option("--window", "-w", type=int, required=True,
              help="window length")
@click.option("--out", type=click.Path(), default=None)
@_mapped_errors
def cmd_seq2db(file, window, out):
    """Convert an event-sequence file to a windowed FIMI dataset."""
    with open(file, "r", encoding="utf-8") as handle:
        tokens = sequences.tokenize(handle.read())
    (seq,) = sequences.make_sequences([tokens])
    db = sequences.windows_to_dataset(seq, window)
    lines = ["# alphabet: " + " ".join(seq.alphabet)]
    for row in db.rows:
        lines.append(" ".join(str(j) for j in np.flatnonzero(row)))
    _emit("\n".join(lines) + "\n", out)


@cli.command("cluster")
@click.argument("matrix_file", type=click.Path())
@click.option("--algo", default="linkage", show_default=True,
              type=click.Choice(["linkage", "kmedoids"]))
@click.option("--k", "clusters", type=int, required=True,
              help="number of clusters")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(), default=None)
@_mapped_errors
def cmd_cluster(matrix_file, algo, clusters, seed, out):
    """Cluster a distance matrix TSV; emits label TAB cluster-id."""
    with open(matrix_file, "r", encoding="utf-8") as handle:
        matrix = analysis.DistanceMatrix.from_tsv(handle.read())
    if algo == "linkage":
        clustering = analysis.complete_linkage(matrix, clusters)
    else:
        clustering = analysis.k_medoids(matrix, clusters, seed=seed)
    lines = [f"{label}\t{cid}" for label, cid
             in zip(matrix.labels, clustering.assignment)]
    _emit("\n".join(lines) + "\n", out)


@cli.command("oracle")
@click.option("--cases", type=int, default=25, show_default=True,
              help="random cross-check instances")
@click.option("--seed", type=int, default=0, show_default=True)
@_mapped_errors
def cmd_oracle(cases, seed):
    """Spot-verify the fast Mahalanobis path against the brute-force
    geometric construction; nonzero exit on any tolerance violation."""
    # Worked three-point instance: indicator feature, frequencies 0.75
    # and 0.25; both routes must give 3/sqrt(8).
    feature = oracle.TabulatedFeature(np.array([[0.0], [0.0], [1.0]]))
    geometric = oracle.cm_distance_geometric_from_frequencies(
        feature, [0.75], [0.25])
    cov = oracle.enumeration_covariance(feature)
    general = distance.cm_distance_general([0.75], [0.25], cov)
    click.echo(f"geometric {geometric:.9f}")
    click.echo(f"general   {general:.9f}")
    expected = 3.0 / np.sqrt(8.0)
    failures = 0
    if abs(geometric - expected) > 1e-9 or abs(general - expected) > 1e-9:
        failures += 1

    rng = np.random.default_rng(seed)
    for _ in range(cases):
        omega = int(rng.integers(3, 13))
        n_features = int(rng.integers(1, min(omega - 1, 4) + 1))
        feature = oracle.TabulatedFeature(
            rng.normal(size=(omega, n_features)))
        theta1 = feature.table[rng.integers(0, omega, 20)].mean(axis=0)
        theta2 = feature.table[rng.integers(0, omega, 20)].mean(axis=0)
        geometric = oracle.cm_distance_geometric_from_frequencies(
            feature, theta1, theta2)
        general = distance.cm_distance_general(
            theta1, theta2, oracle.enumeration_covariance(feature),
            solver="pinv")
        if abs(geometric - general) > 1e-8 * (1.0 + general):
            failures += 1
    if failures:
        click.echo(f"{failures} oracle check(s) failed", err=True)
        sys.exit(3)
    click.echo(f"oracle ok ({cases} random instances)")


def main():
    cli()


if __name__ == "__main__":
    main()
