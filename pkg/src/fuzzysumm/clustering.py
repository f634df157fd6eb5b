"""Per-attribute fuzzy c-means over encoded cell values.

Numeric/ordinal attributes without trapezoid vocabularies are clustered:
cells are coded to one real each (crisp as-is, trapezoid centroid, label
order index), the coded column is clustered with FCM, ascending centers
are bound to the vocabulary in order, and the membership rows become the
context columns for that attribute.  Attributes whose labels carry
trapezoids, and unordered label attributes, skip clustering and get their
degrees straight from value/label matching.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .domain import NULL, UNDEFINED, UNKNOWN, AttributeSpec, Dataset, FuzzyValue, value_label_membership
from .errors import ClusteringError, ConfigurationError, DataError
from .lattice import FuzzyContext

DEFAULT_FUZZIFIER = 2.0
DEFAULT_TOL = 1e-6
DEFAULT_MAX_ITER = 300


def encode_value(value: FuzzyValue) -> float | None:
    """One real code per cell, or None for the unencodable marks."""
    if value.kind == "crisp":
        return value.number
    if value.kind == "trapezoid":
        return sum(value.shape) / 4.0
    if value.kind == "label":
        return None  # caller resolves the order index against the attribute
    return None


def encode_dataset(ds: Dataset, attr: AttributeSpec) -> dict[str, float]:
    """The intermediate-matrix column for one attribute: tuple id -> code.
    Unknown/Undefined/Null cells are simply absent."""
    column = {}
    for tid in ds.tuple_ids:
        value = ds.value(tid, attr.name)
        if value.kind == "label":
            column[tid] = float(attr.label(value.label_name).order_index)
        else:
            code = encode_value(value)
            if code is not None:
                column[tid] = code
    return column


@dataclass(frozen=True)
class ClusterModel:
    """Converged centers for one attribute, ascending, with the vocabulary
    binding (i-th smallest center -> i-th label)."""

    attribute: str
    centers: tuple[float, ...]
    fuzzifier: float
    label_binding: tuple[str, ...] = ()


@dataclass(frozen=True)
class MembershipMatrix:
    """Per-tuple membership vectors, one entry per cluster in center order.
    Rows for defined values sum to 1; the objective trace is kept for
    convergence diagnostics."""

    rows: dict[str, tuple[float, ...]]
    objective_trace: tuple[float, ...] = ()


def _k_memberships(xs: np.ndarray, centers: np.ndarray, m: float) -> np.ndarray:
    """Standard inverse-distance-power weights, crisp at zero distance.

    Computed as (dmin/d)^p / sum so no intermediate can overflow: the
    ratios live in [0, 1] and the normalizer is >= 1.
    """
    d = np.abs(xs[None, :] - centers[:, None])
    dmin = d.min(axis=0, keepdims=True)
    zero_cols = (dmin == 0.0).ravel()
    with np.errstate(divide="ignore", invalid="ignore"):
        w = (dmin / d) ** (2.0 / (m - 1.0))
        u = w / w.sum(axis=0, keepdims=True)
    if zero_cols.any():
        hits = d[:, zero_cols] == 0.0
        u[:, zero_cols] = hits / hits.sum(axis=0, keepdims=True)
    return u


def _kmeanspp_init(xs: np.ndarray, c: int, rng: np.random.Generator) -> np.ndarray:
    centers = [float(xs[int(rng.integers(xs.size))])]
    while len(centers) < c:
        d2 = np.min((xs[None, :] - np.asarray(centers)[:, None]) ** 2, axis=0)
        total = d2.sum()
        if total == 0.0:
            raise ClusteringError("cannot seed more centers: all values coincide")
        pick = int(rng.choice(xs.size, p=d2 / total))
        centers.append(float(xs[pick]))
    return np.asarray(centers)


def fcm(
    values,
    c: int,
    m: float = DEFAULT_FUZZIFIER,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    seed: int = 0,
) -> tuple[tuple[float, ...], MembershipMatrix]:
    """Fuzzy c-means on a coded column of (tuple id, value) pairs.

    Deterministic for a fixed seed and invariant under input order: the
    seeded k-means++ init runs on the sorted values and memberships are
    recomputed per original tuple from the final centers.
    """
    values = list(values)
    if not values:
        raise ClusteringError("empty clustering input")
    if c < 2:
        raise ClusteringError(f"cluster count must be >= 2, got {c}")
    if m <= 1.0:
        raise ClusteringError(f"fuzzifier must be > 1, got {m}")
    ids = [tid for tid, _ in values]
    xs_orig = np.asarray([float(x) for _, x in values])
    if np.unique(xs_orig).size < c:
        raise ClusteringError(
            f"need at least {c} distinct values, got {np.unique(xs_orig).size}"
        )

    xs = np.sort(xs_orig)
    rng = np.random.default_rng(seed)
    centers = _kmeanspp_init(xs, c, rng)
    trace = []
    for _ in range(max_iter):
        u = _k_memberships(xs, centers, m)
        um = u ** m
        d2 = (xs[None, :] - centers[:, None]) ** 2
        trace.append(float((um * d2).sum()))
        weight = um.sum(axis=1)
        safe = weight > 0.0
        new_centers = np.where(safe, (um @ xs) / np.where(safe, weight, 1.0), centers)
        shift = float(np.abs(new_centers - centers).max())
        centers = new_centers
        if shift < tol:
            break

    if np.unique(centers).size < c:  # exact ties only
        centers = centers + np.arange(c) * 1e-12
    centers = np.sort(centers)

    final = _k_memberships(xs_orig, centers, m)
    rows = {tid: tuple(float(v) for v in final[:, j]) for j, tid in enumerate(ids)}
    return tuple(float(v) for v in centers), MembershipMatrix(rows, tuple(trace))


def bind_labels(model: ClusterModel, attr: AttributeSpec) -> ClusterModel:
    """Attach the attribute's vocabulary to the sorted centers in order."""
    if len(model.centers) != len(attr.labels):
        raise ConfigurationError(
            f"attribute {attr.name!r}: {len(model.centers)} centers cannot bind "
            f"to {len(attr.labels)} labels"
        )
    return ClusterModel(
        attribute=model.attribute,
        centers=model.centers,
        fuzzifier=model.fuzzifier,
        label_binding=attr.label_names,
    )


def needs_clustering(attr: AttributeSpec) -> bool:
    """FCM route: ordered vocabulary without trapezoids.  Trapezoid labels
    and unordered (similarity/identity) vocabularies match values directly."""
    if not attr.labels:
        return False
    if any(lab.trapezoid is not None for lab in attr.labels):
        return False
    return attr.ordered


def cluster_attribute(
    ds: Dataset,
    attr: AttributeSpec,
    m: float = DEFAULT_FUZZIFIER,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    seed: int = 0,
) -> tuple[ClusterModel, MembershipMatrix]:
    """Encode, cluster and label-bind one attribute, then widen the
    membership rows to every dataset tuple (Unknown -> all ones,
    Undefined/Null -> all zeros)."""
    column = encode_dataset(ds, attr)
    c = attr.cluster_count or len(attr.labels)
    centers, matrix = fcm(sorted(column.items()), c, m=m, tol=tol, max_iter=max_iter, seed=seed)
    model = bind_labels(ClusterModel(attr.name, centers, m), attr)
    rows = dict(matrix.rows)
    for tid in ds.tuple_ids:
        if tid in rows:
            continue
        kind = ds.value(tid, attr.name).kind
        fill = 1.0 if kind == "unknown" else 0.0
        rows[tid] = (fill,) * c
    return model, MembershipMatrix(rows, matrix.objective_trace)


def build_context(ds: Dataset, models, matrices) -> FuzzyContext:
    """Assemble the fuzzy formal context: objects are the dataset tuples,
    attributes are every (attribute, label) pair of the labeled schema
    columns, degrees come from the cluster memberships or, for unclustered
    vocabularies, from direct value/label matching."""
    by_attr = {}
    for model, matrix in zip(models, matrices):
        by_attr[model.attribute] = (model, matrix)
        missing = set(ds.tuple_ids) - set(matrix.rows)
        if missing:
            raise DataError(
                f"membership matrix for {model.attribute!r} lacks tuples {sorted(missing)!r}"
            )

    pairs: list[tuple[str, str]] = []
    columns: dict[str, list[float]] = {}
    for attr in ds.schema:
        if not attr.labels:
            continue
        if attr.name in by_attr:
            model, matrix = by_attr[attr.name]
            for j, label_name in enumerate(model.label_binding):
                pairs.append((attr.name, label_name))
                columns[f"{attr.name}::{label_name}"] = [
                    matrix.rows[tid][j] for tid in ds.tuple_ids
                ]
        else:
            for lab in attr.labels:
                pairs.append((attr.name, lab.name))
                columns[f"{attr.name}::{lab.name}"] = [
                    value_label_membership(ds.value(tid, attr.name), lab, attr)
                    for tid in ds.tuple_ids
                ]

    degrees = tuple(
        tuple(columns[f"{a}::{l}"][i] for a, l in pairs) for i in range(len(ds.tuple_ids))
    )
    return FuzzyContext(tuple(ds.tuple_ids), tuple(pairs), degrees)


def dataset_to_context(ds: Dataset, seed: int = 0, fuzzifier: float = DEFAULT_FUZZIFIER) -> FuzzyContext:
    """Full pre-processing pipeline: cluster what needs clustering (one
    deterministic sub-seed per attribute), match the rest directly."""
    models = []
    matrices = []
    for offset, attr in enumerate(a for a in ds.schema if needs_clustering(a)):
        model, matrix = cluster_attribute(ds, attr, m=fuzzifier, seed=seed + offset)
        models.append(model)
        matrices.append(matrix)
    return build_context(ds, models, matrices)


_SPECIALS = {"#UNKNOWN": UNKNOWN, "#UNDEFINED": UNDEFINED, "#NULL": NULL}


def parse_cell(text: str) -> FuzzyValue:
    """Cell syntax: bare number, ``$Label``, ``~a,b,c,d`` (quote the cell in
    CSV), ``#UNKNOWN`` / ``#UNDEFINED`` / ``#NULL``.  An empty cell reads as
    Null."""
    text = text.strip()
    if not text:
        return NULL
    if text.upper() in _SPECIALS:
        return _SPECIALS[text.upper()]
    if text.startswith("$"):
        return FuzzyValue.label(text[1:])
    if text.startswith("~"):
        parts = text[1:].split(",")
        if len(parts) != 4:
            raise DataError(f"trapezoid cell {text!r} needs four numbers")
        try:
            return FuzzyValue.trapezoid(*(float(p) for p in parts))
        except ValueError:
            raise DataError(f"trapezoid cell {text!r} has non-numeric parts")
    try:
        return FuzzyValue.crisp(float(text))
    except ValueError:
        raise DataError(f"cannot parse cell {text!r}")


def load_dataset_csv(path, schema) -> Dataset:
    """Read a dataset from CSV.  A leading ``id`` column (case-insensitive)
    names the tuples, otherwise ids are generated as t1..tN; the remaining
    header names must exactly cover the schema attributes."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty CSV")
        header = [h.strip() for h in header]
        has_id = bool(header) and header[0].lower() == "id"
        attr_names = header[1:] if has_id else header
        schema_names = [a.name for a in schema]
        if sorted(attr_names) != sorted(schema_names):
            raise DataError(
                f"{path}: CSV columns {attr_names!r} do not match schema attributes {schema_names!r}"
            )
        rows = {}
        tuple_ids = []
        for lineno, record in enumerate(reader, start=2):
            if not record or all(not cell.strip() for cell in record):
                continue
            if len(record) != len(header):
                raise DataError(f"{path}:{lineno}: expected {len(header)} cells, got {len(record)}")
            tid = record[0].strip() if has_id else f"t{len(tuple_ids) + 1}"
            cells = record[1:] if has_id else record
            row = {}
            for name, cell in zip(attr_names, cells):
                try:
                    row[name] = parse_cell(cell)
                except DataError as exc:
                    raise DataError(f"{path}:{lineno}: column {name!r}: {exc}")
            rows[tid] = row
            tuple_ids.append(tid)

    ds = Dataset(schema=tuple(schema), tuple_ids=tuple(tuple_ids), rows=rows)
    problems = ds.validate()
    # label references must point into the owning attribute's vocabulary
    for tid in ds.tuple_ids:
        for attr in schema:
            value = ds.value(tid, attr.name)
            if value.kind == "label" and not attr.has_label(value.label_name):
                problems.append(
                    f"tuple {tid!r}: attribute {attr.name!r} references unknown label "
                    f"{value.label_name!r}"
                )
    if problems:
        raise DataError(f"{path}: " + "; ".join(problems))
    return ds
