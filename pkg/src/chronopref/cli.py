"""Command-line interface: simulate, analyze, predict, check.

Exit codes: 0 success, 2 bad input, 3 analysis not applicable.
"""

from __future__ import annotations

import argparse
import itertools
import json
import logging
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .data import ChoiceDataset, DataError, PairNotObserved, emit_trials, load_trials
from .fechner import NotPredictable, predict_all, predict_probability, theta_percentile
from .generators import DdmSpec, SpecError, UnsupportedModel, load_fixture, spec_from_json
from .generators.ddm import constant_boundary_choice_probability
from .generators.rum import analytic_cdfs, simulate_dataset
from .rationalize import CLASSES, check_necessary_rationalizability
from .relations import has_inconsistent_cycle
from .symmetric import PercentileUndefined, build_symmetric_relation, predict_sign_out_of_sample, t_percentile
from .unrestricted import build_rt_relation, density_ratio_check, reveal_unrestricted

SCHEMA = "1"
EXIT_OK, EXIT_INPUT, EXIT_NOT_APPLICABLE = 0, 2, 3

log = logging.getLogger("chronopref")


class InputError(Exception):
    pass


class NotApplicable(Exception):
    pass


def workers() -> int:
    cap = os.environ.get("CHRONO_THREADS")
    n = os.cpu_count() or 1
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            raise InputError(f"CHRONO_THREADS must be an integer, got {cap!r}") from None
    return n


def _clean(obj):
    """JSON-safe copy: NaN -> null, +-inf -> "inf"/"-inf", numpy scalars -> Python."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        if math.isnan(f):
            return None
        if math.isinf(f):
            return "inf" if f > 0 else "-inf"
        return f
    return obj


def dump(doc: dict, out: str | None) -> None:
    text = json.dumps(_clean(doc), sort_keys=True, indent=2, allow_nan=False) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _read_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from None


def load_data(args) -> ChoiceDataset:
    try:
        if getattr(args, "fixture", None):
            return load_fixture(_read_json(args.fixture))
        if not args.data:
            raise InputError("give a trials CSV or --fixture")
        return load_trials(args.data)
    except (DataError, SpecError, UnsupportedModel) as exc:
        raise InputError(str(exc)) from None
    except OSError as exc:
        raise InputError(f"cannot read {args.data}: {exc}") from None


def _parse_pair(text: str) -> tuple[str, str]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2 or not all(parts) or parts[0] == parts[1]:
        raise InputError(f"--pair expects two distinct options as 'x,y', got {text!r}")
    return parts[0], parts[1]


# simulate -------------------------------------------------------------------

def _truth(spec, pairs, sims) -> dict:
    rows = []
    for (x, y), sim in zip(pairs, sims):
        row = {"x": x, "y": y, "resampled": sim.resampled, "drawn": sim.drawn, "resample_rate": sim.resample_rate}
        if isinstance(spec, DdmSpec):
            row["mu"] = spec.mu(x, y)
            if not spec.boundary.collapsing:
                row["p"] = constant_boundary_choice_probability(row["mu"], spec.boundary.b0, spec.sigma2)
        else:
            row["v"] = spec.true_difference(x, y)
            try:
                p, fx, fy = analytic_cdfs(spec, (x, y))
            except UnsupportedModel:
                p = None
            if p is not None:
                row["p"] = p
                hi, lo = (x, fx) if p > 0.5 else (y, fy)
                p_hi = max(p, 1 - p)
                row["t_percentile"] = {"of": hi, "value": lo.quantile((1 - p_hi) / p_hi)}
                row["theta"] = {"of": hi, "value": lo.quantile(1 / (2 * p_hi))}
        rows.append(row)
    return {"schema": SCHEMA, "model": spec.to_json(), "utilities": dict(spec.u), "pairs": rows}


def cmd_simulate(args) -> int:
    doc = _read_json(args.config)
    try:
        if args.dt is not None or args.t_max is not None:
            if doc.get("model") != "ddm":
                raise InputError("--dt and --t-max apply to ddm specs only")
            doc = dict(doc)
            if args.dt is not None:
                doc["dt"] = args.dt
            if args.t_max is not None:
                doc["t_max"] = args.t_max
        spec = spec_from_json(doc)
        if args.pair:
            pairs = [_parse_pair(p) for p in args.pair]
        elif doc.get("pairs"):
            pairs = [tuple(map(str, p)) for p in doc["pairs"]]
        else:
            pairs = list(itertools.combinations(sorted(spec.u), 2))
        missing = {o for p in pairs for o in p} - set(spec.u)
        if missing:
            raise InputError(f"options without utilities: {sorted(missing)}")
        if not pairs:
            raise InputError("no pairs to simulate")
        if args.n < 1:
            raise InputError("--n must be at least 1")
        dataset, sims = simulate_dataset(spec, pairs, args.n, args.seed, workers())
    except (SpecError, DataError, KeyError, TypeError, ValueError) as exc:
        raise InputError(f"invalid spec: {exc}") from None
    records = []
    for s in sims:
        records.extend(s.records(start=len(records)))
    text = emit_trials(records)
    truth = _truth(spec, pairs, sims)
    truth.update(seed=args.seed, n=args.n)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        dump(truth, args.truth or str(Path(args.out).with_suffix(".truth.json")))
    else:
        sys.stdout.write(text)
        if args.truth:
            dump(truth, args.truth)
    return EXIT_OK


# analyze --------------------------------------------------------------------

def _unrestricted_section(ds: ChoiceDataset, args) -> dict:
    def row(pair):
        x, y = pair
        _, verdict = reveal_unrestricted(ds, x, y, args.tol, args.strict_tol)
        c1 = density_ratio_check(ds, x, y, args.bins, args.min_count, args.density_tol)
        return {
            "x": x,
            "y": y,
            "p": ds.prob(x, y),
            "q": verdict.q,
            "verdict": {
                "holds": verdict.holds,
                "strict": verdict.strict,
                "worst_margin": verdict.worst_margin,
                "witness_t": verdict.witness_t,
            },
            "density_ratio": c1.to_json(),
        }

    with ThreadPoolExecutor(max_workers=workers()) as ex:
        rows = list(ex.map(row, ds.ordered_pairs()))
    rel = build_rt_relation(ds, args.tol, args.strict_tol)
    cyc = has_inconsistent_cycle(rel.relation)
    return {
        "pairs": rows,
        "relation": rel.relation.to_json(),
        "closure": rel.closure.to_json(),
        "strict_closure": rel.strict_closure.to_json(),
        "cycle": {"found": cyc.inconsistent, "witness": list(cyc.witness)},
    }


def _percentiles(ds: ChoiceDataset, stat) -> list[dict]:
    out = []
    for x, y in ds.ordered_pairs():
        try:
            s = stat(ds, x, y)
        except PercentileUndefined:
            continue
        val = s.t_xy if hasattr(s, "t_xy") else s.theta
        out.append({"x": x, "y": y, "alpha": s.target_alpha, "value": val})
    return out


def _symmetric_section(ds: ChoiceDataset, args) -> dict:
    rel = build_symmetric_relation(ds, args.margin, args.t_margin)
    cyc = has_inconsistent_cycle(rel.union)
    preds = [
        {"x": x, "y": y, "prediction": predict_sign_out_of_sample(ds, x, y, rel)} for x, y in ds.unobserved_pairs()
    ]
    witnesses = [
        dict(tri.to_json(), strict=e.strict) for e, tri in sorted(rel.witnesses, key=lambda w: (w[1].x, w[1].y, w[1].z))
    ]
    return {
        "R_s": rel.rs.to_json(),
        "R_srt": rel.rsrt.to_json(),
        "triangulations": witnesses,
        "percentiles": _percentiles(ds, t_percentile),
        "closure": rel.closure.to_json(),
        "strict_closure": rel.strict_closure.to_json(),
        "cycle": {"found": cyc.inconsistent, "witness": list(cyc.witness)},
        "sign_predictions": preds,
    }


def _fechner_section(ds: ChoiceDataset, args) -> dict:
    from .fechner import build_fechner_relation

    rel = build_fechner_relation(ds, args.margin)
    cyc = has_inconsistent_cycle(rel.union)
    preds = predict_all(ds, args.tie_tol, args.spread_tol)
    return {
        "R_s": rel.rs.to_json(),
        "R_f": rel.rf.to_json(),
        "theta": _percentiles(ds, theta_percentile),
        "closure": rel.closure.to_json(),
        "strict_closure": rel.strict_closure.to_json(),
        "cycle": {"found": cyc.inconsistent, "witness": list(cyc.witness)},
        "predictions": [preds[k].to_json() for k in sorted(preds)],
    }


SECTIONS = {"unrestricted": _unrestricted_section, "symmetric": _symmetric_section, "fechner": _fechner_section}


def _classes(value: str) -> list[str]:
    return list(CLASSES) if value == "all" else [value]


def cmd_analyze(args) -> int:
    ds = load_data(args)
    report = {"schema": SCHEMA, "options": sorted(ds.options), "analytic": ds.is_analytic}
    for cls in _classes(args.model_class):
        report[cls] = SECTIONS[cls](ds, args)
    dump(report, args.out)
    return EXIT_OK


# predict --------------------------------------------------------------------

def cmd_predict(args) -> int:
    ds = load_data(args)
    if args.pair:
        x, y = _parse_pair(args.pair)
        for o in (x, y):
            if o not in ds.options:
                raise InputError(f"unknown option {o!r}")
        pivots = [z for z in sorted(ds.options) if z not in (x, y) and ds.has(x, z) and ds.has(y, z)]
        preds = []
        for z in pivots:
            try:
                preds.append(predict_probability(ds, x, y, z, args.tie_tol).to_json())
            except NotPredictable:
                continue
        if not preds:
            raise NotApplicable(f"not predictable: no usable pivot for ({x}, {y})")
        vals = [p["p_bar"] for p in preds]
        doc = {"schema": SCHEMA, "predictions": [{"x": x, "y": y, "predictions": preds, "spread": max(vals) - min(vals),
                                                  "spread_tol": args.spread_tol,
                                                  "pivots_agree": max(vals) - min(vals) <= args.spread_tol}]}
    else:
        allp = predict_all(ds, args.tie_tol, args.spread_tol)
        if not allp:
            raise NotApplicable("not predictable: no unobserved pair has a pivot")
        doc = {"schema": SCHEMA, "predictions": [allp[k].to_json() for k in sorted(allp)]}
    dump(doc, args.out)
    return EXIT_OK


# check ----------------------------------------------------------------------

def cmd_check(args) -> int:
    ds = load_data(args)
    results = []
    for cls in _classes(args.model_class):
        rep = check_necessary_rationalizability(ds, cls, args.tol, args.strict_tol, args.margin, args.t_margin)
        results.append(rep.to_json())
        if rep.passed:
            print(f"{cls} class: PASS", file=sys.stderr)
        else:
            name, bad = next((k, v) for k, v in sorted(rep.checks.items()) if v)
            print(f"{cls} class: FAIL, witness {'→'.join(bad.witness)} in {name}", file=sys.stderr)
    dump({"schema": SCHEMA, "results": results}, args.out)
    return EXIT_OK


# wiring ---------------------------------------------------------------------

def _tol_arg(text: str):
    if text == "dkw":
        return text
    try:
        val = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number or 'dkw', got {text!r}") from None
    if not val >= 0:
        raise argparse.ArgumentTypeError("tolerance must be nonnegative")
    return val


def _add_analysis_flags(p: argparse.ArgumentParser, default_class: str) -> None:
    p.add_argument("data", nargs="?", help="trials CSV")
    p.add_argument("--fixture", help="analytic fixture JSON instead of a trials CSV")
    p.add_argument("--class", dest="model_class", default=default_class, choices=[*CLASSES, "all"])
    p.add_argument(
        "--tol", type=_tol_arg, default=0.0, help="slack in the q-FSD test, or 'dkw' for 2*DKW(min count, 1e-3) per pair"
    )
    p.add_argument("--strict-tol", type=float, default=None, help="margin needed for strictness (default: --tol)")
    p.add_argument("--bins", type=int, default=32, help="equal-count bins for the density-ratio check")
    p.add_argument("--min-count", type=int, default=10, help="minimum pooled count for a judged bin")
    p.add_argument("--density-tol", type=float, default=0.0, help="relative slack in the density-ratio check")
    p.add_argument("--margin", type=float, default=0.0, help="choice-probability indifference margin")
    p.add_argument("--t-margin", type=float, default=0.0, help="percentile comparison margin, seconds")
    p.add_argument("--tie-tol", type=float, default=None, help="half-width of the p = 1/2 tie band (default 2/sqrt(n))")
    p.add_argument("--spread-tol", type=float, default=0.02, help="allowed spread of predictions across pivots")
    p.add_argument("--out", help="output path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chronopref", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="simulate trials from a model spec")
    sim.add_argument("--config", required=True, help="model spec JSON")
    sim.add_argument("--n", type=int, default=10_000, help="trials per pair")
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--pair", action="append", help="pair 'x,y' to simulate (repeatable; default all pairs)")
    sim.add_argument("--dt", type=float, default=None, help="DDM step size")
    sim.add_argument("--t-max", type=float, default=None, help="DDM truncation horizon")
    sim.add_argument("--out", help="trials CSV path (default stdout)")
    sim.add_argument("--truth", help="ground-truth JSON path (default: next to --out)")
    sim.set_defaults(func=cmd_simulate)

    ana = sub.add_parser("analyze", help="revealed-preference report")
    _add_analysis_flags(ana, "all")
    ana.set_defaults(func=cmd_analyze)

    pre = sub.add_parser("predict", help="out-of-sample choice probabilities")
    _add_analysis_flags(pre, "fechner")
    pre.add_argument("--pair", help="unobserved pair 'x,y' (default: every predictable pair)")
    pre.set_defaults(func=cmd_predict)

    chk = sub.add_parser("check", help="necessary rationalizability conditions")
    _add_analysis_flags(chk, "all")
    chk.set_defaults(func=cmd_check)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PairNotObserved as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return EXIT_INPUT
    except NotApplicable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_APPLICABLE


if __name__ == "__main__":
    sys.exit(main())
