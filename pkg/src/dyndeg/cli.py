"""Command line front end: JSON job files in, JSON reports out.

Exit codes: 0 success, 1 a checked property failed, 2 bad input,
3 a resource limit truncated or stopped the computation.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from . import __version__
from .cyclelat import (CycleLattice, PullbackAction, blowup_lattice,
                       cone_preservation_r1r2_check, cremona_action, hodge_signature,
                       lehmer_action, norm_one, point_lattice, simplicity_check,
                       spectral_data)
from .degseq import (conjugate_map, degree_table, iterate_degrees, lambda_estimate,
                     stability_check, _format_factors)
from .errors import (DegenerateFibers, DynDegError, NonConvergence, ResourceLimit)
from .interval import Interval
from .monomial import (MonomialMap, MonomialSemiConjugacy, SpectralReport,
                       compound_matrix, kernel_restriction, monomial_dynamical_degree_values,
                       monomial_relative_degree_values, monomial_to_rational_map,
                       product_formula_check)
from .polycore import AmbientSpace, format_map, parse_map
from .relative import build_semiconjugacy, product_formula_verify, relative_degree_sequence
from .suites import run_suite

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3


class JobError(DynDegError, ValueError):
    """Malformed job file or flag combination."""


# -- JSON helpers ---------------------------------------------------------------------------

def _default(o):
    if isinstance(o, Fraction):
        return str(o)
    if isinstance(o, Interval):
        return {"lo": o.lo, "hi": o.hi, "flag": "CERTIFIED_INTERVAL"}
    if isinstance(o, (tuple, set, frozenset)):
        return list(o)
    raise TypeError(f"cannot serialise {type(o).__name__}")


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, default=_default) + "\n"


def _iv(iv: Interval, exact=None) -> dict:
    d = {"lo": iv.lo, "hi": iv.hi, "flag": "CERTIFIED_INTERVAL"}
    if exact is not None:
        d.update(exact=str(exact), flag="EXACT")
    return d


def _mat(D):
    return [[int(x) if isinstance(x, int) or Fraction(x).denominator == 1 else str(x)
             for x in r] for r in D]


def spectral_dict(rep: SpectralReport) -> dict:
    return {"char_poly": [str(c) for c in rep.char_poly],
            "spectral_radius": _iv(rep.radius, rep.exact_radius),
            "root_moduli": [_iv(m) for m in rep.root_moduli],
            "multiplicities": list(rep.multiplicities),
            "real": list(rep.real_flags),
            "precision_bits": rep.precision_bits}


# -- input handling ----------------------------------------------------------------------------

def parse_space(value) -> AmbientSpace:
    if isinstance(value, AmbientSpace):
        return value
    if isinstance(value, int):
        return AmbientSpace.projective(value)
    if isinstance(value, str):
        parts = [p for p in value.replace("x", ",").replace(" ", "").split(",") if p]
        try:
            return AmbientSpace.product(*[int(p) for p in parts])
        except ValueError:
            raise JobError(f"bad space {value!r}; use e.g. 2 or 1,1") from None
    if isinstance(value, list) and all(isinstance(v, int) for v in value):
        return AmbientSpace.product(*value)
    raise JobError(f"bad space {value!r}")


def _json_arg(text, name, presets=()):
    if text is None or not isinstance(text, str) or text in presets:
        return text
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise JobError(f"--{name}: invalid JSON ({exc.msg} at column {exc.colno})") from None


def load_job(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            job = json.load(fh)
    except OSError as exc:
        raise JobError(f"cannot read job file {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise JobError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: "
                       f"{exc.msg}") from None
    if not isinstance(job, dict):
        raise JobError("job file must hold a JSON object")
    return job


def merge(job: dict, args: argparse.Namespace, keys) -> dict:
    """Job values overridden by explicitly given flags."""
    out = dict(job)
    for k in keys:
        v = getattr(args, k, None)
        if v is not None:
            out[k] = v
    return out


def require(job, key):
    if key not in job or job[key] is None:
        raise JobError(f"missing required field {key!r}")
    return job[key]


# -- commands ---------------------------------------------------------------------------------

def cmd_degrees(job: dict) -> tuple[dict, int]:
    X = parse_space(require(job, "space"))
    f = parse_map(require(job, "map"), X)
    if job.get("conjugate") is not None:
        f = conjugate_map(f, _json_arg(job["conjugate"], "conjugate"))
    n_max = int(job.get("n_max", 6))
    seq = iterate_degrees(f, n_max, max_terms=int(job.get("max_terms", 10 ** 6)),
                          max_coeff_bits=int(job.get("max_coeff_bits", 10 ** 4)))
    C = int(job.get("C", 1))
    tol = float(job.get("tol", 1e-2))
    lambdas = {}
    if seq.n_max >= 1:
        codims = [1] if X.total_dim == 1 else [1, X.total_dim]
        for p in codims:
            rep = lambda_estimate(seq, C=C, codim=p, tol=tol)
            lambdas[str(p)] = {
                "best": rep.best.as_dict(),
                "upper_bounds": [b.as_dict() for b in rep.upper_bounds],
                "ratio_estimate": {"value": rep.ratio_estimate, "flag": "HEURISTIC"},
                "ratios_converged": rep.certified,
            }
    st = stability_check(seq)
    rows = []
    for n, D in enumerate(seq.entries):
        rows.append({"n": n, "multidegree": _mat(D), "flag": "EXACT",
                     "factor_removed": seq.factor_removed[n],
                     "common_factor": _format_factors(seq.common_factors[n]) if n else "-"})
    result = {
        "map": format_map(seq.map), "space": str(X), "sequence": rows,
        "lambda": lambdas,
        "stability": {"verdict": st.verdict, "horizon": st.horizon,
                      "first_instability": st.first_instability,
                      "common_factor": _format_factors(st.common_factor) if st.common_factor else None},
        "submultiplicativity_violations": [list(v) for v in seq.submultiplicativity_violations()],
        "truncated": seq.truncated, "truncation_reason": seq.truncation_reason,
        "resources": {"max_terms_seen": seq.max_terms_seen,
                      "max_coeff_bits_seen": seq.max_coeff_bits_seen},
    }
    if job.get("format") == "table":
        result["table"] = degree_table(seq)
    code = EXIT_RESOURCE if seq.truncated else (EXIT_FAIL if result["submultiplicativity_violations"] else EXIT_OK)
    return result, code


def _monomial_sc(job, A):
    if job.get("P") is not None:
        return MonomialSemiConjugacy(A, _json_arg(job["P"], "P"), _json_arg(require(job, "B"), "B"))
    if job.get("base_dim") is not None:
        return MonomialSemiConjugacy.block_triangular(A, int(job["base_dim"]))
    return None


def cmd_monomial(job: dict) -> tuple[dict, int]:
    A = _json_arg(require(job, "matrix"), "matrix")
    eps = float(job.get("eps", 1e-12))
    m = MonomialMap(A)
    vals = monomial_dynamical_degree_values(m, eps)
    result = {"matrix": m.rows, "det": m.det,
              "lambda": [v.as_dict() for v in vals],
              "compounds": [{"p": p, "matrix": compound_matrix(m.rows, p)}
                            for p in range(1, m.dim + 1)]}
    model = job.get("model")
    if model:
        result["rational_map"] = {"model": model,
                                  "map": format_map(monomial_to_rational_map(m, model))}
    code = EXIT_OK
    sc = _monomial_sc(job, m.rows)
    if sc is not None:
        kr = kernel_restriction(sc)
        rel = monomial_relative_degree_values(sc, eps)
        pf = product_formula_check(sc, eps)
        result["relative"] = {"kernel_basis": kr.basis, "restricted_matrix": kr.matrix,
                              "lambda_rel": [v.as_dict() for v in rel],
                              "product_formula": _pf_dict(pf)}
        code = EXIT_OK if pf.passed else EXIT_FAIL
    return result, code


def _pf_dict(pf) -> dict:
    return {"verdict": pf.verdict,
            "lambda_f": [_iv(x) for x in pf.lambda_f], "lambda_g": [_iv(x) for x in pf.lambda_g],
            "lambda_rel": [_iv(x) for x in pf.lambda_rel], "rhs": [_iv(x) for x in pf.rhs],
            "residuals": list(pf.residuals)}


def _lattice(value) -> CycleLattice:
    if isinstance(value, dict) and "blowup" in value:
        return blowup_lattice(int(value["blowup"]))
    if value == "point":
        return point_lattice()
    if isinstance(value, dict):
        return CycleLattice(int(value.get("codim", 1)), require(value, "labels"),
                            require(value, "pairing"), require(value, "degree_vector"),
                            value.get("generators", []), value.get("polarization"))
    raise JobError("lattice must be {'blowup': m}, 'point' or an explicit lattice object")


def _action(value) -> PullbackAction:
    if value == "cremona":
        return cremona_action()
    if value == "lehmer":
        return lehmer_action()
    if isinstance(value, dict):
        return PullbackAction({int(k): v for k, v in value.items()})
    raise JobError("action must be 'cremona', 'lehmer' or {codim: matrix}")


def cmd_lattice(job: dict) -> tuple[dict, int]:
    result: dict = {}
    code = EXIT_OK
    if job.get("lattice") is not None:
        lat = _lattice(_json_arg(job["lattice"], "lattice", ("point",)))
        sig = hodge_signature(lat.pairing)
        result["lattice"] = {"labels": list(lat.labels), "rank": lat.rank,
                             "signature": list(sig), "flag": "EXACT"}
        norms = _json_arg(job.get("norms"), "norms") or []
        result["norms"] = [dict(norm_one(lat, v).as_dict(), vector=[str(x) for x in v])
                           for v in norms]
    if job.get("action") is not None:
        act = _action(_json_arg(job["action"], "action", ("cremona", "lehmer")))
        eps = float(job.get("eps", 1e-12))
        result["spectra"] = {str(p): spectral_dict(spectral_data(act, p, eps))
                             for p in act.matrices}
        if job.get("lambda2") is not None:
            lam2 = job["lambda2"]
            lam2 = Fraction(lam2) if isinstance(lam2, (int, str)) else Fraction(str(lam2))
            s = simplicity_check(act, lam2, float(job.get("tol", 1e-9)), eps)
            result["simplicity"] = {"verdict": s.verdict, "r1": _iv(s.r1),
                                    "simple": s.simple, "detail": s.detail,
                                    "other_max_modulus": _iv(s.other_max_modulus)
                                    if s.other_max_modulus else None}
            if s.verdict == "FAIL":
                code = EXIT_FAIL
        if job.get("cone_lattice") is not None:
            lat2 = _lattice(_json_arg(job["cone_lattice"], "cone_lattice", ("point",)))
            c = cone_preservation_r1r2_check(act, lat2, float(job.get("tol", 1e-9)), eps)
            result["cone_check"] = {"verdict": c.verdict, "r1": _iv(c.r1), "r2": _iv(c.r2),
                                    "inequality_holds": c.inequality_holds}
            if c.verdict == "FAIL":
                code = EXIT_FAIL
    if not result:
        raise JobError("lattice job needs 'lattice' and/or 'action'")
    return result, code


def _relative_report(rep) -> dict:
    return {"p": rep.p, "flag": rep.flag, "entries": rep.entries,
            "fiber_matrices": [_mat(M) for M in rep.fiber_matrices],
            "lambda_rel": {str(k): _iv(v) for k, v in sorted(rep.lambda_rel.items())},
            "best_bounds": {str(k): b.as_dict() for k, b in sorted(rep.lambda_bounds.items())},
            "fiber_samples": [list(p) for p in rep.fiber_samples],
            "rejected_samples": [list(p) for p in rep.rejected_samples],
            "oracle_agrees": rep.oracle_agrees,
            "submult_constant": rep.submult_constant,
            "declared_constant": rep.declared_constant,
            "submultiplicativity_violations": [list(v) for v in rep.submult_violations],
            "truncated": rep.truncated}


def cmd_relative(job: dict) -> tuple[dict, int]:
    X = parse_space(require(job, "space"))
    f = parse_map(require(job, "map"), X)
    sc = build_semiconjugacy(f, int(require(job, "split")))
    rep = relative_degree_sequence(
        sc, p=int(job.get("p", 1)), n_max=int(job.get("n_max", 6)), seed=int(job.get("seed", 0)),
        max_terms=int(job.get("max_terms", 10 ** 6)),
        max_coeff_bits=int(job.get("max_coeff_bits", 10 ** 4)))
    result = {"map": format_map(sc.f), "base_map": format_map(sc.g),
              "split": [sc.base_dim, sc.fiber_dim], "relative": _relative_report(rep)}
    if rep.truncated:
        return result, EXIT_RESOURCE
    return result, EXIT_OK if rep.oracle_agrees and not rep.submult_violations else EXIT_FAIL


def cmd_product_formula(job: dict) -> tuple[dict, int]:
    tol = float(job.get("tol", 1e-2))
    if job.get("matrix") is not None:
        A = _json_arg(job["matrix"], "matrix")
        sc = _monomial_sc(job, MonomialMap(A).rows)
        if sc is None:
            raise JobError("monomial product formula needs base_dim or P and B")
        pf = product_formula_check(sc, float(job.get("eps", 1e-12)))
        return {"mode": "monomial", "product_formula": _pf_dict(pf)}, \
            EXIT_OK if pf.passed else EXIT_FAIL
    X = parse_space(require(job, "space"))
    f = parse_map(require(job, "map"), X)
    sc = build_semiconjugacy(f, int(require(job, "split")))
    n_max = int(job.get("n_max", 8))
    seed = int(job.get("seed", 0))
    seq = iterate_degrees(sc.f, n_max)
    k = X.total_dim
    if k > 2:
        raise JobError("product formula on rational maps supports total dimension <= 2; "
                       "use the monomial mode for larger examples")
    lf = [Interval(1.0, 1.0), lambda_estimate(seq, codim=1).best_estimate]
    if k > 1:
        lf.append(lambda_estimate(seq, codim=k).best_estimate)
    gseq = iterate_degrees(sc.g, n_max)
    lg = [Interval(1.0, 1.0), lambda_estimate(gseq, codim=1).best_estimate]
    rel = relative_degree_sequence(sc, 1, n_max, seed=seed)
    lr = [rel.lambda_rel[0], rel.lambda_rel[1]]
    pf = product_formula_verify(lf, lg, lr, tol)
    truncated = seq.truncated or gseq.truncated or rel.truncated
    code = EXIT_RESOURCE if truncated else (EXIT_OK if pf.passed else EXIT_FAIL)
    return {"mode": "rational", "map": format_map(sc.f), "base_map": format_map(sc.g),
            "n_max": n_max, "tol": tol, "truncated": truncated,
            "product_formula": _pf_dict(pf)}, code


def cmd_suite(job: dict) -> tuple[dict, int]:
    res = run_suite(str(job.get("name", "")), int(job.get("seed", 0)))
    return res, EXIT_OK if res["passed"] else EXIT_FAIL


COMMANDS = {
    "degrees": (cmd_degrees, ["seed", "space", "map", "n_max", "C", "tol", "max_terms",
                              "max_coeff_bits", "conjugate", "format"]),
    "monomial": (cmd_monomial, ["seed", "matrix", "base_dim", "P", "B", "model", "eps"]),
    "lattice": (cmd_lattice, ["seed", "lattice", "norms", "action", "lambda2", "cone_lattice",
                              "tol", "eps"]),
    "relative": (cmd_relative, ["space", "map", "split", "p", "n_max", "seed", "max_terms",
                                "max_coeff_bits"]),
    "check-product-formula": (cmd_product_formula, ["matrix", "base_dim", "P", "B", "space",
                                                    "map", "split", "n_max", "seed", "tol",
                                                    "eps"]),
    "suite": (cmd_suite, ["name", "seed"]),
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dyndeg", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"dyndeg {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, job=True):
        if job:
            p.add_argument("job", nargs="?", help="JSON job file")
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--seed", type=int, help="seed for every random choice")
        p.add_argument("--timings", action="store_true", help="include wall-clock time")

    p = sub.add_parser("degrees", help="degree sequence and lambda_1 / lambda_top bounds")
    common(p)
    p.add_argument("--space", help="2 for P^2, 1,1 for P^1 x P^1")
    p.add_argument("--map", help="e.g. '[x1*x2 : x0*x2 : x0*x1]'")
    p.add_argument("--n-max", dest="n_max", type=int)
    p.add_argument("--C", dest="C", type=int, help="submultiplicativity constant")
    p.add_argument("--tol", type=float)
    p.add_argument("--max-terms", dest="max_terms", type=int)
    p.add_argument("--max-coeff-bits", dest="max_coeff_bits", type=int)
    p.add_argument("--conjugate", help="JSON list of invertible matrices, one per factor")
    p.add_argument("--format", choices=["json", "table"])

    p = sub.add_parser("monomial", help="exact dynamical degrees of a monomial map")
    common(p)
    p.add_argument("--matrix", help="JSON integer matrix, rows are exponent vectors")
    p.add_argument("--base-dim", dest="base_dim", type=int)
    p.add_argument("--P", dest="P", help="JSON projection matrix for a semi-conjugacy")
    p.add_argument("--B", dest="B", help="JSON base matrix for a semi-conjugacy")
    p.add_argument("--model", choices=["p1", "projective"])
    p.add_argument("--eps", type=float)

    p = sub.add_parser("lattice", help="cycle lattices, norms and spectral checks")
    common(p)
    p.add_argument("--lattice", help='JSON, e.g. {"blowup": 1}')
    p.add_argument("--norms", help="JSON list of vectors")
    p.add_argument("--action", help="cremona, lehmer or JSON {codim: matrix}")
    p.add_argument("--lambda2", help="lambda_2 for the simplicity check")
    p.add_argument("--cone-lattice", dest="cone_lattice", help="JSON lattice of N^2")
    p.add_argument("--tol", type=float)
    p.add_argument("--eps", type=float)

    p = sub.add_parser("relative", help="relative degree sequence of a skew product")
    common(p)
    p.add_argument("--space")
    p.add_argument("--map")
    p.add_argument("--split", type=int, help="number of base factors")
    p.add_argument("--p", type=int)
    p.add_argument("--n-max", dest="n_max", type=int)
    p.add_argument("--max-terms", dest="max_terms", type=int)
    p.add_argument("--max-coeff-bits", dest="max_coeff_bits", type=int)

    p = sub.add_parser("check-product-formula", help="compare lambda_p(f) with the fibred bound")
    common(p)
    for name in ("matrix", "P", "B", "space", "map"):
        p.add_argument(f"--{name}", dest=name)
    p.add_argument("--base-dim", dest="base_dim", type=int)
    p.add_argument("--split", type=int)
    p.add_argument("--n-max", dest="n_max", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--eps", type=float)

    p = sub.add_parser("suite", help="run a named property suite")
    p.add_argument("name", help="suite name or 'all'")
    common(p, job=False)
    return ap


KIND_ALIASES = {"product-formula": "check-product-formula", "property-suite": "suite"}


def flatten_job(raw: dict) -> dict:
    """Accept flat jobs or the nested {kind, payload, options} layout."""
    job = {k: v for k, v in raw.items() if k not in ("payload", "options")}
    for part in ("payload", "options"):
        extra = raw.get(part) or {}
        if not isinstance(extra, dict):
            raise JobError(f"{part!r} must be a JSON object")
        job.update(extra)
    return job


def run_job(raw: dict, command: str | None = None, timings: bool = False) -> tuple[dict | None, str, int]:
    """Dispatch one job; returns (report or None, rendered text, exit code).

    The report echoes the inputs and declares the seed in its header. Wall-clock
    time is only included on request so that reruns stay byte-identical.
    """
    start = time.perf_counter()
    try:
        job = flatten_job(raw)
        kind = job.pop("kind", None)
        kind = KIND_ALIASES.get(kind, kind)
        if command is not None and kind is not None and kind != command:
            raise JobError(f"job kind {kind!r} does not match subcommand {command!r}")
        command = command or kind
        if command not in COMMANDS:
            raise JobError(f"unknown job kind {command!r}")
        job.setdefault("seed", 0)
        result, code = COMMANDS[command][0](job)
    except ResourceLimit as exc:
        return None, f"error: resource limit: {exc}\n", EXIT_RESOURCE
    except (NonConvergence, DegenerateFibers) as exc:
        return None, f"error: {type(exc).__name__}: {exc}\n", EXIT_RESOURCE
    except (DynDegError, ValueError, TypeError, KeyError) as exc:
        return None, f"error: {type(exc).__name__}: {exc}\n", EXIT_INPUT
    report = {"tool": "dyndeg", "version": __version__, "command": command,
              "seed": job["seed"],
              "input": {k: v for k, v in sorted(job.items()) if k != "format"},
              "result": result, "exit_code": code}
    if timings:
        report["timings"] = {"wall_seconds": round(time.perf_counter() - start, 3)}
    if job.get("format") == "table" and "table" in result:
        return report, result["table"], code
    return report, dumps(report), code


def main(argv=None) -> int:
    args = build_parser().parse_args(sys.argv[1:] if argv is None else argv)
    try:
        raw = merge(load_job(getattr(args, "job", None)), args, COMMANDS[args.command][1])
    except DynDegError as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_INPUT
    report, text, code = run_job(raw, args.command, args.timings)
    if report is None:
        sys.stderr.write(text)
    elif args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
