"""Command-line front end: verification suites, data dumps, specialization.

Every command prints a deterministic report (text or JSON) built from
result entries {check, status, detail, witness?} with status one of
pass, finding, fail.  A "finding" records a measured discrepancy against
a documented expectation and does not affect the exit code; exit 0 means
no assertion failed, exit 1 carries at least one failure (first witness
included in the report), exit 2 flags a usage or configuration error.
Work fans out over a thread pool when requested, but results are merged
in submission order, so the bytes emitted do not depend on the thread
count.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, List

from .charpoints import (
    NEGATIVE_V2,
    POSITIVE_V2,
    chevalley_divisibility,
    orbit_set,
    poincare_q,
)
from .coxeter import build_weyl
from .hecke import LY, STD, hecke_algebra
from .k0model import GluingViolation, IdentityFailure, KModule, resolve_m
from .klalgebra import KLAlgebra
from .linalg import bivar_divides
from .rings import LaurentPoly, annihilator_family, p_poly

VERIFY_SUITES = (
    "braid",
    "cubic",
    "w0",
    "minpoly",
    "canonical",
    "gluing",
    "polyconj",
    "tilting",
    "chevalley",
    "cells",
)
DUMP_TABLES = ("cells", "fulltwist_scalars", "qpoly", "orbit_table")

# randomized suites draw this many samples per run
N_CANONICAL = 5
N_GLUING = 5
N_POLYCONJ = 3


class ConfigError(ValueError):
    """Bad command configuration; maps to exit code 2."""


@dataclass
class RunConfig:
    cartan_type: str = "A2"
    orbit_denominator_bound: int = 6
    exponent_bound_m: object = "safe"
    seed: int = 0
    output: str = "text"
    threads: int = 1

    def validate(self) -> None:
        if self.orbit_denominator_bound < 1:
            raise ConfigError("orbit denominator bound must be positive")
        m = self.exponent_bound_m
        if not (m in ("paper", "safe") or (isinstance(m, int) and m >= 1)):
            raise ConfigError("m must be 'paper', 'safe', or a positive integer")
        if self.threads < 1:
            raise ConfigError("thread count must be positive")
        try:
            build_weyl(self.cartan_type)
        except Exception as e:
            raise ConfigError("unsupported type %r: %s" % (self.cartan_type, e))

    def to_json(self) -> dict:
        # threads and output mode steer execution, not content; leaving
        # them out keeps reports byte-identical across thread counts
        return {
            "cartan_type": self.cartan_type,
            "orbit_denominator_bound": self.orbit_denominator_bound,
            "exponent_bound_m": self.exponent_bound_m,
            "seed": self.seed,
        }


def _entry(check: str, status: str, detail: str, witness=None) -> dict:
    out = {"check": check, "status": status, "detail": detail}
    if witness is not None:
        out["witness"] = witness
    return out


def _from_module_report(rep: dict) -> dict:
    detail = "type=%s orbit=%s" % (rep["type"], rep["orbit"])
    if rep.get("detail"):
        detail += " " + rep["detail"]
    return _entry(rep["check"], rep["status"], detail, rep.get("witness"))


def _chunks(cfg: RunConfig, tasks: List[Callable[[], List[dict]]]) -> List[List[dict]]:
    """Run tasks, possibly on a pool; collect in submission order."""
    if cfg.threads > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            return list(pool.map(lambda f: f(), tasks))
    return [f() for f in tasks]


def _fanout(cfg: RunConfig, tasks: List[Callable[[], List[dict]]]) -> List[dict]:
    return [r for chunk in _chunks(cfg, tasks) for r in chunk]


def _sparse_vector(M: KModule, rng: random.Random) -> List[LaurentPoly]:
    return [
        LaurentPoly({rng.randrange(-2, 3): rng.randrange(-3, 4)})
        if rng.random() < 0.4
        else LaurentPoly.zero()
        for _ in range(M.dim)
    ]


# ---------------------------------------------------------------------------
# verify suites
# ---------------------------------------------------------------------------

def _suite_braid(cfg: RunConfig) -> List[dict]:
    kl = KLAlgebra.for_type(cfg.cartan_type, cfg.orbit_denominator_bound)
    return [_from_module_report(r) for r in kl.check_braid()]


def _suite_cubic(cfg: RunConfig) -> List[dict]:
    kl = KLAlgebra.for_type(cfg.cartan_type, cfg.orbit_denominator_bound)

    def one(s):
        out = []
        for rep in kl.verify_cubic(s) + kl.operator_square_identity(s):
            e = _from_module_report(rep)
            e["detail"] = "s=%d %s" % (s + 1, e["detail"])
            out.append(e)
        return out

    tasks = [lambda s=s: one(s) for s in range(kl.group.rank)]
    return _fanout(cfg, tasks)


def _suite_w0(cfg: RunConfig) -> List[dict]:
    kl = KLAlgebra.for_type(cfg.cartan_type, cfg.orbit_denominator_bound)
    return [_from_module_report(r) for r in kl.check_w0_identity()]


def _suite_minpoly(cfg: RunConfig) -> List[dict]:
    kl = KLAlgebra.for_type(cfg.cartan_type, cfg.orbit_denominator_bound)
    mp, verdicts = kl.fulltwist_minpoly()
    lw0 = kl.group.lengths[kl.group.longest_id]
    out = [
        _entry(
            "minpoly",
            "pass" if verdicts["safe"] else "fail",
            "minimal polynomial %s; divides prod(x - v^2i, i <= %d): %s"
            % (mp.render(), 2 * lw0, "yes" if verdicts["safe"] else "no"),
        ),
        _entry(
            "minpoly_range",
            "pass" if verdicts["paper"] else "finding",
            "range i <= %d: %s prod(x - v^2i)"
            % (lw0, "divides" if verdicts["paper"] else "does not divide"),
        ),
    ]
    if isinstance(cfg.exponent_bound_m, int):
        mm = cfg.exponent_bound_m
        ok = bivar_divides(mp, annihilator_family(mm))
        out.append(
            _entry(
                "minpoly_range",
                "pass" if ok else "finding",
                "configured range i <= %d: %s"
                % (mm, "divides" if ok else "does not divide"),
            )
        )
    return out


def _suite_canonical(cfg: RunConfig) -> List[dict]:
    M = KModule.for_type(cfg.cartan_type, cfg.orbit_denominator_bound)
    rng = random.Random(cfg.seed)
    vecs = [_sparse_vector(M, rng) for _ in range(N_CANONICAL)]
    tasks = [lambda v=v: M.canonical_identity(v) for v in vecs]
    out = []
    for i, reports in enumerate(_chunks(cfg, tasks)):
        bad = [r for r in reports if r["status"] != "pass"]
        if not bad:
            out.append(
                _entry(
                    "canonical",
                    "pass",
                    "vector %d: identity holds for all %d group elements"
                    % (i, len(reports)),
                )
            )
        else:
            for r in bad:
                out.append(
                    _entry(
                        "canonical",
                        "fail",
                        "vector %d: identity fails at y=%s" % (i, r["y"]),
                        r.get("witness"),
                    )
                )
    return out


def _suite_gluing(cfg: RunConfig) -> List[dict]:
    M = KModule.for_type(cfg.cartan_type, cfg.orbit_denominator_bound)
    rng = random.Random(cfg.seed)
    tuples = [M.random_free_combination(rng, 3) for _ in range(N_GLUING)]
    tasks = [lambda t=t: M.check_gluing(t) for t in tuples]
    out = []
    for i, reports in enumerate(_chunks(cfg, tasks)):
        bad = [r for r in reports if r["status"] != "pass"]
        if not bad:
            out.append(
                _entry(
                    "gluing",
                    "pass",
                    "tuple %d: membership holds at all %d (s, w) pairs"
                    % (i, len(reports)),
                )
            )
        else:
            for r in bad:
                out.append(
                    _entry(
                        "gluing",
                        "fail",
                        "tuple %d: no witness at s=%s, w=%s"
                        % (i, r["s"], r["w"]),
                    )
                )
    return out


def _suite_polyconj(cfg: RunConfig) -> List[dict]:
    M = KModule.for_type(cfg.cartan_type, cfg.orbit_denominator_bound)
    rng = random.Random(cfg.seed)
    tuples = [M.random_free_combination(rng, 3) for _ in range(N_POLYCONJ)]
    out = []
    for i, a in enumerate(tuples):
        try:
            _, _, cert = M.polyconj_split(a, cfg.exponent_bound_m)
            out.append(
                _entry(
                    "polyconj",
                    "pass",
                    "tuple %d: contracts hold (m=%d, p=%s)"
                    % (i, cert["m"], cert["p"]),
                )
            )
        except (GluingViolation, IdentityFailure) as e:
            out.append(_entry("polyconj", "fail", "tuple %d" % i, str(e)))
    return out


def _suite_tilting(cfg: RunConfig) -> List[dict]:
    W = build_weyl(cfg.cartan_type)
    H = hecke_algebra(W, STD)
    neg = H.ic_e_coefficient(hecke_algebra(W, LY).tilting_class(negative_v2=True))
    pos = H.ic_e_coefficient(H.tilting_class(negative_v2=False))
    pneg: Dict[int, int] = {}
    ppos: Dict[int, int] = {}
    for l in W.lengths:
        pneg[2 * l] = pneg.get(2 * l, 0) + (-1) ** l
        ppos[2 * l] = ppos.get(2 * l, 0) + 1
    match_neg = neg == LaurentPoly(pneg)
    match_pos = pos == LaurentPoly(ppos)
    out = []
    if match_neg and not match_pos:
        out.append(
            _entry(
                "tilting",
                "pass",
                "type=%s matching convention: -v^2 weights; coefficient %s"
                % (cfg.cartan_type, neg.render()),
            )
        )
        out.append(
            _entry(
                "tilting_literal",
                "finding",
                "literal v weights give C_e-coefficient %s, not the length "
                "generating function" % pos.render(),
            )
        )
    elif match_pos and not match_neg:
        out.append(
            _entry(
                "tilting",
                "pass",
                "type=%s matching convention: +v weights; coefficient %s"
                % (cfg.cartan_type, pos.render()),
            )
        )
    else:
        out.append(
            _entry(
                "tilting",
                "fail",
                "type=%s: %d conventions match, expected exactly one"
                % (cfg.cartan_type, int(match_neg) + int(match_pos)),
                "neg=%s pos=%s" % (neg.render(), pos.render()),
            )
        )
    return out


def _suite_chevalley(cfg: RunConfig) -> List[dict]:
    W = build_weyl(cfg.cartan_type)
    lw0 = W.lengths[W.longest_id]
    orbits = orbit_set(W, cfg.orbit_denominator_bound)
    def one(orb):
        lam = orb.representative
        rows = []
        qpos = poincare_q(W, lam, POSITIVE_V2)
        safe = chevalley_divisibility(qpos, 2 * lw0)
        ivals = sorted(i for _, i, mult in safe.factors for _ in range(mult))
        rows.append(
            _entry(
                "chevalley",
                "pass" if safe.success else "fail",
                "lambda=%s q=%s i-values=%s (i <= %d)"
                % (lam.render(), qpos.render(), ivals, 2 * lw0),
                None if safe.success else safe.remainder.render(),
            )
        )
        paper = chevalley_divisibility(qpos, lw0)
        if not paper.success:
            rows.append(
                _entry(
                    "chevalley_range",
                    "finding",
                    "lambda=%s: q does not factor within i <= %d; remainder %s"
                    % (lam.render(), lw0, paper.remainder.render()),
                )
            )
        qneg = poincare_q(W, lam, NEGATIVE_V2)
        alt = chevalley_divisibility(qneg, lw0)
        if not alt.success:
            rows.append(
                _entry(
                    "chevalley_sign",
                    "finding",
                    "lambda=%s: -v^2 convention within i <= %d leaves remainder %s"
                    % (lam.render(), lw0, alt.remainder.render()),
                )
            )
        return rows

    tasks = [lambda o=o: one(o) for o in orbits]
    return _fanout(cfg, tasks)


def _scalar_str(sc) -> str:
    if sc is None:
        return "none"
    sign, exp = sc
    return "%sv^%d" % ("-" if sign < 0 else "", exp)


def _suite_cells(cfg: RunConfig) -> List[dict]:
    W = build_weyl(cfg.cartan_type)
    H = hecke_algebra(W, STD)
    Hly = hecke_algebra(W, LY)
    dec = H.cells()
    ft = H.full_twist()
    ftly = Hly.full_twist()
    lw0 = W.lengths[W.longest_id]
    out = []
    dvals = []
    for ci, cell in enumerate(dec.two_sided):
        std = H.cell_scalar(ft, ci)
        ly = Hly.cell_scalar(ftly, ci)
        ok = std is not None and ly is not None
        if ly is not None:
            dvals.append(ly[1])
        out.append(
            _entry(
                "cells",
                "pass" if ok else "fail",
                "cell %d size %d: std=%s ly=%s"
                % (ci, len(cell), _scalar_str(std), _scalar_str(ly)),
            )
        )
    within = all(0 <= d <= 2 * lw0 for d in dvals)
    out.append(
        _entry(
            "cells_range",
            "pass" if within else "finding",
            "observed d-values %s vs documented range [0, %d]"
            % (sorted(set(dvals)), 2 * lw0),
        )
    )
    return out


SUITES = {
    "braid": _suite_braid,
    "cubic": _suite_cubic,
    "w0": _suite_w0,
    "minpoly": _suite_minpoly,
    "canonical": _suite_canonical,
    "gluing": _suite_gluing,
    "polyconj": _suite_polyconj,
    "tilting": _suite_tilting,
    "chevalley": _suite_chevalley,
    "cells": _suite_cells,
}


# ---------------------------------------------------------------------------
# dump tables
# ---------------------------------------------------------------------------

def _dump_cells(cfg: RunConfig) -> List[dict]:
    dec = hecke_algebra(build_weyl(cfg.cartan_type), STD).cells()
    out = []
    for ci, words in enumerate(dec.to_json()):
        out.append(
            _entry(
                "cells",
                "pass",
                "cell %d (size %d): %s" % (ci, len(words), json.dumps(words)),
            )
        )
    return out


def _dump_fulltwist_scalars(cfg: RunConfig) -> List[dict]:
    W = build_weyl(cfg.cartan_type)
    H = hecke_algebra(W, STD)
    Hly = hecke_algebra(W, LY)
    dec = H.cells()
    ft = H.full_twist()
    ftly = Hly.full_twist()
    out = []
    for ci, cell in enumerate(dec.two_sided):
        std = H.cell_scalar(ft, ci)
        ly = Hly.cell_scalar(ftly, ci)
        out.append(
            _entry(
                "fulltwist_scalars",
                "pass",
                "cell %d size %d: std=%s ly=%s d=%s"
                % (
                    ci,
                    len(cell),
                    _scalar_str(std),
                    _scalar_str(ly),
                    "none" if ly is None else ly[1],
                ),
            )
        )
    return out


def _dump_qpoly(cfg: RunConfig) -> List[dict]:
    W = build_weyl(cfg.cartan_type)
    out = []
    for orb in orbit_set(W, cfg.orbit_denominator_bound):
        lam = orb.representative
        sub = orb.stabilizers[lam]
        out.append(
            _entry(
                "qpoly",
                "pass",
                "lambda=%s stabilizer=%s q[+v^2]=%s q[-v^2]=%s"
                % (
                    lam.render(),
                    sub.cartan_type,
                    poincare_q(W, lam, POSITIVE_V2).render(),
                    poincare_q(W, lam, NEGATIVE_V2).render(),
                ),
            )
        )
    return out


def _dump_orbit_table(cfg: RunConfig) -> List[dict]:
    W = build_weyl(cfg.cartan_type)
    out = []
    for orb in orbit_set(W, cfg.orbit_denominator_bound):
        lam = orb.representative
        out.append(
            _entry(
                "orbit_table",
                "pass",
                "lambda=%s size=%d stabilizer=%s order=%d w0L_length=%d"
                % (
                    lam.render(),
                    orb.size,
                    orb.stabilizers[lam].cartan_type,
                    orb.stabilizer_order,
                    W.lengths[W.id_of(orb.w0L[lam])],
                ),
            )
        )
    return out


TABLES = {
    "cells": _dump_cells,
    "fulltwist_scalars": _dump_fulltwist_scalars,
    "qpoly": _dump_qpoly,
    "orbit_table": _dump_orbit_table,
}


def _cmd_specialize(cfg: RunConfig, q: int) -> List[dict]:
    if q < 2:
        raise ConfigError("q must be an integer >= 2")
    W = build_weyl(cfg.cartan_type)
    mm = resolve_m(cfg.exponent_bound_m, W)
    val = p_poly(mm).specialize_sqrt_q(q)
    return [
        _entry(
            "specialize",
            "pass" if val.nonzero else "fail",
            "type=%s m=%d q=%d: p(sqrt(q)) = %s (%s)"
            % (
                cfg.cartan_type,
                mm,
                q,
                val,
                "nonzero" if val.nonzero else "zero",
            ),
        )
    ]


# ---------------------------------------------------------------------------
# report emission
# ---------------------------------------------------------------------------

def _emit(cfg: RunConfig, command: str, results: List[dict]) -> int:
    if cfg.output == "json":
        print(
            json.dumps(
                {
                    "command": command,
                    "config": cfg.to_json(),
                    "results": results,
                },
                sort_keys=True,
                indent=2,
            )
        )
    else:
        print("# %s  %s" % (command, json.dumps(cfg.to_json(), sort_keys=True)))
        for r in results:
            print("[%s] %s: %s" % (r["status"], r["check"], r["detail"]))
            if r.get("witness"):
                print("    witness: %s" % r["witness"])
        counts = {"pass": 0, "finding": 0, "fail": 0}
        for r in results:
            counts[r["status"]] = counts.get(r["status"], 0) + 1
        print(
            "%d results: %d pass, %d finding, %d fail"
            % (len(results), counts["pass"], counts["finding"], counts["fail"])
        )
    return 1 if any(r["status"] == "fail" for r in results) else 0


def _parse_m(text: str):
    if text in ("paper", "safe"):
        return text
    try:
        return int(text)
    except ValueError:
        raise ConfigError("invalid m %r" % text)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="klwb",
        description="exact verification workbench for the glued K-group model",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    specs = [
        ("verify", "run a verification suite"),
        ("dump", "print a data table"),
        ("specialize", "evaluate p(v) at v = sqrt(q)"),
    ]
    for name, help_text in specs:
        p = sub.add_parser(name, help=help_text)
        if name == "verify":
            p.add_argument("suite", choices=VERIFY_SUITES)
        elif name == "dump":
            p.add_argument("table", choices=DUMP_TABLES)
        else:
            p.add_argument("q", type=int)
        p.add_argument("--type", default="A2", dest="cartan_type")
        p.add_argument("--den", type=int, default=6)
        p.add_argument("--m", default="safe")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--json", action="store_true")
        p.add_argument("--threads", type=int, default=None)
    args = parser.parse_args(argv)
    try:
        threads = args.threads
        if threads is None:
            threads = int(os.environ.get("KLWB_THREADS", "1"))
        cfg = RunConfig(
            cartan_type=args.cartan_type,
            orbit_denominator_bound=args.den,
            exponent_bound_m=_parse_m(args.m),
            seed=args.seed,
            output="json" if args.json else "text",
            threads=threads,
        )
        cfg.validate()
        if args.command == "verify":
            results = SUITES[args.suite](cfg)
            return _emit(cfg, "verify %s" % args.suite, results)
        if args.command == "dump":
            results = TABLES[args.table](cfg)
            return _emit(cfg, "dump %s" % args.table, results)
        results = _cmd_specialize(cfg, args.q)
        return _emit(cfg, "specialize %d" % args.q, results)
    except ConfigError as e:
        print("error: %s" % e, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
