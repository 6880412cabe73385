"""Command-line surface: one subcommand per verification area.

Exit codes: 0 all checks match, 1 usage error, 2 a conjectured formula
disagrees with an exact enumeration (counterexample candidate, witnesses
preserved in the report), 3 a proven statement disagrees (implementation
error), 4 nothing conclusive (ceiling exceeded or sampling-only results).

The default ceiling can be overridden with the SINGERCENSUS_CEILING
environment variable or the --ceiling flag.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from dataclasses import dataclass, fields as dc_fields

from . import census as cs
from .numtheory import CeilingExceeded, count_irreducible_polys, count_primitive_polys
from .gf import build_field_tower, field_for_order, poly_from_text
from .linalg import nilpotent_count
from .report import (
    KIND_CONJECTURED,
    KIND_PROVEN,
    KIND_SAMPLED,
    TOOL_VERSION,
    VerificationReport,
    make_check,
    override_formula,
    serialize,
)

ENV_CEILING = "SINGERCENSUS_CEILING"

COMMANDS = (
    "fibers",
    "coprime",
    "sigma",
    "toeplitz",
    "splitting",
    "pointed",
    "bounds",
    "binomial",
    "trinomial",
    "nilpotent",
    "all",
)

_REQUIRED = {
    "fibers": ("q", "m", "n"),
    "coprime": ("q", "r", "n"),
    "sigma": ("q", "n"),
    "toeplitz": ("q", "n"),
    "splitting": ("q", "m", "n"),
    "pointed": ("q", "m", "n"),
    "bounds": ("q", "m", "n"),
    "binomial": ("q", "d"),
    "trinomial": ("q", "n"),
    "nilpotent": ("q", "m"),
    "all": (),
}

_SAMPLEABLE = {"fibers", "coprime", "sigma", "toeplitz"}

# The desk-scale matrix the `all` command sweeps.
FIBER_CONFIGS = ((2, 2, 2), (2, 2, 3), (3, 2, 2), (2, 3, 2))
COPRIME_GRID = tuple(
    (q, r, n) for q in (2, 3) for r in (2, 3) for n in (1, 2, 3)
)
SIGMA_GRID = tuple((q, n) for q in (2, 3) for n in (1, 2, 3))
TOEPLITZ_GRID = SIGMA_GRID
BINOMIAL_GRID = tuple((q, d) for q in (3, 5, 7, 9) for d in range(2, 9))
EQ2_GRID = tuple((q, d) for q in (2, 3) for d in (1, 2, 3, 4, 6))
NILPOTENT_CONFIGS = ((2, 2), (3, 2), (2, 3))


class UsageError(ValueError):
    """Bad command line or parameter combination."""


@dataclass
class RunConfig:
    command: str
    q: int | None = None
    m: int | None = None
    n: int | None = None
    r: int | None = None
    d: int | None = None
    b: int | None = None
    mode: str = "exhaustive"
    sample_size: int = 100_000
    seed: int = 0
    format: str = "json"
    ceiling: int | None = None
    workers: int = 1
    out: str | None = None
    timings: bool = False

    def resolved_ceiling(self) -> int:
        if self.ceiling is not None:
            return self.ceiling
        env = os.environ.get(ENV_CEILING)
        if env:
            return int(env)
        return cs.DEFAULT_CEILING

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        for name in _REQUIRED[self.command]:
            if getattr(self, name) is None:
                raise UsageError(f"command {self.command!r} requires --{name}")
        for name in ("q", "m", "n", "r", "d"):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise UsageError(f"--{name} must be >= 1")
        if self.q is not None:
            try:
                field_for_order(self.q)
            except ValueError as exc:
                raise UsageError(str(exc)) from None
        if self.command == "binomial":
            if self.d is not None and self.d < 2:
                raise UsageError("--d must be >= 2 for binomial")
            if self.b is not None and not 1 <= self.b < self.q:
                raise UsageError("--b must be a nonzero element encoding")
        if self.mode not in ("exhaustive", "sample"):
            raise UsageError(f"unknown mode {self.mode!r}")
        if self.mode == "sample" and self.command not in _SAMPLEABLE:
            raise UsageError(
                f"command {self.command!r} has no sampling mode; "
                f"sampling applies to {sorted(_SAMPLEABLE)}"
            )
        if self.sample_size < 1:
            raise UsageError("--sample-size must be >= 1")
        if self.workers < 1:
            raise UsageError("--workers must be >= 1")
        if self.format not in ("json", "csv", "md"):
            raise UsageError(f"unknown format {self.format!r}")

    def echo(self) -> dict:
        return {
            "command": self.command,
            "q": self.q,
            "m": self.m,
            "n": self.n,
            "r": self.r,
            "d": self.d,
            "b": self.b,
            "mode": self.mode,
            "sample_size": self.sample_size,
            "seed": self.seed,
            "ceiling": self.resolved_ceiling(),
        }


def _fiber_kind(m: int, n: int) -> str:
    # proved for m <= 2 (and trivially for n = 1); open beyond
    return KIND_PROVEN if m <= 2 or n == 1 else KIND_CONJECTURED


def _fiber_anchor(m: int) -> str:
    return "Theorem 4.4" if m == 2 else "Conjecture 2.4"


def _fibers_checks(q, m, n, *, ceiling, workers, fiber_report=None):
    rep = fiber_report
    if rep is None:
        rep = cs.enumerate_fibers(q, m, n, ceiling=ceiling, workers=workers)
    tag = f"q={q},m={m},n={n}"
    kind = _fiber_kind(m, n)
    anchor = _fiber_anchor(m)
    checks = []
    for ptext, entry in rep.per_poly.items():
        checks.append(
            make_check(
                f"fiber({tag})[{ptext}]",
                anchor,
                rep.formula_fiber,
                entry.fiber_size,
                kind,
            )
        )
    checks.append(
        make_check(
            f"fiber_uniformity({tag})",
            "Lemma 5.2",
            1,
            len({e.fiber_size for e in rep.per_poly.values()}),
            KIND_CONJECTURED,
            detail="number of distinct irreducible fiber sizes",
        )
    )
    checks.append(
        make_check(
            f"irreducible_coverage({tag})",
            "Prop. 2.2",
            rep.expected_irreducible,
            len(rep.per_poly),
            KIND_PROVEN,
            detail="distinct irreducible characteristic polynomials seen",
        )
    )
    checks.append(
        make_check(
            f"primitive_coverage({tag})",
            "Eq. (2)",
            rep.expected_primitive,
            sum(1 for e in rep.per_poly.values() if e.classification == "primitive"),
            KIND_PROVEN,
        )
    )
    checks.append(
        make_check(f"bci_total({tag})", anchor, rep.formula_bci, rep.total_bci, kind)
    )
    checks.append(
        make_check(
            f"bcs_total({tag})", "Conjecture 1", rep.formula_bcs, rep.total_bcs, kind
        )
    )
    return checks, rep


def _fibers_sampled_checks(q, m, n, *, sample_size, seed):
    est = cs.sample_fibers(q, m, n, sample_size, seed)
    tag = f"q={q},m={m},n={n}"
    def fmt(e):
        return (
            f"sampled, not exact: {e.hits}/{e.sample_size} hits, "
            f"95% CI [{e.ci_low}, {e.ci_high}]"
        )
    return [
        make_check(
            f"bci_total_sampled({tag})",
            _fiber_anchor(m),
            est.formula_bci,
            est.irreducible.estimate,
            KIND_SAMPLED,
            detail=fmt(est.irreducible),
        ),
        make_check(
            f"bcs_total_sampled({tag})",
            "Conjecture 1",
            est.formula_bcs,
            est.primitive.estimate,
            KIND_SAMPLED,
            detail=fmt(est.primitive),
        ),
    ]


def _coprime_checks(q, r, n, *, ceiling):
    tag = f"q={q},r={r},n={n}"
    monic = cs.coprime_monic_count(q, r, n, ceiling=ceiling)
    both = cs.coprime_all_count(q, r, n, ceiling=ceiling)
    return [
        make_check(
            f"coprime_monic({tag})",
            "Prop. 3.1",
            monic.monic_formula,
            monic.monic_coprime_count,
            KIND_PROVEN,
        ),
        make_check(
            f"coprime_all({tag})",
            "Prop. 3.2",
            both.all_formula,
            both.all_coprime_count,
            KIND_PROVEN,
        ),
    ]


def _sigma_checks(q, n, *, ceiling):
    tag = f"q={q},n={n}"
    sig = cs.sigma_count(q, n, ceiling=ceiling)
    return [
        make_check(
            f"sigma({tag})", "Cor. 3.3", sig.sigma_formula, sig.sigma_count, KIND_PROVEN
        ),
        make_check(
            f"sigma1({tag})",
            "Cor. 3.3",
            sig.sigma1_formula,
            sig.sigma1_count,
            KIND_PROVEN,
        ),
        make_check(
            f"sigma_ratio({tag})",
            "Cor. 3.3",
            sig.sigma_count * (q - 1),
            sig.sigma1_count,
            KIND_PROVEN,
            detail="|Sigma_1| = |Sigma| * (q - 1)",
        ),
    ]


def _toeplitz_checks(q, n, *, ceiling, include_route=True):
    tag = f"q={q},n={n}"
    tc = cs.toeplitz_census(q, n, ceiling=ceiling)
    checks = [
        make_check(
            f"toeplitz_count({tag})",
            "Eq. TGLn",
            tc.formula,
            tc.nonsingular_count,
            KIND_PROVEN,
        )
    ]
    if include_route:
        route = cs.toeplitz_via_trinomial(q, n, ceiling=ceiling)
        if route.found:
            checks.extend(_route_checks(tag, tc.formula, route))
    return checks


def _route_checks(tag, formula, route):
    route_tag = f"{tag},f={route.poly_text}"
    return [
        make_check(
            f"toeplitz_route({route_tag})",
            "Prop. 7.1",
            formula,
            route.tgl_from_route,
            KIND_PROVEN,
            detail="basis count divided by q",
        ),
        make_check(
            f"toeplitz_route_bases({route_tag})",
            "Lemma 4.2",
            route.expected_basis_count,
            route.basis_count,
            KIND_PROVEN,
        ),
        make_check(
            f"toeplitz_route_structure({route_tag})",
            "Prop. 7.1",
            True,
            route.structure_holds,
            KIND_PROVEN,
            detail="coordinate block of beta shifts is the Toeplitz matrix",
        ),
        make_check(
            f"toeplitz_route_equivalence({route_tag})",
            "Prop. 7.1",
            True,
            route.equivalence_holds,
            KIND_PROVEN,
            detail="basis property iff Toeplitz block nonsingular, per beta",
        ),
    ]


def _trinomial_checks(q, n, *, ceiling):
    tag = f"q={q},n={n}"
    route = cs.toeplitz_via_trinomial(q, n, ceiling=ceiling)
    if not route.found:
        return [
            make_check(
                f"toeplitz_route({tag})",
                "Prop. 7.1",
                None,
                None,
                KIND_SAMPLED,
                detail=f"no irreducible X^{2*n} - aX - b over F_{q}; route not applicable",
            )
        ]
    formula = q ** (2 * n - 1) - q ** (2 * n - 2)
    return _route_checks(tag, formula, route)


def _splitting_checks(q, m, n, *, ceiling, workers):
    tag = f"q={q},m={m},n={n}"
    tower = _tower(q, m, n, ceiling)
    sc = cs.split_census(tower, ceiling=ceiling, workers=workers)
    kind = _fiber_kind(m, n)
    checks = [
        make_check(
            f"bases_mod_unit_group({tag})",
            "Lemma 5.2",
            0,
            sc.n_enumerated % (q ** (m * n) - 1),
            KIND_PROVEN,
            detail=f"N = {sc.n_enumerated}",
        ),
        make_check(
            f"bases_mod_gl({tag})",
            "Cor. 5.5",
            0,
            sc.n_enumerated % sc.gl_order,
            KIND_PROVEN,
        ),
        make_check(
            f"splitting_count_via_bases({tag})",
            "Cor. 5.5",
            sc.s_via_n,
            sc.s_enumerated,
            KIND_PROVEN,
            detail="direct subspace enumeration vs N / |GL_m|",
        ),
        make_check(
            f"splitting_count({tag})",
            "Conjecture 5.5",
            sc.conjectured_s,
            sc.s_enumerated,
            kind,
        ),
        make_check(
            f"fiber_via_bases({tag})",
            _fiber_anchor(m),
            sc.conjectured_fiber,
            sc.fiber_via_n,
            kind,
        ),
    ]
    if m == 2:
        closed = q ** (2 * n - 1) * (q - 1) * (q ** (2 * n) - 1)
        checks.append(
            make_check(
                f"bases_closed_form({tag})",
                "Lemma 4.2",
                closed,
                sc.n_enumerated,
                KIND_PROVEN,
            )
        )
    return checks, sc


def _pointed_checks(q, m, n, *, ceiling, seed):
    tag = f"q={q},m={m},n={n}"
    tower = _tower(q, m, n, ceiling)
    alpha = cs.find_generator(tower)
    rep = cs.verify_elemsplit(tower, alpha, ceiling=ceiling, seed=seed)
    kind = _fiber_kind(m, n)
    closure_kind = KIND_PROVEN if rep.closure_exhaustive else KIND_SAMPLED
    checks = [
        make_check(
            f"elemsplit_u({tag})",
            "Prop. 5.6",
            True,
            rep.u_is_splitting,
            KIND_PROVEN,
            detail="span of the alpha^(in) powers is splitting (part i)",
        ),
        make_check(
            f"elemsplit_closure({tag})",
            "Prop. 5.6",
            True,
            rep.closure_ok,
            closure_kind,
            detail=(
                f"beta*W splitting over {rep.closure_pairs} pairs"
                + ("" if rep.closure_exhaustive else " (sampled, not exact)")
            ),
        ),
        make_check(
            f"elemsplit_xu({tag})",
            "Prop. 5.6",
            True,
            rep.xu_ok,
            KIND_PROVEN,
            detail="x*U is a splitting subspace through x (part ii)",
        ),
        make_check(
            f"pointed_counts_equal({tag})",
            "Prop. 5.6",
            True,
            rep.pointed_all_equal,
            KIND_PROVEN,
            detail="part iii",
        ),
        make_check(
            f"pointed_identity({tag})",
            "Prop. 5.6",
            True,
            rep.identity_ok,
            KIND_PROVEN,
            detail="|S|(q^m - 1) = |S^x|(q^mn - 1) (part iv)",
        ),
        make_check(
            f"pointed_count({tag})",
            "Conjecture 5.8",
            cs.conjectured_pointed_count(q, m, n),
            rep.pointed_common,
            kind,
        ),
    ]
    return checks, rep


def _bounds_checks(q, m, n, *, ceiling, workers, fiber_report=None):
    tag = f"q={q},m={m},n={n}"
    if fiber_report is None:
        fiber_report = cs.enumerate_fibers(q, m, n, ceiling=ceiling, workers=workers)
    fibers = [e.fiber_size for e in fiber_report.per_poly.values()]
    bt = cs.bounds_check(q, m, n, fibers)
    checks = [
        make_check(
            f"fiber_lower_bound({tag})",
            "Lemma 6.1",
            True,
            bt.lower_ok,
            KIND_PROVEN,
            detail=f"L = {bt.lower} <= min fiber {bt.observed_min_fiber}",
        ),
        make_check(
            f"fiber_upper_bound({tag})",
            "Lemma 6.1",
            True,
            bt.upper_ok,
            KIND_PROVEN,
            detail=f"max fiber {bt.observed_max_fiber} <= U = {bt.upper}",
        ),
    ]
    if bt.star_le_lower is not None:
        checks.append(
            make_check(
                f"lower_star_le_lower({tag})",
                "Theorem 6.2",
                True,
                bt.star_le_lower,
                KIND_PROVEN,
                detail=f"L* = {bt.lower_star} <= L = {bt.lower}",
            )
        )
    return checks


def _binomial_checks(q, d, b=None):
    values = [b] if b is not None else list(range(1, q))
    checks = []
    for bv in values:
        chk = cs.binomial_irreducibility(q, d, bv)
        checks.append(
            make_check(
                f"binomial(q={q},d={d},b={bv})",
                "Prop. 7.2",
                chk.criterion,
                chk.direct,
                KIND_PROVEN,
                detail="order criterion vs direct irreducibility test",
            )
        )
    return checks


def _nilpotent_checks(q, m, *, ceiling):
    tag = f"q={q},m={m}"
    nc = nilpotent_count(q, m, ceiling=ceiling)
    if not nc.verified:
        return [
            make_check(
                f"nilpotent_count({tag})",
                "Fine-Herstein",
                nc.formula,
                None,
                KIND_SAMPLED,
                detail="exhaustive scan skipped: ceiling exceeded (unverified)",
            )
        ]
    return [
        make_check(
            f"nilpotent_count({tag})",
            "Fine-Herstein",
            nc.formula,
            nc.brute_force,
            KIND_PROVEN,
        )
    ]


def _eq2_checks(q, d, *, ceiling):
    tag = f"q={q},d={d}"
    irr, prim = cs.count_polys_by_scan(q, d, ceiling=ceiling)
    return [
        make_check(
            f"irreducible_count({tag})",
            "Eq. (2)",
            count_irreducible_polys(q, d),
            irr,
            KIND_PROVEN,
        ),
        make_check(
            f"primitive_count({tag})",
            "Eq. (2)",
            count_primitive_polys(q, d),
            prim,
            KIND_PROVEN,
        ),
    ]


def _tower(q, m, n, ceiling):
    p, e = field_for_order(q).p, field_for_order(q).degree
    return build_field_tower(p, e, m, n, ceiling=max(ceiling, q ** (m * n)))


def _all_checks(*, ceiling, workers, seed):
    checks = []
    for q, m, n in FIBER_CONFIGS:
        fiber_checks, fiber_rep = _fibers_checks(q, m, n, ceiling=ceiling, workers=workers)
        checks.extend(fiber_checks)
        split_checks, _ = _splitting_checks(q, m, n, ceiling=ceiling, workers=workers)
        checks.extend(split_checks)
        pointed_checks, _ = _pointed_checks(q, m, n, ceiling=ceiling, seed=seed)
        checks.extend(pointed_checks)
        checks.extend(
            _bounds_checks(
                q, m, n, ceiling=ceiling, workers=workers, fiber_report=fiber_rep
            )
        )
        # cross-area bridge: the first irreducible fiber recomputed through
        # the ordered-basis count at a root of that very polynomial
        first_poly = next(iter(fiber_rep.per_poly))
        tower = _tower(q, m, n, ceiling)
        f = poly_from_text(first_poly, tower.base)
        via_n = cs.fiber_via_N(tower, f, ceiling=ceiling, workers=workers)
        checks.append(
            make_check(
                f"bridge_fiber(q={q},m={m},n={n})[{first_poly}]",
                "Lemma 5.2",
                via_n,
                fiber_rep.per_poly[first_poly].fiber_size,
                KIND_PROVEN,
                detail="N/(q^mn - 1) vs direct enumeration of the fiber",
            )
        )
    for q, r, n in COPRIME_GRID:
        checks.extend(_coprime_checks(q, r, n, ceiling=ceiling))
    for q, n in SIGMA_GRID:
        checks.extend(_sigma_checks(q, n, ceiling=ceiling))
    for q, n in TOEPLITZ_GRID:
        checks.extend(_toeplitz_checks(q, n, ceiling=ceiling))
    for q, d in BINOMIAL_GRID:
        checks.extend(_binomial_checks(q, d))
    for q, d in EQ2_GRID:
        checks.extend(_eq2_checks(q, d, ceiling=ceiling))
    for q, m in NILPOTENT_CONFIGS:
        checks.extend(_nilpotent_checks(q, m, ceiling=ceiling))
        checks.append(
            make_check(
                f"nilpotent_bridge(q={q},m={m})",
                "Fine-Herstein",
                cs.conjectured_pointed_count(q, m, 2),
                q ** (m * (m - 1)),
                KIND_PROVEN,
                detail="nilpotent closed form vs pointed count conjectured at n=2",
            )
        )
    return checks


def run(config: RunConfig, formula_overrides: dict | None = None):
    """Execute one command; returns (report, exit_code)."""
    config.validate()
    ceiling = config.resolved_ceiling()
    start = time.perf_counter()
    checks = []
    try:
        cmd = config.command
        if cmd == "fibers":
            if config.mode == "sample":
                checks = _fibers_sampled_checks(
                    config.q,
                    config.m,
                    config.n,
                    sample_size=config.sample_size,
                    seed=config.seed,
                )
            else:
                checks, _ = _fibers_checks(
                    config.q, config.m, config.n, ceiling=ceiling, workers=config.workers
                )
        elif cmd == "coprime":
            checks = _coprime_checks(config.q, config.r, config.n, ceiling=ceiling)
        elif cmd == "sigma":
            checks = _sigma_checks(config.q, config.n, ceiling=ceiling)
        elif cmd == "toeplitz":
            checks = _toeplitz_checks(config.q, config.n, ceiling=ceiling)
        elif cmd == "splitting":
            checks, _ = _splitting_checks(
                config.q, config.m, config.n, ceiling=ceiling, workers=config.workers
            )
        elif cmd == "pointed":
            checks, _ = _pointed_checks(
                config.q, config.m, config.n, ceiling=ceiling, seed=config.seed
            )
        elif cmd == "bounds":
            checks = _bounds_checks(
                config.q, config.m, config.n, ceiling=ceiling, workers=config.workers
            )
        elif cmd == "binomial":
            checks = _binomial_checks(config.q, config.d, config.b)
        elif cmd == "trinomial":
            checks = _trinomial_checks(config.q, config.n, ceiling=ceiling)
        elif cmd == "nilpotent":
            checks = _nilpotent_checks(config.q, config.m, ceiling=ceiling)
        elif cmd == "all":
            checks = _all_checks(ceiling=ceiling, workers=config.workers, seed=config.seed)
    except CeilingExceeded as exc:
        checks = [
            make_check(
                f"{config.command}_census",
                "Eq. (2)",
                None,
                None,
                KIND_SAMPLED,
                detail=f"{exc}; rerun with --mode sample",
            )
        ]
    if formula_overrides:
        checks = [
            override_formula(rec, formula_overrides[rec.name])
            if rec.name in formula_overrides
            else rec
            for rec in checks
        ]
    report = VerificationReport(
        config=config.echo(),
        checks=checks,
        runtime_ms=int((time.perf_counter() - start) * 1000),
        tool_version=TOOL_VERSION,
    )
    return report, report.exit_code()


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="singercensus", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for cmd in COMMANDS:
        p = sub.add_parser(cmd)
        for name in ("q", "m", "n", "r", "d", "b"):
            if name in _REQUIRED[cmd] or (cmd == "binomial" and name == "b"):
                p.add_argument(f"--{name}", type=int, required=name in _REQUIRED[cmd])
        p.add_argument("--mode", choices=("exhaustive", "sample"), default="exhaustive")
        p.add_argument("--sample-size", type=int, default=100_000)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--format", choices=("json", "csv", "md"), default="json")
        p.add_argument("--ceiling", type=int, default=None)
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--out", default=None)
        p.add_argument("--timings", action="store_true")
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    known = {f.name for f in dc_fields(RunConfig)}
    values = {k: v for k, v in vars(ns).items() if k in known}
    return RunConfig(**values)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        config = config_from_args(ns)
        report, code = run(config)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    text = serialize(report, config.format, include_runtime=config.timings)
    if config.out:
        with open(config.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    print(f"{len(report.checks)} checks in {report.runtime_ms} ms", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
