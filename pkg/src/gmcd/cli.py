"""Command-line entry point: ``gmcd {milnor,verify-appendix,vf,period}``."""
from __future__ import annotations

import argparse
import hashlib
import os
import random
import re
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

from gmpy2 import mpq

from .algebra import ParseError, VarTable, parse_poly
from .tame import (
    CD_POLY,
    ELLIPTIC_POLY,
    TamePolynomial,
    clingher_doran,
    clingher_doran_ring,
    data_dir,
    discriminant_probabilistic,
    elliptic,
    load_d_table,
    load_locus,
    locus_load_and_check,
)

FAMILIES = ("clingher-doran", "elliptic", "custom")


class ManifestError(ValueError):
    pass


@dataclass
class Manifest:
    family: str
    polynomial: str
    variables: Dict[str, int]
    parameters: List[str]
    seed: int = 0
    g: Optional[str] = None
    points: str = "auto(0,10)"
    samples: int = 25
    term_budget: int = 200000
    text: str = ""

    def digest(self) -> str:
        return hashlib.sha256(self.text.encode()).hexdigest()[:16]

    def tame(self) -> TamePolynomial:
        if self.family == "clingher-doran":
            return clingher_doran()
        if self.family == "elliptic":
            return elliptic()
        ring = VarTable(list(self.variables) + self.parameters,
                        list(self.variables.values()) + [0] * len(self.parameters),
                        ["fiber"] * len(self.variables) + ["parameter"] * len(self.parameters))
        return TamePolynomial(parse_poly(self.polynomial, ring))


DEFAULTS = {
    "clingher-doran": (CD_POLY, {"x": 8, "y": 9, "w": 6}, ["a", "b", "c", "d", "s"]),
    "elliptic": (ELLIPTIC_POLY, {"x": 2, "y": 3}, ["a", "b"]),
}


def parse_manifest(text: str) -> Manifest:
    kv = {}
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ManifestError(f"line {n}: expected key = value")
        k, v = line.split("=", 1)
        kv[k.strip()] = v.strip()
    family = kv.get("family")
    if family not in FAMILIES:
        raise ManifestError(f"family must be one of {FAMILIES}, got {family!r}")
    if family == "custom":
        if "polynomial" not in kv or "variables" not in kv:
            raise ManifestError("custom family needs polynomial and variables")
        poly = kv["polynomial"]
        variables = {}
        for item in kv["variables"].split(","):
            name, _, w = item.strip().partition(":")
            variables[name.strip()] = int(w) if w else 1
        params = [p.strip() for p in kv.get("parameters", "").split(",") if p.strip()]
    else:
        poly, variables, params = DEFAULTS[family]
    m = Manifest(family, poly, dict(variables), list(params), text=text)
    if "seed" in kv:
        m.seed = int(kv["seed"])
    for key in ("g", "points"):
        if key in kv:
            setattr(m, key, kv[key])
    for key in ("samples", "term_budget"):
        if key in kv:
            setattr(m, key, int(kv[key]))
    return m


def parse_matrix_literal(text: str):
    """'[[0,0],[1,0]]' or rows separated by ';' -> rational matrix."""
    t = text.strip()
    if t.startswith("["):
        rows = re.findall(r"\[([^\[\]]*)\]", t)
        M = [[mpq(x.strip()) for x in r.split(",") if x.strip()] for r in rows]
    else:
        M = [[mpq(x) for x in r.split()] for r in t.split(";") if r.strip()]
    if not M or any(len(r) != len(M) for r in M):
        raise ManifestError(f"matrix literal is not square: {text!r}")
    return M


# ---------------------------------------------------------------- reports

@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""
    seconds: float = 0.0


@dataclass
class Report:
    command: str
    digest: str
    seed: int
    conventions_version: str
    checks: List[Check] = field(default_factory=list)
    lines: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def run(self, name: str, fn):
        t0 = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as exc:  # reported, never swallowed silently
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        self.checks.append(Check(name, bool(ok), str(detail), time.perf_counter() - t0))

    def render(self, mode: str = "text") -> str:
        if mode == "machine":
            out = [f"command = {self.command}", f"digest = {self.digest}", f"seed = {self.seed}",
                   f"conventions_version = {self.conventions_version}"]
            for line in self.lines:
                out.append(f"info = {line}")
            for i, c in enumerate(self.checks):
                out += [f"[check.{i}]", f"name = {c.name}", f"status = {'pass' if c.ok else 'fail'}",
                        f"seconds = {c.seconds:.3f}"]
                if c.detail:
                    out.append(f"detail = {c.detail}")
            out.append(f"result = {'pass' if self.ok else 'fail'}")
            return "\n".join(out)
        out = [f"{self.command}  (seed {self.seed}, manifest {self.digest}, "
               f"conventions v{self.conventions_version})"]
        out += ["  " + ln for ln in self.lines]
        for c in self.checks:
            tag = "PASS" if c.ok else "FAIL"
            out.append(f"  [{tag}] {c.name} ({c.seconds:.2f}s){': ' + c.detail if c.detail else ''}")
        out.append("OK" if self.ok else "FAILED")
        return "\n".join(out)


def _conventions_version(directory) -> str:
    from .period import read_conventions
    try:
        return read_conventions(directory).get("version", "?")
    except OSError:
        return "missing"


# ---------------------------------------------------------------- commands

def cmd_milnor(m: Manifest, args) -> Report:
    from .gauss_manin import a_beta
    rep = Report("milnor", m.digest(), m.seed, _conventions_version(args.data_dir))
    t = m.tame()
    rep.lines.append(f"mu = {t.mu}")
    rep.lines.append("basis = " + ", ".join(t.basis_labels()))
    for b, lab in zip(t.basis, t.basis_labels()):
        rep.lines.append(f"A[{lab}] = {a_beta(b, t.weights, t.d)}")
    if m.family == "clingher-doran":
        expected = {"1", "w", "y", "x", "w^2", "x*w", "x*y", "w^3", "x*w^2", "x*w^3"}
        rep.run("basis matches the appendix monomials",
                lambda: (t.mu == 10 and set(t.basis_labels()) == expected, ""))
    else:
        rep.run("Milnor basis computed", lambda: (t.mu > 0, f"mu = {t.mu}"))
    return rep


def cmd_verify_appendix(m: Manifest, args) -> Report:
    from .gauss_manin import cd_filtration_table
    from .lie import (bender_generators, fixes_invariant, k3_generators, load_bracket_table,
                      load_matrix, m_lattice, psi_matrix, verify_bracket_table)
    from .linalg import inverse, matmul
    d = args.data_dir
    rep = Report("verify-appendix", m.digest(), m.seed, _conventions_version(d))

    def loci():
        res = locus_load_and_check(d, strict=False)
        bad = [n for n, ok in res.checks if not ok]
        return not bad, "failed: " + ", ".join(bad) if bad else f"{len(res.checks)} relations"
    rep.run("appendix loci and relations", loci)

    def disc():
        t = clingher_doran()
        ring = clingher_doran_ring()
        delta = load_locus("Delta_f", ring, d)
        from .algebra import MultiPoly
        r = discriminant_probabilistic(t, delta, seed=m.seed, trials=20,
                                       avoid=[MultiPoly.var(ring, "s")])
        return r.consistent, f"ratio {r.ratio} over {len(r.points)} points"
    rep.run("discriminant proportionality", disc)

    def dtable():
        table = load_d_table(d)
        text = "\n".join(f"{i} {j} {k} {v}" for (i, j, k), v in table.items())
        again = {}
        for ln in text.splitlines():
            i, j, k, v = (int(x) for x in ln.split())
            again[(i, j, k)] = v
        t = clingher_doran()
        cd_filtration_table(t, d)
        return again == table, f"{len(table)} entries"
    rep.run("d-table round trip", dtable)

    def brackets():
        r = verify_bracket_table(k3_generators(d), load_bracket_table(d))
        return r.ok, (f"{len(r.mismatches)} mismatching entries, printed table fails Jacobi on "
                      f"{len(r.expected_jacobi_failures)} triples" if not r.ok else "49 entries")
    rep.run("bracket table", brackets)

    def matrices():
        m_lattice(d)
        phi, psi = load_matrix("phi", d), psi_matrix(d)
        xi_inv = inverse(load_matrix("xi", d))
        ok = matmul(matmul(xi_inv, phi), xi_inv) == psi
        ok = ok and all(fixes_invariant(B) for B in bender_generators(d))
        return ok, "Gram = phi, Xi^-1 Phi Xi^-1 = Psi, Bender generators fix e13+e24"
    rep.run("matrix golden data", matrices)
    return rep


def _resolve_g(m: Manifest, family: str, directory):
    from .lie import load_matrix
    from .moduli import ELLIPTIC_ELEMENTS
    if m.g is None:
        raise ManifestError("manifest has no g")
    if family == "elliptic" and m.g in ELLIPTIC_ELEMENTS:
        return ELLIPTIC_ELEMENTS[m.g]
    if re.fullmatch(r"g[0-6]", m.g):
        return load_matrix(m.g, directory)
    return parse_matrix_literal(m.g)


def _parse_points(spec: str, default_seed: int):
    mt = re.fullmatch(r"auto\((\d+)\s*,\s*(\d+)\)", spec.strip())
    if not mt:
        raise ManifestError(f"points must look like auto(seed,n), got {spec!r}")
    return int(mt.group(1)), int(mt.group(2))


def cmd_vf(m: Manifest, args) -> Report:
    from .moduli import (elliptic_chart, elliptic_components, elliptic_solve, k3_solve_points,
                         weighted_degree_rf, ELLIPTIC_WEIGHTS)
    rep = Report("vf", m.digest(), m.seed, _conventions_version(args.data_dir))
    g = _resolve_g(m, m.family, args.data_dir)
    if m.family == "elliptic":
        def solve():
            sol = elliptic_solve(g, elliptic_chart())
            comps = elliptic_components(sol)
            for k, v in comps.items():
                rep.lines.append(f"R({k}) = {v}")
            degs = {k: weighted_degree_rf(v, ELLIPTIC_WEIGHTS) for k, v in comps.items()
                    if not v.is_zero()}
            rep.lines.append("weighted degrees = " + ", ".join(f"{k}:{v}" for k, v in degs.items()))
            return sol.ok, "unique solution, certificate holds symbolically" if sol.ok else "failed"
        rep.run("elliptic symbolic solve", solve)
    elif m.family == "clingher-doran":
        if args.tier == "symbolic":
            rep.lines.append("symbolic K3 tier exceeds the term budget; using specialized points")
        seed, n = _parse_points(m.points, m.seed)
        results = []

        def solve():
            results.extend(k3_solve_points(g, n_points=n, seed=seed))
            return True, f"{n} points"
        rep.run("K3 point solve", solve)
        for i, r in enumerate(results):
            s = r.solution
            pt = ", ".join(f"{k}={v}" for k, v in r.point.items())
            rep.lines.append(f"point {i}: {pt}")
            rep.lines.append("  a_k = " + ", ".join(f"{k}:{v}" for k, v in s.base.items()))
            rep.run(f"point {i} certificate", lambda s=s: (s.ok, f"rank {s.first_row_rank}"))
    else:
        raise ManifestError("vf supports the elliptic and clingher-doran families")
    return rep


def cmd_period(m: Manifest, args) -> Report:
    from .lie import psi_matrix
    from .linalg import matmul
    from .moduli import amsy_basis
    from .period import (ToleranceProfile, compose_check, evaluate, pi_membership,
                         resolve_variant, sample_siegel, t_map, tangent_check, SiegelPoint)
    d = args.data_dir
    rep = Report("period", m.digest(), m.seed, _conventions_version(d))
    tol = ToleranceProfile(eps=args.tolerance)
    Psi = psi_matrix(d)

    def variant():
        r = resolve_variant(Psi)
        rep.lines.append("variant resolution: " + ", ".join(f"{k}={v}" for k, v in r.detail.items()))
        return len(r.passing) == 1, f"{r.passing} ({r.orientation})"
    rep.run("tau-map variant resolution", variant)
    P = t_map(directory=d)
    rng = random.Random(m.seed)
    taus = [SiegelPoint(1j, 0j, 1j)] + [sample_siegel(rng) for _ in range(m.samples)]

    def membership():
        worst = 0.0
        for tau in taus:
            r = pi_membership(P, Psi, tol, tau)
            worst = max(worst, r.orthogonality_residual)
            if not r.member:
                return False, f"tau = {tau}"
        return True, f"{len(taus)} points, worst residual {worst:.2e}"
    rep.run("period membership", membership)

    def tangency():
        basis = amsy_basis(Psi)
        for tau in taus[:5]:
            N = evaluate(P, tau)
            for g in basis:
                X = [[sum(N[i][k] * complex(float(g[k][j])) for k in range(5)) for j in range(5)]
                     for i in range(5)]
                if not tangent_check(N, X, tol=tol):
                    return False, f"tau = {tau}"
        return True, f"{len(basis)} elements x 5 points"
    rep.run("Lie vector fields are tangent", tangency)

    def compose():
        r = compose_check(d)
        return r.equal, r.detail + ("" if r.diagonal_only else "; normalization is a signed permutation")
    rep.run("F o T_AbS composition", compose)
    return rep


COMMANDS = {"milnor": cmd_milnor, "verify-appendix": cmd_verify_appendix, "vf": cmd_vf,
            "period": cmd_period}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gmcd", description=__doc__)
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--manifest", type=Path, help="family manifest (key = value lines)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--data-dir", default=None)
    p.add_argument("--tolerance", type=float, default=1e-9)
    p.add_argument("--tier", choices=("symbolic", "points"), default="points")
    p.add_argument("--report", choices=("text", "machine"), default="text")
    p.add_argument("--g", default=None, help="override the manifest's g")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    args.data_dir = args.data_dir or os.environ.get("GMCD_DATA_DIR") or None
    try:
        text = args.manifest.read_text() if args.manifest else "family = clingher-doran\n"
        m = parse_manifest(text)
        if args.seed is not None:
            m.seed = args.seed
        if args.g is not None:
            m.g = args.g
        rep = COMMANDS[args.command](m, args)
    except (ManifestError, ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(rep.render(args.report))
    return 0 if rep.ok else 1


if __name__ == "__main__":
    sys.exit(main())
