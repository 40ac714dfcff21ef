"""Command-line front end.

Exit codes: 0 success, 1 verification failure (the witness is written in
the text format), 2 usage or parse error.  The default prime comes from
``NANGLE_PRIME`` when set; ``--prime`` wins over it.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass

from . import cluster as C
from . import engine as E
from . import graded as G
from . import sequences as S
from . import serialize as Z
from . import suite as U
from .errors import BudgetExceeded, ConstructionError, NotExactError, NotMorphismError
from .rng import generator
from .sequences import NSeq, SeqMorphism

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
COMMANDS = ("gen", "rotate", "cone", "complete", "octa", "cluster4", "check")


class UsageError(Exception):
    pass


class VerificationFailure(Exception):
    def __init__(self, message: str, witness: dict):
        super().__init__(message)
        self.witness = witness


@dataclass
class RunConfig:
    command: str
    n: int = 4
    prime: int = 5
    seed: int = 0
    trials: int = 100
    max_dim: int = 3
    degree_lo: int = -2
    degree_hi: int = 2
    inputs: tuple[str, ...] = ()
    target: str | None = None
    out: str | None = None
    format: str = "text"
    pieces: int | None = None
    steps: int = 1

    def validate(self) -> "RunConfig":
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        try:
            U.SuiteParams(self.n, self.prime, self.trials, self.max_dim, self.degrees, self.seed)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if self.pieces is not None and self.pieces < 0:
            raise UsageError("--pieces must be >= 0")
        if self.format not in ("text", "lines"):
            raise UsageError("--format is 'text' or 'lines'")
        return self

    @property
    def degrees(self) -> tuple[int, int]:
        return (self.degree_lo, self.degree_hi)

    @property
    def params(self) -> U.SuiteParams:
        return U.SuiteParams(self.n, self.prime, self.trials, self.max_dim, self.degrees, self.seed)


def _default_prime() -> int:
    env = os.environ.get("NANGLE_PRIME")
    if env is None:
        return 5
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"NANGLE_PRIME={env!r} is not an integer") from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nangle", description="Exact n-angulated category constructions "
                                 "over graded F_p vector spaces.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--n", type=int, default=4, help="length of the sequences (default 4)")
    ap.add_argument("--prime", type=int, default=None, help="field size (default $NANGLE_PRIME or 5)")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--max-dim", type=int, default=3)
    ap.add_argument("--degree-lo", type=int, default=-2)
    ap.add_argument("--degree-hi", type=int, default=2)
    ap.add_argument("--in", dest="inputs", action="append", default=[], help="input file (repeatable)")
    ap.add_argument("--target", default=None, help="target sequence for 'complete'")
    ap.add_argument("--out", default=None, help="output file (default stdout)")
    ap.add_argument("--format", default="text", choices=("text", "lines"), help="report format for 'check'")
    ap.add_argument("--pieces", type=int, default=None, help="number of trivial pieces for 'gen'")
    ap.add_argument("--steps", type=int, default=1, help="rotation steps; negative rotates right")
    return ap


def config_from_args(argv: list[str] | None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    prime = ns.prime if ns.prime is not None else _default_prime()
    return RunConfig(ns.command, ns.n, prime, ns.seed, ns.trials, ns.max_dim, ns.degree_lo, ns.degree_hi,
                     tuple(ns.inputs), ns.target, ns.out, ns.format, ns.pieces, ns.steps).validate()


# -- helpers ---------------------------------------------------------------


def _load(path: str):
    try:
        return Z.load(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _single_input(cfg: RunConfig):
    if len(cfg.inputs) != 1:
        raise UsageError(f"'{cfg.command}' needs exactly one --in file")
    return _load(cfg.inputs[0])


def _expect(value, kind, what: str):
    if not isinstance(value, kind):
        raise UsageError(f"expected {what}, found {type(value).__name__}")
    return value


def _bundle(cfg: RunConfig, keys: tuple[str, ...]) -> dict | None:
    if not cfg.inputs:
        return None
    data = _expect(_single_input(cfg), dict, "a bundle")
    missing = [k for k in keys if k not in data]
    if missing:
        raise UsageError(f"bundle lacks entries {missing}")
    return data


def _write(cfg: RunConfig, text: str) -> None:
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _rng(cfg: RunConfig, label: str):
    return generator(cfg.seed, label)


# -- commands --------------------------------------------------------------


def cmd_gen(cfg: RunConfig) -> NSeq:
    kw = {"pieces": cfg.pieces} if cfg.pieces is not None else {}
    s = S.random_exact(cfg.n, cfg.max_dim, cfg.degrees, _rng(cfg, "gen"), cfg.prime, **kw)
    _write(cfg, Z.dumps(s))
    return s


def cmd_rotate(cfg: RunConfig) -> NSeq:
    s = _expect(_single_input(cfg), NSeq, "an nseq")
    r = S.rotate(s, cfg.steps)
    if S.is_exact(s) != S.is_exact(r):
        raise VerificationFailure("rotation changed exactness", {"input": s, "output": r})
    _write(cfg, Z.dumps(r))
    return r


def cmd_cone(cfg: RunConfig) -> NSeq:
    m = _expect(_single_input(cfg), SeqMorphism, "a morphism")
    sq = S.failing_square(m)
    if sq is not None:
        raise VerificationFailure(f"square {sq + 1} does not commute", {"morphism": m, "square": sq + 1})
    cone = S.mapping_cone(m)
    defect = S.exactness_defect(cone)
    if defect is not None:
        raise VerificationFailure("mapping cone is not exact",
                                  {"morphism": m, "cone": cone, "position": defect[0] + 1, "degree": defect[1]})
    _write(cfg, Z.dumps(cone))
    return cone


def cmd_complete(cfg: RunConfig) -> SeqMorphism:
    rng = _rng(cfg, "complete")
    if cfg.target is not None:
        s = _expect(_single_input(cfg), NSeq, "an nseq")
        t = _expect(_load(cfg.target), NSeq, "an nseq")
        phi1 = phi2 = None
    else:
        data = _bundle(cfg, ("s", "t"))
        if data is None:
            raise UsageError("'complete' needs --in with --target, or a bundle with s and t")
        s, t = _expect(data["s"], NSeq, "an nseq"), _expect(data["t"], NSeq, "an nseq")
        phi1, phi2 = data.get("phi1"), data.get("phi2")
    if s.n != t.n or s.p != t.p or s.shift != t.shift:
        raise UsageError("source and target differ in n, prime or shift")
    if phi1 is None or phi2 is None:
        phi1, phi2 = U.random_square(s, t, rng)
    m, _ = E.cone_completion(s, t, phi1, phi2, rng=rng)
    _write(cfg, Z.dumps(m))
    return m


def _octa_bundle(octa: E.OctaData, a, b, c, phi2) -> dict:
    return {"a": a, "b": b, "c": c, "phi2": phi2, "phis": list(octa.phis), "psis": list(octa.psis),
            "gamma": octa.gamma_seq}


def cmd_octa(cfg: RunConfig) -> dict:
    rng = _rng(cfg, "octa")
    data = _bundle(cfg, ("a", "b", "c", "phi2"))
    if data is None:
        a, b, c, phi2 = U.octa_input(cfg.n, cfg.prime, rng, min(cfg.max_dim, 2), cfg.degrees)
    else:
        a, b, c, phi2 = data["a"], data["b"], data["c"], data["phi2"]
        for x in (a, b, c):
            _expect(x, NSeq, "an nseq")
    octa = E.higher_octahedron(a, b, c, phi2, rng=rng)
    out = _octa_bundle(octa, a, b, c, phi2)
    _write(cfg, Z.dumps(out))
    return out


def cmd_cluster4(cfg: RunConfig) -> dict:
    rng = _rng(cfg, "cluster4")
    data = _bundle(cfg, ("a", "b", "c", "phi2"))
    if data is None:
        a, b, c, phi2 = C.random_splice_triple(rng, cfg.prime, min(cfg.max_dim, 2), cfg.degrees)
    else:
        a, b, c, phi2 = data["a"], data["b"], data["c"], data["phi2"]
        for x in (a, b, c):
            _expect(x, C.Splice4, "a splice")
    octa = C.n4star_steps(a, b, c, phi2, rng=rng)
    ref = E.higher_octahedron(a.angle, b.angle, c.angle, phi2, rng=rng)
    if not S.are_isomorphic(octa.gamma_seq, ref.gamma_seq):
        raise VerificationFailure("Γ differs from the general construction",
                                  {"gamma": octa.gamma_seq, "reference": ref.gamma_seq})
    out = _octa_bundle(octa, a, b, c, phi2)
    _write(cfg, Z.dumps(out))
    return out


def _fixture_sequences(value) -> list[tuple[str, NSeq]]:
    if isinstance(value, NSeq):
        return [("sequence", value)]
    if isinstance(value, C.Splice4):
        return [("d2", value.d2), ("d1", value.d1), ("angle", value.angle)]
    if isinstance(value, dict):
        return [(k, v) for k, v in value.items() if isinstance(v, NSeq)]
    if isinstance(value, list):
        return [(str(i), v) for i, v in enumerate(value) if isinstance(v, NSeq)]
    raise UsageError("fixture must hold sequences")


def check_fixture(value) -> None:
    """Every sequence in a fixture must be exact, with exact rotations and a faithful decomposition."""
    for name, s in _fixture_sequences(value):
        defect = S.exactness_defect(s)
        if defect is not None:
            raise VerificationFailure(f"{name} is not exact", {"name": name, "sequence": s,
                                                               "position": defect[0] + 1, "degree": defect[1]})
        for label, r in (("left", S.rotate_left(s)), ("right", S.rotate_right(s))):
            if not S.is_exact(r):
                raise VerificationFailure(f"{label} rotation of {name} is not exact",
                                          {"name": name, "sequence": s})
        if not S.is_isomorphism(S.decompose_exact(s).witness):
            raise VerificationFailure(f"decomposition of {name} failed", {"name": name, "sequence": s})


def cmd_check(cfg: RunConfig) -> U.Report | None:
    if cfg.inputs:
        for path in cfg.inputs:
            check_fixture(_load(path))
        _write(cfg, "fixture: all sequences exact\n")
        return None
    report = U.run_all(cfg.params)
    text = report.summary() + "\n" if cfg.format == "text" else "\n".join(report.records()) + "\n"
    _write(cfg, text)
    if not report.ok:
        witness = {}
        for name, res in report.checks.items():
            for f in res.failures:
                witness[f"{name}.{f.trial}"] = dict(f.witness, message=f.message)
        raise VerificationFailure("axiom suite found failures", witness)
    return report


HANDLERS = {"gen": cmd_gen, "rotate": cmd_rotate, "cone": cmd_cone, "complete": cmd_complete,
            "octa": cmd_octa, "cluster4": cmd_cluster4, "check": cmd_check}


def main(argv: list[str] | None = None) -> int:
    try:
        cfg = config_from_args(argv)
    except SystemExit as exc:  # argparse usage errors
        return EXIT_USAGE if exc.code else EXIT_OK
    except UsageError as exc:
        print(f"nangle: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        HANDLERS[cfg.command](cfg)
    except (UsageError, Z.ParseError) as exc:
        print(f"nangle: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except VerificationFailure as exc:
        print(f"nangle: verification failed: {exc}", file=sys.stderr)
        _emit_witness(cfg, exc.witness)
        return EXIT_FAIL
    except (ConstructionError, NotExactError, NotMorphismError, BudgetExceeded) as exc:
        print(f"nangle: verification failed: {exc}", file=sys.stderr)
        _emit_witness(cfg, dict(getattr(exc, "witness", {}) or {}, message=str(exc)))
        return EXIT_FAIL
    return EXIT_OK


def _emit_witness(cfg: RunConfig, witness: dict) -> None:
    try:
        text = Z.dumps(witness)
    except TypeError:
        text = Z.dumps({"message": "witness not serializable"})
    if cfg.out:
        with open(cfg.out + ".witness", "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


if __name__ == "__main__":
    sys.exit(main())
