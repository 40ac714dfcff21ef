"""Exact text format for objects, maps, sequences and result bundles.

A document is the header line ``nangle 1`` followed by one value.  Blank
lines and lines starting with ``#`` are ignored; tokens are separated by
single spaces and all numbers are base-10 integers.

    document  := "nangle 1" NL value
    value     := object | map | nseq | morphism | splice | bundle | list | int | str
    object    := "object" (DEG ":" DIM)* NL              degrees ascending, DIM > 0
    map       := "map p=" P NL object object block* "end" NL
    block     := "block" DEG ROWS "x" COLS NL (INT{COLS} NL){ROWS}
    nseq      := "nseq n=" N " p=" P " shift=" S NL map{N} "end" NL
    morphism  := "morphism" NL nseq nseq map{N} "end" NL
    splice    := "splice" NL nseq nseq "end" NL           Δ2 then Δ1
    bundle    := "bundle" NL ("entry" NAME NL value)* "end" NL
    list      := "list" COUNT NL value{COUNT}
    int       := "int" INT NL
    str       := "str" JSON-STRING NL

A map lists one block for every degree where both source and target are
nonzero, so printing is canonical and ``parse(dumps(x)) == x``.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .cluster import Splice4
from .graded import GradedMap, GradedObject
from .sequences import NSeq, SeqMorphism

HEADER = "nangle 1"


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


# -- printing ------------------------------------------------------------


def _object_line(x: GradedObject) -> str:
    return " ".join(["object"] + [f"{d}:{k}" for d, k in x.dims.items()])


def _emit(v: Any, out: list[str]) -> None:
    if isinstance(v, GradedObject):
        out.append(_object_line(v))
    elif isinstance(v, GradedMap):
        out.append(f"map p={v.p}")
        out.append(_object_line(v.source))
        out.append(_object_line(v.target))
        for d, m in v.blocks.items():
            out.append(f"block {d} {m.shape[0]}x{m.shape[1]}")
            out.extend(" ".join(str(int(e)) for e in row) for row in m)
        out.append("end")
    elif isinstance(v, NSeq):
        out.append(f"nseq n={v.n} p={v.p} shift={v.shift}")
        for f in v.maps:
            _emit(f, out)
        out.append("end")
    elif isinstance(v, SeqMorphism):
        out.append("morphism")
        _emit(v.source, out)
        _emit(v.target, out)
        for f in v.components:
            _emit(f, out)
        out.append("end")
    elif isinstance(v, Splice4):
        out.append("splice")
        _emit(v.d2, out)
        _emit(v.d1, out)
        out.append("end")
    elif isinstance(v, dict):
        out.append("bundle")
        for k, item in v.items():
            name = str(k)
            if not name or any(ch.isspace() for ch in name):
                raise ValueError(f"bundle key {name!r} must be a nonempty token")
            out.append(f"entry {name}")
            _emit(item, out)
        out.append("end")
    elif isinstance(v, (list, tuple)):
        out.append(f"list {len(v)}")
        for item in v:
            _emit(item, out)
    elif isinstance(v, (bool, np.bool_)):
        out.append(f"int {int(v)}")
    elif isinstance(v, (int, np.integer)):
        out.append(f"int {int(v)}")
    elif isinstance(v, str):
        out.append("str " + json.dumps(v))
    else:
        raise TypeError(f"cannot serialize {type(v).__name__}")


def dumps(value: Any) -> str:
    out = [HEADER]
    _emit(value, out)
    return "\n".join(out) + "\n"


# -- parsing -------------------------------------------------------------


class _Reader:
    def __init__(self, text: str):
        self.lines = [(i + 1, ln.strip()) for i, ln in enumerate(text.splitlines())
                      if ln.strip() and not ln.strip().startswith("#")]
        self.pos = 0

    def peek(self) -> tuple[int, str]:
        if self.pos >= len(self.lines):
            raise ParseError("unexpected end of input")
        return self.lines[self.pos]

    def next(self) -> tuple[int, str]:
        item = self.peek()
        self.pos += 1
        return item

    def expect(self, word: str) -> int:
        no, line = self.next()
        if line != word:
            raise ParseError(f"expected {word!r}, found {line!r}", no)
        return no


def _int(tok: str, no: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"not an integer: {tok!r}", no) from None


def _fields(tokens: list[str], names: list[str], no: int) -> list[int]:
    if len(tokens) != len(names):
        raise ParseError(f"expected fields {names}", no)
    vals = []
    for tok, name in zip(tokens, names):
        key, _, val = tok.partition("=")
        if key != name or not val:
            raise ParseError(f"expected {name}=<int>, found {tok!r}", no)
        vals.append(_int(val, no))
    return vals


def _object(r: _Reader) -> GradedObject:
    no, line = r.next()
    toks = line.split(" ")
    if toks[0] != "object":
        raise ParseError(f"expected an object, found {line!r}", no)
    dims, last = {}, None
    for tok in toks[1:]:
        d, sep, k = tok.partition(":")
        if not sep:
            raise ParseError(f"expected degree:dimension, found {tok!r}", no)
        d, k = _int(d, no), _int(k, no)
        if k <= 0 or (last is not None and d <= last):
            raise ParseError("dimensions must be positive with ascending degrees", no)
        dims[d], last = k, d
    return GradedObject(dims)


def _map(r: _Reader) -> GradedMap:
    no, line = r.next()
    toks = line.split(" ")
    if toks[0] != "map":
        raise ParseError(f"expected a map, found {line!r}", no)
    (p,) = _fields(toks[1:], ["p"], no)
    src, tgt = _object(r), _object(r)
    blocks = {}
    while True:
        no, line = r.next()
        if line == "end":
            break
        toks = line.split(" ")
        if toks[0] != "block" or len(toks) != 3:
            raise ParseError(f"expected a block or 'end', found {line!r}", no)
        d = _int(toks[1], no)
        rows, x, cols = toks[2].partition("x")
        rows, cols = _int(rows, no), _int(cols, no)
        if not x or (rows, cols) != (tgt.dim(d), src.dim(d)) or d in blocks:
            raise ParseError(f"block {d} has the wrong shape or repeats", no)
        m = []
        for _ in range(rows):
            rno, row = r.next()
            ents = [_int(e, rno) for e in row.split(" ")]
            if len(ents) != cols or any(not 0 <= e < p for e in ents):
                raise ParseError(f"row needs {cols} entries in 0..{p - 1}", rno)
            m.append(ents)
        blocks[d] = np.array(m, dtype=np.int64)
    expected = {d for d in src.support if tgt.dim(d)}
    if set(blocks) != expected:
        raise ParseError(f"map blocks must cover degrees {sorted(expected)}", no)
    try:
        return GradedMap(src, tgt, blocks, p)
    except ValueError as exc:
        raise ParseError(str(exc), no) from None


def _nseq(r: _Reader) -> NSeq:
    no, line = r.next()
    toks = line.split(" ")
    if toks[0] != "nseq":
        raise ParseError(f"expected an nseq, found {line!r}", no)
    n, p, shift = _fields(toks[1:], ["n", "p", "shift"], no)
    maps = [_map(r) for _ in range(n)]
    r.expect("end")
    try:
        return NSeq([f.source for f in maps], maps, p, shift)
    except ValueError as exc:
        raise ParseError(str(exc), no) from None


def _value(r: _Reader) -> Any:
    no, line = r.peek()
    head, _, rest = line.partition(" ")
    if head == "object":
        return _object(r)
    if head == "map":
        return _map(r)
    if head == "nseq":
        return _nseq(r)
    if head == "morphism":
        r.next()
        s, t = _nseq(r), _nseq(r)
        comps = tuple(_map(r) for _ in range(s.n))
        r.expect("end")
        try:
            return SeqMorphism(s, t, comps)
        except ValueError as exc:
            raise ParseError(str(exc), no) from None
    if head == "splice":
        r.next()
        d2, d1 = _nseq(r), _nseq(r)
        r.expect("end")
        return Splice4(d2, d1)
    if head == "bundle":
        r.next()
        out = {}
        while True:
            eno, entry = r.next()
            if entry == "end":
                return out
            key, _, name = entry.partition(" ")
            if key != "entry" or not name or " " in name or name in out:
                raise ParseError(f"expected 'entry NAME' or 'end', found {entry!r}", eno)
            out[name] = _value(r)
    if head == "list":
        r.next()
        count = _int(rest, no)
        if count < 0:
            raise ParseError("negative list length", no)
        return [_value(r) for _ in range(count)]
    if head == "int":
        r.next()
        return _int(rest, no)
    if head == "str":
        r.next()
        try:
            val = json.loads(rest)
        except json.JSONDecodeError:
            val = None
        if not isinstance(val, str):
            raise ParseError("expected a JSON string", no)
        return val
    raise ParseError(f"unknown record {head!r}", no)


def loads(text: str) -> Any:
    r = _Reader(text)
    r.expect(HEADER)
    value = _value(r)
    if r.pos != len(r.lines):
        raise ParseError("trailing content", r.lines[r.pos][0])
    return value


def dump(value: Any, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(value))


def load(path: str) -> Any:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())
