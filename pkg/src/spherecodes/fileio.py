"""Text file formats: point sets, parameter vectors, generator specs,
integer polynomials, and run manifests.

All formats are line oriented text and round-trip losslessly at their
declared digit counts.  Point and parameter values are written with
two guard digits beyond the declared precision, which makes re-reading
restore the exact stored value.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path

from .errors import DomainError, ParseError, SizeMismatch
from .numerics import MIN_DIGITS, BigReal
from .geometry import Point3, PointSet, normalize
from .potentials import Potential
from .paramconfig import (
    Const,
    ConfigSpec,
    FreePoint,
    OffsetRing,
    ParamVector,
    Pole,
    Ring,
    Var,
)
from .algebra import IntPolynomial

_HEADER_KEYS = {"n", "precision", "potential"}


def _read_lines(path) -> list:
    """Nonblank lines of a text file as (line number, text) pairs,
    comments included."""
    text = Path(path).read_text(encoding="utf-8")
    out = []
    for no, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if stripped:
            out.append((no, stripped))
    return out


def _significant_digits(token: str) -> int:
    body = token.lower().split("e")[0].lstrip("+-").replace(".", "").lstrip("0")
    return len(body)


def _parse_real(token: str, digits: int, no: int) -> BigReal:
    try:
        return BigReal(token, digits)
    except DomainError:
        raise ParseError(f"bad decimal value {token!r}", line=no) from None


def _parse_int(token: str, what: str, no: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"bad {what} {token!r}", line=no) from None


# -- point sets ----------------------------------------------------------------


def _parse_points_header(text: str, no: int):
    """Parse a comment as a key=value header; None when it is an
    ordinary comment."""
    tokens = text.lstrip("#").split()
    if not tokens or not all("=" in tok for tok in tokens):
        return None
    header = {}
    for tok in tokens:
        key, _, value = tok.partition("=")
        if key not in _HEADER_KEYS:
            return None
        if key in header:
            raise ParseError(f"repeated header field {key!r}", line=no)
        header[key] = value
    if "n" in header:
        header["n"] = _parse_int(header["n"], "point count", no)
    if "precision" in header:
        header["precision"] = _parse_int(header["precision"], "precision", no)
    if "potential" in header:
        try:
            Potential.from_token(header["potential"])
        except ValueError:
            raise ParseError(f"bad potential token {header['potential']!r}",
                             line=no) from None
    return header


def read_points(path, renormalize: bool = False) -> PointSet:
    """Read a point set, taking the working precision from the header
    or, for headerless files, from the shortest nonzero coordinate
    token (two guard digits removed, floored at the library minimum).

    Points further off the sphere than the precision allows raise
    OffSphere unless renormalize pushes them back.
    """
    header = {}
    rows = []
    for no, text in _read_lines(path):
        if text.startswith("#"):
            if not rows and not header:
                header = _parse_points_header(text, no) or {}
            continue
        tokens = text.split()
        if len(tokens) != 3:
            raise ParseError(f"expected three coordinates, got {len(tokens)}",
                             line=no)
        rows.append((no, tokens))
    if not rows:
        raise ParseError(f"no points in {path}")
    if "precision" in header:
        digits = header["precision"]
    else:
        sigs = [_significant_digits(t) for _, tokens in rows for t in tokens]
        sigs = [s for s in sigs if s > 0]
        digits = max(MIN_DIGITS, (min(sigs) if sigs else MIN_DIGITS) - 2)
    points = []
    for no, tokens in rows:
        pt = Point3(*(_parse_real(t, digits, no) for t in tokens))
        points.append(normalize(pt) if renormalize else pt)
    if "n" in header and header["n"] != len(points):
        raise ParseError(f"header says n={header['n']} "
                         f"but the file holds {len(points)} points")
    return PointSet(points)


def points_text(P: PointSet, digits: int | None = None,
                potential=None) -> str:
    """The point set file format as a string: a header line plus one
    point per line at the given precision (default: the set's own)
    with two guard digits per coordinate."""
    if digits is None:
        digits = P.precision
    digits = int(digits)
    if digits > P.precision:
        raise DomainError(f"cannot write {P.precision}-digit points "
                          f"at {digits} digits")
    Q = P.with_precision(digits) if digits != P.precision else P
    head = f"# n={Q.n} precision={Q.precision}"
    if potential is not None:
        token = potential.token if isinstance(potential, Potential) \
            else Potential.from_token(str(potential)).token
        head += f" potential={token}"
    lines = [head]
    for pt in Q.points:
        lines.append(" ".join(c.to_decimal(Q.precision + 2)
                              for c in (pt.x, pt.y, pt.z)))
    return "\n".join(lines) + "\n"


def write_points(path, P: PointSet, digits: int | None = None,
                 potential=None) -> None:
    """Write a point set at the given precision (default: its own),
    with a header line and two guard digits per coordinate."""
    Path(path).write_text(points_text(P, digits, potential), encoding="utf-8")


# -- parameter vectors -----------------------------------------------------------


def read_params(path) -> ParamVector:
    """Read `name value` lines; each value's precision is its token's
    significant digits minus the two guards, floored at the library
    minimum."""
    names = []
    values = []
    for no, text in _read_lines(path):
        if text.startswith("#"):
            continue
        tokens = text.split()
        if len(tokens) != 2:
            raise ParseError("expected 'name value'", line=no)
        name, literal = tokens
        if not name.isidentifier():
            raise ParseError(f"bad parameter name {name!r}", line=no)
        if name in names:
            raise ParseError(f"repeated parameter {name!r}", line=no)
        digits = max(MIN_DIGITS, _significant_digits(literal) - 2)
        names.append(name)
        values.append(_parse_real(literal, digits, no))
    return ParamVector(tuple(names), tuple(values))


def write_params(path, params: ParamVector) -> None:
    """Write `name value` lines with two guard digits per value."""
    lines = [f"{name} {value.to_decimal(value.precision + 2)}"
             for name, value in zip(params.names, params.values)]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""),
                          encoding="utf-8")


# -- generator specs -------------------------------------------------------------


def _format_sign(sign: int) -> str:
    return "+" if sign > 0 else "-"


def _parse_sign(token: str, what: str, no: int) -> int:
    if token == "+":
        return 1
    if token == "-":
        return -1
    raise ParseError(f"bad {what} {token!r}, expected + or -", line=no)


def _keyword_fields(tokens, allowed, required, no):
    seen = {}
    for tok in tokens:
        key, eq, value = tok.partition("=")
        if not eq or key not in allowed:
            raise ParseError(f"unexpected field {tok!r}", line=no)
        if key in seen:
            raise ParseError(f"repeated field {key!r}", line=no)
        if not value:
            raise ParseError(f"empty field {key!r}", line=no)
        seen[key] = value
    for key in required:
        if key not in seen:
            raise ParseError(f"missing field {key!r}", line=no)
    return seen


def read_spec(path):
    """Read a generator spec; returns (ConfigSpec, parameter names in
    first-appearance order)."""
    order = []

    def ref(token, no):
        name = None
        negate = False
        if token.startswith("-$"):
            name, negate = token[2:], True
        elif token.startswith("$"):
            name = token[1:]
        if name is None:
            _parse_real(token, MIN_DIGITS, no)
            return Const(token)
        if not name.isidentifier():
            raise ParseError(f"bad parameter name {name!r}", line=no)
        if name not in order:
            order.append(name)
        return Var(order.index(name), negate=negate)

    generators = []
    for no, text in _read_lines(path):
        if text.startswith("#"):
            continue
        tokens = text.split()
        kind = tokens[0]
        try:
            if kind == "pole":
                if len(tokens) != 2:
                    raise ParseError("pole takes a single sign", line=no)
                generators.append(Pole(_parse_sign(tokens[1], "pole sign", no)))
            elif kind == "ring":
                if len(tokens) < 3:
                    raise ParseError("ring needs a size and z=", line=no)
                k = _parse_int(tokens[1], "ring size", no)
                seen = _keyword_fields(tokens[2:], {"z", "phase"}, {"z"}, no)
                phase = ref(seen["phase"], no) if "phase" in seen else Const("0")
                generators.append(Ring(k, ref(seen["z"], no), phase))
            elif kind == "oring":
                if len(tokens) < 3:
                    raise ParseError("oring needs a size, z= and x=", line=no)
                k = _parse_int(tokens[1], "ring size", no)
                seen = _keyword_fields(tokens[2:], {"z", "x"}, {"z", "x"}, no)
                generators.append(OffsetRing(k, ref(seen["z"], no), ref(seen["x"], no)))
            elif kind == "free":
                seen = _keyword_fields(tokens[1:], {"z", "x", "y"}, {"z", "x", "y"}, no)
                generators.append(FreePoint(ref(seen["z"], no), ref(seen["x"], no),
                                            _parse_sign(seen["y"], "y sign", no)))
            else:
                raise ParseError(f"unknown generator {kind!r}", line=no)
        except ValueError as exc:
            raise ParseError(str(exc), line=no) from None
    if not generators:
        raise ParseError(f"no generators in {path}")
    return ConfigSpec(tuple(generators), len(order)), tuple(order)


def write_spec(path, spec: ConfigSpec, names) -> None:
    """Write one generator per line, referencing parameters as $name."""
    names = tuple(names)
    if len(names) < spec.arity:
        raise SizeMismatch(f"spec has arity {spec.arity} "
                           f"but only {len(names)} names were given")

    def fmt(ref):
        if isinstance(ref, Const):
            return ref.text
        return ("-$" if ref.negate else "$") + names[ref.index]

    lines = []
    for gen in spec.generators:
        if isinstance(gen, Pole):
            lines.append(f"pole {_format_sign(gen.z_sign)}")
        elif isinstance(gen, Ring):
            lines.append(f"ring {gen.k} z={fmt(gen.z)} phase={fmt(gen.phase)}")
        elif isinstance(gen, OffsetRing):
            lines.append(f"oring {gen.k} z={fmt(gen.z)} x={fmt(gen.x_offset)}")
        else:
            lines.append(f"free z={fmt(gen.z)} x={fmt(gen.x)} "
                         f"y={_format_sign(gen.y_sign)}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


# -- integer polynomials ----------------------------------------------------------


def read_poly(path) -> IntPolynomial:
    """Read one line of space-separated integer coefficients, ascending
    by degree."""
    rows = [(no, text) for no, text in _read_lines(path)
            if not text.startswith("#")]
    if not rows:
        raise ParseError(f"no coefficients in {path}")
    if len(rows) > 1:
        raise ParseError("expected a single coefficient line", line=rows[1][0])
    no, text = rows[0]
    coeffs = [_parse_int(tok, "coefficient", no) for tok in text.split()]
    try:
        return IntPolynomial.canonical(coeffs)
    except ValueError as exc:
        raise ParseError(str(exc), line=no) from None


def write_poly(path, poly: IntPolynomial) -> None:
    Path(path).write_text(" ".join(str(c) for c in poly.coeffs) + "\n",
                          encoding="utf-8")


# -- run manifests ----------------------------------------------------------------


@dataclass(frozen=True)
class RunManifest:
    """Everything needed to replay a command: inputs, knobs, and the
    headline result."""

    command: str
    potential: str | None = None
    n: int | None = None
    precision: int | None = None
    seed: int | None = None
    algorithm: str | None = None
    wall_seconds: float | None = None
    energy: str | None = None
    input_path: str | None = None
    output_path: str | None = None


_MANIFEST_INTS = {"n", "precision", "seed"}


def write_manifest(path, manifest: RunManifest) -> None:
    lines = []
    for field in fields(RunManifest):
        value = getattr(manifest, field.name)
        if value is None:
            continue
        if field.name == "wall_seconds":
            value = f"{value:.3f}"
        lines.append(f"{field.name} {value}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_manifest(path) -> RunManifest:
    known = {f.name for f in fields(RunManifest)}
    seen = {}
    for no, text in _read_lines(path):
        if text.startswith("#"):
            continue
        key, _, value = text.partition(" ")
        if key not in known:
            raise ParseError(f"unknown manifest field {key!r}", line=no)
        if key in seen:
            raise ParseError(f"repeated manifest field {key!r}", line=no)
        if not value.strip():
            raise ParseError(f"manifest field {key!r} has no value", line=no)
        if key in _MANIFEST_INTS:
            seen[key] = _parse_int(value.strip(), key, no)
        elif key == "wall_seconds":
            try:
                seen[key] = float(value)
            except ValueError:
                raise ParseError(f"bad wall_seconds {value!r}", line=no) from None
        else:
            seen[key] = value.strip()
    if "command" not in seen:
        raise ParseError(f"manifest {path} has no command field")
    return RunManifest(**seen)
