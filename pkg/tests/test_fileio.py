"""Tests for the text file formats and their round trips."""

import pytest

from spherecodes import (
    BigReal,
    ConfigSpec,
    Const,
    DomainError,
    FreePoint,
    IntPolynomial,
    OffSphere,
    OffsetRing,
    ParamVector,
    ParseError,
    Pole,
    Point3,
    PointSet,
    Ring,
    RunManifest,
    SizeMismatch,
    Var,
    normalize,
    read_manifest,
    read_params,
    read_points,
    read_poly,
    read_spec,
    write_manifest,
    write_params,
    write_points,
    write_poly,
    write_spec,
)
from spherecodes.fileio import points_text

from conftest import big, octahedron


def coordinates(P):
    return [c.to_decimal(P.precision + 2)
            for pt in P.points for c in (pt.x, pt.y, pt.z)]


@pytest.fixture
def slanted():
    return PointSet([normalize(Point3(big("0.3"), big("-0.4"), big("0.87"))),
                     normalize(Point3(big("-0.5"), big("0.1"), big("0.6"))),
                     normalize(Point3(big("0.2"), big("0.9"), big("-0.1")))])


# ---------------------------------------------------------------- points


def test_points_round_trip_with_header(tmp_path, slanted):
    path = tmp_path / "oct.pts"
    write_points(path, octahedron(), potential="r1")
    assert path.read_text().splitlines()[0] == "# n=6 precision=40 potential=r1"
    back = read_points(path)
    assert back.precision == 40
    assert coordinates(back) == coordinates(octahedron())

    path2 = tmp_path / "slanted.pts"
    write_points(path2, slanted)
    assert coordinates(read_points(path2)) == coordinates(slanted)


def test_points_text_matches_file_output(tmp_path):
    path = tmp_path / "o.pts"
    write_points(path, octahedron(), potential="log")
    assert path.read_text() == points_text(octahedron(), potential="log")


def test_points_narrow_write_and_widening_rejection(tmp_path):
    path = tmp_path / "oct20.pts"
    write_points(path, octahedron(), digits=20)
    narrow = read_points(path)
    assert narrow.precision == 20
    with pytest.raises(DomainError, match="cannot write 20-digit points at 40"):
        write_points(tmp_path / "x.pts", narrow, digits=40)


def test_headerless_precision_inference(tmp_path, slanted):
    src = tmp_path / "with.pts"
    write_points(src, slanted)
    body = src.read_text().splitlines()[1:]
    bare = tmp_path / "bare.pts"
    bare.write_text("# ordinary comment\n" + "\n".join(body) + "\n")
    assert read_points(bare).precision == 40


def test_headerless_inference_skips_zero_tokens(tmp_path):
    src = tmp_path / "oct.pts"
    write_points(src, octahedron())
    body = src.read_text().splitlines()[1:]
    bare = tmp_path / "bare.pts"
    bare.write_text("\n".join(body) + "\n")
    back = read_points(bare)
    assert back.precision == 40 and back.n == 6


def test_points_parse_errors(tmp_path):
    cases = [
        ("two.pts", "# c\n1 0 0\n0 1\n", "line 3: expected three coordinates"),
        ("dec.pts", "1 0 abc\n", "line 1: bad decimal value 'abc'"),
        ("n.pts", "# n=5 precision=40\n1 0 0\n0 1 0\n", "header says n=5"),
        ("empty.pts", "# just comments\n", "no points"),
        ("int.pts", "# n=abc\n1 0 0\n", "bad point count"),
        ("pot.pts", "# potential=r9 n=1 precision=20\n1 0 0\n",
         "bad potential token"),
    ]
    for name, content, message in cases:
        path = tmp_path / name
        path.write_text(content)
        with pytest.raises(ParseError, match=message):
            read_points(path)


def test_points_off_sphere_and_renormalize(tmp_path):
    path = tmp_path / "off.pts"
    path.write_text("# n=1 precision=30\n1.01 0 0\n")
    with pytest.raises(OffSphere):
        read_points(path)
    fixed = read_points(path, renormalize=True)
    assert abs(float(fixed.points[0].norm2()) - 1.0) < 1e-25


def test_missing_points_file(tmp_path):
    with pytest.raises(OSError):
        read_points(tmp_path / "absent.pts")


# ---------------------------------------------------------------- params


def test_params_round_trip_preserves_per_value_precision(tmp_path):
    pv = ParamVector(("a", "b"), (BigReal("0.5563309621802899475", 17),
                                  BigReal("-0.25", 20)))
    path = tmp_path / "p.params"
    write_params(path, pv)
    back = read_params(path)
    assert back.names == ("a", "b")
    assert tuple(v.precision for v in back.values) == (17, 20)
    assert all(x.to_decimal(22) == y.to_decimal(22)
               for x, y in zip(pv.values, back.values))


def test_params_guard_digits_in_file(tmp_path):
    pv = ParamVector(("a",), (BigReal("0.5", 16),))
    path = tmp_path / "g.params"
    write_params(path, pv)
    name, literal = path.read_text().split()
    assert name == "a"
    assert len(literal.replace("0.", "")) == 18


def test_params_errors_and_empty(tmp_path):
    dup = tmp_path / "dup.params"
    dup.write_text("a 0.5\na 0.6\n")
    with pytest.raises(ParseError, match="line 2: repeated parameter 'a'"):
        read_params(dup)
    bad = tmp_path / "bad.params"
    bad.write_text("a 0.5 extra\n")
    with pytest.raises(ParseError, match="expected 'name value'"):
        read_params(bad)
    named = tmp_path / "name.params"
    named.write_text("9a 0.5\n")
    with pytest.raises(ParseError, match="bad parameter name"):
        read_params(named)
    empty = tmp_path / "empty.params"
    empty.write_text("")
    assert read_params(empty).names == ()


# ------------------------------------------------------------------ specs


def test_spec_round_trip_all_generator_kinds(tmp_path):
    spec = ConfigSpec((Pole(1), Ring(5, Var(0), Const("0")),
                       Ring(5, Var(1), Const("0.1")),
                       OffsetRing(4, Var(0, negate=True), Var(2)),
                       FreePoint(Var(1), Const("0.3"), -1)), 3)
    names = ("a", "b", "c")
    path = tmp_path / "s.spec"
    write_spec(path, spec, names)
    back, back_names = read_spec(path)
    assert back == spec
    assert back_names == names
    text = path.read_text()
    assert "oring 4 z=-$a x=$c" in text
    assert "free z=$b x=0.3 y=-" in text


def test_spec_phase_is_optional(tmp_path):
    path = tmp_path / "r.spec"
    path.write_text("ring 5 z=$a\n")
    spec, names = read_spec(path)
    assert spec.generators[0].phase == Const("0")
    assert names == ("a",)


def test_spec_parse_errors(tmp_path):
    cases = [
        ("c.spec", "ring 5 z=abc\n", "bad decimal value"),
        ("g.spec", "blob 5 z=$a\n", "unknown generator 'blob'"),
        ("z.spec", "ring 5 phase=$a\n", "missing field 'z'"),
        ("k.spec", "ring 1 z=$a\n", "at least 2"),
        ("p.spec", "pole *\n", "bad pole sign"),
        ("e.spec", "# only comments\n", "no generators"),
        ("f.spec", "ring 5 z=$a wobble=2\n", "unexpected field"),
        ("d.spec", "ring 5 z=$a z=$b\n", "repeated field 'z'"),
    ]
    for name, content, message in cases:
        path = tmp_path / name
        path.write_text(content)
        with pytest.raises(ParseError, match=message):
            read_spec(path)


def test_write_spec_needs_enough_names(tmp_path):
    spec = ConfigSpec((Ring(4, Var(0)), Ring(4, Var(1))), 2)
    with pytest.raises(SizeMismatch, match="arity 2"):
        write_spec(tmp_path / "s.spec", spec, ("a",))


# ------------------------------------------------------------ polynomials


def test_poly_round_trip_and_canonicalization(tmp_path):
    path = tmp_path / "q.poly"
    path.write_text("-9 0 26 0 7\n")
    poly = read_poly(path)
    assert str(poly) == "7x^4 + 26x^2 - 9"
    out = tmp_path / "q2.poly"
    write_poly(out, poly)
    assert read_poly(out) == poly
    assert out.read_text() == "-9 0 26 0 7\n"
    scaled = tmp_path / "q3.poly"
    scaled.write_text("2 0 -4\n")
    assert read_poly(scaled).coeffs == (-1, 0, 2)


def test_poly_parse_errors(tmp_path):
    two = tmp_path / "two.poly"
    two.write_text("1 2\n3 4\n")
    with pytest.raises(ParseError, match="line 2: expected a single"):
        read_poly(two)
    zero = tmp_path / "zero.poly"
    zero.write_text("0 0\n")
    with pytest.raises(ParseError, match="zero polynomial"):
        read_poly(zero)
    alpha = tmp_path / "alpha.poly"
    alpha.write_text("1 x\n")
    with pytest.raises(ParseError, match="bad coefficient"):
        read_poly(alpha)
    blank = tmp_path / "blank.poly"
    blank.write_text("\n")
    with pytest.raises(ParseError, match="no coefficients"):
        read_poly(blank)


# -------------------------------------------------------------- manifests


def test_manifest_round_trip(tmp_path):
    m = RunManifest(command="minimize", potential="r2", n=12, precision=40,
                    seed=7, algorithm="descent", wall_seconds=1.25,
                    energy="39.000000", input_path="/tmp/in dir/a.pts",
                    output_path="/tmp/out.pts")
    path = tmp_path / "run.man"
    write_manifest(path, m)
    assert "wall_seconds 1.250" in path.read_text()
    assert "input_path /tmp/in dir/a.pts" in path.read_text()
    assert read_manifest(path) == m


def test_manifest_minimal(tmp_path):
    path = tmp_path / "min.man"
    write_manifest(path, RunManifest(command="energy"))
    assert path.read_text() == "command energy\n"
    assert read_manifest(path) == RunManifest(command="energy")


def test_manifest_parse_errors(tmp_path):
    cases = [
        ("k.man", "command energy\nbanana 1\n", "unknown manifest field"),
        ("c.man", "potential r1\n", "no command field"),
        ("d.man", "command energy\ncommand gram\n", "repeated manifest field"),
        ("v.man", "command energy\nseed\n", "has no value"),
        ("i.man", "command energy\nseed x\n", "bad seed"),
        ("w.man", "command energy\nwall_seconds fast\n", "bad wall_seconds"),
    ]
    for name, content, message in cases:
        path = tmp_path / name
        path.write_text(content)
        with pytest.raises(ParseError, match=message):
            read_manifest(path)
