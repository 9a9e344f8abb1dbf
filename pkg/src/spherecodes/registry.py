"""Built-in parameterized structures with seed values.

Each entry pairs a ConfigSpec with 19-digit seed parameters per
potential; newton_refine then sharpens those seeds to any precision.
Counts whose optimum resists this kind of ring/pole description (11,
13 as shipped here, 26, ...) are simply absent and raise Unregistered.

Ring phases are in turns.  Constants that are not finite decimals
(such as the icosahedron's 1/sqrt(5) ring height) are stored as free
parameters seeded with their 19-digit decimal expansion, so refinement
reproduces the exact value instead of a truncation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import Unregistered
from .numerics import BigReal
from .paramconfig import ConfigSpec, Const, FreePoint, ParamVector, Pole, Ring, Var
from .potentials import Potential

_A, _B, _C, _D, _E = (Var(i) for i in range(5))
_NA, _NB, _NC, _ND, _NE = (Var(i, negate=True) for i in range(5))
_ZERO = Const("0")


@dataclass(frozen=True)
class RegistryEntry:
    spec: ConfigSpec
    names: tuple
    seeds: dict  # potential token -> tuple of 19-digit decimal strings


def _entry(generators, arity, seeds) -> RegistryEntry:
    names = tuple("abcde"[:arity])
    return RegistryEntry(ConfigSpec(tuple(generators), arity), names, seeds)


def _same(*seed) -> dict:
    return {"log": seed, "r1": seed, "r2": seed}


_TABLE = {
    2: _entry([Pole(+1), Pole(-1)], 0, _same()),
    3: _entry([Ring(3, _ZERO)], 0, _same()),
    4: _entry(
        [Pole(+1), Ring(3, _A)],
        1,
        _same("-0.3333333333333333333"),
    ),
    5: _entry([Pole(+1), Ring(3, _ZERO), Pole(-1)], 0, _same()),
    6: _entry([Pole(+1), Ring(4, _ZERO), Pole(-1)], 0, _same()),
    7: _entry([Pole(+1), Ring(5, _ZERO, Const("0.25")), Pole(-1)], 0, _same()),
    # square antiprism, one square turned an eighth of a turn
    8: _entry(
        [Ring(4, _A, Const("0.125")), Ring(4, _NA)],
        1,
        {
            "log": ("0.5646169639331753669",),
            "r1": ("0.5604367652904311982",),
            "r2": ("0.5563309621802899475",),
        },
    ),
    # three stacked triangles, the middle one turned half a turn
    9: _entry(
        [Ring(3, _A, Const("0.25")), Ring(3, _ZERO, Const("-0.25")),
         Ring(3, _NA, Const("0.25"))],
        1,
        {
            "log": ("0.7031106068430678248",),
            "r1": ("0.7036483958041317758",),
            "r2": ("0.7046074370271068597",),
        },
    ),
    # square antiprism with poles
    10: _entry(
        [Pole(+1), Ring(4, _A), Ring(4, _NA, Const("0.125")), Pole(-1)],
        1,
        {
            "log": ("0.4204838855379730022",),
            "r1": ("0.4226874240439860662",),
            "r2": ("0.4242756082881730876",),
        },
    ),
    # icosahedron; the ring height is 1/sqrt(5) for every potential
    12: _entry(
        [Pole(+1), Ring(5, _A), Ring(5, _NA, Const("0.1")), Pole(-1)],
        1,
        _same("0.4472135954999579393"),
    ),
    # poles and two mirrored hexagons, each hexagon split into a dipole
    # plus a rectangle of free points so its shape stays unconstrained
    14: _entry(
        [Pole(+1),
         FreePoint(_A, _B, -1), FreePoint(_A, _NB, +1),
         FreePoint(_A, _B, +1), FreePoint(_A, _NB, -1),
         Ring(2, _A),
         Ring(2, _NA, Const("0.25")),
         FreePoint(_NA, _C, -1), FreePoint(_NA, _NC, +1),
         FreePoint(_NA, _C, +1), FreePoint(_NA, _NC, -1),
         Pole(-1)],
        3,
        {
            "log": ("0.4591508204907729375", "0.4441791654396483527",
                    "0.7693408822050128806"),
            "r1": ("0.4553677951624630035", "0.4451517076033959054",
                   "0.7710253746451266125"),
            "r2": ("0.4518625916952697588", "0.4460437753815296572",
                   "0.7725704813606493514"),
        },
    ),
    # poles and three stacked pentagons, outer two turned half a turn
    17: _entry(
        [Pole(+1), Ring(5, _A, Const("0.5")), Ring(5, _ZERO),
         Ring(5, _NA, Const("0.5")), Pole(-1)],
        1,
        {
            "log": ("0.6076810889242587549",),
            "r1": ("0.6095575990554807772",),
            "r2": ("0.6117975792003008025",),
        },
    ),
    # poles and four stacked squares, alternately turned
    18: _entry(
        [Pole(+1), Ring(4, _A), Ring(4, _B, Const("0.125")),
         Ring(4, _NB), Ring(4, _NA, Const("0.125")), Pole(-1)],
        2,
        {
            "log": ("0.6754406562091057220", "0.2063761761970050338"),
            "r1": ("0.6751471684502996248", "0.2034104243431649960"),
            "r2": ("0.6743335122024262360", "0.2007314823505518450"),
        },
    ),
    # poles and five stacked pentagons at heights a, b, 0, -b, -a
    27: _entry(
        [Pole(+1), Ring(5, _A), Ring(5, _B, Const("0.5")), Ring(5, _ZERO),
         Ring(5, _NB, Const("0.5")), Ring(5, _NA), Pole(-1)],
        2,
        {
            "log": ("0.7538089984441335383", "0.3604942753234939635"),
            "r1": ("0.7538564449703482744", "0.3589242703564896574"),
            "r2": ("0.7539171374221273508", "0.3574199262261141346"),
        },
    ),
    # icosahedral arrangement [2:2:4:2:2:8:2:2:4:2:2]; the equatorial
    # eight reuse the a and d heights as their x offsets, and the seeds
    # are sqrt((3+sqrt(5))/6), sqrt((5+sqrt(5))/10), sqrt(1/3),
    # sqrt((5-sqrt(5))/10), sqrt((3-sqrt(5))/6) for every potential
    32: _entry(
        [Ring(2, _A), Ring(2, _B, Const("0.25")), Ring(4, _C, Const("0.125")),
         Ring(2, _D), Ring(2, _E, Const("0.25")),
         FreePoint(_ZERO, _NA, +1), FreePoint(_ZERO, _NA, -1),
         FreePoint(_ZERO, _ND, +1), FreePoint(_ZERO, _ND, -1),
         FreePoint(_ZERO, _D, +1), FreePoint(_ZERO, _D, -1),
         FreePoint(_ZERO, _A, +1), FreePoint(_ZERO, _A, -1),
         Ring(2, _NE, Const("0.25")), Ring(2, _ND),
         Ring(4, _NC, Const("0.125")), Ring(2, _NB, Const("0.25")),
         Ring(2, _NA)],
        5,
        _same("0.9341723589627156965", "0.8506508083520399322",
              "0.5773502691896257645", "0.5257311121191336060",
              "0.3568220897730899319"),
    ),
    # poles and six stacked hexagons, alternately turned
    38: _entry(
        [Pole(+1), Ring(6, _A, Const("0.25")), Ring(6, _B),
         Ring(6, _C, Const("0.25")), Ring(6, _NC),
         Ring(6, _NB, Const("0.25")), Ring(6, _NA), Pole(-1)],
        3,
        {
            "log": ("0.8039422032494780264", "0.4583733204758793321",
                    "0.1721603867747475720"),
            "r1": ("0.8031706352420300965", "0.4581934070811996284",
                   "0.1698720444743110028"),
            "r2": ("0.8024795013067287797", "0.4577217788720220286",
                   "0.1675495508816995084"),
        },
    ),
    # poles and eight stacked hexagons, alternately turned
    50: _entry(
        [Pole(+1), Ring(6, _A), Ring(6, _B, Const("0.25")),
         Ring(6, _C), Ring(6, _D, Const("0.25")),
         Ring(6, _ND), Ring(6, _NC, Const("0.25")),
         Ring(6, _NB), Ring(6, _NA, Const("0.25")), Pole(-1)],
        4,
        {
            "log": ("0.8515838011853908757", "0.5845080765467688786",
                    "0.3823580555306074125", "0.1056903533827164585"),
            "r1": ("0.8513832027240754402", "0.5859466784603221965",
                   "0.3828907922740789633", "0.1079740016327089417"),
            "r2": ("0.8514411311335073360", "0.5875147416660090262",
                   "0.3834970349379620340", "0.1100866382336972714"),
        },
    ),
}


def registered_counts() -> tuple:
    """Point counts with a built-in structure, ascending."""
    return tuple(sorted(_TABLE))


def builtin_spec(n: int, pot: Potential, digits: int = 40):
    """Return (ConfigSpec, seed ParamVector) for a built-in structure.

    Raises Unregistered when no structure is stored for (n, pot).
    """
    entry = _TABLE.get(n)
    if entry is None:
        raise Unregistered(n, pot)
    seeds = entry.seeds.get(pot.token)
    if seeds is None:
        raise Unregistered(n, pot)
    values = tuple(BigReal(s, digits) for s in seeds)
    return entry.spec, ParamVector(entry.names, values)
