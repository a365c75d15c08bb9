"""Published exponent matrices used as fixtures, with their stated girth and clean ranges.

Only the rows below the all-zero first row are listed; every matrix has an
all-zero first row and first column.
"""

from __future__ import annotations

from dataclasses import dataclass

from .qcgraph import ExponentMatrix

Range = tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class KnownCode:
    name: str
    matrix: ExponentMatrix
    girth: int  # lower bound on girth as published
    clean: Range  # union of rectangles with no LETS

    @property
    def N(self) -> int:
        return self.matrix.N


def _mk(name: str, N: int, rows: list[list[int]], girth: int, clean: Range) -> KnownCode:
    n = len(rows[0])
    return KnownCode(name, ExponentMatrix.from_rows([[0] * n] + rows, N), girth, clean)


P1 = _mk("P1", 41, [[0, 1, 5, 7, 26], [0, 3, 13, 30, 37]], 8, ((10, 3), (12, 2)))
P2 = _mk("P2", 31, [[0, 1, 5, 21, 30], [0, 3, 13, 6, 20]], 8, ((8, 3), (10, 2)))
P4 = _mk(
    "P4",
    36,
    [
        [0, 2, 4, 5, 8, 10, 11, 12, 16, 18, 20, 22, 23, 28, 29, 33],
        [0, 34, 22, 6, 25, 20, 30, 23, 32, 5, 35, 28, 21, 31, 7, 1],
        [0, 33, 17, 2, 26, 8, 20, 4, 10, 35, 19, 32, 31, 3, 14, 29],
    ],
    6,
    ((5, 5), (8, 3)),
)
P5 = _mk(
    "P5",
    79,
    [
        [0, 2, 3, 5, 6, 9, 11, 12, 13, 17, 19, 21, 24, 28, 30, 34, 36, 37, 38, 46, 49, 51, 52, 55, 60, 64, 69],
        [0, 24, 68, 66, 36, 59, 37, 45, 29, 58, 64, 75, 34, 2, 57, 70, 55, 35, 40, 27, 1, 11, 67, 72, 65, 23, 32],
        [0, 4, 12, 76, 43, 53, 8, 54, 34, 66, 22, 77, 72, 55, 36, 35, 15, 25, 13, 41, 62, 68, 56, 78, 10, 38, 9],
    ],
    6,
    ((7, 5), (8, 3)),
)

# the classical (155,64) array-type code of Tanner et al.: shifts 1,2,4,8,16 times 1,5,25 mod 31
TANNER_155 = KnownCode(
    "Tanner-155",
    ExponentMatrix.from_rows([[1, 2, 4, 8, 16], [5, 10, 20, 9, 18], [25, 19, 7, 14, 28]], 31),
    8,
    (),
)

# 3x5, girth 8, ranges r1..r4 = (a<=6,b<=3), (a<=8,b<=3), (a<=10,b<=3), (a<=12,b<=3)
TABLE_IV = [
    _mk("IV-18", 18, [[0, 1, 3, 7, 8], [0, 2, 11, 5, 14]], 8, ((6, 3),)),
    _mk("IV-26", 26, [[0, 1, 2, 6, 16], [0, 3, 21, 12, 23]], 8, ((8, 3),)),
    _mk("IV-36", 36, [[0, 1, 14, 29, 34], [0, 2, 24, 32, 12]], 8, ((10, 3),)),
    _mk("IV-46", 46, [[0, 1, 12, 28, 33], [0, 2, 22, 35, 39]], 8, ((12, 3),)),
]

# 3x6, girth 8, same four ranges
TABLE_V = [
    _mk("V-32", 32, [[0, 4, 11, 17, 24, 29], [0, 14, 30, 5, 3, 6]], 8, ((6, 3),)),
    _mk("V-41", 41, [[0, 16, 18, 19, 22, 33], [0, 32, 21, 26, 39, 1]], 8, ((8, 3),)),
    _mk("V-60", 60, [[0, 23, 33, 38, 40, 59], [0, 22, 45, 54, 48, 42]], 8, ((10, 3),)),
    _mk("V-80", 80, [[0, 7, 39, 41, 45, 61], [0, 35, 43, 51, 66, 36]], 8, ((12, 3),)),
]

# 3x5, girth 6, ranges (a<=5,b<=2), (a<=7,b<=2), (a<=9,b<=2), (a<=11,b<=2)
TABLE_VIII = [
    _mk("VIII-10", 10, [[0, 3, 5, 6, 8], [0, 2, 8, 4, 9]], 6, ((5, 2),)),
    _mk("VIII-15", 15, [[0, 2, 7, 10, 14], [0, 12, 11, 2, 13]], 6, ((7, 2),)),
    _mk("VIII-22", 22, [[0, 10, 12, 13, 18], [0, 21, 19, 14, 20]], 6, ((9, 2),)),
    _mk("VIII-29", 29, [[0, 4, 9, 15, 16], [0, 8, 16, 1, 18]], 6, ((11, 2),)),
]

# 4x6, 4x8 and 4x16, girth 6, ranges (a<=5,b<=5), (a<=6,b<=5), (a<=7,b<=5), (a<=8,b<=5)
TABLE_X = [
    _mk("X-7", 7, [[0, 1, 2, 3, 4, 5], [0, 2, 4, 6, 1, 3], [0, 4, 1, 5, 2, 6]], 6, ((5, 5),)),
    _mk("X-13", 13, [[0, 8, 9, 10, 11, 12], [0, 3, 10, 8, 4, 2], [0, 2, 4, 6, 1, 11]], 6, ((6, 5),)),
    _mk("X-15", 15, [[0, 1, 3, 7, 8, 13], [0, 2, 6, 3, 12, 7], [0, 3, 10, 6, 5, 4]], 6, ((7, 5),)),
    _mk("X-17", 17, [[0, 6, 13, 14, 15, 16], [0, 4, 15, 10, 5, 7], [0, 3, 6, 4, 2, 5]], 6, ((8, 5),)),
]

TABLE_XI = [
    _mk("XI-15", 15, [[0, 4, 5, 9, 11, 12, 13, 14], [0, 7, 6, 14, 5, 10, 12, 1], [0, 14, 3, 8, 13, 9, 1, 6]], 6, ((5, 5),)),
    _mk("XI-18", 18, [[0, 9, 10, 13, 14, 15, 16, 17], [0, 5, 2, 4, 15, 1, 11, 16], [0, 12, 7, 1, 9, 17, 2, 4]], 6, ((6, 5),)),
    _mk("XI-21", 21, [[0, 4, 15, 16, 17, 18, 19, 20], [0, 17, 9, 5, 4, 1, 20, 19], [0, 6, 5, 4, 15, 3, 14, 12]], 6, ((7, 5),)),
    _mk("XI-24", 24, [[0, 11, 15, 17, 19, 20, 21, 23], [0, 22, 5, 21, 13, 2, 14, 20], [0, 10, 9, 18, 7, 16, 6, 13]], 6, ((8, 5),)),
]

TABLE_XII = [
    _mk(
        "XII-32",
        32,
        [
            [0, 2, 3, 4, 6, 10, 12, 14, 16, 18, 20, 23, 24, 25, 28, 31],
            [0, 17, 16, 25, 20, 3, 29, 22, 11, 6, 27, 2, 8, 23, 15, 5],
            [0, 12, 21, 2, 8, 25, 18, 7, 10, 13, 31, 30, 9, 16, 27, 3],
        ],
        6,
        ((5, 5),),
    ),
    _mk(
        "XII-44",
        44,
        [
            [0, 1, 3, 5, 8, 9, 11, 12, 16, 17, 20, 23, 24, 26, 33, 39],
            [0, 15, 31, 13, 21, 2, 35, 32, 3, 34, 42, 9, 30, 11, 29, 7],
            [0, 20, 9, 30, 16, 37, 29, 11, 18, 22, 43, 21, 7, 17, 13, 4],
        ],
        6,
        ((6, 5),),
    ),
    _mk(
        "XII-54",
        54,
        [
            [0, 2, 3, 5, 7, 10, 12, 13, 16, 18, 20, 21, 22, 23, 29, 50],
            [0, 47, 7, 28, 39, 20, 53, 27, 6, 25, 8, 24, 11, 35, 22, 34],
            [0, 5, 28, 45, 9, 29, 13, 47, 33, 30, 24, 53, 3, 17, 52, 11],
        ],
        6,
        ((7, 5),),
    ),
    _mk(
        "XII-60",
        60,
        [
            [0, 1, 2, 3, 8, 10, 12, 14, 15, 17, 20, 21, 26, 28, 37, 40],
            [0, 5, 49, 25, 40, 15, 27, 35, 29, 24, 9, 30, 42, 4, 18, 39],
            [0, 3, 40, 47, 36, 23, 19, 45, 6, 21, 8, 55, 49, 42, 1, 32],
        ],
        6,
        ((8, 5),),
    ),
]

TABLES = {
    "IV": TABLE_IV,
    "V": TABLE_V,
    "VIII": TABLE_VIII,
    "X": TABLE_X,
    "XI": TABLE_XI,
    "XII": TABLE_XII,
}

ALL = {c.name: c for c in [P1, P2, P4, P5] + [c for t in TABLES.values() for c in t]}

# published multiplicities, class -> count
C1_COUNTS = {(4, 4): 451, (6, 4): 533, (8, 4): 1599, (9, 3): 0, (10, 4): 8651, (11, 3): 328, (12, 2): 0, (12, 4): 42599}
C2_COUNTS = {(4, 4): 558, (5, 3): 0, (7, 3): 0, (8, 2): 0, (9, 3): 465, (10, 2): 0, (11, 3): 4154, (12, 2): 682}
C4_COUNTS = {
    (3, 6): 14580, (4, 4): 0, (4, 6): 27000, (5, 4): 0, (5, 6): 59508, (6, 4): 756, (6, 6): 189360,
    (7, 4): 2340, (7, 6): 590724, (8, 0): 0, (8, 2): 0, (8, 4): 14634, (8, 6): 2345328,
}
C5_COUNTS = {(8, 4): 5925}
TABLE_IX_ZEROS = [(7, 3), (8, 2), (9, 3), (10, 2), (11, 3), (12, 2)]

# Characterization tables for dv=3, g=8, a<=12, b<=3 (QC graphs):
# class -> (number of structures, expansions applied to them).
# Top: the proposed targeted search.  Bottom: exhaustive characterization.
TABLE_II_TOP = {
    (5, 3): (1, ()),
    (7, 3): (2, ()),
    (9, 3): (9, ()),
    (11, 3): (62, ()),
    (4, 4): (1, ("dot2", "pa2", "pa3")),
    (6, 4): (2, ("dot2", "pa2")),
    (8, 4): (7, ("dot2", "pa2")),
    (10, 4): (22, ("dot2",)),
    (5, 5): (1, ("pa2", "pa3")),
    (7, 5): (2, ("dot2", "pa2")),
    (9, 5): (5, ("dot2",)),
    (8, 6): (1, ("dot2",)),
}
TABLE_II_BOTTOM = {
    (6, 0): (1, ()),
    (8, 0): (2, ()),
    (10, 0): (5, ()),
    (12, 0): (22, ()),
    (6, 2): (1, ("pa3", "pa4", "lo4^4")),
    (8, 2): (5, ("pa3",)),
    (10, 2): (27, ("pa2",)),
    (12, 2): (187, ()),
    (5, 3): (1, ("dot2", "dot3", "pa3", "pa4", "lo4^4")),
    (7, 3): (3, ("dot2", "dot3", "pa2", "pa3")),
    (9, 3): (16, ("dot2", "dot3", "pa2")),
    (11, 3): (122, ("dot2", "dot3")),
    (4, 4): (1, ("dot2", "pa2", "pa3")),
    (6, 4): (2, ("dot2", "dot3", "pa2", "pa3")),
    (8, 4): (10, ("dot2", "dot3", "pa2")),
    (10, 4): (63, ("dot2", "dot3")),
    (5, 5): (1, ("dot2", "dot3", "pa2", "pa3")),
    (7, 5): (3, ("dot2", "dot3", "pa2")),
    (9, 5): (20, ("dot2", "dot3", "pa2")),
    (8, 6): (2, ("dot2", "dot3")),
}
# weighted expansion totals for the same scenario; absent expansions are 0
TABLE_III_DV3_G8 = {
    "exhaustive": {"dot2": 279, "dot3": 278, "pa2": 85, "pa3": 14, "pa4": 2, "lo4^4": 3},
    "exhaustive_qc": {"dot2": 244, "dot3": 243, "pa2": 83, "pa3": 14, "pa4": 2, "lo4^4": 2},
    "proposed": {"dot2": 42, "dot3": 0, "pa2": 14, "pa3": 2},
    "proposed_qc": {"dot2": 40, "dot3": 0, "pa2": 13, "pa3": 2},
}


def char_table(fixture):
    """Fixture rows in the form ``cost_report`` accepts."""
    from .lets import Expansion

    return {cls: (n, tuple(Expansion.parse(e) for e in exps)) for cls, (n, exps) in fixture.items()}
