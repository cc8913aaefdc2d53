"""Bundled example states and the hand-chosen cycle basis for example2.

example2's curve has vertices O=(0,0), v1=(2,2), v2=(4,2) with a doubled
edge O-v1 (copies e1, e2), a doubled edge v1-v2 (copies e3, e4) and a single
edge O-v2 (e5), each of lattice length 2.  The basis is

    beta1 = v1 -e1-> O -e2-> v1
    beta2 = v2 -e3-> v1 -e4-> v2
    beta3 = O -e5-> v2 -e4-> v1 -e2-> O

and the translation vectors use the routes

    T:    P1 (midpoint of e5) -> O along e5
    N:    v2 -> O along e5
    M[1]: v2 -e3-> v1 -e1-> O
    M[2], M[3]: v1 -e1-> O
"""
from fractions import Fraction
from importlib.resources import files

NAMES = ("example1", "example2", "soliton")


def text(name: str) -> str:
    if name not in NAMES:
        raise KeyError(name)
    return files(__name__).joinpath(name + ".txt").read_text()


def load(name: str):
    from ..bbs import parse_state

    return parse_state(text(name))


def example2_basis(g):
    """(basis, routes) for the example2 metric graph ``g``."""
    vid = {v: i for i, v in enumerate(g.vertices)}
    O, v1, v2 = (vid[(Fraction(x), Fraction(y))] for x, y in ((0, 0), (2, 2), (4, 2)))

    def copies(a, b):
        out = sorted((e for e in g.edges if {e.u, e.v} == {a, b}), key=lambda e: e.copy)
        return out

    e1, e2 = copies(O, v1)
    e3, e4 = copies(v1, v2)
    (e5,) = copies(O, v2)

    def seg(e, frm):
        # full traversal of copy e starting at vertex frm
        return (e.id, Fraction(0), e.length) if frm == e.u else (e.id, e.length, Fraction(0))

    basis = [
        [seg(e1, v1), seg(e2, O)],
        [seg(e3, v2), seg(e4, v1)],
        [seg(e5, O), seg(e4, v2), seg(e2, v1)],
    ]
    to_o = Fraction(0) if e5.u == O else e5.length
    routes = {
        "T": [(e5.id, e5.length / 2, to_o)],
        "N": [seg(e5, v2)],
        ("M", 0): [seg(e3, v2), seg(e1, v1)],
        ("M", 1): [seg(e1, v1)],
        ("M", 2): [seg(e1, v1)],
    }
    return basis, routes
