"""Named input data: worked examples and the closed-form chamber table for
the two-edge family with slopes (k, 0; 0) and side lengths (1, 1; 2)."""
from itertools import product

from .errors import ValidationError
from .polygon import build_polygon
from .polynomials import gamma_shifted
from .tangency import MultiplicityVector


def example_64():
    """Genus zero, three-edge polygon whose connected count is 64."""
    poly = build_polygon([2], [-1, 0], [2], [1, 1], 1)
    mv = MultiplicityVector.from_maps("00001", "1", "1", "0")
    return {"polygon": poly, "genus": 0, "tangency": mv, "x": (1, -5), "y": (-1,)}


def hirzebruch_f2():
    return build_polygon([2], [0], [1], [1], 1)


def four_floor_polygon():
    return build_polygon([3, 1, -3], [-1, 0], [1, 2, 1], [2, 2], 2)


def family_polygon(k, d_t=1):
    """Right slopes (k, 0), left slope 0, side lengths (1, 1; 2)."""
    if k < 1:
        raise ValidationError("k must be positive")
    return build_polygon([k, 0], [0], [1, 1], [2], d_t, allow_open=True)


# Each row lists (argument, factor) pairs: the term is factor * Gamma(argument)
# with Gamma(w) = gamma_g(|w + k|) and factor "h" standing for g + 3.
FAMILY_TABLE = {
    "++-": [("y1-k", 1), ("y1", 1), ("x1", 1), ("x1-k", 1), ("x2", 1), ("x2-k", 1)],
    "+0-": [("x1", 1), ("x1-k", 1), ("x2-k", "h"), ("y1-k", 1), ("y1", 1), ("x2", 1), ("0", 1)],
    "+--": [("x1", 1), ("x1-k", 1), ("x2-k", "h"), ("x2", "h"), ("y1-k", 1), ("y1", 1), ("0", 1)],
    "00-": [("x1", 1), ("x2", 1), ("0", 1), ("y1-k", 1), ("y1", 1), ("x2-k", "h"), ("x1-k", "h")],
    "+-0": [("x1", 1), ("x1-k", 1), ("x2-k", "h"), ("x2", "h"), ("y1-k", 1), ("0", 1), ("y1", "h")],
    "0-0": [("x1", 1), ("0", 1), ("y1", "h"), ("y1-k", 1), ("x2-k", "h"), ("x1-k", "h"), ("x2", "h")],
    "000": [("x1", 1), ("x2", 1), ("0", 1), ("y1", "h"), ("y1-k", 1), ("0", "h"), ("y1", 1),
            ("y1-k", 1)],
    "+-+": [("x1", "h"), ("x1-k", "h"), ("x2-k", 1), ("x2", 1), ("0", "h"), ("y1", 1), ("y1-k", 1)],
    "0-+": [("x1", "h"), ("0", "h"), ("y1", 1), ("y1-k", 1), ("x2", 1), ("x2-k", 1), ("x1-k", 1)],
    "--+": [("0", "h"), ("y1", 1), ("y1-k", 1), ("x2", 1), ("x2-k", 1), ("x1", 1), ("x1-k", 1)],
}

# Rows as recomputed by diagram enumeration where they differ from the table.
FAMILY_TABLE_CORRECTED = {
    "++-": FAMILY_TABLE["++-"] + [("0", 1)],
}


def _argument(name, k, x1, x2, y1):
    values = {"0": 0, "x1": x1, "x2": x2, "y1": y1,
              "x1-k": x1 - k, "x2-k": x2 - k, "y1-k": y1 - k}
    return values[name]


def family_table_value(label, genus, k, x1, x2, y1, corrected=False):
    """The closed form of F / |y1| for a chamber label."""
    rows = FAMILY_TABLE_CORRECTED if corrected and label in FAMILY_TABLE_CORRECTED else FAMILY_TABLE
    total = 0
    for arg, factor in rows[label]:
        mult = genus + 3 if factor == "h" else factor
        total += mult * gamma_shifted(genus, k, _argument(arg, k, x1, x2, y1))
    return total


def family_label(k, x1, x2, y1):
    out = []
    for v in (x1, x2, y1):
        if v == 0 or v == -k:
            return None
        out.append("+" if v > 0 else "0" if v > -k else "-")
    return "".join(out)


def family_representative(label, k, radius=None):
    """A lattice point of the chamber, as far from its walls as the search
    box allows; None when the chamber has no lattice point."""
    radius = radius or 4 * k + 6
    best = None
    for x1, x2 in product(range(-radius, radius + 1), repeat=2):
        y1 = -k - x1 - x2
        if family_label(k, x1, x2, y1) != label:
            continue
        depth = min(min(abs(v), abs(v + k)) for v in (x1, x2, y1))
        key = (-depth, abs(x1) + abs(x2) + abs(y1), (x1, x2, y1))
        if best is None or key < best[0]:
            best = (key, (x1, x2, y1))
    return None if best is None else best[1]


PRESETS = ("example-64", "sec33", "hirzebruch-f2", "four-floor")
