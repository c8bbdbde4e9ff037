"""TSPLIB subset reader/writer for instances and tours.

Supported keywords: NAME, TYPE, COMMENT, DIMENSION, EDGE_WEIGHT_TYPE,
NODE_COORD_SECTION (1-based, integer coordinates), TOUR_SECTION, EOF.
Non-Euclidean p is encoded as EDGE_WEIGHT_TYPE: SPECIAL plus a
"PNORM=<p>" comment; 3-D instances use EUC_3D.
"""

from __future__ import annotations

from fractions import Fraction
from typing import TextIO

from .geometry import PNorm, Point3, pt
from .tour import Instance, Tour


class TsplibError(ValueError):
    pass


def write_instance(f: TextIO, inst: Instance):
    f.write(f"NAME : {inst.name or 'instance'}\n")
    f.write("TYPE : TSP\n")
    if inst.dim == 3:
        f.write("DIMENSION : %d\n" % inst.n)
        f.write("EDGE_WEIGHT_TYPE : EUC_3D\n")
        f.write("NODE_COORD_SECTION\n")
        for i, p in enumerate(inst.points, 1):
            f.write(f"{i} {p.x!r} {p.y!r} {p.z!r}\n")
    else:
        if not inst.norm.is_two:
            f.write(f"COMMENT : PNORM={inst.norm.p:g}\n")
        f.write("DIMENSION : %d\n" % inst.n)
        f.write("EDGE_WEIGHT_TYPE : %s\n" % ("EUC_2D" if inst.norm.is_two else "SPECIAL"))
        f.write("NODE_COORD_SECTION\n")
        for i, p in enumerate(inst.points, 1):
            if p.x.denominator != 1 or p.y.denominator != 1:
                raise TsplibError("TSPLIB subset supports integer coordinates only")
            f.write(f"{i} {p.x} {p.y}\n")
    f.write("EOF\n")


def read_instance(f: TextIO) -> Instance:
    name, dim, ewt, pnorm = "", None, None, None
    coords = []
    lines = iter(f.read().splitlines())
    in_coords = False
    for raw in lines:
        line = raw.strip()
        if not line or line == "EOF":
            in_coords = False
            continue
        if in_coords:
            parts = line.split()
            if ewt == "EUC_3D":
                if len(parts) != 4:
                    raise TsplibError(f"malformed 3-D coord line: {raw!r}")
                coords.append(Point3(float(parts[1]), float(parts[2]), float(parts[3])))
            else:
                if len(parts) != 3:
                    raise TsplibError(f"malformed coord line: {raw!r}")
                coords.append(pt(int(parts[1]), int(parts[2])))
            continue
        if line == "NODE_COORD_SECTION":
            in_coords = True
            continue
        if ":" in line:
            key, _, val = line.partition(":")
            key, val = key.strip().upper(), val.strip()
            if key == "NAME":
                name = val
            elif key == "TYPE":
                if val.upper() != "TSP":
                    raise TsplibError(f"unsupported TYPE {val}")
            elif key == "DIMENSION":
                dim = int(val)
            elif key == "EDGE_WEIGHT_TYPE":
                ewt = val.upper()
                if ewt not in ("EUC_2D", "EUC_3D", "SPECIAL"):
                    raise TsplibError(f"unsupported EDGE_WEIGHT_TYPE {val}")
            elif key == "COMMENT" and val.upper().startswith("PNORM="):
                pnorm = float(val[6:])
        else:
            raise TsplibError(f"unrecognized line: {raw!r}")
    if ewt is None or dim is None:
        raise TsplibError("missing DIMENSION or EDGE_WEIGHT_TYPE")
    if len(coords) != dim:
        raise TsplibError(f"DIMENSION {dim} but {len(coords)} coordinates")
    if len(set(coords)) != len(coords):
        raise TsplibError("duplicate points")
    if ewt == "SPECIAL":
        if pnorm is None:
            raise TsplibError("SPECIAL edge weights require a PNORM comment")
        norm = PNorm(int(pnorm) if pnorm == int(pnorm) else pnorm)
    else:
        norm = PNorm(2)
    return Instance(coords, norm, name)


def write_tour(f: TextIO, tour: Tour, name: str = "tour"):
    f.write(f"NAME : {name}\n")
    f.write("TYPE : TOUR\n")
    f.write("DIMENSION : %d\n" % tour.n)
    f.write("TOUR_SECTION\n")
    for v in tour.order:
        f.write(f"{v + 1}\n")
    f.write("-1\n")
    f.write("EOF\n")


def read_tour(f: TextIO) -> Tour:
    order = []
    in_section = False
    for raw in f.read().splitlines():
        line = raw.strip()
        if not line:
            continue
        if line == "TOUR_SECTION":
            in_section = True
            continue
        if in_section:
            if line == "-1":
                in_section = False
                continue
            order.append(int(line) - 1)
    if not order:
        raise TsplibError("no TOUR_SECTION found")
    if sorted(order) != list(range(len(order))):
        raise TsplibError("tour section is not a permutation")
    return Tour(tuple(order))
