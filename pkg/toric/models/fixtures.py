"""Named polytopes with offsets exactly as they are usually printed."""

SPHERE_INTERVAL = {
    "name": "sphere-interval",
    "dim": 1,
    # ell_{-1} = 1 + x, ell_1 = 1 - x
    "facets": [
        {"normal": [1], "offset": "-1"},
        {"normal": [-1], "offset": "-1"},
    ],
}

CP2_TRIANGLE = {
    "name": "cp2-triangle",
    "dim": 2,
    # ell_1 = 1 + x1, ell_2 = 1 + x2, ell_3 = 1 - x1 - x2
    "facets": [
        {"normal": [1, 0], "offset": "-1"},
        {"normal": [0, 1], "offset": "-1"},
        {"normal": [-1, -1], "offset": "-1"},
    ],
}

CP2_BLOWUP_4GON = {
    "name": "cp2-blowup-4gon",
    "dim": 2,
    # ell_1, ell_2, ell_3 as for CP2 plus ell_{-3} = 1 + x1 + x2
    "facets": [
        {"normal": [1, 0], "offset": "-1"},
        {"normal": [0, 1], "offset": "-1"},
        {"normal": [-1, -1], "offset": "-1"},
        {"normal": [1, 1], "offset": "-1"},
    ],
}

HEXAGON = {
    "name": "hexagon",
    "dim": 2,
    # ell_{+-1} = 1 +- x1, ell_{+-2} = 1 +- x2, ell_{+-3} = 1 -+ (x1 + x2)
    "facets": [
        {"normal": [1, 0], "offset": "-1"},
        {"normal": [-1, 0], "offset": "-1"},
        {"normal": [0, 1], "offset": "-1"},
        {"normal": [0, -1], "offset": "-1"},
        {"normal": [-1, -1], "offset": "-1"},
        {"normal": [1, 1], "offset": "-1"},
    ],
}

FIXTURES = {
    doc["name"]: doc
    for doc in (SPHERE_INTERVAL, CP2_TRIANGLE, CP2_BLOWUP_4GON, HEXAGON)
}
