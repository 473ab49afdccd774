"""Published reference values used by the tests."""

# (mesh, kp, kq, kp-kq, Q, G, kq-kp, negQ, notG)
MOMENTUM_ROWS = [
    ((1, 1, 4), (0, 0, 3), (0, 0, 1), (0, 0, 2), (0, 0, 2), (0, 0, 0), (0, 0, -2), (0, 0, 2), (0, 0, -4)),
    ((1, 4, 4), (0, 2, 1), (0, 3, 1), (0, -1, 0), (0, 3, 0), (0, -4, 0), (0, 1, 0), (0, 1, 0), (0, 0, 0)),
    ((1, 4, 4), (0, 2, 1), (0, 3, 3), (0, -1, -2), (0, 3, 2), (0, -4, -4), (0, 1, 2), (0, 1, 2), (0, 0, 0)),
    ((1, 4, 4), (0, 1, 2), (0, 1, 3), (0, 0, -1), (0, 0, 3), (0, 0, -4), (0, 0, 1), (0, 0, 2), (0, 0, 0)),
    ((1, 4, 4), (0, 1, 3), (0, 1, 2), (0, 0, 1), (0, 0, 1), (0, 0, 0), (0, 0, -1), (0, 0, 3), (0, 0, -4)),
    ((4, 4, 4), (2, 1, 3), (3, 1, 2), (-1, 0, 1), (3, 0, 1), (-4, 0, 0), (1, 0, -1), (0, 0, 3), (0, 0, -4)),
    ((4, 4, 4), (2, 1, 2), (3, 3, 3), (-1, -2, -1), (3, 2, 3), (-4, -4, -4), (1, 2, 1), (1, 2, 1), (0, 0, 0)),
]

# Rows whose printed negQ disagrees with the other columns of the same row.
# Row 3: Q = (0,0,3) has negQ = (0,0,1), the only value for which the printed
# !G = 0 satisfies kq - kp = negQ + !G.
# Row 5: Q = (3,0,1) has negQ = (1,0,3); with the printed !G = (0,0,-4) this
# reproduces kq - kp = (1,0,-1), while the printed (0,0,3) does not.
INCONSISTENT_MOMENTUM_ROWS = {3, 5}

# Diamond (cc-pVDZ) rows: lcu, mesh, Toffolis, logical qubits, physical qubits [M], runtime [days]
DIAMOND_ROWS = [
    ("sparse", (1, 1, 1), 4.84e9, 2478, 2.20, 9.10e-1),
    ("sparse", (2, 2, 2), 2.66e12, 75287, 90.57, 5.77e2),
    ("sparse", (3, 3, 3), 1.06e14, 374274, 543.76, 2.61e4),
    ("sf", (1, 1, 1), 3.20e9, 2283, 2.05, 6.02e-1),
    ("sf", (2, 2, 2), 3.27e12, 20567, 24.91, 7.11e2),
    ("sf", (3, 3, 3), 1.13e15, 47665, 69.52, 3.10e5),
    ("df", (1, 1, 1), 9.61e8, 2396, 1.55, 1.81e-1),
    ("df", (2, 2, 2), 6.74e10, 18693, 18.47, 1.27e1),
    ("df", (3, 3, 3), 1.09e12, 68470, 82.39, 2.37e2),
    ("thc", (1, 1, 1), 1.67e10, 18095, 14.20, 3.14),
    ("thc", (2, 2, 2), 4.85e11, 36393, 35.60, 1.05e2),
]
