"""Reference Earth-orientation quantities from ERFA (pyerfa).

Independent of the library: precession angles from the P03 model (eraP06e),
IAU 1980 nutation (eraNut80), IAU 1980 mean obliquity (eraObl80) and GMST
(eraGmst82). Output is pasted into tests/unit/test_frames.cpp.
"""
import erfa

TT_MINUS_UTC = 69.184 / 86400.0
for label, (y, mo, d, h, mi, s) in {
    "2022-06-15T06:30:00": (2022, 6, 15, 6, 30, 0.0),
    "2024-04-09T12:00:00": (2024, 4, 9, 12, 0, 0.0),
}.items():
    jd1, jd2 = erfa.dtf2d("UTC", y, mo, d, h, mi, s)
    tt2 = jd2 + TT_MINUS_UTC
    p = erfa.p06e(jd1, tt2)
    zeta, z, theta = p[10], p[9], p[11]
    dpsi, deps = erfa.nut80(jd1, tt2)
    eps = erfa.obl80(jd1, tt2)
    gmst = erfa.gmst82(jd1, jd2)
    print(f'    {{"{label}", {y}, {mo}, {d}, {h}, {mi}, {zeta:.17g}, {z:.17g}, {theta:.17g}, '
          f'{dpsi:.17g}, {deps:.17g}, {eps:.17g}, {gmst:.17g}}},')
