"""Regenerates crates/core/data/alternating_knots_12.csv from SnapPy.

det is the torsion order of H1 of the 2-fold cyclic cover, volume is SnapPy's
hyperbolic volume; neither uses voldet. Torus knots are skipped.
"""
import csv
import json
import sys
import warnings

warnings.filterwarnings("ignore")
import snappy  # noqa: E402


def det_of(m):
    cover = next(c for c in m.covers(2) if c.cover_info()["type"] == "cyclic")
    divisors = [d for d in cover.homology().elementary_divisors() if d != 0]
    out = 1
    for d in divisors:
        out *= d
    return out


def main(path, max_crossings=12):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["name", "pd", "braid", "det", "volume", "crossings"])
        for c in range(3, max_crossings + 1):
            for m in snappy.HTLinkExteriors(knots_vs_links="knots", crossings=c):
                if "a" not in m.name():
                    continue
                if m.solution_type() != "all tetrahedra positively oriented":
                    continue
                pd = [[x + 1 for x in t] for t in m.link().PD_code()]
                w.writerow([m.name(), json.dumps(pd, separators=(",", ":")), "",
                            det_of(m), "%.12f" % float(m.volume()), c])


if __name__ == "__main__":
    main(*sys.argv[1:2])
