"""Tabulate the join-body witness against the Cheeger bound as the chord count m grows.

For the square the witness ratio increases with m and levels off strictly between
the cylinder limit and the Cheeger value.
For regular m-gons the Cheeger gap over the cylinder limit shrinks as m grows.
"""
import argparse

from canalgeo import canal, cheeger, geom2d


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ms", default="4,8,16,32,64,128,256", help="comma-separated chord counts")
    args = ap.parse_args()
    ms = [int(x) for x in args.ms.split(",")]

    sq = geom2d.unit_square()
    t = cheeger.cheeger_2d(sq).t_star
    print(f"unit square: cylinder limit 0.25, Cheeger value {t:.12f}")
    print(f"{'m':>6} {'witness ratio':>16} {'Cheeger - witness':>18}")
    for m in ms:
        r = canal.verdict_q1_3d(sq, m=m).witness_ratio
        print(f"{m:>6} {r:>16.12f} {t - r:>18.3e}")

    print("\nregular m-gons: Cheeger value minus cylinder limit")
    print(f"{'m':>6} {'gap':>12} {'verdict':>8}")
    for m in ms:
        if m < 3:
            continue
        v = canal.verdict_q1_3d(geom2d.regular_polygon(m))
        print(f"{m:>6} {v.gap:>12.3e} {v.verdict:>8}")


if __name__ == "__main__":
    main()
