"""
Dump the counterexample constructions as measure and box files.

Usage (from the project root):
    python -m scripts.construct nu --s 2
    python -m scripts.construct F --s 3
    python -m scripts.construct nazarov --n 64 --M 4 --dump-atoms --dump-families
    python -m scripts.construct staircase --s 2 --x 0.3
"""

import argparse
import sys
from pathlib import Path

from src.config import DATA_DIR
from src.constructions.nazarov import NazarovParams, build_nazarov
from src.constructions.small_energy import (
    SemParams,
    build_F,
    build_nu,
    nu_family,
    nu_profile,
)
from src.constructions.symmetric import corner_level_set
from src.experiments.counterexamples import measure_q_range
from src.experiments.settings import load_experiment_config
from src.potential.io import write_boxes, write_measure
from src.utils.emoji_log import done, error, info, save, task, warn

OUTPUT_DIR = DATA_DIR / "constructions"


def small_energy_params(s: int) -> SemParams:
    q_range = measure_q_range(load_experiment_config()["q_range"]["s_values"])
    return SemParams(s, q_range.c)


def dump_nu(s: int, out_dir: Path) -> list[Path]:
    p = SemParams(s)
    header = f"nu, s={s}: {p.square_count} atoms of mass 1/n^2, n={p.n}"
    return [write_measure(build_nu(p), out_dir / f"nu_s{s}.txt", header)]


def dump_F(s: int, out_dir: Path) -> list[Path]:
    p = SemParams(s)
    F = build_F(p)
    header = f"F, s={s}: {len(F)} corner rectangles q_jk"
    return [write_boxes(F, out_dir / f"F_s{s}.txt", header)]


def dump_nazarov(
    n: int, M: int, atoms: bool, families: bool, out_dir: Path
) -> list[Path]:
    construction = build_nazarov(NazarovParams(n, M))
    written = [
        write_boxes(
            construction.q_boxes,
            out_dir / f"nazarov_n{n}_M{M}_q.txt",
            f"q_ji rectangles, n={n}, M={M}",
        )
    ]
    if atoms:
        written.append(
            write_measure(
                construction.measure,
                out_dir / f"nazarov_n{n}_M{M}_mu.txt",
                f"mu, n={n}, M={M}: 2^M corner atoms of mass 2^-M",
            )
        )
    if families:
        boxes = [box for _, _, family in construction.families() for box in family]
        written.append(
            write_boxes(
                boxes,
                out_dir / f"nazarov_n{n}_M{M}_families.txt",
                f"union of the F_ji, n={n}, M={M}",
            )
        )
    return written


def dump_staircase(s: int, x: float | None, out_dir: Path) -> list[Path]:
    p = small_energy_params(s)
    x = p.lam if x is None else x
    stairs = corner_level_set(nu_family(p), nu_profile(p), x)
    if not len(stairs):
        warn(f"D_x is empty at x={x:.6g}, writing an empty box file")
    info(f"{len(stairs)} staircase boxes per square at x={x:.6g}")
    header = f"maximal corner boxes of D_x for nu, s={s}, x={x!r}"
    return [write_boxes(stairs.box_set(), out_dir / f"staircase_s{s}.txt", header)]


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description="Dump constructions to text files")
    parser.add_argument("what", choices=["nu", "F", "nazarov", "staircase"])
    parser.add_argument("--s", type=int, default=2)
    parser.add_argument("--n", type=int, default=64)
    parser.add_argument("--M", type=int, default=4)
    parser.add_argument("--x", type=float, default=None, help="Level for staircase")
    parser.add_argument("--dump-atoms", action="store_true")
    parser.add_argument("--dump-families", action="store_true")
    parser.add_argument("--out", type=str, default=str(OUTPUT_DIR))
    args = parser.parse_args()

    out_dir = Path(args.out)
    try:
        task(f"Building {args.what} ...")
        if args.what == "nu":
            paths = dump_nu(args.s, out_dir)
        elif args.what == "F":
            paths = dump_F(args.s, out_dir)
        elif args.what == "nazarov":
            paths = dump_nazarov(
                args.n, args.M, args.dump_atoms, args.dump_families, out_dir
            )
        else:
            paths = dump_staircase(args.s, args.x, out_dir)

        for path in paths:
            save(f"Saved at: {path}")
        done(f"{args.what} written")

    except Exception as e:
        error(f"Construction failed: {str(e)}")
        sys.exit(1)
