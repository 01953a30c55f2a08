"""The rosace: a hub cycle with open fans, made analysable by closing each fan.

Writes per-fan statistics and the hub series as CSV into --out.

Run:  python3 demos/02_rosace.py --out rosace_out
"""

import argparse
import pathlib

import numpy as np

from graphphase import RosaceSpec, extract_cycle_cover, gen_rosace
from graphphase.experiments import run_rosace
from graphphase.spectral import decompose

parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
parser.add_argument("--hubs", type=int, default=20)
parser.add_argument("--fan", type=int, default=20)
parser.add_argument("--out", type=pathlib.Path, default=pathlib.Path("rosace_out"))
args = parser.parse_args()

spec = RosaceSpec(args.hubs, args.fan)
g = gen_rosace(spec)
print(f"rosace with {spec.n_hubs} hubs and fans of {spec.n_fan} nodes: {g.n} nodes, {g.num_edges} edges")
print("  unperturbed:", decompose(g).diagnostics())

rep = run_rosace(spec)
print(f"\nperturbation added {len(rep.added_edges)} edges:")
for s, d, _ in rep.added_edges[:5]:
    print(f"  {s} -> {d}")
if len(rep.added_edges) > 5:
    print("  ...")
print("  after:", rep.perturbation.after)

cover = extract_cycle_cover(rep.perturbation.perturbed)
print(f"\ncycle cover: {len(cover.cycles)} disjoint cycles of lengths {sorted({len(c) for c in cover.cycles})}")

t = rep.table
print("\nfan  amplitude (truth)   |omega| (truth)")
for row in zip(t["fan"], t["amplitude"], t["amplitude_truth"], t["omega"], t["omega_truth"]):
    m, a, at, w, wt = row
    print(f"{m:3d}  {a:7.3f} ({at:4.0f})    {w:6.3f} ({wt:6.3f})")
print("\nThe middle fans track the ground truth closely.  Fans 1-2 carry the")
print("smallest amplitudes and pick up leakage from their neighbours through the")
print("shared hubs; the last fans approach or pass the Nyquist step pi.")

args.out.mkdir(parents=True, exist_ok=True)
header = ",".join(t)
np.savetxt(args.out / "fans.csv", np.column_stack(list(t.values())), delimiter=",", header=header, comments="")
s = rep.series
np.savetxt(args.out / "hubs.csv", np.column_stack(list(s.values())), delimiter=",", header=",".join(s), comments="")
print(f"\nwrote {args.out / 'fans.csv'} and {args.out / 'hubs.csv'}")
