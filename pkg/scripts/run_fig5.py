"""EDoF of one versus two single-antenna users in front of a planar array.

    python3 scripts/run_fig5.py --out results/fig5.csv
"""
import argparse
from pathlib import Path

from xlmimo.scenario import ScenarioConfig, emit, run_fig5


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--config", help="fig5 JSON config (defaults otherwise)")
    ap.add_argument("--out", default="results/fig5.csv")
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    cfg = ScenarioConfig.from_json(args.config) if args.config else ScenarioConfig(kind="fig5")
    rows = run_fig5(cfg, threads=args.threads)
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    emit(rows, "csv", args.out)

    by_d = {}
    for r in rows:
        by_d.setdefault(r.d1_lambda, {})[r.scenario] = r.edof
    print(f"{'d1':>9}  {'two UEs':>9}  {'UE1':>9}  {'UE2':>9}  {'UE1+UE2':>9}")
    for d1, e in sorted(by_d.items()):
        one, other = e["fig5-ue1"], e["fig5-ue2"]
        print(f"{d1:9.3f}  {e['fig5-two']:9.5f}  {one:9.5f}  {other:9.5f}  {one + other:9.5f}")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
