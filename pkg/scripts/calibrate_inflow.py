"""Sweep inflow shapes and report which ones separate the two controllers.

For each (base, amplitude, boost) the reference scenario is rerun with the
optimized and the baseline controller. A row is kept when the optimized leg
stores less, releases more and spills no more, and its release lands in the
top 3% band below o_optimal * duration.
"""

import argparse
import itertools
from dataclasses import replace


from datadam import SpikeWindow, compare, make_reference_scenario


def main():
    parser = argparse.ArgumentParser(description="inflow calibration sweep")
    parser.add_argument("--bases", type=float, nargs="+", default=[37, 38, 39, 40, 41])
    parser.add_argument("--amplitudes", type=float, nargs="+", default=[5, 10, 15, 20])
    parser.add_argument("--boosts", type=float, nargs="+", default=[20, 30, 40, 50])
    args = parser.parse_args()

    ref = make_reference_scenario()
    target = ref.params.o_optimal * ref.params.duration
    print(f"{'base':>5} {'amp':>5} {'boost':>5} {'dS':>9} {'dO':>9} {'dSpill':>9}  ok")
    for base, amp, boost in itertools.product(args.bases, args.amplitudes, args.boosts):
        spikes = tuple(SpikeWindow(w.start, w.end, boost) for w in ref.inflow.spikes)
        scen = replace(ref, inflow=replace(ref.inflow, base=base, amplitude=amp, spikes=spikes))
        r = compare(scen)
        o, b = r.optimized, r.baseline
        ok = (o.avg_storage < b.avg_storage and o.total_outflow > b.total_outflow
              and o.total_spill <= b.total_spill and 0.97 * target <= o.total_outflow <= target)
        d = r.deltas
        print(f"{base:5.0f} {amp:5.0f} {boost:5.0f} {d['avg_storage_delta']:9.2f} "
              f"{d['total_outflow_delta']:9.2f} {d['spill_delta']:9.2f}  {'yes' if ok else '-'}")


if __name__ == "__main__":
    main()
