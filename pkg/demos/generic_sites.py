# Build a generic site list and run the full check battery on it, then show
# a non-generic list failing with a replayable witness.
import time

from nlsblocks.genericity import check_battery, generate_generic, replay_report
from nlsblocks.realization import SiteList

t0 = time.perf_counter()
sites = generate_generic(2, 6)
for v in sites.sites:
    print("site", v)
for r in check_battery(sites, 2):
    print(f"{r.constraint:14s} {r.verdict}")
print(f"{time.perf_counter() - t0:.2f} s")

bad = SiteList(2, ((0, 0), (1, 0), (1, 1), (5, 7)))
for r in check_battery(bad, 2):
    if not r.passed:
        print(r.constraint, "FAIL", r.witness, "replays:", replay_report(r, bad, 2))
