"""More antennas help until the beam gets too narrow to hit.

A larger UAV array gives a stronger main lobe but a thinner one. Under
pointing errors the link falls into the side lobe more often, so outage
first falls and then rises with N_v. Perfectly steered beams only benefit.
Takes a couple of minutes.
"""
from uavoutage import AssociationScheme, outage_probability, reference_network

GRID = (1, 4, 9, 16, 25, 36, 49, 64)

for scheme in AssociationScheme:
    print(f"\n{scheme.value}")
    print(f"{'N_v':>4}{'imperfect':>11}{'perfect':>10}")
    best = None
    for nv in GRID:
        net = reference_network(nv, scheme=scheme)
        imperfect = outage_probability(net).value
        perfect = outage_probability(net.perfectly_aligned()).value
        if best is None or imperfect < best[1]:
            best = (nv, imperfect)
        print(f"{nv:>4}{imperfect:>11.4f}{perfect:>10.5f}")
    print(f"best array size under misalignment: N_v = {best[0]}")

print("\nThe sweet spot is where the half beamwidth still covers most of the error range.")
