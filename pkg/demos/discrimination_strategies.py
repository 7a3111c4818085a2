"""
Four ways to handle a partially entangled channel
=================================================

After the sender's gate-and-measure step, the leftover register holds one
of d symmetric non-orthogonal states that encodes which correction the
receivers need. Each discrimination strategy trades certainty against
probability differently:

* none       - skip discrimination, apply the naive correction everywhere
* minerror   - always guess (Fourier readout); same clones as none
* usd        - error-free flag, succeeds with d*c_min^2, optimal on success
* sep:...    - filter toward a better channel, then correct there
* maxconf    - for rank-deficient channels only: maximize the posterior

The script runs each on the same input and channel and prints what the
comparison layer certifies or flags.
"""

import numpy as np

from qtc import ProtocolConfig, compare_to_formulas, run_exact
from qtc.discrimination import Strategy
from qtc.registers import StateVector
from qtc.symmetric import Channel

chan = Channel(np.sqrt([0.8, 0.2]))
psi = StateVector((2,), ("X",), np.array([0.6, 0.8], dtype=complex))


def show(title, config):
    report = compare_to_formulas(run_exact(config))
    print(f"\n== {title} ==")
    print(f"average fidelity {report.average_fidelity:.9f}")
    for flag, stats in sorted(report.conditional_averages.items()):
        print(f"  {flag}: probability {stats['probability']:.6f}, "
              f"fidelity {stats['fidelity']:.9f}")
    for c in report.comparisons:
        if c.status == "DISCREPANCY":
            print(f"  flagged: {c.name} printed={c.closed_form:.9f} "
                  f"simulated={c.simulated:.9f}")
    for note in report.notes:
        print(f"  note: {note}")


show("no discrimination", ProtocolConfig(channel=chan, input_spec=psi))
show(
    "minimum error (guess)",
    ProtocolConfig(channel=chan, flow="gxor", strategy=Strategy.min_error(), input_spec=psi),
)
show(
    "unambiguous discrimination",
    ProtocolConfig(channel=chan, flow="gxor", strategy=Strategy.usd(), input_spec=psi),
)
show(
    "separation to the maximal family",
    ProtocolConfig(
        channel=chan, flow="gxor",
        strategy=Strategy.separation(Channel.maximal(2)), input_spec=psi,
    ),
)

# maximum confidence needs a rank-deficient channel, so switch to d=3
chan3 = Channel(np.sqrt([0.7, 0.3, 0.0]))
psi3 = StateVector((3,), ("X",), np.array([0.6, 0.8j, 0.0], dtype=complex))
show(
    "maximum confidence (d=3, rank 2)",
    ProtocolConfig(
        channel=chan3, flow="gxor", strategy=Strategy.max_confidence(), input_spec=psi3,
    ),
)
