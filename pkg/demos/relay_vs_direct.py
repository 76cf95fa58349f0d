"""Head-to-head: plain retransmission against relay-assisted ARQ.

One retransmission round, increasing target rate. Direct ARQ retries over
the same interference-limited links and collapses as soon as the rate
outruns the saturation floor; the relay listens to the first round,
decodes, and retransmits over its own much cleaner channels. The single
user bound shows how much of the interference penalty the relay claws
back. Trimmed trial counts keep this within about a minute; the test
suite runs the same sweep harder.
"""

import numpy as np

from relayarq.channel import SystemConfig
from relayarq.outage import arq_outage, outage_single_user
from relayarq.simulate import simulate_direct, simulate_relay

TRIALS = 300
SNR_DB = 40.0


def config(rate: float) -> SystemConfig:
    return SystemConfig(N=3, M=3, P=10.0 ** (SNR_DB / 10.0), noise_var=1.0,
                        var_direct=2.0, var_cross=1.0, var_relay=4.0,
                        rate=rate, retx=2)


def main():
    print(f"{'rate':>5} {'single user':>12} {'direct ARQ':>11} "
          f"{'relay ARQ':>10} {'relay modes (none/1u/2u)':>25}")
    for rate in (2.0, 4.0, 6.0, 8.0):
        cfg = config(rate)
        bound = arq_outage(outage_single_user(cfg), cfg.retx)
        direct = simulate_direct(cfg, TRIALS, seed=2)
        relay = simulate_relay(cfg, TRIALS, seed=2)
        modes = "/".join(str(c) for c in relay.mode_counts)
        print(f"{rate:5.0f} {bound:12.2e} {direct.p_hat:11.4f} "
              f"{relay.pooled.p_hat:10.4f} {modes:>25}")
    print()
    print("direct ARQ saturates; the relay keeps both users alive and the")
    print("mode column shows how often it had to serve one user or both")


if __name__ == "__main__":
    main()
