# standard libraries
import logging

# third party libraries
import pandas as pd

# harmonicbound libraries
from harmonicbound.geometry.configuration import extremal_configuration
from harmonicbound.models.harmonic_measure import WosParams, extremal_measure, wos_estimate

EPSILONS = [1e-2, 1e-3, 1e-4]
CASES = [(2, 0.5), (3, 0.5), (4, 0.3)]


def main() -> None:
    """
    Script to measure the bias of the absorption shell width on the star configuration.
    """
    logging.basicConfig(level=logging.INFO)
    rows = []
    for n, rho in CASES:
        cfg = extremal_configuration(n, rho)
        exact = extremal_measure(n, rho)
        for epsilon in EPSILONS:
            estimate = wos_estimate(cfg, 1, WosParams(epsilon=epsilon, samples=200_000, seed=1), progress=True)
            rows.append(
                {
                    "n": n,
                    "rho": rho,
                    "epsilon": epsilon,
                    "estimate": estimate.mean,
                    "stderr": estimate.stderr,
                    "exact": exact,
                    "deviation": estimate.mean - exact,
                    "deviation_in_stderr": (estimate.mean - exact) / estimate.stderr,
                }
            )
    print(pd.DataFrame(rows).to_string(index=False, float_format="{:.5g}".format))


if __name__ == "__main__":
    main()
