# Frozen-value generator for test_special.
from scipy.special import sici
for x in [0.1, 1.0, 4.0, 4.5, 10.0, 50.0]:
    si, ci = sici(x)
    print(f"{x}: {si!r}, {ci!r}")
