"""Recompute the numeric constants with certified arithmetic."""
import numpy as np

from posetfree.numeric import a_sequence, maximize_b2_upper, run_suite

# a_n climbs to a peak and then decays back towards 2
values = np.array([float(a_sequence(n)) for n in range(40)])
peak = int(values.argmax())
print(f"a_n peaks at n={peak} with value {a_sequence(peak)}; a_39 ~ {values[-1]:.4f}")

value, x = maximize_b2_upper()
print(f"upper polynomial maximum {float(value):.10f} at x={float(x):.10f}")

for report in run_suite("constants"):
    print(f"{report.name:<40} {report.verdict}")
