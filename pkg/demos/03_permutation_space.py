"""How fast the relabeling space grows, and why balanced margins maximize it.

Relabeling a second margin multiplies the number of admissible
relabelings by C(n, n_time).  In logs that multiplier grows at the
binary-entropy rate H(n_time / n) per observation, which peaks at
balanced margins; the Stirling approximation makes the rate explicit.
"""

import math

import didperm as dp

print("growth of the relabeling space with n (both margins balanced):")
print(f"{'n':>6s} {'single (nats)':>14s} {'dual (nats)':>12s} {'gain (nats)':>12s} {'gain (bits)':>12s}")
for n in (8, 16, 32, 64, 96, 128, 256):
    stats = dp.space_stats(n, n // 2, n // 2)
    print(
        f"{n:>6d} {stats.log_size_single:>14.2f} {stats.log_size_dual:>12.2f} "
        f"{stats.log_gain:>12.2f} {stats.log_gain * dp.BITS_PER_NAT:>12.2f}"
    )

print("\nStirling approximation against the exact log binomial at n = 100:")
exact = dp.log_binomial(100, 50)
approx = dp.stirling_log_binomial(100, 0.5)
print(f"  exact   log C(100, 50) = {exact:.4f}")
print(f"  stirling approximation = {approx:.4f}   (gap {abs(approx - exact):.4f} nats)")

print("\nper-observation growth rate equals the binary entropy of the margin:")
n = 200
for p in (0.1, 0.25, 0.5, 0.75, 0.9):
    rate = dp.stirling_log_binomial(n, p) / n
    print(f"  margin fraction {p:4.2f}: rate {rate:.4f} vs H(p) {dp.binary_entropy(p):.4f} nats")

print("\nthe gain is maximized at a balanced margin (n = 40):")
best = max(range(1, 40), key=lambda k: dp.space_stats(40, 20, k).log_gain)
print(f"  argmax over n_time of log C(40, n_time) = {best} (log 2 = {math.log(2):.4f} "
      f"nats per observation attained)")
