"""
Quantizing directions with random codebooks
===========================================

A user with ``L_T`` transmit antennas feeds back the index of the codeword
closest to its preferred beam.  Here we look at how the quantization error
shrinks as the codebook grows, and how that compares with the distortion
rate bounds.
"""

import numpy as np

from grassfeed import grassmann

# One line in C^2 (n=2, m=1), one factor (k=1).  The squared chordal distance
# from a uniform source to a random codeword is uniform on [0, 1], so with K
# codewords the expected distortion is the mean of the minimum of K uniforms.
for K in (1, 7, 63):
    d, se = grassmann.random_code_distortion(2, 1, 1, K, 100_000, seed=0)
    b = grassmann.drf_bounds(2, 1, 1, K)
    print(f"K={K:3d}  random codes {d:.4f} +- {se:.4f}   1/(K+1) = {1 / (K + 1):.4f}   "
          f"bounds [{b.lower:.4f}, {b.upper:.4f}]")

# %%
# Composite points stack several users on one manifold.  Two users sharing a
# codebook on G(2,1)^(2) see the distortion fall like K^(-1/2) instead of K^(-1).
Ks = 2 ** np.arange(4, 11)
d = np.array([grassmann.random_code_distortion(2, 1, 2, int(K), 20_000, seed=1)[0] for K in Ks])
upper = np.array([grassmann.drf_bounds(2, 1, 2, int(K)).upper for K in Ks])
slope = np.polyfit(np.log2(Ks), np.log2(d), 1)[0]
print("\n   K   distortion   upper bound")
for K, di, ui in zip(Ks, d, upper):
    print(f"{K:4d}   {di:.5f}      {ui:.5f}")
print(f"fitted log-log slope {slope:.3f} (expected -0.5)")

# %%
# A fixed codebook is just an array of orthonormal blocks; it can be saved
# and reloaded bit for bit.
cb = grassmann.generate_random_codebook(4, 1, 2, 16, seed=7)
source = grassmann.sample_uniform_composite(4, 1, 2, np.random.default_rng(1))
idx, dist = grassmann.quantize(source, cb)
print(f"\nsource quantized to codeword {idx} at squared distance {dist:.4f}")
