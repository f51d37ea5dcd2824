"""What the 45-column feature vector looks like for a tone vs for noise.

Nine descriptors per mode, five mode blocks. Tonal audio concentrates its
energy in a few low-crossing modes; noise spreads it out, which is exactly
what the classifiers later pick up.
"""

import numpy as np

from emdclf import FEATURE_NAMES, Signal, decompose, extract_feature_vector, z_normalize

rate = 8000
n = 4000
rng = np.random.default_rng(0)
t = np.arange(n) / rate

signals = {
    "tone": Signal(np.sin(2 * np.pi * 300 * t) + 0.3 * np.sin(2 * np.pi * 900 * t),
                   rate, "tone"),
    "noise": Signal(rng.standard_normal(n), rate, "noise"),
}

vectors = {}
for name, sig in signals.items():
    dec = decompose(z_normalize(sig))
    vectors[name] = extract_feature_vector(dec, rate)
    print(f"{name}: {len(dec.imfs)} modes")

width = len(FEATURE_NAMES)
print(f"\n{'feature':<18} {'tone imf1':>12} {'noise imf1':>12} "
      f"{'tone imf2':>12} {'noise imf2':>12}")
for i, fname in enumerate(FEATURE_NAMES):
    row = [vectors["tone"].values[i], vectors["noise"].values[i],
           vectors["tone"].values[width + i], vectors["noise"].values[width + i]]
    print(f"{fname:<18} " + " ".join(f"{v:>12.4f}" for v in row))

print("\nnote the zero-crossing rate and entropy gap between the classes;"
      "\nmissing mode blocks would read as all zeros")
