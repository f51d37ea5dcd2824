"""Decode a WAV from raw bytes, inspect it, z-normalize it.

No files needed: we synthesize a short tone, encode it to WAV bytes in
memory, and round-trip it through the decoder.
"""

import numpy as np

from emdclf import decode_wav, encode_wav, z_normalize

rate = 8000
t = np.arange(rate // 2) / rate           # half a second
tone = 0.6 * np.sin(2 * np.pi * 220 * t) + 0.1

wav_bytes = encode_wav(tone, rate, fmt="pcm16")
print(f"encoded {len(wav_bytes)} bytes of 16-bit PCM")

sig = decode_wav(wav_bytes, source_id="demo_tone")
print(f"decoded: {len(sig)} samples @ {sig.sample_rate_hz} Hz "
      f"({sig.duration_s:.2f} s)")
print(f"raw mean {sig.samples.mean():+.4f}, std {sig.samples.std(ddof=1):.4f}")

# the offset and gain disappear after z-normalization
norm = z_normalize(sig)
print(f"normalized mean {norm.samples.mean():+.2e}, "
      f"std {norm.samples.std(ddof=1):.12f}")

# stereo input is averaged per frame
stereo = np.column_stack([tone, np.zeros_like(tone)])
mono = decode_wav(encode_wav(stereo, rate, fmt="float32"))
print(f"stereo (tone, silence) decodes to half amplitude: "
      f"max {np.abs(mono.samples).max():.3f} vs {np.abs(tone).max():.3f}")
