"""
The four metrics on toy tensors
===============================

Real runs feed these functions with VGG feature maps and CLIP/text
embeddings. Here everything is random, which is enough to see how each
number behaves.
"""

import numpy as np

from zsvariation.metrics import clips, cms, fid_from_embeddings, gram, sml

rng = np.random.default_rng(0)

# %%
# Style mean loss
# ---------------
# A result is compared with every image of the target style, through their
# Gram matrices. A map drawn from the same distribution as the corpus scores
# lower than one with a different channel scale.

corpus = [gram(rng.standard_normal((8, 16, 16))) for _ in range(12)]
close = gram(rng.standard_normal((8, 16, 16)))
far = gram(3.0 * rng.standard_normal((8, 16, 16)))
print(f"SML close={sml(close, corpus):.4f}  far={sml(far, corpus):.4f}")

# %%
# Content matching and CLIP score
# -------------------------------

print("CMS of the textbook pair:", cms([1, 2, 2], [2, 1, 2]))  # 8/9
a = rng.standard_normal(512)
print(f"CLIPS self={clips(a, a):.1f}  opposite={clips(a, -a):.1f}")

# %%
# Frechet distance
# ----------------
# Shifting one embedding cloud moves FID by roughly the squared shift.

ref = rng.standard_normal((400, 16))
for shift in (0.0, 0.5, 1.0):
    gen = rng.standard_normal((400, 16)) + shift
    print(f"shift {shift:.1f}: FID {fid_from_embeddings(gen, ref):.3f}  (|shift|^2 = {16 * shift**2:.1f})")
