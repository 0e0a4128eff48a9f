"""Reference SSIM values for the metrics tests, computed with scikit-image.

shuffled: a is 16x16 with a[i] = ((i * 7919 + 13) mod 1000) / 999 at flat
index i; b[i] = a[(i * 37) mod 256].
smooth: 20x13 with a[h, w] = 0.5 + 0.4 sin(0.3 h + 0.2 w) and
b = 0.8 a + 0.1 + 0.05 cos(1.1 h w).
"""

import numpy as np
from skimage.metrics import structural_similarity


def ssim(a, b):
    return structural_similarity(
        a, b, gaussian_weights=True, sigma=1.5, use_sample_covariance=False, data_range=1.0
    )


n = 256
flat = np.array([((i * 7919 + 13) % 1000) / 999.0 for i in range(n)])
shuffled = flat[[(i * 37) % n for i in range(n)]]
print(f"shuffled {ssim(flat.reshape(16, 16), shuffled.reshape(16, 16)):.17g}")

h, w = np.meshgrid(np.arange(20), np.arange(13), indexing="ij")
a = 0.5 + 0.4 * np.sin(0.3 * h + 0.2 * w)
b = 0.8 * a + 0.1 + 0.05 * np.cos(1.1 * h * w)
print(f"smooth {ssim(a, b):.17g}")
