"""Fractional Fourier transform image encryption with chaotic phase masks.

Six algorithms are provided.  A31, A32 and A33 apply double random phase
encoding in the fractional Fourier domain with uniform-random, logistic and
Kaplan-Yorke masks.  A41, A42 and A43 do the same on the LL subband of a
one-level Haar decomposition, which cuts the transform cost about eightfold.
"""

from .chaos import MaskSpec
from .errors import FrtError
from .frft import FrftPlan, OrderPair, build_plan, frft_1d, frft_2d, ifrft_2d
from .pipeline import EncryptedImage, EncryptionKey, decrypt, encrypt

__version__ = "0.1.0"

__all__ = [
    "EncryptedImage",
    "EncryptionKey",
    "FrftPlan",
    "FrtError",
    "MaskSpec",
    "OrderPair",
    "build_plan",
    "decrypt",
    "encrypt",
    "frft_1d",
    "frft_2d",
    "ifrft_2d",
]
