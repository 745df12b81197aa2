import math

import numpy as np


def encode_complex(z):
    """``z`` as ``[re, im]``; the point at infinity becomes ``"inf"``."""
    z = complex(z)
    if math.isinf(z.real) or math.isinf(z.imag):
        return "inf"
    return [z.real, z.imag]


def decode_complex(obj):
    if obj == "inf":
        return complex(math.inf, 0.0)
    if isinstance(obj, (int, float)):
        return complex(obj)
    re, im = obj
    return complex(re, im)


def encode_array(a):
    a = np.asarray(a, dtype=complex)
    if a.ndim == 0:
        return encode_complex(a)
    return [encode_array(x) for x in a]


def decode_array(obj):
    def walk(o):
        if o == "inf":
            return complex(math.inf, 0.0)
        if len(o) == 2 and all(isinstance(x, (int, float)) for x in o):
            return complex(o[0], o[1])
        return [walk(x) for x in o]

    if len(obj) == 0:
        return np.zeros(0, dtype=complex)
    return np.array(walk(obj), dtype=complex)
