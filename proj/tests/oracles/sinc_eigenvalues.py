# Frozen-value generator for test_prolate: Galerkin matrix of the sinc kernel in the
# normalized Legendre basis, through the Fourier transform of Legendre polynomials.
import numpy as np
from scipy.special import spherical_jn
from scipy.integrate import quad
def eig(c, N=30):
    M = np.zeros((N, N))
    for m in range(N):
        for n in range(N):
            if (m + n) % 2: continue
            ph = (1j**m * (-1j)**n).real
            f = lambda w: spherical_jn(m, w) * spherical_jn(n, w)
            val, _ = quad(f, -c, c, epsabs=1e-15, epsrel=1e-14, limit=200)
            M[m, n] = ph * np.sqrt((2*m+1)*(2*n+1)) / 2 * 4 * val / (2*np.pi)
    return np.sort(np.linalg.eigvalsh(M))[::-1]
np.set_printoptions(precision=17)
for c in [1.0, 4.0]:
    print(c, repr(eig(c)[:6]))
