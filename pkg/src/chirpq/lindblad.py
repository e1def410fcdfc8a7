"""Time-dependent Lindblad propagation on top of scipy's adaptive integrators.

The generator is

    d rho / dt = -i [H(t), rho] + gamma (L rho L+ - {L+ L, rho} / 2)

(hbar = 1).  Both single density matrices and stacks of independent systems
(shape (M, n, n), e.g. one emitter per position) are supported; a stack is
integrated as one flat ODE so the whole batch shares adaptive steps.

Trace and Hermiticity are conserved identically by the generator for any
argument, so numerical drift in them is roundoff-level; positivity holds to
integration accuracy.
"""

from __future__ import annotations

import numpy as np
from scipy.integrate import solve_ivp

__all__ = ["evolve_lindblad", "check_density_matrix"]


def evolve_lindblad(h_func, collapse: np.ndarray, gamma, rho0: np.ndarray,
                    t_span: tuple[float, float], eval_times,
                    rtol: float = 1e-8, atol: float = 1e-10,
                    max_step: float = np.inf, method: str = "RK45") -> np.ndarray:
    """Propagate rho0 under H(t) and a single collapse channel.

    Parameters
    ----------
    h_func : callable t -> (n, n) or (M, n, n) complex Hamiltonian
    collapse : (n, n) collapse operator (pass zeros for unitary evolution)
    gamma : decay rate, scalar or shape (M,)
    rho0 : (n, n) or (M, n, n) initial density matrices
    eval_times : sorted times within t_span at which to report the state

    Returns
    -------
    (T, n, n) or (T, M, n, n) array of density matrices.
    """
    rho0 = np.asarray(rho0, dtype=complex)
    batched = rho0.ndim == 3
    shape = rho0.shape
    L = np.asarray(collapse, dtype=complex)
    Ld = L.conj().T
    LdL = Ld @ L
    g = np.asarray(gamma, dtype=float)
    if batched and g.ndim == 1:
        g = g[:, None, None]
    dissipative = np.any(g > 0)

    def rhs(t, y):
        rho = y.reshape(shape)
        H = h_func(t)
        drho = -1j * (H @ rho - rho @ H)
        if dissipative:
            drho = drho + g * (L @ rho @ Ld - 0.5 * (LdL @ rho + rho @ LdL))
        return drho.reshape(-1)

    eval_times = np.asarray(eval_times, dtype=float)
    sol = solve_ivp(rhs, t_span, rho0.reshape(-1), t_eval=eval_times,
                    method=method, rtol=rtol, atol=atol, max_step=max_step)
    if not sol.success:
        raise RuntimeError(f"Lindblad integration failed: {sol.message}")
    return sol.y.T.reshape((len(eval_times),) + shape)


def check_density_matrix(rho: np.ndarray, herm_tol: float = 1e-12,
                         trace_tol: float = 1e-10, psd_tol: float = 1e-10) -> None:
    """Raise if rho is not Hermitian / unit-trace / positive to tolerance."""
    rho = np.asarray(rho)
    herm = np.max(np.abs(rho - rho.conj().swapaxes(-1, -2)))
    if herm > herm_tol:
        raise ValueError(f"not Hermitian: max deviation {herm:.3e} > {herm_tol:.1e}")
    tr = np.trace(rho, axis1=-2, axis2=-1)
    tr_err = np.max(np.abs(tr - 1.0))
    if tr_err > trace_tol:
        raise ValueError(f"trace deviates by {tr_err:.3e} > {trace_tol:.1e}")
    eig = np.linalg.eigvalsh(rho)
    if eig.min() < -psd_tol:
        raise ValueError(f"negative eigenvalue {eig.min():.3e} < -{psd_tol:.1e}")
