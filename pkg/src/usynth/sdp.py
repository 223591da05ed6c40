"""Small dense semidefinite-program solver.

Standard form handled here:

    maximize    tr(C X)
    subject to  tr(A_i X) = b_i   (i = 1..m)
                X >= 0, block-diagonal over the declared blocks

with the dual

    minimize    b . y
    subject to  Z = sum_i y_i A_i - C >= 0.

Blocks are either real symmetric, complex Hermitian, or "diag" (a batch of
independent 1x1 blocks, i.e. a nonnegative vector). Complex Hermitian
blocks are lowered to real symmetric ones by `real_embed` before solving.

The solver is a primal-dual path-following interior-point method with a
Mehrotra predictor-corrector. Problems here are tiny (block sizes <= ~40,
up to a few hundred equality constraints, possibly many 1x1 blocks), so
all factorizations are dense.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .linalg import matrix_to_json

DEFAULT_GAP_TOL = 1e-8
DEFAULT_FEAS_TOL = 1e-8
DEFAULT_MAX_ITER = 200


class SdpError(RuntimeError):
    pass


@dataclass(frozen=True)
class Block:
    """One block of the block-diagonal variable.

    size: matrix dimension (or vector length for diag blocks).
    complex: True for a complex Hermitian block.
    diag: True for a batch of independent 1x1 blocks stored as a vector.
    """

    size: int
    complex: bool = False
    diag: bool = False


@dataclass
class Constraint:
    """tr(A X) = rhs with A given per block; missing blocks contribute 0."""

    coeffs: dict[int, np.ndarray]
    rhs: float


@dataclass
class SdpProblem:
    blocks: list[Block]
    objective: list[Optional[np.ndarray]]
    constraints: list[Constraint]

    def validate(self) -> None:
        if len(self.objective) != len(self.blocks):
            raise ValueError("objective must have one entry per block")
        for k, blk in enumerate(self.blocks):
            C = self.objective[k]
            if C is None:
                continue
            expect = (blk.size,) if blk.diag else (blk.size, blk.size)
            if np.asarray(C).shape != expect:
                raise ValueError(f"objective block {k} has wrong shape")
        for con in self.constraints:
            if not np.isfinite(con.rhs):
                raise ValueError("constraint rhs must be finite")
            for k in con.coeffs:
                if not 0 <= k < len(self.blocks):
                    raise ValueError(f"constraint references unknown block {k}")

    def dump(self, path: str) -> None:
        """Debug dump of (C, A_i, b_i) in the repo JSON matrix format."""

        def enc(blk: Block, M) -> dict:
            if M is None:
                return {}
            A = np.asarray(M, dtype=complex)
            if blk.diag:
                A = np.diag(A)
            return matrix_to_json(A)

        obj = {
            "blocks": [
                {"size": b.size, "complex": b.complex, "diag": b.diag}
                for b in self.blocks
            ],
            "C": [enc(self.blocks[k], C) for k, C in enumerate(self.objective)],
            "constraints": [
                {
                    "b": con.rhs,
                    "A": {str(k): enc(self.blocks[k], A) for k, A in con.coeffs.items()},
                }
                for con in self.constraints
            ],
        }
        with open(path, "w", encoding="utf-8") as f:
            json.dump(obj, f)


@dataclass
class SdpSolution:
    X: list[np.ndarray]
    y: np.ndarray
    primal_value: float
    dual_value: float
    gap: float
    status: str  # "Optimal" | "MaxIter" | "Infeasible"
    iterations: int = 0


def _embed_herm(M: np.ndarray) -> np.ndarray:
    """[[Re, -Im], [Im, Re]]: real symmetric iff M Hermitian; PSD preserved."""
    R, I = M.real, M.imag
    return np.block([[R, -I], [I, R]])


def _unembed_sym(S: np.ndarray) -> np.ndarray:
    """Inverse of _embed_herm on averages; PSD preserved."""
    n = S.shape[0] // 2
    P, Q = S[:n, :n], S[:n, n:]
    R = S[n:, n:]
    return (P + R) / 2 + 1j * (Q.T - Q) / 2


def real_embed(problem: SdpProblem) -> SdpProblem:
    """Lower complex Hermitian blocks to real symmetric ones.

    Each complex d x d block becomes a real symmetric 2d x 2d variable block.
    The raw embedding doubles traces (tr phi(A) phi(X) = 2 tr(A X)), so all
    coefficient matrices on complex blocks are halved, which keeps every
    tr(A X) = b constraint and the objective value unchanged. The Hermitian
    variable is recovered from the real block by averaging its two copies.
    """
    blocks = []
    for blk in problem.blocks:
        if blk.complex:
            blocks.append(Block(size=2 * blk.size))
        else:
            blocks.append(Block(size=blk.size, diag=blk.diag))

    def conv(k: int, M: Optional[np.ndarray]) -> Optional[np.ndarray]:
        if M is None:
            return None
        if problem.blocks[k].complex:
            return _embed_herm(np.asarray(M, dtype=complex)) / 2
        return np.asarray(M, dtype=float)

    objective = [conv(k, C) for k, C in enumerate(problem.objective)]
    constraints = [
        Constraint(
            coeffs={k: conv(k, A) for k, A in con.coeffs.items()},
            rhs=con.rhs,
        )
        for con in problem.constraints
    ]
    return SdpProblem(blocks=blocks, objective=objective, constraints=constraints)


def solve(
    problem: SdpProblem,
    gap_tol: float = DEFAULT_GAP_TOL,
    feas_tol: float = DEFAULT_FEAS_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> SdpSolution:
    """Solve the SDP; values and X refer to the original (complex) problem."""
    problem.validate()
    has_complex = any(b.complex for b in problem.blocks)
    real_prob = real_embed(problem) if has_complex else problem
    sol = _solve_real(real_prob, gap_tol, feas_tol, max_iter)
    if not has_complex:
        return sol
    X = []
    for k, blk in enumerate(problem.blocks):
        if blk.complex:
            X.append(_unembed_sym(sol.X[k]))
        else:
            X.append(sol.X[k])
    return SdpSolution(
        X=X,
        y=sol.y,
        primal_value=sol.primal_value,
        dual_value=sol.dual_value,
        gap=sol.gap,
        status=sol.status,
        iterations=sol.iterations,
    )


# ---------------------------------------------------------------------------
# real solver


def _sym(M: np.ndarray) -> np.ndarray:
    return (M + M.T) / 2


def _max_step_dense(X: np.ndarray, dX: np.ndarray) -> float:
    """Largest a with X + a dX psd, for X pd."""
    try:
        L = np.linalg.cholesky(X)
    except np.linalg.LinAlgError:
        L = np.linalg.cholesky(X + 1e-14 * np.eye(X.shape[0]))
    Li = np.linalg.inv(L)
    S = _sym(Li @ dX @ Li.T)
    lam = np.linalg.eigvalsh(S)[0]
    if lam >= 0:
        return np.inf
    return -1.0 / lam


def _max_step_diag(x: np.ndarray, dx: np.ndarray) -> float:
    neg = dx < 0
    if not np.any(neg):
        return np.inf
    return float(np.min(-x[neg] / dx[neg]))


def _solve_real(
    problem: SdpProblem, gap_tol: float, feas_tol: float, max_iter: int
) -> SdpSolution:
    blocks = problem.blocks
    m = len(problem.constraints)
    b = np.array([c.rhs for c in problem.constraints], dtype=float)

    # Per-block constraint data: indices of constraints touching the block and
    # their (stacked) coefficient matrices / vectors.
    dense_idx = [k for k, blk in enumerate(blocks) if not blk.diag]
    diag_idx = [k for k, blk in enumerate(blocks) if blk.diag]
    A_dense: dict[int, tuple[np.ndarray, np.ndarray]] = {}
    A_diag: dict[int, tuple[np.ndarray, np.ndarray]] = {}
    for k in dense_idx:
        rows, mats = [], []
        for i, con in enumerate(problem.constraints):
            if k in con.coeffs:
                rows.append(i)
                mats.append(_sym(np.asarray(con.coeffs[k], dtype=float)))
        if rows:
            A_dense[k] = (np.array(rows), np.stack(mats))
    for k in diag_idx:
        rows, vecs = [], []
        for i, con in enumerate(problem.constraints):
            if k in con.coeffs:
                rows.append(i)
                vecs.append(np.asarray(con.coeffs[k], dtype=float))
        if rows:
            A_diag[k] = (np.array(rows), np.stack(vecs))

    C = []
    for k, blk in enumerate(blocks):
        Ck = problem.objective[k]
        if Ck is None:
            C.append(np.zeros(blk.size) if blk.diag else np.zeros((blk.size, blk.size)))
        elif blk.diag:
            C.append(np.asarray(Ck, dtype=float))
        else:
            C.append(_sym(np.asarray(Ck, dtype=float)))

    ntot = sum(blk.size for blk in blocks)

    # Cold start scaled from problem norms.
    norm_scale = max(
        1.0,
        float(np.max(np.abs(b))) if m else 1.0,
        max((float(np.max(np.abs(Ck))) if Ck.size else 0.0) for Ck in C),
    )
    rho0 = float(np.sqrt(norm_scale) * max(1.0, np.sqrt(ntot)))
    X = [rho0 * np.ones(blk.size) if blk.diag else rho0 * np.eye(blk.size) for blk in blocks]
    Z = [rho0 * np.ones(blk.size) if blk.diag else rho0 * np.eye(blk.size) for blk in blocks]
    y = np.zeros(m)

    def a_of(Xs) -> np.ndarray:
        out = np.zeros(m)
        for k, (rows, mats) in A_dense.items():
            out[rows] += np.einsum("iab,ab->i", mats, Xs[k])
        for k, (rows, vecs) in A_diag.items():
            out[rows] += vecs @ Xs[k]
        return out

    def primal_obj(Xs) -> float:
        tot = 0.0
        for k, blk in enumerate(blocks):
            tot += float(np.sum(C[k] * Xs[k]))
        return tot

    status = "MaxIter"
    it = 0
    best = None  # (merit, X, y, pobj, dobj)
    stall = 0
    for it in range(1, max_iter + 1):
        rp = b - a_of(X)
        # Rd_k = sum_i y_i A_i - C - Z per block (want 0)
        Rd = []
        for k, blk in enumerate(blocks):
            acc = -C[k] - Z[k]
            if blk.diag:
                if k in A_diag:
                    rows, vecs = A_diag[k]
                    acc = acc + vecs.T @ y[rows]
            else:
                if k in A_dense:
                    rows, mats = A_dense[k]
                    acc = acc + np.einsum("i,iab->ab", y[rows], mats)
            Rd.append(acc)

        mu = sum(float(np.sum(X[k] * Z[k])) for k in range(len(blocks))) / ntot

        pobj = primal_obj(X)
        dobj = float(b @ y)
        pinf = float(np.max(np.abs(rp))) / (1 + float(np.max(np.abs(b)))) if m else 0.0
        dinf = max(float(np.max(np.abs(R))) for R in Rd) / (1 + norm_scale)
        gap_rel = abs(pobj - dobj) / (1 + abs(pobj) + abs(dobj))
        merit = max(pinf, dinf, gap_rel)
        if best is None or merit < best[0]:
            best = (merit, pinf, dinf, gap_rel, [Xk.copy() for Xk in X], y.copy(), pobj, dobj)
            stall = 0
        else:
            stall += 1
        if pinf <= feas_tol and dinf <= feas_tol and gap_rel <= gap_tol:
            status = "Optimal"
            break
        if stall >= 10:
            break  # numerical breakdown near the optimum; keep best iterate

        Zinv = []
        for k, blk in enumerate(blocks):
            if blk.diag:
                Zinv.append(1.0 / Z[k])
            else:
                Zinv.append(_sym(np.linalg.inv(Z[k])))

        # Schur complement M_ij = tr(A_i X A_j Z^-1)
        M = np.zeros((m, m))
        for k, (rows, mats) in A_dense.items():
            H = np.einsum("ab,ibc,cd->iad", X[k], mats, Zinv[k])
            M[np.ix_(rows, rows)] += np.einsum("iab,jab->ij", mats, H)
        for k, (rows, vecs) in A_diag.items():
            w = X[k] * Zinv[k]
            M[np.ix_(rows, rows)] += (vecs * w) @ vecs.T

        def schur_solve(rhs: np.ndarray) -> np.ndarray:
            # One round of iterative refinement buys back digits lost to the
            # ill-conditioning of M near convergence.
            try:
                dy = np.linalg.solve(M, rhs)
                dy += np.linalg.solve(M, rhs - M @ dy)
            except np.linalg.LinAlgError:
                dy = np.linalg.lstsq(M, rhs, rcond=None)[0]
            return dy

        def directions(Rc: list[np.ndarray]):
            # Solve for (dX, dy, dZ) with
            #   a(dX) = rp,  sum dy A - dZ = -Rd,  dX Z + X dZ = Rc (HKM)
            # so dZ = sum dy A + Rd and dX = (Rc - X dZ) Z^-1.
            rhs = -rp.copy()
            for k, blk in enumerate(blocks):
                if blk.diag:
                    if k in A_diag:
                        rows, vecs = A_diag[k]
                        rhs[rows] += vecs @ ((Rc[k] - X[k] * Rd[k]) * Zinv[k])
                else:
                    if k in A_dense:
                        rows, mats = A_dense[k]
                        G = (Rc[k] - X[k] @ Rd[k]) @ Zinv[k]
                        rhs[rows] += np.einsum("iab,ab->i", mats, G)
            dy = schur_solve(rhs)
            dX, dZ = [], []
            for k, blk in enumerate(blocks):
                if blk.diag:
                    acc = np.array(Rd[k], dtype=float, copy=True)
                    if k in A_diag:
                        rows, vecs = A_diag[k]
                        acc += vecs.T @ dy[rows]
                    dZ.append(acc)
                    dX.append((Rc[k] - X[k] * acc) * Zinv[k])
                else:
                    acc = Rd[k].copy()
                    if k in A_dense:
                        rows, mats = A_dense[k]
                        acc += np.einsum("i,iab->ab", dy[rows], mats)
                    dZ.append(_sym(acc))
                    dX.append(_sym((Rc[k] - X[k] @ acc) @ Zinv[k]))
            return dX, dy, dZ

        # Predictor (affine scaling).
        Rc_aff = []
        for k, blk in enumerate(blocks):
            if blk.diag:
                Rc_aff.append(-X[k] * Z[k])
            else:
                Rc_aff.append(-X[k] @ Z[k])
        dXa, dya, dZa = directions(Rc_aff)

        def max_steps(dX, dZ):
            ap = ad = np.inf
            for k, blk in enumerate(blocks):
                if blk.diag:
                    ap = min(ap, _max_step_diag(X[k], dX[k]))
                    ad = min(ad, _max_step_diag(Z[k], dZ[k]))
                else:
                    ap = min(ap, _max_step_dense(X[k], dX[k]))
                    ad = min(ad, _max_step_dense(Z[k], dZ[k]))
            return ap, ad

        ap_a, ad_a = max_steps(dXa, dZa)
        ap_a = min(1.0, 0.95 * ap_a)
        ad_a = min(1.0, 0.95 * ad_a)
        mu_aff = sum(
            float(np.sum((X[k] + ap_a * dXa[k]) * (Z[k] + ad_a * dZa[k])))
            for k in range(len(blocks))
        ) / ntot
        sigma = min(1.0, max((mu_aff / mu) ** 3, 1e-10))

        # Corrector.
        Rc = []
        for k, blk in enumerate(blocks):
            if blk.diag:
                Rc.append(sigma * mu - X[k] * Z[k] - dXa[k] * dZa[k])
            else:
                Rc.append(sigma * mu * np.eye(blocks[k].size) - X[k] @ Z[k] - dXa[k] @ dZa[k])
        dX, dy, dZ = directions(Rc)

        ap, ad = max_steps(dX, dZ)
        tau = 0.98 if mu > 1e-7 else 0.99
        ap = min(1.0, tau * ap)
        ad = min(1.0, tau * ad)
        for k, blk in enumerate(blocks):
            X[k] = X[k] + ap * dX[k]
            Z[k] = Z[k] + ad * dZ[k]
            if not blk.diag:
                X[k] = _sym(X[k])
                Z[k] = _sym(Z[k])
        y = y + ad * dy

        if float(np.linalg.norm(y)) > 1e12 * norm_scale:
            return SdpSolution(
                X=X, y=y, primal_value=primal_obj(X), dual_value=float(b @ y),
                gap=abs(primal_obj(X) - float(b @ y)), status="Infeasible",
                iterations=it,
            )

    if status != "Optimal" and best is not None:
        _, pinf_b, dinf_b, gap_b, X, y, pobj, dobj = best
        if pinf_b <= feas_tol and dinf_b <= feas_tol and gap_b <= gap_tol:
            status = "Optimal"
    else:
        pobj = primal_obj(X)
        dobj = float(b @ y)
    return SdpSolution(
        X=X,
        y=y,
        primal_value=pobj,
        dual_value=dobj,
        gap=abs(pobj - dobj),
        status=status,
        iterations=it,
    )
