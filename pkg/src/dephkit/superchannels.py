"""Dephasing superchannels as d^2 x d^2 Gram matrices.

A dephasing superchannel leaves every channel's classical action invariant
and acts on Jamiolkowski states by a Schur product with a Gram matrix whose
d x d diagonal blocks all coincide. This module validates such matrices,
applies them to channels, constructs them from controlled-unitary circuits
and from general encode/decode simulations, verifies when an encode/decode
pair realizes one, and provides a brute-force full-circuit oracle.

Block indexing: entry [(i, k), (j, l)] of the matrix, flattened row-major,
is element (k, l) of block (i, j).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channels import (
    Channel,
    GramMatrix,
    channel_from_jamiolkowski,
    channel_from_kraus,
    gram_matrix,
    jamiolkowski,
    jamiolkowski_tp_defect,
)
from .errors import DimensionError, NotDephasingRealizationError, ValidationError
from .linalg import (
    DEFAULT_TOL,
    as_complex_matrix,
    basis_matrix,
    basis_vector,
    dagger,
    is_hermitian,
    kron,
    max_abs,
    min_eig_hermitian,
    partial_trace,
    random_unitary,
    readonly_copy,
)


@dataclass(frozen=True)
class SuperGram:
    """Gram matrix of a dephasing superchannel acting on d-dimensional channels."""

    d: int
    mat: np.ndarray = field(repr=False)

    def block(self, i: int, j: int) -> np.ndarray:
        d = self.d
        return self.mat[i * d : (i + 1) * d, j * d : (j + 1) * d]

    def c00(self) -> GramMatrix:
        return GramMatrix(mat=self.block(0, 0))


def validate_super_gram(mat, d: int, tol: float = DEFAULT_TOL) -> SuperGram:
    """Validate the defining invariants of a dephasing-superchannel Gram matrix.

    Raises ValidationError with a distinct check name per violated invariant:
    unit diagonal, Hermiticity, positive semidefiniteness, equality of all
    diagonal blocks, and validity of the shared diagonal block.
    """
    m = as_complex_matrix(mat)
    if d < 2:
        raise DimensionError(f"system dimension must be >= 2, got d={d}")
    if m.shape != (d * d, d * d):
        raise DimensionError(f"expected shape {(d * d, d * d)}, got {m.shape}")
    diag_dev = max_abs(np.diag(m) - 1.0)
    if diag_dev > tol:
        raise ValidationError("unit-diagonal", f"diagonal deviates from 1 by {diag_dev:.3e}", diag_dev)
    if not is_hermitian(m, tol):
        raise ValidationError("hermitian", "matrix is not Hermitian within tolerance")
    lo = min_eig_hermitian(m, hermiticity_tol=np.inf)
    if lo < -tol:
        raise ValidationError("psd", f"smallest eigenvalue {lo:.3e} < -{tol:.3e}", -lo)
    c00 = m[:d, :d]
    block_dev = max(
        max_abs(m[i * d : (i + 1) * d, i * d : (i + 1) * d] - c00) for i in range(d)
    )
    if block_dev > tol:
        raise ValidationError(
            "equal-diagonal-blocks", f"diagonal blocks differ by {block_dev:.3e}", block_dev
        )
    gram_matrix(c00, tol=tol)  # shared diagonal block must itself be a Gram matrix
    return SuperGram(d=d, mat=readonly_copy(m))


def identity_super_gram(d: int) -> SuperGram:
    """All-ones matrix: the superchannel that leaves every channel unchanged."""
    return SuperGram(d=d, mat=readonly_copy(np.ones((d * d, d * d), dtype=complex)))


def apply_super(sg: SuperGram, ch: Channel, tol: float = DEFAULT_TOL) -> Channel:
    """Transform a channel by Schur-multiplying its Jamiolkowski state with the Gram matrix."""
    if ch.dim_in != ch.dim_out or ch.dim_in != sg.d:
        raise DimensionError(
            f"channel dims ({ch.dim_in}->{ch.dim_out}) must equal the superchannel's d={sg.d}"
        )
    jam_out = jamiolkowski(ch) * sg.mat
    try:
        out = channel_from_jamiolkowski(jam_out, tol=tol)
    except ValidationError as exc:
        raise ValidationError(
            "superchannel-output-cp", f"transformed channel failed CP validation: {exc}"
        ) from exc
    defect = jamiolkowski_tp_defect(jam_out, sg.d)
    if defect > tol:
        raise ValidationError(
            "superchannel-output-tp", f"transformed channel violates TP by {defect:.3e}", defect
        )
    return out


# ---------------------------------------------------------------------------
# Controlled-unitary realizations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ControlledUnitaryFamily:
    """d unitaries of size d^2, applied to the memory conditioned on the system basis."""

    d: int
    unitaries: tuple[np.ndarray, ...]


def controlled_unitary_family(unitaries, tol: float = DEFAULT_TOL) -> ControlledUnitaryFamily:
    mats = tuple(as_complex_matrix(u) for u in unitaries)
    d = len(mats)
    if d < 2:
        raise DimensionError(f"need one unitary per basis state with d >= 2, got {d}")
    for idx, u in enumerate(mats):
        if u.shape != (d * d, d * d):
            raise DimensionError(f"member {idx} has shape {u.shape}, expected {(d * d, d * d)}")
        dev = max_abs(dagger(u) @ u - np.eye(d * d))
        if dev > tol:
            raise ValidationError("unitary", f"member {idx} deviates from unitarity by {dev:.3e}", dev)
    return ControlledUnitaryFamily(d=d, unitaries=tuple(readonly_copy(u) for u in mats))


def random_controlled_family(d: int, seed: int) -> ControlledUnitaryFamily:
    rng = np.random.default_rng(seed)
    return controlled_unitary_family([random_unitary(d * d, rng) for _ in range(d)])


def gram_from_controlled_unitaries(
    pre: ControlledUnitaryFamily, post: ControlledUnitaryFamily
) -> SuperGram:
    """Gram matrix of the vectors V_i U_k |0>, addressed as [(i,k), (j,l)].

    Entry [(i,k), (j,l)] is <0| U_l† V_j† V_i U_k |0> with |0> the first basis
    vector of the d^2-dimensional memory.
    """
    if pre.d != post.d:
        raise DimensionError(f"family dimensions differ: {pre.d} vs {post.d}")
    d = pre.d
    e0 = basis_vector(0, d * d)
    vecs = np.empty((d * d, d * d), dtype=complex)
    for i in range(d):
        for k in range(d):
            vecs[:, i * d + k] = post.unitaries[i] @ (pre.unitaries[k] @ e0)
    overlaps = dagger(vecs) @ vecs  # overlaps[a, b] = <psi_a | psi_b>
    return validate_super_gram(overlaps.T, d)


def random_super_gram(d: int, seed: int) -> SuperGram:
    """Random valid SuperGram from Haar-random controlled-unitary families."""
    return gram_from_controlled_unitaries(
        random_controlled_family(d, 2 * seed), random_controlled_family(d, 2 * seed + 1)
    )


# ---------------------------------------------------------------------------
# General encode/decode simulations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BipartiteChannel:
    """Trace-preserving channel on system ⊗ memory with declared factor dimensions."""

    sys_in: int
    mem_in: int
    sys_out: int
    mem_out: int
    inner: Channel

    def kraus_tensors(self) -> list[np.ndarray]:
        """Kraus operators reshaped to [sys_out, mem_out, sys_in, mem_in]."""
        shape = (self.sys_out, self.mem_out, self.sys_in, self.mem_in)
        return [k.reshape(shape) for k in self.inner.kraus]


def bipartite_channel(kraus, dims: tuple[int, int, int, int]) -> BipartiteChannel:
    """Build a bipartite channel from Kraus operators and (sys_in, mem_in, sys_out, mem_out)."""
    sys_in, mem_in, sys_out, mem_out = dims
    inner = channel_from_kraus(kraus)
    if inner.dim_in != sys_in * mem_in or inner.dim_out != sys_out * mem_out:
        raise DimensionError(
            f"Kraus shape ({inner.dim_out}, {inner.dim_in}) inconsistent with dims {dims}"
        )
    return BipartiteChannel(sys_in, mem_in, sys_out, mem_out, inner)


def identity_bipartite(sys_dim: int, mem_dim: int) -> BipartiteChannel:
    eye = np.eye(sys_dim * mem_dim, dtype=complex)
    return bipartite_channel([eye], (sys_dim, mem_dim, sys_dim, mem_dim))


def controlled_unitary_channel(family: ControlledUnitaryFamily) -> BipartiteChannel:
    """Unitary conjugation by sum_i |i><i| ⊗ U_i on system ⊗ d^2-dimensional memory."""
    d = family.d
    u = sum(kron(basis_matrix(i, i, d), family.unitaries[i]) for i in range(d))
    return bipartite_channel([u], (d, d * d, d, d * d))


def apply_bipartite(bc: BipartiteChannel, x: np.ndarray) -> np.ndarray:
    x = as_complex_matrix(x)
    dim = bc.sys_in * bc.mem_in
    if x.shape != (dim, dim):
        raise DimensionError(f"operand shape {x.shape} != ({dim}, {dim})")
    return sum(k @ x @ dagger(k) for k in bc.inner.kraus)


def _check_simulation_dims(enc: BipartiteChannel, dec: BipartiteChannel, tau: np.ndarray) -> int:
    tau = as_complex_matrix(tau)
    d = enc.sys_in
    if enc.sys_out != d or dec.sys_in != d or dec.sys_out != d:
        raise DimensionError("encoder and decoder must preserve the system dimension d")
    if d < 2:
        raise DimensionError(f"system dimension must be >= 2, got d={d}")
    if dec.mem_in != enc.mem_out:
        raise DimensionError(
            f"decoder memory input {dec.mem_in} != encoder memory output {enc.mem_out}"
        )
    if tau.shape != (enc.mem_in, enc.mem_in):
        raise DimensionError(f"memory state shape {tau.shape} != ({enc.mem_in}, {enc.mem_in})")
    return d


def simulation_tensor(enc: BipartiteChannel, dec: BipartiteChannel, tau: np.ndarray) -> np.ndarray:
    """Rank-8 tensor R[i,j,p,q,k,l,m,n] probing the encode/decode pair.

    R contracts the decoder superoperator (output memory traced out) against
    the encoder superoperator fed with the initial memory state. For a genuine
    dephasing realization R vanishes unless (p, q, m, n) == (i, j, k, l), and
    the surviving entries are the superchannel's Gram matrix.
    """
    d = _check_simulation_dims(enc, dec, tau)
    tau = as_complex_matrix(tau)
    dec_part = sum(
        np.einsum("itpg,jtqh->ijpgqh", b, b.conj()) for b in dec.kraus_tensors()
    )
    enc_part = sum(
        np.einsum("kgma,ab,lhnb->kglhmn", a, tau, a.conj()) for a in enc.kraus_tensors()
    )
    return np.einsum("ijpgqh,kglhmn->ijpqklmn", dec_part, enc_part)


def _matched_entries(rhs: np.ndarray, d: int) -> np.ndarray:
    gram = np.empty((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            for k in range(d):
                for l in range(d):
                    gram[i * d + k, j * d + l] = rhs[i, j, i, j, k, l, k, l]
    return gram


def _mismatch_violation(rhs: np.ndarray, d: int) -> float:
    ii, jj, pp, qq, kk, ll, mm, nn = np.ix_(*[np.arange(d)] * 8)
    matched = (pp == ii) & (qq == jj) & (mm == kk) & (nn == ll)
    off = rhs[~np.broadcast_to(matched, rhs.shape)]
    return max_abs(off)


def _gram_classical_memory(
    enc: BipartiteChannel, dec: BipartiteChannel, weights: np.ndarray
) -> np.ndarray:
    """Reduced contraction for a diagonal memory state with probabilities ``weights``."""
    dec_part = sum(
        np.einsum("itig,jtjh->ijgh", b, b.conj()) for b in dec.kraus_tensors()
    )
    enc_part = sum(
        np.einsum("kgka,a,lhla->kglh", a, weights, a.conj()) for a in enc.kraus_tensors()
    )
    d = enc.sys_in
    return np.einsum("ijgh,kglh->ikjl", dec_part, enc_part).reshape(d * d, d * d)


@dataclass(frozen=True)
class SimulationConsistencyReport:
    """Audit of the simulation tensor: extracted Gram plus off-tuple violations."""

    d: int
    gram_entries: np.ndarray = field(repr=False)
    max_mismatch: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_mismatch <= self.tol


def verify_simulation_consistency(
    enc: BipartiteChannel, dec: BipartiteChannel, tau: np.ndarray, tol: float = DEFAULT_TOL
) -> SimulationConsistencyReport:
    """Evaluate the simulation tensor everywhere and report the worst mismatched entry."""
    d = _check_simulation_dims(enc, dec, tau)
    rhs = simulation_tensor(enc, dec, tau)
    return SimulationConsistencyReport(
        d=d,
        gram_entries=_matched_entries(rhs, d),
        max_mismatch=_mismatch_violation(rhs, d),
        tol=tol,
    )


@dataclass(frozen=True)
class ConditionCheck:
    name: str
    passed: bool
    max_violation: float
    detail: str = ""


@dataclass(frozen=True)
class RealizationReport:
    """Outcome of the dephasing-realization verification.

    Conditions: the encoder must act on the system as a dephasing channel for
    the shared memory state; the decoder must act as a dephasing channel for
    each conditional memory state sigma_m; and the extracted marginal Gram
    matrices must match the blocks of the superchannel's Gram matrix.
    """

    checks: tuple[ConditionCheck, ...]
    c_en: np.ndarray = field(repr=False)
    c_de: tuple[np.ndarray, ...] = field(repr=False)
    sigma: tuple[np.ndarray, ...] = field(repr=False)
    gram_entries: np.ndarray = field(repr=False)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed_checks(self) -> tuple[ConditionCheck, ...]:
        return tuple(c for c in self.checks if not c.passed)


def verify_dephasing_realization(
    enc: BipartiteChannel, dec: BipartiteChannel, tau: np.ndarray, tol: float = DEFAULT_TOL
) -> RealizationReport:
    """Check whether (enc, dec, tau) realizes a dephasing superchannel.

    All conditions quantified over states are checked on the operator basis
    |m><n|, which is exact by linearity. Purely diagnostic: never raises on a
    failing realization.
    """
    d = _check_simulation_dims(enc, dec, tau)
    tau = as_complex_matrix(tau)

    # Encoder: Tr_2[N_en(|m><n| ⊗ tau)] must be supported on the (m, n) slot alone.
    c_en = np.empty((d, d), dtype=complex)
    enc_violation = 0.0
    for m in range(d):
        for n in range(d):
            reduced = partial_trace(
                apply_bipartite(enc, kron(basis_matrix(m, n, d), tau)),
                (d, enc.mem_out),
                "second",
            )
            c_en[m, n] = reduced[m, n]
            off = reduced.copy()
            off[m, n] = 0.0
            enc_violation = max(enc_violation, max_abs(off))

    # Conditional memory states sigma_m left behind by the encoder.
    sigma = tuple(
        partial_trace(
            apply_bipartite(enc, kron(basis_matrix(m, m, d), tau)), (d, enc.mem_out), "first"
        )
        for m in range(d)
    )

    # Decoder: for each sigma_m, Tr_2[N_de(|p><q| ⊗ sigma_m)] supported on (p, q).
    c_de = []
    dec_violation = 0.0
    dec_detail = ""
    for m in range(d):
        cm = np.empty((d, d), dtype=complex)
        worst_m = 0.0
        for p in range(d):
            for q in range(d):
                reduced = partial_trace(
                    apply_bipartite(dec, kron(basis_matrix(p, q, d), sigma[m])),
                    (d, dec.mem_out),
                    "second",
                )
                cm[p, q] = reduced[p, q]
                off = reduced.copy()
                off[p, q] = 0.0
                worst_m = max(worst_m, max_abs(off))
        c_de.append(cm)
        if worst_m > dec_violation:
            dec_violation = worst_m
            dec_detail = f"worst conditional memory index m={m}"

    # Marginals of the extracted Gram matrix must reproduce c_en and c_de.
    gram_entries = _matched_entries(simulation_tensor(enc, dec, tau), d)
    marg_violation = max_abs(gram_entries[:d, :d] - c_en)
    for m in range(d):
        marg_violation = max(marg_violation, max_abs(gram_entries[m::d, m::d] - c_de[m]))

    try:
        validate_super_gram(gram_entries, d, tol=max(tol, 1e-8))
        gram_violation, gram_detail = 0.0, ""
    except ValidationError as exc:
        gram_violation = exc.value if exc.value is not None else np.inf
        gram_detail = f"{exc.check}: {exc}"

    checks = (
        ConditionCheck(
            "encoder-dephasing",
            enc_violation <= tol,
            enc_violation,
            "encoder must act on the system as a dephasing channel",
        ),
        ConditionCheck(
            "decoder-dephasing",
            dec_violation <= tol,
            dec_violation,
            dec_detail or "decoder must dephase the system for every conditional memory state",
        ),
        ConditionCheck(
            "marginal-consistency",
            marg_violation <= tol,
            marg_violation,
            "diagonal block and per-level block diagonals must match the extracted marginals",
        ),
        ConditionCheck(
            "gram-structure",
            gram_violation <= tol,
            gram_violation,
            gram_detail or "extracted matrix satisfies the superchannel Gram invariants",
        ),
    )
    return RealizationReport(
        checks=checks,
        c_en=c_en,
        c_de=tuple(c_de),
        sigma=sigma,
        gram_entries=gram_entries,
    )


def gram_from_simulation(
    enc: BipartiteChannel, dec: BipartiteChannel, tau: np.ndarray, tol: float = DEFAULT_TOL
) -> SuperGram:
    """Extract the superchannel's Gram matrix realized by (enc, dec, tau).

    Refuses to return a matrix unless the triple verifiably realizes a
    dephasing superchannel: the realization conditions must hold and the
    simulation tensor must vanish at all mismatched index tuples. A diagonal
    memory state takes the reduced classical-memory contraction.
    """
    d = _check_simulation_dims(enc, dec, tau)
    tau = as_complex_matrix(tau)

    report = verify_dephasing_realization(enc, dec, tau, tol=tol)
    if not report.passed:
        names = ", ".join(c.name for c in report.failed_checks())
        raise NotDephasingRealizationError(
            f"not a dephasing-superchannel realization; violated condition(s): {names}", report
        )
    audit = verify_simulation_consistency(enc, dec, tau, tol=tol)
    if not audit.passed:
        raise NotDephasingRealizationError(
            f"simulation tensor has mismatched-index weight {audit.max_mismatch:.3e} > {tol:.1e}",
            report,
        )

    off_diag = tau - np.diag(np.diag(tau))
    if max_abs(off_diag) <= tol:
        entries = _gram_classical_memory(enc, dec, np.diag(tau).real)
    else:
        entries = audit.gram_entries
    return validate_super_gram(entries, d, tol=max(tol, 1e-8))


def circuit_oracle(
    enc: BipartiteChannel, dec: BipartiteChannel, tau: np.ndarray, ch: Channel
) -> Channel:
    """Full circuit Tr_mem ∘ N_de ∘ (E ⊗ I) ∘ N_en(· ⊗ tau) by Kraus composition.

    Brute-force reference: makes no dephasing assumption about enc/dec.
    """
    d = _check_simulation_dims(enc, dec, tau)
    tau = as_complex_matrix(tau)
    if ch.dim_in != d or ch.dim_out != d:
        raise DimensionError(f"channel dims ({ch.dim_in}->{ch.dim_out}) must equal d={d}")

    vals, vecs = np.linalg.eigh((tau + dagger(tau)) / 2)
    prep = [
        np.sqrt(lam) * kron(np.eye(d), v[:, None]) for lam, v in zip(vals, vecs.T) if lam > 1e-14
    ]
    mem_mid = enc.mem_out
    mid = [kron(k, np.eye(mem_mid)) for k in ch.kraus]
    discard = [kron(np.eye(d), basis_vector(b, dec.mem_out)[None, :]) for b in range(dec.mem_out)]

    kraus = [
        t @ b @ m @ a @ p
        for p in prep
        for a in enc.inner.kraus
        for m in mid
        for b in dec.inner.kraus
        for t in discard
    ]
    return channel_from_kraus(kraus)


def marginal_grams(sg: SuperGram, tol: float = DEFAULT_TOL) -> tuple[GramMatrix, list[GramMatrix]]:
    """Marginal dephasing actions: the shared diagonal block, and for each basis
    level m the matrix of (m, m) entries of every block."""
    d = sg.d
    c_en = gram_matrix(sg.block(0, 0), tol=tol)
    c_de = [gram_matrix(sg.mat[m::d, m::d], tol=tol) for m in range(d)]
    return c_en, c_de
