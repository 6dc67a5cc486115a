"""Exact symbolic images of each model's nonlinearity on trig modes.

Everything here is closed-form trigonometry: products of sines and cosines
expand by the product-to-sum identities, the Biot-Savart kernel acts as
k_perp/|k|^2 on a single frequency, and the 3D Euler bilinear term uses the
closed-form coefficient vectors that come out of Leray-projecting
e_k . grad e_j + e_j . grad e_k.  No quadrature, no grids; the
pseudo-spectral brute-force route lives in the test suite as an
independent oracle.

Model kinds are the strings "rd", "nse2d", "boussinesq", "euler3d".
"""

from __future__ import annotations

from itertools import combinations_with_replacement

import numpy as np

from .modes import (COS, SIN, RD_SCALAR, TEMPERATURE, VELOCITY, VORTICITY,
                    ModeVector, SpanSet, TrigMode, canonical, make_mode,
                    polarization_frame, span_of)

MODEL_KINDS = ("rd", "nse2d", "boussinesq", "euler3d")


def model_degree(kind: str, rd_degree: int = 3) -> int:
    """Degree M of the leading multilinear term."""
    if kind == "rd":
        if rd_degree % 2 == 0 or rd_degree < 3:
            raise ValueError("RD leading term must have odd degree >= 3")
        return rd_degree
    if kind in ("nse2d", "boussinesq", "euler3d"):
        return 2
    raise ValueError(f"unknown model kind {kind!r}")


# ---------------------------------------------------------------------------
# 1D Dirichlet sine algebra (reaction-diffusion)
# ---------------------------------------------------------------------------

def _sine_combo_to_exp(vec: ModeVector) -> dict:
    """Complex exponential coefficients of a sine combination."""
    out: dict[int, complex] = {}
    for mode, c in vec.items():
        (k,) = mode.k
        out[k] = out.get(k, 0.0) - 0.5j * c
        out[-k] = out.get(-k, 0.0) + 0.5j * c
    return out


def _exp_multiply(a: dict, b: dict) -> dict:
    out: dict[int, complex] = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            k = ka + kb
            out[k] = out.get(k, 0.0) + ca * cb
    return out


def sine_multilinear(factors: list[ModeVector]) -> ModeVector:
    """Exact product of an odd number of sine combinations, in the sine basis.

    Products of an odd number of sines are odd 2pi-periodic trig
    polynomials, so the expansion is again pure sine; frequency 0 and
    negatives fold via sin(-m x) = -sin(m x), sin(0) = 0.
    """
    if len(factors) % 2 == 0:
        raise ValueError("even-degree sine products leave the sine basis")
    acc = _sine_combo_to_exp(factors[0])
    for f in factors[1:]:
        acc = _exp_multiply(acc, _sine_combo_to_exp(f))
    out = ModeVector()
    for k, c in acc.items():
        if k <= 0:
            continue
        mode, sign = make_mode((k,), SIN, RD_SCALAR)
        # real combination: coefficient of sin(kx) is -2 Im(c_k)
        out.add(mode, sign * (-2.0) * c.imag)
    return out.cleaned()


def rd_product_span(inputs: list[TrigMode], degree: int) -> SpanSet:
    """Span of all symmetric degree-fold products of Dirichlet sine modes.

    ``degree`` is the odd degree of the model's leading term; an even
    degree is rejected.  The empty input gives the zero span.
    """
    if degree % 2 == 0:
        raise ValueError("RD model assumes an odd-degree leading term")
    for m in inputs:
        if m.field != RD_SCALAR or m.parity != SIN:
            raise ValueError("RD products are defined on Dirichlet sine modes")
    vecs = []
    singles = [ModeVector({m: 1.0}) for m in inputs]
    for combo in combinations_with_replacement(singles, degree):
        vecs.append(sine_multilinear(list(combo)))
    return span_of(vecs)


# ---------------------------------------------------------------------------
# 2D scalar advection algebra (Navier-Stokes vorticity, Boussinesq)
# ---------------------------------------------------------------------------

def _perp(j):
    return (-j[1], j[0])


def _dot(a, b):
    return a[0] * b[0] + a[1] * b[1]


def _trig_product(p1, A, p2, B):
    """(parity1, freq A) * (parity2, freq B) -> [(parity, freq, coeff)].

    Product-to-sum on the torus; frequencies returned unfolded.
    """
    Am = tuple(A)
    Bm = tuple(B)
    diff = tuple(a - b for a, b in zip(Am, Bm))
    summ = tuple(a + b for a, b in zip(Am, Bm))
    if p1 == COS and p2 == COS:
        return [(COS, diff, 0.5), (COS, summ, 0.5)]
    if p1 == SIN and p2 == SIN:
        return [(COS, diff, 0.5), (COS, summ, -0.5)]
    if p1 == SIN and p2 == COS:
        return [(SIN, diff, 0.5), (SIN, summ, 0.5)]
    # cos A sin B = -1/2 sin(A-B) + 1/2 sin(A+B)
    return [(SIN, diff, -0.5), (SIN, summ, 0.5)]


def advect_terms(j, pj, k, pk):
    """(K * e_j^{pj}) . grad e_k^{pk} as [(parity, freq, coeff)] terms.

    K is the Biot-Savart kernel (stream function convention
    u = (-d_y, d_x) Delta^{-1} xi), grad acts on the advected scalar.
    Collinear j, k or equal frequencies give the zero list.
    """
    jj = tuple(j)
    kk = tuple(k)
    fac = _dot(_perp(jj), kk) / float(_dot(jj, jj))
    if fac == 0.0:
        return []
    # K*cos_j = j_perp sin_j / |j|^2 ; K*sin_j = -j_perp cos_j / |j|^2
    # grad cos_k = -k sin_k      ; grad sin_k = k cos_k
    vel_parity = SIN if pj == COS else COS
    vel_sign = 1.0 if pj == COS else -1.0
    grad_parity = SIN if pk == COS else COS
    grad_sign = -1.0 if pk == COS else 1.0
    coeff = fac * vel_sign * grad_sign
    out = []
    for parity, freq, c in _trig_product(vel_parity, jj, grad_parity, kk):
        out.append((parity, freq, coeff * c))
    return out


def _fold_scalar_terms(terms, field) -> ModeVector:
    out = ModeVector()
    for parity, freq, c in terms:
        mode, sign = make_mode(freq, parity, field)
        out.add(mode, sign * c)
    return out.cleaned()


def advect_scalar(vort: ModeVector, scalar: ModeVector, out_field: str) -> ModeVector:
    """b(xi, theta) = (K * xi) . grad theta for mode combinations."""
    terms = []
    for mv, cv in vort.items():
        for ms, cs in scalar.items():
            for parity, freq, c in advect_terms(mv.k, mv.parity, ms.k, ms.parity):
                terms.append((parity, freq, cv * cs * c))
    return _fold_scalar_terms(terms, out_field)


def nse_image(f: ModeVector, g: ModeVector) -> ModeVector:
    """Symmetrized vorticity bilinear term (1/2)[b(f,g) + b(g,f)]."""
    return advect_scalar(f, g, VORTICITY).scaled(0.5).plus(
        advect_scalar(g, f, VORTICITY).scaled(0.5)).cleaned()


def nse_bilinear(m1: TrigMode, m2: TrigMode) -> SpanSet:
    """Span of the symmetrized Biot-Savart advection image of a mode pair."""
    for m in (m1, m2):
        if m.field != VORTICITY or len(m.k) != 2:
            raise ValueError("nse_bilinear expects 2D vorticity modes")
    v = nse_image(ModeVector({m1: 1.0}), ModeVector({m2: 1.0}))
    return span_of([v])


def _d_x(mode: TrigMode) -> list:
    """x-derivative of a 2D trig function as [(parity, freq, coeff)]."""
    k1 = mode.k[0]
    if k1 == 0:
        return []
    if mode.parity == COS:
        return [(SIN, mode.k, -float(k1))]
    return [(COS, mode.k, float(k1))]


def boussinesq_theta_bracket(j, ell, k, n, gravity: float = 1.0) -> SpanSet:
    """Temperature-direction double bracket g*(b(d_x e_k^n, e_j^l) - b(d_x e_j^l, e_k^n)).

    The vector itself (not just its span) is available from
    :func:`boussinesq_theta_bracket_vector`.
    """
    return span_of([boussinesq_theta_bracket_vector(j, ell, k, n, gravity)])


def boussinesq_theta_bracket_vector(j, ell, k, n, gravity: float = 1.0) -> ModeVector:
    j = canonical(j)[0]
    k = canonical(k)[0]
    if all(c == 0 for c in j) or all(c == 0 for c in k):
        raise ValueError("bracket frequencies must be nonzero")
    terms = []
    ek = TrigMode(k, n, TEMPERATURE)
    ej = TrigMode(j, ell, TEMPERATURE)
    for parity, freq, c in _d_x(ek):
        for p2, f2, c2 in _advect_from_terms(parity, freq, c, ej):
            terms.append((p2, f2, c2))
    for parity, freq, c in _d_x(ej):
        for p2, f2, c2 in _advect_from_terms(parity, freq, c, ek):
            terms.append((p2, f2, -c2))
    vec = _fold_scalar_terms(terms, TEMPERATURE)
    return vec.scaled(gravity).cleaned()


def _advect_from_terms(parity, freq, coeff, scalar_mode: TrigMode):
    out = []
    if all(c == 0 for c in freq):
        return out
    for p2, f2, c2 in advect_terms(freq, parity, scalar_mode.k, scalar_mode.parity):
        out.append((p2, f2, coeff * c2))
    return out


def boussinesq_vorticity_bracket(k, ell, j, n) -> SpanSet:
    """Vorticity-direction bracket span: (K*e_k^l).grad e_j^n + (K*e_j^n).grad e_k^l."""
    return span_of([boussinesq_vorticity_bracket_vector(k, ell, j, n)])


def boussinesq_vorticity_bracket_vector(k, ell, j, n) -> ModeVector:
    k = canonical(k)[0]
    j = canonical(j)[0]
    if all(c == 0 for c in j) or all(c == 0 for c in k):
        raise ValueError("bracket frequencies must be nonzero")
    terms = list(advect_terms(k, ell, j, n)) + list(advect_terms(j, n, k, ell))
    return _fold_scalar_terms(terms, VORTICITY)


def boussinesq_image(f: ModeVector, g: ModeVector) -> ModeVector:
    """Symmetrized Boussinesq bilinear term on (vorticity, temperature) pairs.

    B(U, V) = iota_xi b(xi_U, xi_V) + iota_theta b(xi_U, theta_V); the
    symmetric multilinear form is (1/2)[B(U,V) + B(V,U)].
    """
    def split(vec):
        xi = ModeVector({m: c for m, c in vec.items() if m.field == VORTICITY})
        th = ModeVector({TrigMode(m.k, m.parity, TEMPERATURE): c
                         for m, c in vec.items() if m.field == TEMPERATURE})
        return xi, th

    xf, tf = split(f)
    xg, tg = split(g)
    out = advect_scalar(xf, xg, VORTICITY).scaled(0.5)
    out = out.plus(advect_scalar(xg, xf, VORTICITY), 0.5)
    out = out.plus(advect_scalar(xf, tg, TEMPERATURE), 0.5)
    out = out.plus(advect_scalar(xg, tf, TEMPERATURE), 0.5)
    return out.cleaned()


# ---------------------------------------------------------------------------
# 3D Euler velocity algebra
# ---------------------------------------------------------------------------

def _re_i_pow_fold(M, q):
    """Fold Re(i^M e^{-i q.x}) into (canonical q, parity, sign) or None."""
    qc, flip = canonical(q)
    if all(c == 0 for c in qc):
        return None
    M = M % 4
    parity = COS if M % 2 == 0 else SIN
    sign = 1.0 if M < 2 else -1.0
    if parity == SIN:
        sign *= flip
    return qc, parity, sign


def _velocity_prefactor_to_modes(v, M, q) -> list:
    """Express v * Re(i^M e^{-i q.x}) over e_{q,l,m} basis modes.

    v must be orthogonal to q (Leray-projected).  Returns
    [(TrigMode, coeff)].
    """
    folded = _re_i_pow_fold(M, q)
    if folded is None:
        return []
    qc, parity, sign = folded
    a0, a1 = polarization_frame(qc)
    scale = 4.0 * np.pi  # 1/|a|^2
    out = []
    for l, a in enumerate((a0, a1)):
        vl = scale * float(np.dot(v, a))
        if vl != 0.0:
            out.append((TrigMode(qc, parity, VELOCITY, l), sign * vl / 2.0))
    return out


def euler_pair_image(k, l1, m1, j, l2, m2) -> ModeVector:
    """Closed-form B(e_{k,l1,m1}, e_{j,l2,m2}) = P(e.grad e~ + e~.grad e).

    Expansion over frequencies k+j and k-j with the Leray-projected
    coefficient vectors; the mean mode (k + j = 0 or k - j = 0) is dropped.
    """
    kv = np.array(k, dtype=float)
    jv = np.array(j, dtype=float)
    ak = polarization_frame(tuple(int(c) for c in k))[l1]
    aj = polarization_frame(tuple(int(c) for c in j))[l2]
    ak_j = float(np.dot(ak, jv))
    aj_k = float(np.dot(aj, kv))
    out = ModeVector()
    qp = kv + jv
    if np.any(qp != 0.0):
        nqp = float(np.dot(qp, qp))
        r = ak_j * (aj - (float(np.dot(aj, kv)) / nqp) * qp) \
            + aj_k * (ak - (float(np.dot(ak, jv)) / nqp) * qp)
        for mode, c in _velocity_prefactor_to_modes(
                -2.0 * r, m1 + m2 + 1, tuple(int(c) for c in (np.array(k) + np.array(j)))):
            out.add(mode, c)
    qm = kv - jv
    if np.any(qm != 0.0):
        nqm = float(np.dot(qm, qm))
        s = ak_j * (aj - (float(np.dot(aj, kv)) / nqm) * qm) \
            - aj_k * (ak + (float(np.dot(ak, jv)) / nqm) * qm)
        sign = -1.0 if m2 % 2 else 1.0
        for mode, c in _velocity_prefactor_to_modes(
                2.0 * sign * s, m1 + m2 + 1, tuple(int(c) for c in (np.array(k) - np.array(j)))):
            out.add(mode, c)
    return out.cleaned()


def euler_image(f: ModeVector, g: ModeVector) -> ModeVector:
    """Symmetric multilinear Euler term (1/2) P(f.grad g + g.grad f)."""
    out = ModeVector()
    for mf, cf in f.items():
        for mg, cg in g.items():
            img = euler_pair_image(mf.k, mf.pol, mf.parity, mg.k, mg.pol, mg.parity)
            out = out.plus(img, 0.5 * cf * cg)
    return out.cleaned()


def euler_bilinear(m1: TrigMode, m2: TrigMode) -> SpanSet:
    """Span of the symmetrized Euler bilinear image of two velocity modes."""
    for m in (m1, m2):
        if m.field != VELOCITY or m.pol is None:
            raise ValueError("euler_bilinear expects polarized velocity modes")
    v = euler_image(ModeVector({m1: 1.0}), ModeVector({m2: 1.0}))
    return span_of([v])


# ---------------------------------------------------------------------------
# model dispatch
# ---------------------------------------------------------------------------

def multilinear_image(kind: str, factors: list[ModeVector],
                      rd_leading: float = 1.0) -> ModeVector:
    """Symmetric multilinear leading term N_M(h_1, ..., h_M).

    For "rd" the factors are sine combinations and the leading coefficient
    b_{2n-1} multiplies the plain product; the bilinear models take exactly
    two factors.
    """
    if kind == "rd":
        return sine_multilinear(factors).scaled(rd_leading).cleaned()
    if len(factors) != 2:
        raise ValueError("bilinear models take exactly two factors")
    f, g = factors
    if kind == "nse2d":
        return nse_image(f, g)
    if kind == "boussinesq":
        return boussinesq_image(f, g)
    if kind == "euler3d":
        return euler_image(f, g)
    raise ValueError(f"unknown model kind {kind!r}")


def diagonal_image(kind: str, g: ModeVector, degree: int = 3,
                   rd_leading: float = 1.0) -> ModeVector:
    """N_M(g) = N_M(g, ..., g)."""
    if kind == "rd":
        return multilinear_image(kind, [g] * degree, rd_leading)
    return multilinear_image(kind, [g, g])


def polarize(kind: str, g: ModeVector, h: ModeVector, degree: int = 3,
             rd_leading: float = 1.0) -> SpanSet:
    """span{ N_M(g, ..., g, h) } by exact multilinear expansion."""
    if kind == "rd":
        vec = multilinear_image(kind, [g] * (degree - 1) + [h], rd_leading)
    else:
        vec = multilinear_image(kind, [g, h])
    return span_of([vec])
