"""Shared generators and independent oracles for the seeded tests."""

from math import comb

from overlog import CoeffElement, SeriesElement


def rand_plus(rng, cfg, deg=5, tspan=6, t_lo=None):
    """Random plus-part series: two random T-monomials per pi-exponent."""
    lo = -tspan if t_lo is None else t_lo
    coeffs = {}
    for k in range(deg + 1):
        terms = {}
        for _ in range(2):
            exps = tuple(rng.randrange(lo, tspan + 1) for _ in range(cfg.n - 1))
            terms[exps] = terms.get(exps, 0) + rng.randrange(-200, 200)
        coeffs[k] = CoeffElement(cfg, terms, 0, cfg.M)
    return SeriesElement(cfg, "pi", coeffs, cfg.M, None)


def rand_unit(rng, cfg, residue):
    """Random plus-part unit with a pinned constant residue.

    T-support is kept nonnegative so dropping terms past the band stays an
    exact quotient; symbols built from these units satisfy their identities
    on the nose.
    """
    x = rand_plus(rng, cfg, deg=4, tspan=4, t_lo=0)
    fix = CoeffElement.const(cfg, residue - x.coeff_at(0).constant_residue())
    return x + SeriesElement(cfg, "pi", {0: fix}, cfg.M, None)


def rand_overconv(rng, cfg, level=1, depth=2):
    """Random series overconvergent at the requested level with margin one:
    each pole coefficient carries one more p than the decay slope asks for."""
    x = rand_plus(rng, cfg, deg=4)
    D = (cfg.p - 1) * cfg.p ** (level - 1)
    pole = {}
    for k in range(-1, -depth - 1, -1):
        need = (-k + D - 1) // D + 1
        pole[k] = CoeffElement.const(cfg, rng.randrange(1, 30) * cfg.p**need)
    return x + SeriesElement(cfg, "pi", pole, cfg.M, None)


def t_gen(cfg, index=0, var="pi"):
    """The series T_index as an element."""
    return SeriesElement(cfg, var, {0: CoeffElement.gen(cfg, index)}, cfg.M, None)


def conjugate_sum_trace(x):
    """Trace oracle by root-of-unity averaging.

    Expand the plus-part input into T^a u^b monomials (u = 1 + pi) with
    integer binomials; summing over all p^n twists T -> zeta T, u -> zeta' u
    kills every monomial whose exponents are not all divisible by p and
    scales the survivors by p^n; dividing the surviving exponents by p pulls
    the result back through phi.  A completely different route from the
    selection sums in the library.
    """
    cfg = x.cfg
    mod = cfg.modulus
    poly = {}  # (t_exps, u_exp) -> int
    for k, c in x.coeffs.items():
        assert k >= 0 and c.level == 0, "oracle wants a plus-part level-0 input"
        for j in range(k + 1):
            w = comb(k, j) * (-1) ** (k - j)
            for exps, r in c.terms.items():
                key = (exps, j)
                poly[key] = (poly.get(key, 0) + w * r) % mod
    kept = {}
    pn = cfg.p**cfg.n
    for (exps, j), r in poly.items():
        if j % cfg.p or any(e % cfg.p for e in exps):
            continue
        key = (tuple(e // cfg.p for e in exps), j // cfg.p)
        kept[key] = (kept.get(key, 0) + pn * r) % mod
    out = {}
    for (exps, b), r in kept.items():
        for k in range(b + 1):
            slot = out.setdefault(k, {})
            slot[exps] = (slot.get(exps, 0) + comb(b, k) * r) % mod
    coeffs = {k: CoeffElement(cfg, terms, 0, cfg.M) for k, terms in out.items()}
    return SeriesElement(cfg, "pi", coeffs, x.prec, None)
