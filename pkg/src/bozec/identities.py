"""Named registry of the identity checks driven by the CLI and the tests.

Every check enumerates its parameters inside the engine's configured windows,
computes both sides to normal form, and reports exact equality.  A report is
a dict {"identity", "params", "holds", "detail"} with "lhs_minus_rhs" listing
the offending terms when an identity fails; "holds": None marks inconclusive
(budget-limited) instances.
"""

from __future__ import annotations

import random

from .cartan import height, root_add, root_sub
from .errors import BudgetError, InconclusiveError
from .modules import IRREDUCIBLE, HWModule
from .scalars import ONE, ZERO, Scalar, format_scalar, q_binom, q_fact, q_int
from .symmetries import SymmetryOp, apply_module, braid_verify_module, intertwining_verify, prop_main_i_verify
from .ualg import LP, LPP, UElem
from .uplus import UPlusElem


def _report(name, params, holds, detail="", diff=None):
    out = {"identity": name, "params": params, "holds": holds, "detail": detail}
    if holds is False and diff is not None:
        out["lhs_minus_rhs"] = diff
    return out


def _udiff(lhs: UElem, rhs: UElem) -> list:
    d = lhs - rhs
    return [f"{k}: {format_scalar(c)}" for k, c in sorted(d.terms.items(), key=repr)]


def _ucheck(name, params, lhs: UElem, rhs: UElem) -> dict:
    ok = lhs == rhs
    return _report(name, params, ok, diff=None if ok else _udiff(lhs, rhs))


def _pcheck(name, params, lhs: UPlusElem, rhs: UPlusElem) -> dict:
    ok = lhs == rhs
    if ok:
        return _report(name, params, True)
    d = lhs - rhs
    diff = [f"{k}: {format_scalar(c)}" for k, c in sorted(d.terms.items(), key=repr)]
    return _report(name, params, False, diff=diff)


def _scheck(name, params, lhs: Scalar, rhs: Scalar) -> dict:
    ok = lhs == rhs
    diff = None if ok else [format_scalar(lhs - rhs)]
    return _report(name, params, ok, diff=diff)


def _real_pairs(datum):
    """(i, j) with i real, j != i, enumerated deterministically."""
    out = []
    for i in datum.real:
        for j in range(datum.n):
            if j != i:
                out.append((i, j))
    return out


def _levels(datum, j, cap):
    if datum.is_real(j):
        return [1]
    return list(range(1, min(datum.max_l[j], cap) + 1))


def _rand_positive(engine, rng, max_height, terms=2):
    labels = engine.datum.generators
    out = engine.uplus.zero()
    for _ in range(terms):
        w = []
        h = 0
        for _ in range(rng.randint(0, max_height)):
            lab = rng.choice(labels)
            if h + lab[1] > max_height:
                break
            w.append(lab)
            h += lab[1]
        out = out + engine.uplus.from_word(tuple(w), Scalar.from_int(rng.randint(1, 3)))
    return out


def _rand_word(engine, rng, max_height):
    labels = engine.datum.generators
    w = []
    h = 0
    for _ in range(rng.randint(0, max_height)):
        lab = rng.choice(labels)
        if h + lab[1] > max_height:
            break
        w.append(lab)
        h += lab[1]
    return tuple(w)


# ---------------------------------------------------------------------------
# section 1: free algebra, radical, primitive generators


def check_form_symmetry(engine, rng):
    alg = engine.alg
    bad = []
    for _ in range(30):
        x = engine.prims.rep(dict([( _rand_word(engine, rng, 5), ONE)]))
        y = engine.prims.rep(dict([( _rand_word(engine, rng, 5), ONE)]))
        if alg.form(x, y) != alg.form(y, x):
            bad.append("asymmetry found")
    return [_report("prop-1.1-symmetry", {}, not bad, detail=f"30 random pairs")]


def check_coassociativity(engine, rng):
    alg = engine.alg
    from .freealg import FreeElem

    ok = True
    for (i, l) in engine.datum.generators:
        lhs = {}
        rhs = {}
        for (w1, w2), c in alg.coproduct(alg.generator(i, l)).terms.items():
            for (u1, u2), c2 in alg.coproduct(FreeElem.word(w1)).terms.items():
                key = (u1, u2, w2)
                lhs[key] = lhs.get(key, ZERO) + c * c2
            for (u1, u2), c2 in alg.coproduct(FreeElem.word(w2)).terms.items():
                key = (w1, u1, u2)
                rhs[key] = rhs.get(key, ZERO) + c * c2
        lhs = {k: v for k, v in lhs.items() if v.cn}
        rhs = {k: v for k, v in rhs.items() if v.cn}
        if lhs != rhs:
            ok = False
    return [_report("rho-coassociativity", {}, ok)]


def check_rho_morphism(engine, rng):
    alg = engine.alg
    ok = True
    for _ in range(10):
        from .freealg import FreeElem

        x = FreeElem.word(_rand_word(engine, rng, 2))
        y = FreeElem.word(_rand_word(engine, rng, 2))
        if alg.coproduct(x * y) != alg.tensor_multiply(alg.coproduct(x), alg.coproduct(y)):
            ok = False
    return [_report("rho-morphism", {}, ok, detail="10 random pairs, height <= 4")]


def check_serre_radical(engine, rng):
    alg = engine.alg
    d = engine.datum
    out = []
    for (i, j) in _real_pairs(d):
        for n in range(0, engine.config.max_n + 1):
            comps = [(n,)] if n else [None]
            if not d.is_real(j) and n:
                if n > d.max_l[j]:
                    continue
                from .primitive import compositions

                comps = compositions(n, d.max_l[j])
            for c in comps:
                for m in range(-d.a[i][j] * n + 1, -d.a[i][j] * n + 3):
                    if m + n > min(6, engine.config.height_budget) or m < 1:
                        continue
                    for sign in (1, -1):
                        el = alg.serre_element(i, j, n, m, c=c, sign=sign)
                        ok = alg.radical_member(el)
                        out.append(
                            _report(
                                "eq-1.1-radical",
                                {"i": d.names[i], "j": d.names[j], "n": n, "m": m,
                                 "c": list(c) if c else None, "sign": sign},
                                ok,
                            )
                        )
    return out


def check_commutator_radical(engine, rng):
    alg = engine.alg
    d = engine.datum
    out = []
    for (i, k) in d.generators:
        for (j, l) in d.generators:
            if i >= j or d.a[i][j] != 0:
                continue
            ei = alg.generator(i, k)
            ej = alg.generator(j, l)
            ok = alg.radical_member(ei * ej - ej * ei)
            out.append(
                _report(
                    "commutator-radical",
                    {"i": d.names[i], "k": k, "j": d.names[j], "l": l},
                    ok,
                )
            )
    return out


def check_primitive_properties(engine, rng):
    d = engine.datum
    alg = engine.alg
    out = []
    nu_is_one = not d.nu_table
    for i in d.imaginary:
        for l in range(1, min(3, d.max_l[i]) + 1):
            g = engine.prims.generator(i, l)
            beta = d.alpha(i, l)
            orth = all(
                alg.form(g.element, engine.prims.rep_word(w)).is_zero()
                for w in alg.monomials(beta)
                if w != ((i, l),)
            )
            out.append(_report("prop-1.4-2-orthogonality", {"i": d.names[i], "l": l}, orth))
            lower = all(
                all(p < l for _, p in w)
                for w in g.element.terms
                if w != ((i, l),)
            )
            out.append(_report("prop-1.4-3-containment", {"i": d.names[i], "l": l}, lower))
            bar_ok = all(c.bar() == c for c in g.element.terms.values())
            if nu_is_one:
                out.append(_report("prop-1.4-4-bar", {"i": d.names[i], "l": l}, bar_ok))
            else:
                out.append(
                    _report(
                        "prop-1.4-4-bar",
                        {"i": d.names[i], "l": l},
                        None,
                        detail=f"reported only (nu != 1): bar-invariant = {bar_ok}",
                    )
                )
            # primitivity modulo the radical
            defect = alg.coproduct(g.element)
            defect.add_term(((), ()), ZERO)
            for w, c in g.element.terms.items():
                defect.add_term((w, ()), -c)
                defect.add_term(((), w), -c)
            prim_ok = True
            by_bi = {}
            for (w1, w2), c in defect.terms.items():
                by_bi.setdefault((alg.word_degree(w1), alg.word_degree(w2)), []).append((w1, w2, c))
            for (b1, b2), terms in by_bi.items():
                for m1 in alg.monomials(b1):
                    for m2 in alg.monomials(b2):
                        acc = ZERO
                        for w1, w2, c in terms:
                            v1 = alg.pair_words(w1, m1)
                            if v1.cn:
                                v2 = alg.pair_words(w2, m2)
                                if v2.cn:
                                    acc = acc + c * v1 * v2
                        if acc.cn:
                            prim_ok = False
            out.append(_report("prop-1.4-5-primitivity", {"i": d.names[i], "l": l}, prim_ok))
    return out


def check_nondegeneracy_imaginary(engine, rng):
    d = engine.datum
    out = []
    for i in d.imaginary:
        if i in d.isotropic:
            continue
        for l in range(1, min(4, d.max_l[i], engine.config.height_budget) + 1):
            t = engine.alg.gram(d.alpha(i, l))
            out.append(
                _report(
                    "nondegeneracy-imaginary",
                    {"i": d.names[i], "l": l},
                    t.rank == len(t.words),
                    detail=f"rank {t.rank} of {len(t.words)}",
                )
            )
    return out


def check_eq_1_7(engine, rng):
    # [a_{il}, omega(z)] = tau_{il} (omega(delta_{i,l}(z)) K_i^-l - K_i^l omega(delta^{i,l}(z)))
    ua = engine.ua
    up = engine.uplus
    d = engine.datum
    out = []
    for (i, l) in d.generators:
        for trial in range(3):
            z = _rand_positive(engine, rng, 4)
            tau = engine.prims.generator(i, l).tau
            omega_z = ua.involution("omega", up.embed(z))
            a = ua.a_gen(i, l)
            lhs = a * omega_z - omega_z * a
            lo = ua.involution("omega", up.embed(up.delta_small(i, l, "lower", z)))
            hi = ua.involution("omega", up.embed(up.delta_small(i, l, "upper", z)))
            rhs = (lo * ua.K(i, -l) - ua.K(i, l) * hi).scale(tau)
            out.append(_ucheck("eq-1.7", {"i": d.names[i], "l": l, "trial": trial}, lhs, rhs))
            # omega image: [b_{il}, z] = tau (delta_{i,l}(z) K_i^l - K_i^-l delta^{i,l}(z))
            b = ua.b_gen(i, l)
            zz = up.embed(z)
            lhs2 = b * zz - zz * b
            rhs2 = (
                up.embed(up.delta_small(i, l, "lower", z)) * ua.K(i, l)
                - ua.K(i, -l) * up.embed(up.delta_small(i, l, "upper", z))
            ).scale(tau)
            out.append(_ucheck("eq-1.8", {"i": d.names[i], "l": l, "trial": trial}, lhs2, rhs2))
    return out


# ---------------------------------------------------------------------------
# section 2: normal-form identities and braid relations on U


def _f_heights(d, i, j, n, m):
    """Height of the positive part of F_{n,m,e}."""
    return m + n * (1 if d.is_real(j) else height(d.alpha(j, n)) // max(n, 1))


def check_lemma_2_1(engine, rng):
    ua = engine.ua
    d = engine.datum
    cfg = engine.config
    out = []
    for (i, j) in _real_pairs(d):
        si = d.s[i]
        beta = -d.a[i][j]
        for n in range(0, cfg.max_n + 1):
            if not d.is_real(j) and n > d.max_l[j]:
                continue
            nh = n if d.is_real(j) else n  # degree height of the middle
            for m in range(0, cfg.max_m + 1):
                if m + 1 + nh + 1 > cfg.window:
                    continue
                for e in (1, -1):
                    params = {"i": d.names[i], "j": d.names[j], "n": n, "m": m, "e": e}
                    F = ua.family("F", i, j, n, m, e)
                    ai = ua.a_gen(i)
                    lhs = (ai * F).scale(-Scalar.q_power(e * si * (beta * n - 2 * m))) + F * ai
                    rhs = ua.family("F", i, j, n, m + 1, e).scale(q_int(m + 1, si))
                    out.append(_ucheck("lemma-2.1-i", params, lhs, rhs))
                    Bi = ua.B(i)
                    lhs3 = (Bi * F).scale(Scalar.from_int(-1)) + F * Bi
                    rhs3 = (ua.K(i, -e) * ua.family("F", i, j, n, m - 1, e)).scale(
                        q_binom(beta * n - m + 1, 1, si)
                    )
                    out.append(_ucheck("lemma-2.1-iii", params, lhs3, rhs3))
                    for p in range(0, cfg.max_p + 1):
                        if m + p + nh + 1 > cfg.window:
                            continue
                        params_p = dict(params, p=p)
                        lhs2 = ua.a_divided(i, p) * F
                        rhs2 = ua.zero_elem()
                        for pp in range(0, p + 1):
                            c = Scalar.q_power(e * si * (2 * p * m - beta * p * n + p * pp - pp))
                            c = c * q_binom(m + pp, pp, si)
                            if pp % 2:
                                c = -c
                            rhs2 = rhs2 + (
                                ua.family("F", i, j, n, m + pp, e) * ua.a_divided(i, p - pp)
                            ).scale(c)
                        out.append(_ucheck("lemma-2.1-ii", params_p, lhs2, rhs2))
                        lhs4 = ua.B_divided(i, p) * F
                        rhs4 = ua.zero_elem()
                        for pp in range(0, p + 1):
                            c = Scalar.q_power(-e * si * (p * pp - pp)) * q_binom(
                                beta * n - m + pp, pp, si
                            )
                            if pp % 2:
                                c = -c
                            rhs4 = rhs4 + (
                                ua.K(i, -e * pp)
                                * ua.family("F", i, j, n, m - pp, e)
                                * ua.B_divided(i, p - pp)
                            ).scale(c)
                        out.append(_ucheck("lemma-2.1-iv", params_p, lhs4, rhs4))
    return out


def check_lemma_2_2(engine, rng):
    ua = engine.ua
    d = engine.datum
    cfg = engine.config
    out = []
    for (i, j) in _real_pairs(d):
        beta = -d.a[i][j]
        if d.is_real(j):
            sj = d.s[j]
            denom = (Scalar.q_power(sj) - Scalar.q_power(-sj)).inverse()
            for n in range(1, cfg.max_n + 1):
                m = 1 + beta * n
                if m + n + 1 > cfg.window:
                    continue
                for e in (1, -1):
                    params = {"i": d.names[i], "j": d.names[j], "n": n, "m": m, "e": e}
                    F = ua.family("F", i, j, n, m, e)
                    Bj = ua.B(j)
                    lhs = Bj * F - F * Bj
                    rhs = (ua.K(j, -1) * ua.family("F", i, j, n - 1, m, 1)).scale(
                        Scalar.q_power(sj * (n - 1)) * denom
                    ) - (ua.K(j, 1) * ua.family("F", i, j, n - 1, m, -1)).scale(
                        Scalar.q_power(sj * (1 - n)) * denom
                    )
                    out.append(_ucheck("lemma-2.2-i", params, lhs, rhs))
        else:
            for n in range(1, min(cfg.max_n, d.max_l[j]) + 1):
                m = 1 + beta * n
                if m + n + n > cfg.window:
                    continue
                for l in _levels(d, j, cfg.max_level):
                    for e in (1, -1):
                        params = {
                            "i": d.names[i], "j": d.names[j], "n": n, "l": l, "m": m, "e": e,
                        }
                        F = ua.family("F", i, j, n, m, e)
                        bjl = ua.b_gen(j, l)
                        out.append(
                            _ucheck("lemma-2.2-ii", params, bjl * F - F * bjl, ua.zero_elem())
                        )
    return out


def check_prop_2_4_iii(engine, rng):
    ua = engine.ua
    d = engine.datum
    cfg = engine.config
    out = []
    for (i, j) in _real_pairs(d):
        beta = -d.a[i][j]
        for n in range(0, cfg.max_n + 1):
            if not d.is_real(j) and n > d.max_l[j]:
                continue
            for m in range(0, min(cfg.max_m, beta * n + 1) + 1):
                if beta * n + n + 1 > cfg.window or m + n + 1 > cfg.window:
                    continue
                for e in (1, -1):
                    params = {"i": d.names[i], "j": d.names[j], "n": n, "m": m, "e": e}
                    lhs1 = ua.symmetry(LP, i, e, ua.family("Fp", i, j, n, m, e))
                    rhs1 = ua.family("F", i, j, n, beta * n - m, e)
                    out.append(_ucheck("prop-2.4-iii-Lp", params, lhs1, rhs1))
                    lhs2 = ua.symmetry(LPP, i, -e, ua.family("F", i, j, n, m, e))
                    rhs2 = ua.family("Fp", i, j, n, beta * n - m, e)
                    out.append(_ucheck("prop-2.4-iii-Lpp", params, lhs2, rhs2))
    return out


def check_eq_2_4(engine, rng):
    ua = engine.ua
    d = engine.datum
    out = []
    for i in d.real:
        si = d.s[i]
        cases = [("a", ua.a_gen(j, l)) for (j, l) in d.generators]
        cases += [("b", ua.b_gen(j, l)) for (j, l) in d.generators]
        for trial in range(2):
            w = _rand_word(engine, rng, 3)
            if w:
                cases.append(("w", ua.a_word(w)))
        for tag, u in cases:
            try:
                n = u.k_weight(i)
            except Exception:
                continue
            if u.is_zero():
                continue
            for e in (1, -1):
                lhs = ua.symmetry(LPP, i, e, u)
                rhs = ua.symmetry(LP, i, e, u).scale(Scalar.q_power(e * si * n))
                if n % 2:
                    rhs = -rhs
                out.append(
                    _ucheck("eq-2.4", {"i": d.names[i], "case": tag, "e": e, "n": n}, lhs, rhs)
                )
    return out


def check_intertwinings(engine, rng):
    ua = engine.ua
    d = engine.datum
    out = []
    gens = [("a", lab) for lab in d.generators] + [("b", lab) for lab in d.generators]
    for i in d.real:
        for e in (1, -1):
            ok_v = True
            ok_s = True
            for kind, (j, l) in gens:
                g = ua.a_gen(j, l) if kind == "a" else ua.b_gen(j, l)
                varpi = lambda u: ua.involution("varpi", u, i=i)
                star = lambda u: ua.involution("star", u)
                if varpi(ua.symmetry(LP, i, e, g)) != ua.symmetry(LPP, i, e, varpi(g)):
                    ok_v = False
                if star(ua.symmetry(LP, i, e, g)) != ua.symmetry(LPP, i, -e, star(g)):
                    ok_s = False
            hgen = ua.q_h(d.coroot_h((i + 1) % d.n, 1))
            if ua.involution("varpi", ua.symmetry(LP, i, e, hgen), i=i) != ua.symmetry(
                LPP, i, e, ua.involution("varpi", hgen, i=i)
            ):
                ok_v = False
            out.append(_report("intertwining-varpi", {"i": d.names[i], "e": e}, ok_v))
            out.append(_report("intertwining-star", {"i": d.names[i], "e": e}, ok_s))
    return out


def check_serre_in_u(engine, rng):
    ua = engine.ua
    d = engine.datum
    out = []
    for (i, j) in _real_pairs(d):
        for l in _levels(d, j, engine.config.max_level):
            m = 1 - l * d.a[i][j]
            if m + l + 1 > engine.config.window:
                continue
            el = ua.alg.serre_element(i, j, l, m, c=(l,) if not d.is_real(j) else None)
            coords = ua.coords_of_free(el)
            out.append(
                _report(
                    "serre-in-u",
                    {"i": d.names[i], "j": d.names[j], "l": l},
                    not coords,
                )
            )
    return out


def check_braid_u(engine, rng):
    ua = engine.ua
    d = engine.datum
    out = []
    done = set()
    for i in d.real:
        for j in d.real:
            if i >= j or (i, j) in done:
                continue
            done.add((i, j))
            m_ij = d.braid_order(i, j)
            if m_ij is None:
                continue
            word1 = tuple((i, j)[k % 2] for k in range(m_ij))
            word2 = tuple((j, i)[k % 2] for k in range(m_ij))
            gens = [ua.a_gen(*lab) for lab in d.generators]
            gens += [ua.b_gen(*lab) for lab in d.generators]
            gens += [ua.q_h(d.coroot_h(t, 1)) for t in range(d.n)]
            gens += [ua.q_h(d.coroot_d(t, 1)) for t in range(d.n)]
            for e in (1, -1):
                ok = True
                detail = ""
                for g in gens:
                    try:
                        lhs = ua.braid_apply(LPP, word1, e, g)
                        rhs = ua.braid_apply(LPP, word2, e, g)
                    except BudgetError as exc:
                        out.append(
                            _report(
                                "thm-2.6-u",
                                {"i": d.names[i], "j": d.names[j], "e": e, "m_ij": m_ij},
                                None,
                                detail=str(exc),
                            )
                        )
                        ok = None
                        break
                    if lhs != rhs:
                        ok = False
                        detail = "generator image mismatch"
                        break
                if ok is not None:
                    out.append(
                        _report(
                            "thm-2.6-u",
                            {"i": d.names[i], "j": d.names[j], "e": e, "m_ij": m_ij},
                            ok,
                            detail=detail or f"{len(gens)} generators",
                        )
                    )
    return out


def check_braid_positivity(engine, rng):
    # lemma 2.8 and corollary 2.9(ii): braid images of positive generators
    # stay positive along length-increasing reduced words
    ua = engine.ua
    d = engine.datum
    out = []
    words = [()]
    for a in d.real:
        words.append((a,))
        for b in d.real:
            if d.is_reduced((a, b)):
                words.append((a, b))
    for w in words:
        for i in d.real:
            if not d.is_reduced(w + (i,)):
                continue
            for e in (1, -1):
                try:
                    img = ua.braid_apply(LPP, w, e, ua.a_gen(i))
                except BudgetError:
                    continue
                out.append(
                    _report(
                        "lemma-2.8",
                        {"word": [d.names[t] for t in w], "i": d.names[i], "e": e},
                        img.is_positive(),
                    )
                )
        for j in d.imaginary:
            for l in _levels(d, j, engine.config.max_level):
                for e in (1, -1):
                    try:
                        img = ua.braid_apply(LPP, w, e, ua.a_gen(j, l))
                    except BudgetError:
                        continue
                    out.append(
                        _report(
                            "cor-2.9-ii",
                            {"word": [d.names[t] for t in w], "j": d.names[j], "l": l, "e": e},
                            img.is_positive(),
                        )
                    )
    return out


# ---------------------------------------------------------------------------
# section 3: derivations, projections, the invariant form


def _jl_pairs(engine):
    d = engine.datum
    out = []
    for (i, j) in _real_pairs(d):
        for l in _levels(d, j, engine.config.max_level):
            out.append((i, j, l))
    return out


def check_eq_3_1(engine, rng):
    up = engine.uplus
    d = engine.datum
    out = []
    for (i, j, l) in _jl_pairs(engine):
        si = d.s[i]
        lbeta = -l * d.a[i][j]
        for m in range(0, lbeta + 1):
            if m + l + m > engine.config.window:
                continue
            f = up.f_family(i, (j, l), m, "f")
            got = up.rho(f)
            expect = {}
            for w, c in f.terms.items():
                expect[((), w)] = expect.get(((), w), ZERO) + c
            for t in range(0, m + 1):
                coeff = Scalar.q_power(si * t * (m - t))
                for h in range(0, m - t):
                    coeff = coeff * (ONE - Scalar.q_power(si * (2 * m - 2 * h - 2 * lbeta - 2)))
                if coeff.is_zero():
                    continue
                ft = up.f_family(i, (j, l), t, "f")
                adiv = up.a_divided(i, m - t)
                for wl, cl in ft.terms.items():
                    for wr, cr in adiv.terms.items():
                        key = (wl, wr)
                        acc = expect.get(key, ZERO) + coeff * cl * cr
                        if acc.cn:
                            expect[key] = acc
                        else:
                            expect.pop(key, None)
            expect = {k: v for k, v in expect.items() if v.cn}
            ok = got == expect
            out.append(
                _report(
                    "eq-3.1",
                    {"i": d.names[i], "j": d.names[j], "l": l, "m": m},
                    ok,
                )
            )
            # the *-mirror statement for f'_m
            fp = up.f_family(i, (j, l), m, "fp")
            got2 = up.rho(fp)
            expect2 = {}
            for w, c in fp.terms.items():
                expect2[(w, ())] = expect2.get((w, ()), ZERO) + c
            for t in range(0, m + 1):
                coeff = Scalar.q_power(si * t * (m - t))
                for h in range(0, m - t):
                    coeff = coeff * (ONE - Scalar.q_power(si * (2 * m - 2 * h - 2 * lbeta - 2)))
                if coeff.is_zero():
                    continue
                ft = up.f_family(i, (j, l), t, "fp")
                adiv = up.a_divided(i, m - t)
                for wl, cl in adiv.terms.items():
                    for wr, cr in ft.terms.items():
                        key = (wl, wr)
                        acc = expect2.get(key, ZERO) + coeff * cl * cr
                        if acc.cn:
                            expect2[key] = acc
                        else:
                            expect2.pop(key, None)
            expect2 = {k: v for k, v in expect2.items() if v.cn}
            out.append(
                _report(
                    "eq-3.1-star",
                    {"i": d.names[i], "j": d.names[j], "l": l, "m": m},
                    got2 == expect2,
                )
            )
    return out


def check_eq_3_2(engine, rng):
    up = engine.uplus
    d = engine.datum
    out = []
    for (i, j, l) in _jl_pairs(engine):
        si = d.s[i]
        lbeta = -l * d.a[i][j]
        for m in range(0, lbeta + 1):
            if m + l > engine.config.window:
                continue
            f = up.f_family(i, (j, l), m, "f")
            params = {"i": d.names[i], "j": d.names[j], "l": l, "m": m}
            coeff = ONE
            for h in range(1, m + 1):
                coeff = coeff * (ONE - Scalar.q_power(-2 * si * (lbeta + 1 - h)))
            out.append(
                _pcheck(
                    "eq-3.2-jl",
                    params,
                    up.delta_small(j, l, "upper", f),
                    up.a_divided(i, m).scale(coeff),
                )
            )
            out.append(
                _report(
                    "eq-3.2-keri",
                    params,
                    up.delta_small(i, 1, "upper", f).is_zero(),
                )
            )
            if m >= 1:
                c2 = (ONE - Scalar.q_power(si * (2 * m - 2 * lbeta - 2))) * Scalar.q_power(
                    si * (m - 1)
                )
                out.append(
                    _pcheck(
                        "eq-3.2-deltai",
                        params,
                        up.delta_small(i, 1, "lower", f),
                        up.f_family(i, (j, l), m - 1, "f").scale(c2),
                    )
                )
    return out


def check_eq_3_4(engine, rng):
    up = engine.uplus
    d = engine.datum
    out = []
    for i in d.real:
        si = d.s[i]
        for trial in range(4):
            x = _rand_positive(engine, rng, 4)
            for n in (2, 3):
                for side in ("lower", "upper"):
                    it = x
                    for _ in range(n):
                        it = up.delta_small(i, 1, side, it)
                    ex = up.delta_n(i, n, side, x).scale(Scalar.q_power(si * n * (n - 1) // 2))
                    out.append(
                        _pcheck(
                            "eq-3.4",
                            {"i": d.names[i], "n": n, "side": side, "trial": trial},
                            it,
                            ex,
                        )
                    )
    return out


def check_lemma_3_1(engine, rng):
    from .linalg import rank

    up = engine.uplus
    ua = engine.ua
    d = engine.datum
    out = []

    def kernel_vectors(i, side, beta):
        if not any(beta):
            return [{(): ONE}]
        basis = ua.basis(beta)
        if not basis.words:
            return []
        lu, windex, ker, dim = up._proj_solver(i, side, beta)
        if lu is None:
            return [{w: ONE} for w in basis.words]
        return [{basis.words[k]: c for k, c in enumerate(kv) if c.cn} for kv in ker]

    max_h = min(6, engine.config.window)
    betas = [b for b in _all_degrees(d, max_h) if any(b)]
    for i in d.real:
        for beta in betas:
            total = ua.dim(beta)
            windex = {w: k for k, w in enumerate(ua.basis(beta).words)}
            for side, mult in (("P", "left"), ("Pprime", "right")):
                stacked = []
                per_t = 0
                for t in range(0, beta[i] + 1):
                    sub = root_sub(beta, d.alpha(i, t)) if t else beta
                    kvecs = kernel_vectors(i, side, sub)
                    imgs = []
                    for kv in kvecs:
                        vec = [ZERO] * total
                        for w, c in kv.items():
                            word = ((i, 1),) * t + w if mult == "left" else w + ((i, 1),) * t
                            for pw, cc in ua.reduce_word(word).items():
                                k = windex[pw]
                                vec[k] = vec[k] + c * cc
                        imgs.append(vec)
                    per_t += rank(imgs)
                    stacked.extend(imgs)
                ok = rank(stacked) == total == per_t
                out.append(
                    _report(
                        "lemma-3.1",
                        {"i": d.names[i], "beta": list(beta), "side": side},
                        ok,
                        detail=f"dim {total}",
                    )
                )
    return out


def _all_degrees(d, max_h):
    out = set()

    def go(beta):
        if beta in out:
            return
        out.add(beta)
        for (i, l) in d.generators:
            if l + height(beta) <= max_h:
                go(root_add(beta, d.alpha(i, l)))

    go(d.zero_root())
    return sorted(out)


def check_lemma_3_2(engine, rng):
    up = engine.uplus
    ua = engine.ua
    d = engine.datum
    out = []
    for (i, j, l) in _jl_pairs(engine):
        si = d.s[i]
        lbeta = -l * d.a[i][j]
        tau = engine.prims.generator(j, l).tau
        for m in range(0, lbeta + 1):
            if m + l > engine.config.window:
                continue
            params = {"i": d.names[i], "j": d.names[j], "l": l, "m": m}
            f = up.f_family(i, (j, l), m, "f")
            g = up.f_family(i, (j, l), m, "g")
            out.append(
                _scheck("gf-binomial", params, up.form_pm(g, f), tau * q_binom(lbeta, m, si))
            )
            fimg = ua.symmetry(LPP, i, 1, up.embed(f))
            gimg = ua.symmetry(LPP, i, 1, g)
            lhs = up.form_pm(g, f)
            rhs = up.form_pm(gimg, up.extract(fimg))
            out.append(_scheck("lemma-3.2", params, lhs, rhs))
    # the quoted pairing of divided powers, factorial-normalized (the paper's
    # [m]^-1 display disagrees with its own binomial conclusion from m = 3 on)
    for i in engine.datum.real:
        si = engine.datum.s[i]
        for m in range(1, 5):
            got = up.form_pm(ua.B_divided(i, m), up.a_divided(i, m))
            expect = (
                Scalar.q_power(si * m * (m - 1) // 2)
                * ((Scalar.q_power(-si) - Scalar.q_power(si)) ** m).inverse()
                * q_fact(m, si).inverse()
            )
            out.append(_scheck("bdiv-adiv-pairing", {"i": engine.datum.names[i], "m": m}, got, expect))
    return out


def check_lemma_3_3(engine, rng):
    up = engine.uplus
    ua = engine.ua
    d = engine.datum
    out = []
    for (i, j, l) in _jl_pairs(engine):
        lbeta = -l * d.a[i][j]
        for m in range(0, lbeta + 1):
            for trial in range(2):
                wy = _rand_word(engine, rng, 2)
                gamma = ua.word_degree(wy)
                targetdeg = root_add(root_add(d.alpha(j, l), d.alpha(i, m)), gamma)
                if height(targetdeg) > engine.config.window:
                    continue
                x = _rand_homogeneous(engine, rng, targetdeg)
                if x.is_zero():
                    continue
                y = ua.b_word(wy)
                params = {
                    "i": d.names[i], "j": d.names[j], "l": l, "m": m, "trial": trial,
                }
                g = up.f_family(i, (j, l), m, "g")
                f = up.f_family(i, (j, l), m, "f")
                lhs = up.form_pm(g * y, x)
                rhs = up.form_pm(g, f) * up.form_pm(y, up.delta_mixed(i, (j, l), m, "jl-first", x))
                out.append(_scheck("lemma-3.3-i", params, lhs, rhs))
                gp = up.f_family(i, (j, l), m, "gp")
                fp = up.f_family(i, (j, l), m, "fp")
                lhs2 = up.form_pm(gp * y, x)
                rhs2 = up.form_pm(gp, fp) * up.form_pm(
                    y, up.delta_mixed(i, (j, l), m, "i-first", x)
                )
                out.append(_scheck("lemma-3.3-ii", params, lhs2, rhs2))
    return out


def _rand_homogeneous(engine, rng, beta):
    """Random element of one degree slice (possibly zero if empty)."""
    words = engine.ua.basis(beta).words
    if not words:
        return engine.uplus.zero()
    terms = {}
    for w in words:
        c = rng.randint(-2, 2)
        if c:
            terms[w] = Scalar.from_int(c)
    if not terms:
        terms[words[0]] = ONE
    return UPlusElem(engine.ua, terms)


def check_gamma_constant(engine, rng):
    up = engine.uplus
    d = engine.datum
    out = []
    for (i, j, l) in _jl_pairs(engine):
        si = d.s[i]
        lbeta = -l * d.a[i][j]
        for m in range(0, lbeta + 1):
            f = up.f_family(i, (j, l), m, "f")
            fp = up.f_family(i, (j, l), m, "fp")
            for n in range(0, lbeta + 1):
                params = {"i": d.names[i], "j": d.names[j], "l": l, "m": m, "n": n}
                got = up.delta_mixed(i, (j, l), n, "jl-first", f)
                if n > m:
                    expect = up.zero()
                else:
                    gamma = Scalar.q_power(si * n * (m - n))
                    for h in range(0, m - n):
                        gamma = gamma * (
                            ONE - Scalar.q_power(si * (2 * m - 2 * h - 2 * lbeta - 2))
                        )
                    expect = up.a_divided(i, m - n).scale(gamma)
                out.append(_pcheck("gamma-mn", params, got, expect))
                got2 = up.delta_mixed(i, (j, l), n, "i-first", fp)
                expect2 = up.one() if n == m else up.zero()
                out.append(_pcheck("delta-ni-jl-fprime", params, got2, expect2))
    return out


def check_eq_3_6_to_3_8(engine, rng):
    up = engine.uplus
    d = engine.datum
    ua = engine.ua
    out = []
    for (i, j, l) in _jl_pairs(engine):
        lbeta = -l * d.a[i][j]
        alpha_i = d.alpha(i)
        alpha_jl = d.alpha(j, l)
        for trial in range(2):
            wx = _rand_word(engine, rng, 2)
            wx2 = _rand_word(engine, rng, 2)
            x = up.from_word(wx)
            x2 = up.from_word(wx2)
            if x.is_zero() or x2.is_zero():
                continue
            mu = ua.word_degree(wx)
            for n in range(0, lbeta + 1):
                if height(mu) + height(ua.word_degree(wx2)) + l + n > engine.config.window:
                    continue
                params = {
                    "i": d.names[i], "j": d.names[j], "l": l, "n": n, "trial": trial,
                }
                # eq (3.6)
                lhs = up.delta_mixed(i, (j, l), n, "jl-first", x * x2)
                rhs = up.delta_mixed(i, (j, l), n, "jl-first", x) * x2
                e1 = d.root_pairing(mu, root_add(alpha_jl, d.alpha(i, n)))
                rhs = rhs + (x * up.delta_mixed(i, (j, l), n, "jl-first", x2)).scale(
                    Scalar.q_power(e1)
                )
                for t in range(0, n):
                    w1 = root_sub(root_sub(mu, alpha_jl), d.alpha(i, t))
                    e2 = d.root_pairing(w1, d.alpha(i, n - t))
                    c = Scalar.q_power(e2) * q_binom(n, t, d.s[i])
                    rhs = rhs + (
                        up.delta_mixed(i, (j, l), t, "jl-first", x)
                        * up.delta_n(i, n - t, "upper", x2)
                    ).scale(c)
                out.append(_pcheck("eq-3.6", params, lhs, rhs))
                # eq (3.7)
                lhs = up.delta_mixed(i, (j, l), n, "i-first", x * x2)
                rhs = up.delta_mixed(i, (j, l), n, "i-first", x) * x2
                rhs = rhs + (x * up.delta_mixed(i, (j, l), n, "i-first", x2)).scale(
                    Scalar.q_power(e1)
                )
                for t in range(0, n):
                    w1 = root_sub(mu, d.alpha(i, n - t))
                    e2 = d.root_pairing(w1, root_add(d.alpha(i, t), alpha_jl))
                    c = Scalar.q_power(e2) * q_binom(n, t, d.s[i])
                    rhs = rhs + (
                        up.delta_n(i, n - t, "upper", x)
                        * up.delta_mixed(i, (j, l), t, "i-first", x2)
                    ).scale(c)
                out.append(_pcheck("eq-3.7", params, lhs, rhs))
        # eq (3.8): x' in the flank subalgebra kills the correction sum
        for m1 in range(0, lbeta + 1):
            xp = up.f_family(i, (j, l), m1, "f")
            wx = _rand_word(engine, rng, 2)
            x = up.from_word(wx)
            if x.is_zero() or xp.is_zero():
                continue
            mu = ua.word_degree(wx)
            for n in range(0, lbeta + 1):
                if height(mu) + l + m1 + l + n > engine.config.window:
                    continue
                params = {"i": d.names[i], "j": d.names[j], "l": l, "n": n, "m": m1}
                lhs = up.delta_mixed(i, (j, l), n, "jl-first", x * xp)
                e1 = d.root_pairing(mu, root_add(alpha_jl, d.alpha(i, n)))
                rhs = up.delta_mixed(i, (j, l), n, "jl-first", x) * xp + (
                    x * up.delta_mixed(i, (j, l), n, "jl-first", xp)
                ).scale(Scalar.q_power(e1))
                out.append(_pcheck("eq-3.8", params, lhs, rhs))
    return out


def check_lemma_3_4(engine, rng):
    up = engine.uplus
    ua = engine.ua
    d = engine.datum
    out = []
    for (i, j, l) in _jl_pairs(engine):
        si = d.s[i]
        lbeta = -l * d.a[i][j]
        fams = [(m,) for m in range(0, lbeta + 1)] + [
            (m1, m2) for m1 in range(0, lbeta + 1) for m2 in range(0, lbeta + 1)
        ]
        for ms in fams:
            x = up.one()
            hgt = 0
            for m in ms:
                x = x * up.f_family(i, (j, l), m, "f")
                hgt += l + m
            if x.is_zero():
                continue
            mu = x.degree() if not x.is_zero() else None
            for n in range(1, engine.config.max_n + 1):
                if hgt + n > engine.config.window:
                    continue
                params = {
                    "i": d.names[i], "j": d.names[j], "l": l, "ms": list(ms), "n": n,
                }
                an = up.from_word(((i, 1),) * n)
                lhs = up.project(i, "P", x * an)
                img = ua.symmetry(LPP, i, 1, up.embed(x))
                t = up.extract(img)
                for _ in range(n):
                    t = up.delta_small(i, 1, "upper", t)
                back = ua.symmetry(LP, i, -1, up.embed(t))
                coeff = (
                    Scalar.q_power(n * d.root_pairing(mu, d.alpha(i)))
                    * Scalar.q_power(si * n * (n + 1))
                    * (((Scalar.q_power(si) - Scalar.q_power(-si)) ** n).inverse())
                )
                rhs = up.extract(back).scale(coeff)
                out.append(_pcheck("lemma-3.4", params, lhs, rhs))
    return out


def check_thm_3_6(engine, rng):
    up = engine.uplus
    ua = engine.ua
    d = engine.datum
    out = []
    for (i, j, l) in _jl_pairs(engine):
        lbeta = -l * d.a[i][j]
        singles = list(range(0, lbeta + 1))
        xfams = [(m,) for m in singles] + [(m1, m2) for m1 in singles for m2 in singles]
        for xs in xfams:
            x = up.one()
            for m in xs:
                x = x * up.f_family(i, (j, l), m, "f")
            if x.is_zero() or sum(l + m for m in xs) > engine.config.window - 2:
                continue
            for ys in xfams:
                if sum(l + m for m in ys) != sum(l + m for m in xs):
                    continue
                y = ua.one()
                for m in ys:
                    y = y * up.f_family(i, (j, l), m, "g")
                if y.is_zero():
                    continue
                params = {"i": d.names[i], "j": d.names[j], "l": l, "xs": list(xs), "ys": list(ys)}
                lhs = up.form_pm(y, x)
                ximg = up.extract(ua.symmetry(LPP, i, 1, up.embed(x)))
                yimg = ua.symmetry(LPP, i, 1, y)
                rhs = up.form_pm(yimg, ximg)
                out.append(_scheck("thm-3.6", params, lhs, rhs))
    return out


def check_cor_3_7(engine, rng):
    up = engine.uplus
    ua = engine.ua
    d = engine.datum
    out = []
    for (i, j, l) in _jl_pairs(engine):
        lbeta = -l * d.a[i][j]
        xfams = [(m,) for m in range(0, lbeta + 1)]
        xfams += [(m1, m2) for m1 in range(0, lbeta + 1) for m2 in range(0, lbeta + 1)]
        for xs in xfams:
            x = up.one()
            for m in xs:
                x = x * up.f_family(i, (j, l), m, "f")
            if x.is_zero() or sum(l + m for m in xs) > engine.config.window - 1:
                continue
            params = {"i": d.names[i], "j": d.names[j], "l": l, "xs": list(xs)}
            ximg = up.extract(ua.symmetry(LPP, i, 1, up.embed(x)))
            lhs = {}
            for (pl, pr), c in up.rho(ximg).items():
                proj = up.project(i, "Pprime", UPlusElem(ua, {pl: ONE}))
                for w, cc in proj.terms.items():
                    key = (((), d.zero_coroot(), w), ((), d.zero_coroot(), pr))
                    acc = lhs.get(key, ZERO) + c * cc
                    if acc.cn:
                        lhs[key] = acc
                    else:
                        lhs.pop(key, None)
            # the right side applies L'' leg-wise: individual left legs need
            # not stay positive, only the sum does, so work in U (x) U terms
            rhs = {}
            left_img_cache = {}
            for (pl, pr), c in up.rho(x).items():
                proj = up.project(i, "P", UPlusElem(ua, {pr: ONE}))
                if proj.is_zero():
                    continue
                left_img = left_img_cache.get(pl)
                if left_img is None:
                    left_img = ua.symmetry(LPP, i, 1, up.embed(UPlusElem(ua, {pl: ONE})))
                    left_img_cache[pl] = left_img
                right_img = ua.symmetry(LPP, i, 1, up.embed(proj))
                for kl, cl in left_img.terms.items():
                    for kr, cr in right_img.terms.items():
                        key = (kl, kr)
                        acc = rhs.get(key, ZERO) + c * cl * cr
                        if acc.cn:
                            rhs[key] = acc
                        else:
                            rhs.pop(key, None)
            ok = lhs == rhs
            out.append(_report("cor-3.7", params, ok))
    return out


def check_projection_idempotence(engine, rng):
    up = engine.uplus
    d = engine.datum
    out = []
    for i in d.real:
        ok = True
        for _ in range(8):
            w1 = _rand_word(engine, rng, 2)
            w2 = _rand_word(engine, rng, 2)
            x = up.from_word(w1)
            x2 = up.from_word(w2)
            if up.project(i, "P", x * x2) != up.project(i, "P", up.project(i, "P", x) * x2):
                ok = False
        out.append(_report("projection-idempotence", {"i": d.names[i]}, ok))
    return out


# ---------------------------------------------------------------------------
# module-side checks


def check_braid_module(engine, rng, lam=None, depth=None):
    d = engine.datum
    out = []
    for i in d.real:
        for j in d.real:
            if i >= j or d.braid_order(i, j) is None:
                continue
            m_ij = d.braid_order(i, j)
            weights = [lam] if lam is not None else [d.fundamental_weight(i)]
            for w in weights:
                dep = depth or max(engine.config.depth, m_ij + 3)
                M = engine.module(w, dep, IRREDUCIBLE)
                for e in (1, -1):
                    out.append(braid_verify_module(i, j, e, M))
    return out


def check_category_o(engine, rng, module: HWModule | None = None):
    d = engine.datum
    out = []
    modules = [module] if module is not None else []
    if not modules:
        lam = d.zero_weight()
        for i in range(d.n):
            lam = lam + d.fundamental_weight(i)
        modules = [engine.module(lam, engine.config.depth, IRREDUCIBLE)]
    for M in modules:
        # weight-space decomposition: q^h acts by the weight on each space
        ok_wt = True
        for beta in M.spaces:
            for k in range(M.dimension(beta)):
                v = M.basis_vector(beta, k)
                h = d.coroot_h(min(1, d.n - 1), 1) + d.coroot_d(0, 1)
                mu = M.space(beta).weight
                if M.act_h(h, v) != v.scale(Scalar.q_power(mu.eval_coroot(h))):
                    ok_wt = False
        out.append(_report("category-O-weights", {"lam": list(M.lam.h)}, ok_wt))
        ok_nil = True
        inconclusive = 0
        for beta in M.spaces:
            for k in range(M.dimension(beta)):
                v = M.basis_vector(beta, k)
                for i in d.real:
                    try:
                        M.nilpotency_degree(i, v, op="raise")
                        M.nilpotency_degree(i, v, op="lower")
                    except InconclusiveError:
                        inconclusive += 1
        out.append(
            _report(
                "category-O-nilpotency",
                {"lam": list(M.lam.h)},
                ok_nil,
                detail=f"{inconclusive} lowering searches hit the depth bound",
            )
        )
    return out


# ---------------------------------------------------------------------------
# registry


REGISTRY = {
    "prop-1.1-symmetry": ("1", check_form_symmetry),
    "rho-coassociativity": ("1", check_coassociativity),
    "rho-morphism": ("1", check_rho_morphism),
    "eq-1.1-radical": ("1", check_serre_radical),
    "commutator-radical": ("1", check_commutator_radical),
    "prop-1.4": ("1", check_primitive_properties),
    "nondegeneracy-imaginary": ("1", check_nondegeneracy_imaginary),
    "eq-1.7": ("1", check_eq_1_7),
    "lemma-2.1": ("2", check_lemma_2_1),
    "lemma-2.2": ("2", check_lemma_2_2),
    "prop-2.4-iii": ("2", check_prop_2_4_iii),
    "eq-2.4": ("2", check_eq_2_4),
    "intertwinings": ("2", check_intertwinings),
    "serre-in-u": ("2", check_serre_in_u),
    "thm-2.6-u": ("2", check_braid_u),
    "braid-positivity": ("2", check_braid_positivity),
    "eq-3.1": ("3", check_eq_3_1),
    "eq-3.2": ("3", check_eq_3_2),
    "eq-3.4": ("3", check_eq_3_4),
    "lemma-3.1": ("3", check_lemma_3_1),
    "lemma-3.2": ("3", check_lemma_3_2),
    "lemma-3.3": ("3", check_lemma_3_3),
    "gamma-mn": ("3", check_gamma_constant),
    "eq-3.6-3.8": ("3", check_eq_3_6_to_3_8),
    "lemma-3.4": ("3", check_lemma_3_4),
    "thm-3.6": ("3", check_thm_3_6),
    "cor-3.7": ("3", check_cor_3_7),
    "projection-idempotence": ("3", check_projection_idempotence),
    "thm-2.6-module": ("module", check_braid_module),
    "category-O": ("module", check_category_o),
}


def run_identities(engine, names=None, sections=None, seed=0):
    """Run registry entries, deterministically ordered by name."""
    import zlib

    out = []
    for name in sorted(REGISTRY):
        section, fn = REGISTRY[name]
        if names and name not in names:
            continue
        if sections and section not in sections:
            continue
        # per-entry rng derived stably from (seed, name): runs are
        # byte-reproducible regardless of selection order
        out.extend(fn(engine, random.Random(seed * 1000003 + zlib.crc32(name.encode()))))
    key = lambda r: (r["identity"], repr(sorted(r["params"].items())))
    return sorted(out, key=key)
