"""Counting invariants derived from exact character tables.

z counts defect-zero ordinary characters (the projective-simple count in
characteristic ell); Irr_0 counts characters of degree prime to ell, the
valid height-zero reading while v_ell(|G|) <= 1.  The verifiers package the
cyclic-Sylow counting chain, the method-of-little-groups bijection and
orbit-pair sums over dual groups into reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .chartable import character_table
from .errors import HypothesisFailed, NotAbelian, NotNormal, UnsupportedValuation
from .groupops import (
    abelian_decomposition,
    conjugacy_classes,
    normalizer,
    sylow,
)
from .groups import FiniteGroup, Subgroup, quotient_group
from .numutil import v_adic
from .reports import VerificationReport


@dataclass(frozen=True)
class DefectProfile:
    ell: int
    group_valuation: int
    degree_valuations: tuple
    defects: tuple

    @property
    def defect_zero_count(self) -> int:
        return sum(1 for d in self.defects if d == 0)


def defect_profile(G: FiniteGroup, ell: int) -> DefectProfile:
    table = character_table(G)
    v_g = v_adic(ell, G.order)
    vals = tuple(v_adic(ell, d) for d in table.degrees)
    defects = tuple(v_g - v for v in vals)
    assert all(d >= 0 for d in defects)
    return DefectProfile(ell, v_g, vals, defects)


def irr_count(G: FiniteGroup) -> int:
    return conjugacy_classes(G).count


def z_count(G: FiniteGroup, ell: int) -> int:
    """Number of characters chi with v_ell(chi(1)) = v_ell(|G|)."""
    return defect_profile(G, ell).defect_zero_count


def irr0_count(G: FiniteGroup, ell: int) -> int:
    """Number of characters of degree prime to ell; only defined while
    v_ell(|G|) <= 1 (larger valuations are rejected, not guessed)."""
    if v_adic(ell, G.order) >= 2:
        raise UnsupportedValuation(
            f"Irr_0 requested for v_{ell}(|{G.name}|) >= 2"
        )
    table = character_table(G)
    return sum(1 for d in table.degrees if d % ell)


def verify_thev(W: FiniteGroup, ell: int) -> VerificationReport:
    """The four-term counting chain for a group with cyclic Sylow ell-subgroup
    of order ell:  |Irr(W)| - z(kW) = |Irr(N_W(U))| = |Irr_0(N_W(U))| = |Irr_0(W)|.
    """
    report = VerificationReport(
        command="lemma-thev", inputs={"group": W.name, "ell": ell}
    )
    if v_adic(ell, W.order) != 1:
        raise HypothesisFailed(
            f"v_{ell}(|{W.name}|) = {v_adic(ell, W.order)} != 1"
        )
    U = sylow(W, ell)
    N = normalizer(W, U).as_group(name=f"N_{W.name}(U)")
    irr_w = irr_count(W)
    z_w = z_count(W, ell)
    irr_n = irr_count(N)
    irr0_n = irr0_count(N, ell)
    irr0_w = irr0_count(W, ell)
    report.set_integer("irr_W", irr_w)
    report.set_integer("z_W", z_w)
    report.set_integer("irr_NWU", irr_n)
    report.set_integer("irr0_NWU", irr0_n)
    report.set_integer("irr0_W", irr0_w)
    report.set_integer("normalizer_order", N.order)
    report.add_chain("cyclic-sylow-count-chain", [
        ("irr_W - z_W = irr_NWU", irr_w - z_w, irr_n),
        ("irr_NWU = irr0_NWU", irr_n, irr0_n),
        ("irr0_NWU = irr0_W", irr0_n, irr0_w),
    ])
    return report


# ---------------------------------------------------------------------------
# method of little groups

def _character_permutation(table, N_grp, conjugator, G):
    """Index permutation of Irr(N) induced by conjugation with `conjugator`."""
    data = table.classes
    reduced = table.reduced_values()
    row_index = {
        tuple(int(x) for x in reduced[c].reshape(-1)): c for c in range(table.count)
    }
    g_inv = G.inv(conjugator)
    class_perm = [
        data.class_of[G.op(G.op(g_inv, rep), conjugator)] for rep in data.reps
    ]
    out = []
    for c in range(table.count):
        permuted = reduced[c][class_perm]
        out.append(row_index[tuple(int(x) for x in permuted.reshape(-1))])
    return tuple(out)


def little_groups_count(G: FiniteGroup, N: Subgroup) -> VerificationReport:
    """Pairs (theta-orbit, beta in Irr(I_G(theta)/N)) against |Irr(G)|."""
    if N.parent is not G:
        raise NotNormal("subgroup does not belong to the given group")
    if not N.is_normal():
        raise NotNormal(f"{N.name} is not normal in {G.name}")
    report = VerificationReport(
        command="lemma-little",
        inputs={"group": G.name, "normal": N.name, "normal_order": N.order},
    )
    N_grp = N.as_group()
    table = character_table(N_grp)
    perms = {g: _character_permutation(table, N_grp, g, G) for g in G.elements}

    seen = set()
    orbit_reps = []
    for c in range(table.count):
        if c in seen:
            continue
        orbit = {c}
        frontier = [c]
        while frontier:
            nxt = []
            for x in frontier:
                for g in G.generators:
                    y = perms[g][x]
                    if y not in orbit:
                        orbit.add(y)
                        nxt.append(y)
            frontier = nxt
        seen |= orbit
        orbit_reps.append((c, len(orbit)))

    extension_ok = N_grp.is_abelian()
    total = 0
    for rep, orbit_size in orbit_reps:
        stab = [g for g in G.elements if perms[g][rep] == rep]
        I_grp = G.subgroup_from_elements(stab).as_group(name="inertia")
        N_in_I = I_grp.subgroup_from_elements(N.element_set)
        Q = quotient_group(I_grp, N_in_I)
        total += irr_count(Q)
        if extension_ok:
            trivial = (table.degrees[rep] == 1
                       and all(table.mults[rep, i, 0] == 1
                               for i in range(table.classes.count)))
            coprime = math.gcd(N.order, Q.order) == 1
            cyclic = any(Q.element_order(x) == Q.order for x in Q.elements)
            extension_ok = trivial or coprime or cyclic
    irr_g = irr_count(G)
    report.set_integer("pair_count", total)
    report.set_integer("irr_G", irr_g)
    report.set_integer("orbit_count", len(orbit_reps))
    if not extension_ok:
        report.flags.append("count-only: extension hypothesis not verified")
    else:
        report.flags.append("extension hypothesis verified")
    report.add_chain("little-groups", [("pair_count = irr_G", total, irr_g)])
    return report


# ---------------------------------------------------------------------------
# orbit pairs on dual groups

@dataclass(frozen=True)
class DualOrbitSummary:
    total: int
    orbit_sizes: tuple
    stabilizer_irr_counts: tuple


def dual_orbit_pairs_tuples(factors, gamma: FiniteGroup, act) -> DualOrbitSummary:
    """Sum over orbits of Irr(A) of |Irr(stabilizer)|.

    `factors` are the invariant factors of the abelian group A, `act(g, t)`
    is the action of gamma on coordinate tuples.  Characters are identified
    with dual tuples via the pairing <a, psi> = sum a_i psi_i m/f_i (mod m)
    and carry the inverse-transpose action.
    """
    factors = tuple(int(f) for f in factors)
    m = 1
    for f in factors:
        m = math.lcm(m, f)
    # sanity: the action must be a homomorphism on the generators
    basis = [tuple(1 if i == j else 0 for i in range(len(factors)))
             for j in range(len(factors))]
    for g in gamma.generators:
        for h in gamma.generators:
            gh = gamma.op(g, h)
            for b in basis:
                if act(gh, b) != act(g, act(h, b)):
                    raise NotAbelian("action maps are not a group action")

    def dual_act(g, psi):
        g_inv = gamma.inv(g)
        out = []
        for j, fj in enumerate(factors):
            pre = act(g_inv, basis[j])
            val = sum(p * q * (m // f) for p, q, f in zip(psi, pre, factors)) % m
            scale = m // fj
            if val % scale:
                raise NotAbelian("dual action is not well-defined")
            out.append((val // scale) % fj)
        return tuple(out)

    all_duals = [()]
    for f in factors:
        all_duals = [t + (r,) for t in all_duals for r in range(f)]
    unseen = set(all_duals)
    total = 0
    orbit_sizes = []
    stab_counts = []
    while unseen:
        psi = min(unseen)
        orbit = {psi}
        frontier = [psi]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gamma.generators:
                    y = dual_act(g, x)
                    if y not in orbit:
                        orbit.add(y)
                        nxt.append(y)
            frontier = nxt
        unseen -= orbit
        stab = [g for g in gamma.elements if dual_act(g, psi) == psi]
        stab_grp = gamma.subgroup_from_elements(stab).as_group()
        cnt = irr_count(stab_grp)
        total += cnt
        orbit_sizes.append(len(orbit))
        stab_counts.append(cnt)
    assert sum(orbit_sizes) == len(all_duals)
    return DualOrbitSummary(total, tuple(orbit_sizes), tuple(stab_counts))


def dual_orbit_pairs(A: FiniteGroup, gamma: FiniteGroup, action_maps) -> int:
    """char-level interface: A a materialized abelian group, `action_maps[g]`
    a callable A -> A for each element of gamma."""
    if not A.is_abelian():
        raise NotAbelian(f"{A.name} is not abelian")
    dec = abelian_decomposition(A)
    if not dec.invariants:
        return irr_count(gamma.subgroup_from_elements(gamma.elements).as_group())

    def act(g, t):
        x = dec.element_from_coords(t)
        return dec.coords[action_maps[g](x)]

    return dual_orbit_pairs_tuples(dec.invariants, gamma, act).total
