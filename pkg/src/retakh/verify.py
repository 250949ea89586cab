"""Named invariant checks run by ``retakh verify``.

Each check returns ``(passed, detail)``; an exception inside a check is a
failure, not a crash.  Library functions are looked up on their modules
at call time, so a patched formula is picked up by the suite.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Callable

from . import asymptotics, gf, paths
from .series import Series


@dataclass(frozen=True)
class Level:
    name: str
    max_semilength: int
    order: int
    gk_max: int
    gk_order: int
    leaf_order: int
    scans: bool


LEVELS = {
    "quick": Level("quick", max_semilength=10, order=60, gk_max=10, gk_order=60, leaf_order=30, scans=False),
    "full": Level("full", max_semilength=14, order=200, gk_max=50, gk_order=120, leaf_order=100, scans=True),
}


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


Check = Callable[[Level], "tuple[bool, str]"]


def _first_mismatch(pairs) -> str | None:
    for key, got, want in pairs:
        if got != want:
            return f"{key}: got {got}, expected {want}"
    return None


def _result(pairs, ok_detail: str) -> tuple[bool, str]:
    bad = _first_mismatch(pairs)
    return (bad is None, bad or ok_detail)


def check_motzkin_enumeration(lv: Level):
    total = gf.motzkin_series(lv.max_semilength + 1).shift(1)
    pairs = (
        (f"n={n}", sum(1 for _ in paths.enumerate_restricted(n)), total.coeff(n + 1))
        for n in range(lv.max_semilength + 1)
    )
    return _result(pairs, f"brute-force counts equal [z^(n+1)] zM for n <= {lv.max_semilength}")


def check_motzkin_closed_form(lv: Level):
    ok = gf.motzkin_series(lv.order) == gf.motzkin_closed_form(lv.order)
    return ok, f"fixed point vs square-root closed form at order {lv.order}"


def check_fg_identity(lv: Level):
    F, _ = gf.solve_fg(lv.order)
    ok = F == gf.motzkin_series(lv.order).shift(2)
    return ok, f"F == z^2 M at order {lv.order}"


def check_total_gf(lv: Level):
    ok = gf.total_gf(lv.order) == gf.motzkin_series(lv.order).shift(1)
    return ok, f"total GF == z M at order {lv.order}"


def check_substitution(lv: Level):
    N = lv.order
    v = gf.v_series(N)
    w = Series.z(N)
    pairs = [
        ("M == 1+v+v^2", (1 + w + w * w).compose(v), gf.motzkin_series(N)),
        ("v == zM", v, gf.motzkin_series(N).shift(1)),
        ("z == v/(1+v+v^2)", (w / (1 + w + w * w)).compose(v), Series.z(N)),
    ]
    return _result(pairs, f"v-substitution identities at order {N}")


def check_gk_base(lv: Level):
    N = lv.gk_order
    z = Series.z(N)
    pairs = [
        ("G_1 == z", gf.g_k(1, N), z),
        ("F_1 == z^2/(1-z)", gf.f_k(1, N), z * z / (1 - z)),
    ]
    return _result(pairs, "G_1 and F_1 closed forms")


def check_gk_recurrence(lv: Level):
    N = lv.gk_order
    z = Series.z(N)
    g = [None] + [gf.g_k(k, N) for k in range(1, lv.gk_max + 2)]
    pairs = (
        (f"k={k}", g[k + 1], z / (1 - z * g[k] / (1 - g[k])))
        for k in range(1, lv.gk_max + 1)
    )
    return _result(pairs, f"G_(k+1) recurrence for k <= {lv.gk_max} at order {N}")


def check_fk_from_gk(lv: Level):
    N = lv.gk_order
    z = Series.z(N)
    pairs = []
    for k in range(1, min(lv.gk_max, 10) + 1):
        g = gf.g_k(k, N)
        pairs.append((f"k={k}", gf.f_k(k, N), z * g / (1 - g)))
    return _result(pairs, "F_k == zG_k/(1-G_k)")


def check_height_le_limit(lv: Level):
    N = lv.order
    h = (N + 1) // 2
    ok = gf.height_le_gf(h, N) == gf.v_series(N)
    return ok, f"height <= 2h GF equals v once 2h >= order ({N})"


def check_height_distribution(lv: Level):
    nmax = lv.max_semilength
    N = nmax + 1
    le = [gf.height_le_gf(h, N) for h in range(nmax // 2 + 2)]
    pairs = []
    for n in range(nmax + 1):
        hist = paths.height_histogram(n, budget=nmax)
        pairs.append((f"n={n} h<=1", le[0].coeff(n + 1), hist.get(0, 0) + hist.get(1, 0)))
        for h in range(1, len(le)):
            exact = le[h].coeff(n + 1) - le[h - 1].coeff(n + 1)
            pairs.append((f"n={n} h={2 * h}", exact, hist.get(2 * h, 0)))
        odd = [k for k in hist if k >= 3 and k % 2]
        pairs.append((f"n={n} odd heights", odd, []))
    return _result(pairs, f"exact-height counts match enumeration for n <= {nmax}")


def check_height_numerator(lv: Level):
    nmax = lv.max_semilength
    S = gf.height_numerator_series(nmax + 1)
    pairs = []
    for n in range(1, nmax + 1):
        hist = paths.height_histogram(n, budget=nmax)
        even = sum(h * c for h, c in hist.items() if h % 2 == 0)
        every = sum(h * c for h, c in hist.items())
        pairs.append((f"n={n} vs even", S.coeff(n + 1), even))
        pairs.append((f"n={n} vs total-1", S.coeff(n + 1), every - 1))
    return _result(pairs, f"[z^(n+1)] S == total even height for n <= {nmax}")


def check_trinomial_formula(lv: Level):
    N = lv.order
    S = gf.height_numerator_series(N)
    pairs = (
        (f"n={n}", 2 * gf.height_coeff_formula(n) - 2 * gf.motzkin_number(n), S.coeff(n + 1))
        for n in range(1, N)
    )
    return _result(pairs, f"divisor/trinomial extraction matches S for n < {N}")


def check_trinomial_rows(lv: Level):
    pairs = []
    for n in range(min(lv.order, 60)):
        row, nxt = gf.trinomial_row(n), gf.trinomial_row(n + 1)
        for k in range(2 * n + 3):
            want = gf.trinomial(n, k) + gf.trinomial(n, k - 1) + gf.trinomial(n, k - 2)
            pairs.append((f"T({n + 1},{k})", nxt[k], want))
        pairs.append((f"row {n} sum", sum(row), 3 ** n))
    return _result(pairs, "trinomial triangle recurrence and row sums")


def check_lambert(lv: Level):
    ok = gf.lambert_series(lv.order) == gf.divisor_series(lv.order)
    return ok, f"Lambert form equals divisor series at order {lv.order}"


def check_leaves_closed_form(lv: Level):
    N = lv.leaf_order
    ok = gf.leaves_closed_form(N, check=False) == gf.leaves_system(N)[0]
    return ok, f"closed-form F(z,u) equals the fixed point at order {N}"


def check_leaves_specialization(lv: Level):
    N = lv.leaf_order
    F, _ = gf.leaves_system(N)
    pairs = [
        ("F(z,1) == F(z)", F.at_u(1), gf.solve_fg(N)[0]),
        ("F(z,0) == 0", F.at_u(0), Series.zero(N)),
        ("total(z,1) == zM", gf.leaves_total_gf(N).at_u(1), gf.motzkin_series(N).shift(1)),
    ]
    return _result(pairs, "u = 1 and u = 0 specializations")


def check_leaves_derivative(lv: Level):
    N = lv.leaf_order
    ok = gf.leaves_numerator(N) == gf.r_series(N)
    return ok, f"d/du total GF at u=1 equals R(v) at order {N}"


def check_leaves_oracle(lv: Level):
    nmax = lv.max_semilength
    total = gf.leaves_total_gf(nmax + 1)
    R = gf.r_series(nmax + 1)
    pairs = []
    for n in range(nmax + 1):
        dist = Counter(npk for _, _, npk in paths.enumerate_with_stats(n)) if n else Counter({1: 1})
        poly = total.coeff_poly(n + 1)
        want = [dist.get(l, 0) for l in range(max(dist) + 1)]
        pairs.append((f"n={n} leaf distribution", poly, want))
        pairs.append((f"n={n} total leaves", R.coeff(n + 1), paths.total_leaves(n, budget=nmax)))
        pairs.append((f"n={n} trinomial", gf.leaves_coeff_formula(n), R.coeff(n + 1)))
    return _result(pairs, f"leaf distributions match enumeration for n <= {nmax}")


def check_bijection(lv: Level):
    for n in range(min(lv.max_semilength, 8) + 1):
        for p in paths.enumerate_restricted(n):
            t = paths.path_to_tree(p)
            st = paths.stats(p)
            if paths.tree_to_path(t) != p:
                return False, f"roundtrip failed for {p}"
            if (t.size(), t.height(), t.leaves()) != (n + 1, st.height, st.leaf_count):
                return False, f"statistics not preserved for {p}"
    return True, "path <-> tree bijection preserves size, height and leaves"


def check_motzkin_asym(lv: Level):
    lo, hi = asymptotics.compare_motzkin(50), asymptotics.compare_motzkin(200)
    ok = hi.deviation < 0.05 and hi.deviation < lo.deviation
    return ok, f"ratio {hi.ratio:.6f} at n=200, {lo.ratio:.6f} at n=50"


def check_height_asym(lv: Level):
    rows = asymptotics.scan(asymptotics.compare_height, (250, 500, 1000, 2000))
    ok = rows[-1].deviation < 0.15 and asymptotics.non_increasing_deviation(rows, 1)
    return ok, "ratios " + ", ".join(f"{r.n}:{r.ratio:.6f}" for r in rows)


def check_height_numerator_asym(lv: Level):
    row = asymptotics.compare_height_numerator(2000)
    return row.deviation < 0.10, f"ratio {row.ratio:.6f} at n=2000"


def check_leaves_asym(lv: Level):
    rows = asymptotics.scan(asymptotics.compare_leaves, (125, 250, 500, 1000, 2000))
    tail = rows[1:]
    at_1000 = next(r for r in rows if r.n == 1000)
    ok = at_1000.deviation < 0.02 and asymptotics.non_increasing_deviation(tail)
    return ok, "ratios " + ", ".join(f"{r.n}:{r.ratio:.6f}" for r in rows)


CHECKS: list[tuple[str, Check, bool]] = [
    ("motzkin_enumeration", check_motzkin_enumeration, False),
    ("motzkin_closed_form", check_motzkin_closed_form, False),
    ("fg_identity", check_fg_identity, False),
    ("total_gf_identity", check_total_gf, False),
    ("v_substitution", check_substitution, False),
    ("gk_fk_base_cases", check_gk_base, False),
    ("gk_recurrence", check_gk_recurrence, False),
    ("fk_from_gk", check_fk_from_gk, False),
    ("height_le_limit", check_height_le_limit, False),
    ("height_distribution", check_height_distribution, False),
    ("height_numerator", check_height_numerator, False),
    ("trinomial_rows", check_trinomial_rows, False),
    ("trinomial_divisor_formula", check_trinomial_formula, False),
    ("lambert_divisor_series", check_lambert, False),
    ("bijection", check_bijection, False),
    ("leaves_closed_form", check_leaves_closed_form, False),
    ("leaves_specialization", check_leaves_specialization, False),
    ("leaves_derivative_vs_r", check_leaves_derivative, False),
    ("leaves_oracle", check_leaves_oracle, False),
    ("motzkin_asymptotic", check_motzkin_asym, True),
    ("height_asymptotic", check_height_asym, True),
    ("height_numerator_asymptotic", check_height_numerator_asym, True),
    ("leaves_asymptotic", check_leaves_asym, True),
]


def run_checks(level: str = "quick") -> list[CheckResult]:
    lv = LEVELS[level]
    results = []
    for name, fn, is_scan in CHECKS:
        if is_scan and not lv.scans:
            continue
        try:
            passed, detail = fn(lv)
        except Exception as exc:  # a crashing check is a failing check
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(CheckResult(name, bool(passed), detail))
    return results
