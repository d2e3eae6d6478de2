//! Exact checks of the standalone inequalities used by the approximation and lower-bound
//! analyses, over finite parameter ranges.
//!
//! Every check reports its slack (right side minus left side) and the parameters where the
//! slack is smallest. Strict inequalities need positive slack, non-strict ones nonnegative.

use rayon::prelude::*;
use serde::Serialize;

use crate::claw_solver::f_alpha;
use crate::harmonic::harmonic;
use crate::nwt_solver::AlgorithmConstants;
use crate::rational::{q, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Anchor {
    pub name: String,
    pub value: Rational,
    /// Value printed in the source, if the anchor reproduces one.
    pub expected: Option<Rational>,
    pub ok: bool,
}

impl Anchor {
    fn equal(name: &str, value: Rational, expected: Rational) -> Anchor {
        let ok = value == expected;
        Anchor { name: name.into(), value, expected: Some(expected), ok }
    }

    fn holds(name: &str, value: Rational, ok: bool) -> Anchor {
        Anchor { name: name.into(), value, expected: None, ok }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub lemma: String,
    pub range: String,
    pub checked: u64,
    pub strict: bool,
    pub min_slack: Option<Rational>,
    pub argmin: Vec<i64>,
    /// First few parameter tuples where the inequality fails.
    pub violations: Vec<Vec<i64>>,
    pub anchors: Vec<Anchor>,
    pub passed: bool,
}

const MAX_VIOLATIONS: usize = 10;

/// Evaluates `slack` at every point; `strict` asks for positive slack.
fn scan<F>(lemma: &str, range: String, strict: bool, points: Vec<Vec<i64>>, slack: F) -> AuditReport
where
    F: Fn(&[i64]) -> Rational + Sync,
{
    let ok = |s: &Rational| if strict { s.is_positive() } else { !s.is_negative() };
    let evaluated: Vec<(Rational, Vec<i64>)> = points.into_par_iter().map(|p| (slack(&p), p)).collect();
    let checked = evaluated.len() as u64;
    let violations: Vec<Vec<i64>> = evaluated
        .iter()
        .filter(|(s, _)| !ok(s))
        .take(MAX_VIOLATIONS)
        .map(|(_, p)| p.clone())
        .collect();
    let min = evaluated.into_iter().min_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
    let (min_slack, argmin) = match min {
        Some((s, p)) => (Some(s), p),
        None => (None, Vec::new()),
    };
    AuditReport {
        lemma: lemma.into(),
        range,
        checked,
        strict,
        min_slack,
        argmin,
        passed: violations.is_empty(),
        violations,
        anchors: Vec::new(),
    }
}

fn with_anchors(mut r: AuditReport, anchors: Vec<Anchor>) -> AuditReport {
    r.passed &= anchors.iter().all(|a| a.ok);
    r.anchors = anchors;
    r
}

fn h(k: i64) -> Rational {
    harmonic(k as usize)
}

fn uf(n: i64) -> Rational {
    Rational::unit_fraction(n as u64)
}

fn int(n: i64) -> Rational {
    Rational::integer(n)
}

/// Ranges for the scans; defaults keep each audit to a few seconds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AuditRanges {
    pub useful6_x: i64,
    pub claim_useful_x: i64,
    pub inequality2_d: i64,
    pub inequality4_dk: i64,
    pub inequality3_xy: i64,
    pub case_k: i64,
    pub case1_d: i64,
    pub t6_sum: i64,
    pub nwtlb_sum: i64,
    /// `f_alpha` grid: `alpha = i / den` for `0 <= i <= max * den`.
    pub f_alpha_den: i64,
    pub f_alpha_max: i64,
}

impl Default for AuditRanges {
    fn default() -> Self {
        AuditRanges {
            useful6_x: 100_000,
            claim_useful_x: 100_000,
            inequality2_d: 10_000,
            inequality4_dk: 300,
            inequality3_xy: 200,
            case_k: 200,
            case1_d: 200,
            t6_sum: 200,
            nwtlb_sum: 100,
            f_alpha_den: 360,
            f_alpha_max: 10,
        }
    }
}

pub fn verify_constants() -> AuditReport {
    let k = AlgorithmConstants::new();
    let anchors = vec![
        Anchor::equal("phi", k.phi.clone(), q(186, 100) - q(1, 2100)),
        Anchor::equal("delta", k.delta.clone(), q(97, 420)),
        Anchor::equal("phi - delta - H_2", k.threshold.clone(), q(9, 70)),
        Anchor::holds("phi < 1.8596", k.phi.clone(), k.phi < q(18596, 10000)),
        Anchor::equal("beta(9) + delta", k.beta(9) + &k.delta, q(1, 3)),
        Anchor::holds("1/3 < 1/9 + delta", q(1, 9) + &k.delta, q(1, 3) < q(1, 9) + &k.delta),
        Anchor::equal("1/9 + delta", q(1, 9) + &k.delta, q(431, 1260)),
    ];
    let r = AuditReport {
        lemma: "constants".into(),
        range: "-".into(),
        checked: 0,
        strict: true,
        min_slack: None,
        argmin: Vec::new(),
        violations: Vec::new(),
        anchors: Vec::new(),
        passed: true,
    };
    with_anchors(r, anchors)
}

/// `alpha (1/(x+1) + 1/x) + 1/(2x+1) - 1/(2x-2) > 0` for `3 <= x <= x_max`, `alpha = 32/90`.
pub fn verify_useful6(x_max: i64) -> AuditReport {
    let alpha = q(32, 90);
    let f = |x: i64| &alpha * (uf(x + 1) + uf(x)) + uf(2 * x + 1) - uf(2 * x - 2);
    let r = scan("useful6", format!("3 <= x <= {x_max}"), true, (3..=x_max).map(|x| vec![x]).collect(), |p| f(p[0]));
    with_anchors(r, vec![Anchor::holds("x = 3", f(3), f(3).is_positive())])
}

/// Largest `x` at which [`verify_claim_useful`] evaluates every harmonic number exactly.
pub const CLAIM_USEFUL_EXACT: i64 = 1000;

/// `H_x + H_{2x+3} + H_{2x+2} - H_{2x} - H_{2x-1} > H_10` for `7 <= x <= x_max`.
///
/// Up to [`CLAIM_USEFUL_EXACT`] the full difference is evaluated. Beyond it the difference is
/// `(H_x - H_10) + 1/(2x+3) + 2/(2x+2) + 2/(2x+1) + 1/(2x)`, where `H_x - H_10 >= 0` for
/// `x >= 10`; the slack reported there is the exactly evaluated tail, a lower bound.
pub fn verify_claim_useful(x_max: i64) -> AuditReport {
    let exact = |x: i64| h(x) + h(2 * x + 3) + h(2 * x + 2) - h(2 * x) - h(2 * x - 1) - h(10);
    let tail = |x: i64| uf(2 * x + 3) + int(2) * uf(2 * x + 2) + int(2) * uf(2 * x + 1) + uf(2 * x);
    // warm the harmonic table in order so parallel lookups only read
    let _ = harmonic((2 * x_max.min(CLAIM_USEFUL_EXACT) + 3) as usize);
    let r = scan("claim-useful", format!("7 <= x <= {x_max}"), true, (7..=x_max).map(|x| vec![x]).collect(), |p| {
        let x = p[0];
        if x <= CLAIM_USEFUL_EXACT {
            exact(x)
        } else {
            tail(x)
        }
    });
    let x7 = exact(7);
    with_anchors(r, vec![Anchor::holds("x = 7", x7.clone(), x7.is_positive())])
}

/// Maxima of `2/(d+1) + 2/(d+2) - 2/d` and `2/(d+1) + 2/(d+2) + 2/(d+3) - 3/d` over `1 <= d <= d_max`.
pub fn verify_inequality2(d_max: i64) -> AuditReport {
    let f = |d: i64| int(2) * (uf(d + 1) + uf(d + 2)) - int(2) * uf(d);
    let g = |d: i64| int(2) * (uf(d + 1) + uf(d + 2) + uf(d + 3)) - int(3) * uf(d);
    let pts: Vec<Vec<i64>> = (1..=d_max).flat_map(|d| [vec![1, d], vec![2, d]]).collect();
    let r = scan("inequality2", format!("1 <= d <= {d_max}"), false, pts, |p| {
        if p[0] == 1 {
            q(7, 30) - f(p[1])
        } else {
            q(113, 420) - g(p[1])
        }
    });
    let fmax = (1..=d_max).map(f).max().unwrap();
    let gmax = (1..=d_max).map(g).max().unwrap();
    with_anchors(
        r,
        vec![
            Anchor::equal("max f = f(3)", fmax, q(7, 30)),
            Anchor::equal("max g = g(4)", gmax, q(113, 420)),
        ],
    )
}

/// `2/(d+k) - 1/d < 1/(5k)` for `1 <= d, k <= n`.
pub fn verify_inequality4(n: i64) -> AuditReport {
    let pts: Vec<Vec<i64>> = (1..=n).flat_map(|d| (1..=n).map(move |k| vec![d, k])).collect();
    let r = scan("inequality4", format!("1 <= d, k <= {n}"), true, pts, |p| {
        let (d, k) = (p[0], p[1]);
        uf(5 * k) - (int(2) * uf(d + k) - uf(d))
    });
    // d(d+k) - 5k(d-k) = (d-2k)^2 + k^2
    let identity = (1..=n).all(|d| (1..=n).all(|k| d * (d + k) - 5 * k * (d - k) == (d - 2 * k).pow(2) + k * k));
    with_anchors(r, vec![Anchor::holds("d(d+k) - 5k(d-k) = (d-2k)^2 + k^2", Rational::zero(), identity)])
}

/// If `1/x + 1/(x+y-2) < phi - H_2 - delta` with `x, y >= 2` then `x + y >= 18`. Checked
/// through the contrapositive on `x + y <= 17`; the anchor records the smallest `x + y` with
/// `x, y <= n` where the premise holds.
pub fn verify_inequality3(n: i64) -> AuditReport {
    let t = AlgorithmConstants::new().threshold;
    let lhs = |x: i64, y: i64| uf(x) + uf(x + y - 2);
    let pts: Vec<Vec<i64>> = (2..=15).flat_map(|x| (2..=17 - x).map(move |y| vec![x, y])).collect();
    let r = scan("inequality3", "x, y >= 2, x + y <= 17".into(), false, pts, |p| lhs(p[0], p[1]) - &t);
    let first = (2..=n)
        .flat_map(|x| (2..=n).map(move |y| (x, y)))
        .filter(|&(x, y)| lhs(x, y) < t)
        .map(|(x, y)| x + y)
        .min();
    let anchor = match first {
        Some(s) => Anchor::holds(&format!("smallest x + y below threshold, x, y <= {n}"), int(s), s >= 18),
        None => Anchor::holds(&format!("no x, y <= {n} below threshold"), Rational::zero(), true),
    };
    with_anchors(r, vec![anchor])
}

/// `-(k-1)delta + sum_{j<k} (2/(d+j) - 1/d) + H_{k+1} <= phi - beta(k)`, `k >= 1`, `d >= 2`.
pub fn verify_case1(k_max: i64, d_max: i64) -> AuditReport {
    let c = AlgorithmConstants::new();
    let pts: Vec<Vec<i64>> = (2..=d_max).map(|d| vec![d]).collect();
    // one point per d; the k sweep runs inside so the partial sums are shared
    let worst = |d: i64| -> (Rational, i64) {
        let mut s = Rational::zero();
        let mut best: Option<(Rational, i64)> = None;
        for k in 1..=k_max {
            if k > 1 {
                s += int(2) * uf(d + k - 1) - uf(d);
            }
            let lhs = -(int(k - 1) * &c.delta) + &s + h(k + 1);
            let slack = &c.phi - c.beta(k as usize) - lhs;
            if best.as_ref().is_none_or(|b| slack < b.0) {
                best = Some((slack, k));
            }
        }
        best.unwrap()
    };
    let _ = harmonic((k_max + 1) as usize);
    let r = scan("case1", format!("1 <= k <= {k_max}, 2 <= d <= {d_max}"), false, pts, |p| worst(p[0]).0);
    let at = worst(r.argmin[0]).1;
    let mut r = AuditReport { argmin: vec![at, r.argmin[0]], ..r };
    r.range = format!("1 <= k <= {k_max}, 2 <= d <= {d_max}; argmin is (k, d)");
    let k4 = q(113, 420) + h(5) - int(3) * &c.delta;
    let k3 = q(7, 30) + h(4) - int(2) * &c.delta;
    with_anchors(
        r,
        vec![
            Anchor::equal("113/420 + H_5 - 3 delta = phi", k4, c.phi.clone()),
            Anchor::holds("7/30 + H_4 - 2 delta < 1.855", k3.clone(), k3 < q(1855, 1000)),
        ],
    )
}

fn case2_fa(k: i64, c: &AlgorithmConstants) -> Rational {
    int(k - 1) * h(2) + int(2) * h(k + 1) - int(k + 1) * &c.phi + c.beta(k as usize) + &c.delta
}

fn case2_fb(k: i64, c: &AlgorithmConstants) -> Rational {
    let s: Rational = (1..k).map(|i| int(2) * uf(8 + i) - q(1, 8)).sum();
    s + h(k + 1) - int(k - 1) * &c.delta - &c.phi + c.beta(k as usize)
}

fn case2_fc(k: i64, c: &AlgorithmConstants) -> Rational {
    let s: Rational = (1..k).map(|j| uf(16 + j)).sum();
    -(int(k - 1) * &c.delta) + h(k + 1) + s - &c.phi + c.beta(k as usize)
}

/// Parts (a), (b), (c): `(a)` non-strict over `k`, `(b)` and `(c)` strict over `1 <= k_1 <= k`.
pub fn verify_case2(k_max: i64) -> AuditReport {
    let c = AlgorithmConstants::new();
    let _ = harmonic((k_max + 1) as usize);
    let mut pts: Vec<Vec<i64>> = (1..=k_max).map(|k| vec![1, k, 0]).collect();
    for k in 1..=k_max {
        for k1 in 1..=k {
            pts.push(vec![2, k, k1]);
            pts.push(vec![3, k, k1]);
        }
    }
    let fb: Vec<Rational> = (1..=k_max).map(|k| case2_fb(k, &c)).collect();
    let fc: Vec<Rational> = (1..=k_max).map(|k| case2_fc(k, &c)).collect();
    let coef_b = h(2) + q(1, 8) + &c.delta - &c.phi;
    let r = scan("case2", format!("1 <= k_1 <= k <= {k_max}; points are (part, k, k_1)"), false, pts, |p| {
        let (k, k1) = (p[1], p[2]);
        match p[0] {
            1 => -case2_fa(k, &c),
            // (b): lhs - rhs = k_1 (H_2 + 1/8 + delta - phi) + f_b(k)
            2 => -(int(k1) * &coef_b + &fb[k as usize - 1]),
            _ => -fc[k as usize - 1].clone(),
        }
    });
    // (b) and (c) are strict
    let strict_ok = r
        .min_slack
        .as_ref()
        .is_none_or(|_| (1..=k_max).all(|k| (1..=k).all(|k1| (int(k1) * &coef_b + &fb[k as usize - 1]).is_negative()) && fc[k as usize - 1].is_negative()));
    let r = AuditReport { passed: r.passed && strict_ok, ..r };
    let fc4 = case2_fc(4, &c);
    let fc9 = case2_fc(9, &c);
    let worst_c = fc4.clone().max(fc9.clone());
    with_anchors(
        r,
        vec![
            Anchor::equal("(a) f(4)", case2_fa(4, &c), Rational::zero()),
            Anchor::equal("(b) f(4)", case2_fb(4, &c), q(-1109, 27720)),
            Anchor::holds("(b) H_2 + 1/8 + delta < phi", coef_b.clone(), coef_b.is_negative()),
            Anchor::holds("(c) max(f(4), f(9))", worst_c.clone(), worst_c.is_negative()),
        ],
    )
}

/// `P(x_L, x_R)` of the section-splitting argument at `alpha = 32/90`.
pub fn t6_p(xl: i64, xr: i64) -> Rational {
    let alpha = q(32, 90);
    alpha * (h(xl + 1) + h(xr) + h(xr + 1) - int(1) - int(2) * h(2)) + int(1) + h(xl + xr + 2) - h(xl + xr - 1) - h(4)
}

/// `P(x_L, x_R) > 0` for `x_L <= x_R <= x_L + 1`, `5 <= x_L + x_R <= sum_max`.
///
/// The orientation `x_R >= x_L` is a normalization: a section with `x_L = x_R + 1` can be
/// recentred one step right at equal cost. `P(3, 2)` is negative and is reported as an anchor.
pub fn verify_t6(sum_max: i64) -> AuditReport {
    let _ = harmonic((sum_max + 2) as usize);
    let pts: Vec<Vec<i64>> = (5..=sum_max).map(|s| vec![s / 2, s - s / 2]).collect();
    let r = scan("t6", format!("x_L <= x_R <= x_L + 1, 5 <= x_L + x_R <= {sum_max}"), true, pts, |p| t6_p(p[0], p[1]));
    let p32 = t6_p(3, 2);
    with_anchors(
        r,
        vec![
            Anchor::equal("P(2,3)", t6_p(2, 3), q(61, 1260)),
            Anchor::equal("P(3,3)", t6_p(3, 3), q(157, 2520)),
            Anchor::holds("P(3,2) without the normalization", p32.clone(), p32.is_negative()),
        ],
    )
}

/// `P(x_L, x_R, L, R)`: harmonic mass of a center block with its satellites minus that of
/// the all-centers alternative.
pub fn nwtlb_p(xl: i64, xr: i64, l: i64, r: i64) -> Rational {
    let h2 = h(2);
    let left: Rational = (1..=xl).map(|j| int(3) * &h2 + h(3 * j + l)).sum();
    let right: Rational = (1..=xr).map(|j| int(3) * &h2 + h(3 * j + r)).sum();
    let m = 3 * xl + 3 * xr + l + r;
    let before = left + right + int(2) * &h2 + h(m + 2) + h(m + 3);
    before - nwtlb_after(xl, xr, l, r)
}

fn nwtlb_after(xl: i64, xr: i64, l: i64, r: i64) -> Rational {
    int(2 * xl + 2 * xr + 2) * h(2) + int(xl + xr - 1) * (h(4) + h(5)) + h(3 + l) + h(4 + l) + h(3 + r) + h(4 + r)
}

/// `P(x_L, x_R, L, R) > 0` for `x_L, x_R >= 0`, `1 <= x_L + x_R <= sum_max`, `L, R` in `{0, 1}`.
pub fn verify_nwtlb(sum_max: i64) -> AuditReport {
    let _ = harmonic((3 * sum_max + 5) as usize);
    let mut pts = Vec::new();
    for s in 1..=sum_max {
        for xl in 0..=s {
            for l in 0..=1 {
                for r in 0..=1 {
                    pts.push(vec![xl, s - xl, l, r]);
                }
            }
        }
    }
    // prefix[l][x] = sum_{j=1}^{x} (3 H_2 + H_{3j+l})
    let prefix: Vec<Vec<Rational>> = (0..=1)
        .map(|l| {
            let mut acc = Rational::zero();
            let mut out = vec![acc.clone()];
            for j in 1..=sum_max {
                acc += int(3) * h(2) + h(3 * j + l);
                out.push(acc.clone());
            }
            out
        })
        .collect();
    let rep = scan("nwtlb", format!("1 <= x_L + x_R <= {sum_max}, L, R in {{0, 1}}"), true, pts, |p| {
        let (xl, xr, l, r) = (p[0], p[1], p[2], p[3]);
        let m = 3 * xl + 3 * xr + l + r;
        let before = &prefix[l as usize][xl as usize] + &prefix[r as usize][xr as usize] + int(2) * h(2) + h(m + 2) + h(m + 3);
        before - nwtlb_after(xl, xr, l, r)
    });
    let chain = h(2) + h(6) + h(7) - int(2) * h(4) - h(5);
    let one = int(2) * h(2) + h(8) + h(9) - int(3) * h(4) - h(5);
    let step = h(2) - h(4) - h(5) + h(10);
    let min_01 = (0..=1).flat_map(|l| (0..=1).map(move |r| nwtlb_p(0, 1, l, r))).min().unwrap();
    let min_11 = (0..=1).flat_map(|l| (0..=1).map(move |r| nwtlb_p(1, 1, l, r))).min().unwrap();
    with_anchors(
        rep,
        vec![
            Anchor::equal("H_2 + H_6 + H_7 - 2H_4 - H_5", chain.clone(), q(13, 140)),
            Anchor::holds("P(0,1,L,R) >= 13/140", min_01.clone(), min_01 >= chain),
            Anchor::holds("2H_2 + H_8 + H_9 - 3H_4 - H_5 > 0", one.clone(), one.is_positive()),
            Anchor::holds("P(1,1,L,R) >= 2H_2 + H_8 + H_9 - 3H_4 - H_5", min_11.clone(), min_11 >= one),
            Anchor::holds("H_2 - H_4 - H_5 + H_10 > 0", step.clone(), step.is_positive()),
        ],
    )
}

/// `f(alpha) <= 991/732` on `alpha = i/den`, `0 <= i <= max * den`, plus the breakpoints.
/// Equality must occur at `32/90` and nowhere else on the grid.
pub fn verify_f_alpha(den: i64, max: i64) -> AuditReport {
    let bound = q(991, 732);
    let mut alphas: Vec<Rational> = (0..=max * den).map(|i| q(i, den)).collect();
    alphas.push(q(32, 90));
    alphas.push(Rational::one());
    alphas.sort();
    alphas.dedup();
    let pts: Vec<Vec<i64>> = alphas
        .iter()
        .map(|a| {
            use num_traits::ToPrimitive;
            vec![a.numer().to_i64().unwrap(), a.denom().to_i64().unwrap()]
        })
        .collect();
    let r = scan("f-alpha", format!("alpha = i/{den} on [0, {max}] and breakpoints"), false, pts, |p| {
        &bound - f_alpha(&q(p[0], p[1]))
    });
    let equal_only_at_break = alphas.iter().all(|a| (f_alpha(a) == bound) == (*a == q(32, 90)));
    with_anchors(
        r,
        vec![
            Anchor::equal("f(32/90)", f_alpha(&q(32, 90)), bound.clone()),
            Anchor::equal("f(10)", f_alpha(&int(10)), Rational::one() + q(1, 22)),
            Anchor::equal("f(0)", f_alpha(&Rational::zero()), q(129, 100)),
            Anchor::holds("equality only at 32/90", Rational::zero(), equal_only_at_break),
        ],
    )
}

/// `inequality2`, `inequality4`, `inequality3`, `case1`, `case2` and `claim-useful`.
pub fn verify_inequality_suite(r: &AuditRanges) -> Vec<AuditReport> {
    vec![
        verify_inequality2(r.inequality2_d),
        verify_inequality4(r.inequality4_dk),
        verify_inequality3(r.inequality3_xy),
        verify_case1(r.case_k, r.case1_d),
        verify_case2(r.case_k),
        verify_claim_useful(r.claim_useful_x),
    ]
}

pub const LEMMAS: &[&str] = &[
    "constants",
    "useful6",
    "claim-useful",
    "inequality2",
    "inequality4",
    "inequality3",
    "case1",
    "case2",
    "t6",
    "nwtlb",
    "f-alpha",
];

/// Runs one audit by name; `range` overrides that audit's main range.
pub fn run(name: &str, range: Option<i64>, r: &AuditRanges) -> Option<AuditReport> {
    let pick = |d: i64| range.unwrap_or(d);
    Some(match name {
        "constants" => verify_constants(),
        "useful6" => verify_useful6(pick(r.useful6_x)),
        "claim-useful" => verify_claim_useful(pick(r.claim_useful_x)),
        "inequality2" => verify_inequality2(pick(r.inequality2_d)),
        "inequality4" => verify_inequality4(pick(r.inequality4_dk)),
        "inequality3" => verify_inequality3(pick(r.inequality3_xy)),
        "case1" => verify_case1(pick(r.case_k), pick(r.case1_d)),
        "case2" => verify_case2(pick(r.case_k)),
        "t6" => verify_t6(pick(r.t6_sum)),
        "nwtlb" => verify_nwtlb(pick(r.nwtlb_sum)),
        "f-alpha" => verify_f_alpha(r.f_alpha_den, pick(r.f_alpha_max)),
        _ => return None,
    })
}

pub fn run_all(r: &AuditRanges) -> Vec<AuditReport> {
    LEMMAS.iter().map(|n| run(n, None, r).unwrap()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn hr(n: i64) -> BigRational {
        (1..=n).map(|i| BigRational::new(1.into(), BigInt::from(i))).sum()
    }

    fn r(x: BigRational) -> Rational {
        Rational::from_big(x.numer().clone(), x.denom().clone()).unwrap()
    }

    fn br(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn anchors_match_independent_harmonics() {
        let two = br(2, 1);
        let chain = hr(2) + hr(6) + hr(7) - &two * hr(4) - hr(5);
        assert_eq!(chain, br(13, 140));
        let one = &two * hr(2) + hr(8) + hr(9) - br(3, 1) * hr(4) - hr(5);
        assert_eq!(one, br(17, 1260));
        assert_eq!(r(hr(10)), harmonic(10));
        let alpha = br(32, 90);
        let p23 = &alpha * (hr(3) + hr(3) + hr(4) - br(1, 1) - &two * hr(2)) + br(1, 1) + hr(7) - hr(4) - hr(4);
        assert_eq!(r(p23), q(61, 1260));
        assert_eq!(t6_p(2, 3), q(61, 1260));
        assert_eq!(t6_p(3, 3), q(157, 2520));
    }

    #[test]
    fn case_anchors() {
        let c = AlgorithmConstants::new();
        assert!(case2_fa(4, &c).is_zero());
        assert_eq!(case2_fb(4, &c), q(-1109, 27720));
        let fb4 = (1..4).map(|i| br(2, 8 + i) - br(1, 8)).sum::<BigRational>() + hr(5) - br(3 * 97, 420) - br(781, 420);
        assert_eq!(r(fb4), q(-1109, 27720));
        assert!(case2_fc(4, &c).is_negative() && case2_fc(9, &c).is_negative());
    }

    #[test]
    fn inequality2_maxima() {
        let rep = verify_inequality2(200);
        assert!(rep.passed, "{rep:?}");
        let f3 = br(2, 4) + br(2, 5) - br(2, 3);
        assert_eq!(r(f3), q(7, 30));
        let g4 = br(2, 5) + br(2, 6) + br(2, 7) - br(3, 4);
        assert_eq!(r(g4), q(113, 420));
        assert_eq!(rep.min_slack, Some(Rational::zero()));
    }

    #[test]
    fn small_ranges_pass() {
        let ranges = AuditRanges {
            useful6_x: 2000,
            claim_useful_x: 1200,
            inequality2_d: 100,
            inequality4_dk: 60,
            inequality3_xy: 40,
            case_k: 40,
            case1_d: 40,
            t6_sum: 60,
            nwtlb_sum: 20,
            f_alpha_den: 36,
            f_alpha_max: 4,
        };
        for rep in run_all(&ranges) {
            assert!(rep.passed, "{}: {:?}", rep.lemma, rep);
        }
    }

    #[test]
    fn tight_points() {
        // case1 is tight at k = d = 4
        let rep = verify_case1(20, 20);
        assert_eq!(rep.min_slack, Some(Rational::zero()));
        assert_eq!(rep.argmin, vec![4, 4]);
        let rep = verify_case2(12);
        assert_eq!(rep.min_slack, Some(Rational::zero()));
        let rep = verify_f_alpha(90, 2);
        assert_eq!(rep.min_slack, Some(Rational::zero()));
        assert_eq!(rep.argmin, vec![16, 45]);
    }

    #[test]
    fn nwtlb_scan_matches_direct_formula() {
        let rep = verify_nwtlb(8);
        let direct = (1..=8i64)
            .flat_map(|s| (0..=s).flat_map(move |xl| (0..4).map(move |b| (xl, s - xl, b / 2, b % 2))))
            .map(|(xl, xr, l, r)| nwtlb_p(xl, xr, l, r))
            .min()
            .unwrap();
        assert_eq!(rep.min_slack, Some(direct.clone()));
        assert_eq!(nwtlb_p(rep.argmin[0], rep.argmin[1], rep.argmin[2], rep.argmin[3]), direct);
    }

    #[test]
    fn violations_are_reported() {
        let rep = scan("demo", "-".into(), true, vec![vec![0], vec![1], vec![2]], |p| q(p[0] - 1, 1));
        assert!(!rep.passed);
        assert_eq!(rep.violations, vec![vec![0], vec![1]]);
        assert_eq!(rep.argmin, vec![0]);
        assert!(run("nope", None, &AuditRanges::default()).is_none());
    }
}
