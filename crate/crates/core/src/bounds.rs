//! Trade-off points, cut-set bounds and secure file-size bounds.
//!
//! Everything is an exact rational; decimals appear only in [`render`].

use std::fmt;

use num_rational::Ratio;
use thiserror::Error;

pub type Q = Ratio<i64>;

fn q(v: i64) -> Q {
    Q::from_integer(v)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BoundsError {
    #[error("invalid cut vector {0:?}")]
    InvalidCut(Vec<i64>),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("S closed form {closed} disagrees with exhaustive search {exhaustive}")]
    SMaxDisagreement { closed: Q, exhaustive: Q },
    #[error("secure file size is zero")]
    ZeroSecureSize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Point {
    Mbcr,
    Mscr,
}

impl std::str::FromStr for Point {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "mbcr" => Ok(Point::Mbcr),
            "mscr" => Ok(Point::Mscr),
            _ => Err(format!("unknown point `{s}` (expected mbcr or mscr)")),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct TradeoffPoint {
    pub alpha: Q,
    pub beta: Q,
    pub beta_prime: Q,
    pub gamma: Q,
    pub m: Q,
    /// `beta' = 1` when set; otherwise the file has unit size.
    pub normalized: bool,
}

impl TradeoffPoint {
    fn scaled(alpha: i64, beta: i64, beta_prime: i64, gamma: i64, m: i64, normalized: bool) -> Self {
        let s = if normalized { q(1) } else { Q::new(1, m) };
        TradeoffPoint {
            alpha: q(alpha) * s,
            beta: q(beta) * s,
            beta_prime: q(beta_prime) * s,
            gamma: q(gamma) * s,
            m: q(m) * s,
            normalized,
        }
    }
}

fn check_kdt(k: i64, d: i64, t: i64) -> Result<(), BoundsError> {
    if k < 1 || d < k || t < 1 {
        return Err(BoundsError::InvalidParams(format!("need 1 <= k <= d and t >= 1, got k={k} d={d} t={t}")));
    }
    Ok(())
}

pub fn mbcr_point(k: i64, d: i64, t: i64, normalized: bool) -> Result<TradeoffPoint, BoundsError> {
    check_kdt(k, d, t)?;
    let a = 2 * d + t - 1;
    Ok(TradeoffPoint::scaled(a, 2, 1, a, k * (2 * d - k + t), normalized))
}

pub fn mscr_point(k: i64, d: i64, t: i64, normalized: bool) -> Result<TradeoffPoint, BoundsError> {
    check_kdt(k, d, t)?;
    let a = d - k + t;
    Ok(TradeoffPoint::scaled(a, 1, 1, d + t - 1, k * a, normalized))
}

pub fn point(which: Point, k: i64, d: i64, t: i64, normalized: bool) -> Result<TradeoffPoint, BoundsError> {
    match which {
        Point::Mbcr => mbcr_point(k, d, t, normalized),
        Point::Mscr => mscr_point(k, d, t, normalized),
    }
}

/// Cooperative cut value `sum u_i min{alpha, (d - sum_{j<i} u_j) beta + (t - u_i) beta'}`.
pub fn coop_cutset_bound(k: i64, d: i64, t: i64, p: &TradeoffPoint, u: &[i64]) -> Result<Q, BoundsError> {
    if u.iter().any(|&x| x < 0 || x > t) || u.iter().sum::<i64>() != k {
        return Err(BoundsError::InvalidCut(u.to_vec()));
    }
    let mut before = 0;
    let mut total = q(0);
    for &ui in u {
        let cut = q(d - before) * p.beta + q(t - ui) * p.beta_prime;
        total += q(ui) * p.alpha.min(cut);
        before += ui;
    }
    Ok(total)
}

/// The non-cooperative bound `sum_{i<k} min{alpha, (d - i) beta}`.
pub fn classical_bound(k: i64, d: i64, alpha: Q, beta: Q) -> Q {
    (0..k).map(|i| alpha.min(q(d - i) * beta)).sum()
}

/// Every composition of `k` into parts in `[1, t]`.
pub fn compositions(k: i64, t: i64) -> Vec<Vec<i64>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=t.min(k) {
        for mut rest in compositions(k - first, t) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Minimum of [`coop_cutset_bound`] over all compositions.
pub fn min_coop_cutset(k: i64, d: i64, t: i64, p: &TradeoffPoint) -> Q {
    compositions(k, t)
        .iter()
        .map(|u| coop_cutset_bound(k, d, t, p, u).expect("compositions are valid cuts"))
        .min()
        .expect("at least one composition")
}

/// `(k - l1)(2d + t - k - l1)` in normalized units.
pub fn mbcr_secure_bound(k: i64, d: i64, t: i64, l1: i64) -> i64 {
    (k - l1) * (2 * d + t - k - l1)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct CaseBounds {
    pub case1: Q,
    /// Only when `t >= k`.
    pub case2: Option<Q>,
    /// Only when `t < k`.
    pub case3: Option<Q>,
}

/// Case 1: every repair group holds one collector node.
pub fn case1_bound(k: i64, d: i64, t: i64, l1: i64, beta: Q, beta_prime: Q) -> Q {
    Q::new((k - l1) * (2 * d - k - l1 + 1), 2) * beta + q((k - l1) * (t - 1)) * beta_prime
}

/// Case 2: a single group holds all `k` collector nodes.
pub fn case2_bound(k: i64, d: i64, t: i64, l1: i64, beta: Q, beta_prime: Q) -> Q {
    q(k - l1) * (q(d) * beta + q(t - k) * beta_prime)
}

/// Case 3: full groups of `t` and one of `k mod t`.
pub fn case3_bound(k: i64, d: i64, t: i64, l1: i64, beta: Q, beta_prime: Q) -> Result<Q, BoundsError> {
    let b = k % t;
    let s = s_max(k, d, t, l1, beta, beta_prime)?;
    Ok(beta * (q(k * d) + Q::new((k - b) * (t - k - b), 2)) + beta_prime * q(b * (t - b)) - s)
}

/// The three case bounds at the normalized MBCR point.
pub fn eavesdropper_case_bounds(k: i64, d: i64, t: i64, l1: i64) -> Result<CaseBounds, BoundsError> {
    check_kdt(k, d, t)?;
    if l1 < 0 || l1 > k {
        return Err(BoundsError::InvalidParams(format!("need 0 <= l1 <= k, got l1={l1}")));
    }
    let (beta, bp) = (q(2), q(1));
    Ok(CaseBounds {
        case1: case1_bound(k, d, t, l1, beta, bp),
        case2: (t >= k).then(|| case2_bound(k, d, t, l1, beta, bp)),
        case3: if t < k { Some(case3_bound(k, d, t, l1, beta, bp)?) } else { None },
    })
}

fn s_closed(k: i64, d: i64, t: i64, l1: i64, beta: Q, beta_prime: Q) -> Q {
    let a = k / t;
    let b = k - a * t;
    if l1 <= a * t {
        let c = l1 / t;
        beta * q(l1 * (d - c * t)) + beta * Q::new(t * t * c * (c + 1), 2)
    } else {
        beta * q(l1 * (d - a * t)) + beta * Q::new(t * t * a * (a + 1), 2) + beta_prime * q((l1 - a * t) * (t - b))
    }
}

fn s_exhaustive(k: i64, d: i64, t: i64, l1: i64, beta: Q, beta_prime: Q) -> Q {
    let a = k / t;
    let b = k - a * t;
    let caps: Vec<i64> = (0..a).map(|_| t).chain(std::iter::once(b)).collect();
    let weight = |i: usize| -> Q {
        let i = i as i64;
        if i < a {
            q(d - i * t) * beta
        } else {
            q(d - a * t) * beta + q(t - b) * beta_prime
        }
    };
    fn walk(caps: &[i64], idx: usize, left: i64, acc: Q, weight: &dyn Fn(usize) -> Q, best: &mut Option<Q>) {
        if idx == caps.len() {
            if left == 0 && best.is_none_or(|b| acc > b) {
                *best = Some(acc);
            }
            return;
        }
        for x in 0..=caps[idx].min(left) {
            walk(caps, idx + 1, left - x, acc + q(x) * weight(idx), weight, best);
        }
    }
    let mut best = None;
    walk(&caps, 0, l1, q(0), &weight, &mut best);
    best.expect("l1 < k fits in the groups")
}

/// The eavesdropper term `S` of the Case 3 bound, by closed form and by
/// exhaustive allocation search, which must agree.
pub fn s_max(k: i64, d: i64, t: i64, l1: i64, beta: Q, beta_prime: Q) -> Result<Q, BoundsError> {
    if t >= k || l1 < 0 || l1 >= k {
        return Err(BoundsError::InvalidParams(format!("S needs t < k and 0 <= l1 < k, got k={k} t={t} l1={l1}")));
    }
    let closed = s_closed(k, d, t, l1, beta, beta_prime);
    let exhaustive = s_exhaustive(k, d, t, l1, beta, beta_prime);
    if closed != exhaustive {
        return Err(BoundsError::SMaxDisagreement { closed, exhaustive });
    }
    Ok(closed)
}

/// Secure size bound at the normalized MSCR point.
pub fn mscr_secure_bound(k: i64, d: i64, t: i64, l1: i64, l2: i64) -> i64 {
    let alpha = d - k + t;
    if l2 == 0 {
        (k - l1) * alpha
    } else {
        ((k - l1 - l2) * (alpha - 1)).max(0)
    }
}

/// Secure size reached by the `d = k` MSCR construction.
pub fn mscr_dk_achievable(k: i64, t: i64, l1: i64, l2: i64) -> i64 {
    (k - l1 - l2) * (t - l2).max(0)
}

/// `gamma / M^s` at the normalized MBCR point.
pub fn nrbw(k: i64, d: i64, t: i64, l1: i64) -> Result<Q, BoundsError> {
    let ms = mbcr_secure_bound(k, d, t, l1);
    if ms <= 0 {
        return Err(BoundsError::ZeroSecureSize);
    }
    Ok(Q::new(2 * d + t - 1, ms))
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Constraint {
    /// `d + t = n`.
    Equal,
    /// `d + t <= n`.
    AtMost,
}

impl std::str::FromStr for Constraint {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.replace(' ', "").as_str() {
            "eq" | "equal" | "d+t=n" => Ok(Constraint::Equal),
            "le" | "at-most" | "d+t<=n" => Ok(Constraint::AtMost),
            _ => Err(format!("unknown constraint `{s}` (expected eq or le)")),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct NrbwRow {
    pub n: i64,
    pub k: i64,
    pub l: i64,
    pub t: i64,
    pub d: i64,
    pub beta_over_ms: Q,
    pub betap_over_ms: Q,
    pub gamma_over_ms: Q,
    pub m: i64,
    pub ms: i64,
}

/// Rows for `4 <= n <= max_n`, `2 <= k <= d < n`, `0 <= l < k`, ordered
/// by `n, k, l`, then `d` descending, then `t`.
pub fn nrbw_table(max_n: i64, constraint: Constraint) -> Vec<NrbwRow> {
    let mut rows = Vec::new();
    for n in 4..=max_n {
        for k in 2..n {
            for l in 0..k {
                for d in (k..n).rev() {
                    for t in 1..=n - d {
                        if constraint == Constraint::Equal && d + t != n {
                            continue;
                        }
                        let ms = mbcr_secure_bound(k, d, t, l);
                        rows.push(NrbwRow {
                            n,
                            k,
                            l,
                            t,
                            d,
                            beta_over_ms: Q::new(2, ms),
                            betap_over_ms: Q::new(1, ms),
                            gamma_over_ms: Q::new(2 * d + t - 1, ms),
                            m: k * (2 * d - k + t),
                            ms,
                        });
                    }
                }
            }
        }
    }
    rows
}

/// Fixed-point decimal with `places` digits, ties rounded up.
pub fn render(v: Q, places: u32) -> String {
    let scale = 10i64.pow(places);
    let scaled = v * q(scale);
    let rounded = (scaled + Q::new(1, 2)).floor().to_integer();
    let (sign, abs) = if rounded < 0 { ("-", -rounded) } else { ("", rounded) };
    format!("{sign}{}.{:0width$}", abs / scale, abs % scale, width = places as usize)
}

pub const CSV_HEADER: &str = "n,k,l,t,d,beta_over_Ms,betap_over_Ms,gamma_over_Ms,M,Ms";

impl fmt::Display for NrbwRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{},{},{},{},{},{},{},{}",
            self.n,
            self.k,
            self.l,
            self.t,
            self.d,
            render(self.beta_over_ms, 4),
            render(self.betap_over_ms, 4),
            render(self.gamma_over_ms, 4),
            self.m,
            self.ms
        )
    }
}

pub fn nrbw_csv(rows: &[NrbwRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.to_string());
        out.push('\n');
    }
    out
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DominanceReport {
    pub checked: usize,
    pub violations: Vec<String>,
}

impl DominanceReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks over `k <= max_k`, `k <= d <= max_d`, `t <= max_t`, `l1 < k` that
/// the Case 1 bound is the tightest, that the slacks have the closed forms
/// `(k - l1) l1`, `b~(t - b~)` and `b~(b - b~)`, and that `S` agrees with
/// exhaustive search.
pub fn closed_form_dominance(max_k: i64, max_d: i64, max_t: i64) -> DominanceReport {
    let mut report = DominanceReport::default();
    for k in 1..=max_k {
        for d in k..=max_d {
            for t in 1..=max_t {
                for l1 in 0..k {
                    report.checked += 1;
                    let tag = format!("k={k} d={d} t={t} l1={l1}");
                    let cb = match eavesdropper_case_bounds(k, d, t, l1) {
                        Ok(cb) => cb,
                        Err(e) => {
                            report.violations.push(format!("{tag}: {e}"));
                            continue;
                        }
                    };
                    let c1 = cb.case1;
                    if c1 != q(mbcr_secure_bound(k, d, t, l1)) {
                        report.violations.push(format!("{tag}: case1 {c1} is not (k-l1)(2d+t-k-l1)"));
                    }
                    if let Some(c2) = cb.case2 {
                        if c2 < c1 || c2 - c1 != q((k - l1) * l1) {
                            report.violations.push(format!("{tag}: case2 {c2} vs case1 {c1}"));
                        }
                    }
                    if let Some(c3) = cb.case3 {
                        let a = k / t;
                        let b = k - a * t;
                        let slack = if l1 <= a * t {
                            let bt = l1 % t;
                            bt * (t - bt)
                        } else {
                            let bt = l1 - a * t;
                            bt * (b - bt)
                        };
                        if c3 < c1 || c3 - c1 != q(slack) {
                            report.violations.push(format!("{tag}: case3 {c3} vs case1 {c1}, expected slack {slack}"));
                        }
                    }
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn points() {
        let p = mbcr_point(3, 3, 2, true).unwrap();
        assert_eq!((p.alpha, p.gamma, p.m), (q(7), q(7), q(15)));
        let p = mbcr_point(2, 2, 2, true).unwrap();
        assert_eq!((p.alpha, p.m), (q(5), q(8)));
        let p = mbcr_point(2, 3, 1, true).unwrap();
        assert_eq!((p.beta, p.alpha, p.m), (q(2), q(6), q(2 * (6 - 2 + 1))));
        let p = mscr_point(2, 2, 2, true).unwrap();
        assert_eq!((p.alpha, p.m), (q(2), q(4)));
        let p = mscr_point(3, 3, 2, true).unwrap();
        assert_eq!((p.alpha, p.m), (q(2), q(6)));
        let p = mscr_point(3, 3, 1, true).unwrap();
        assert_eq!((p.alpha, p.m), (q(1), q(3)));
        let p = mbcr_point(2, 2, 2, false).unwrap();
        assert_eq!(p.m, q(1));
        assert_eq!(p.alpha, Q::new(5, 8));
        assert_eq!(p.gamma, q(2) * p.beta + p.beta_prime);
    }

    #[test]
    fn secure_bounds() {
        assert_eq!(mbcr_secure_bound(3, 3, 2, 1), 8);
        assert_eq!(mbcr_secure_bound(3, 3, 2, 0), 15);
        assert_eq!(mbcr_secure_bound(3, 3, 2, 3), 0);
        assert_eq!(mscr_secure_bound(2, 2, 2, 1, 0), 2);
        assert_eq!(mscr_secure_bound(2, 2, 2, 0, 1), 1);
        assert_eq!(mscr_secure_bound(2, 2, 2, 0, 0), 4);
        assert_eq!(mscr_dk_achievable(3, 2, 1, 0), 4);
        assert_eq!(mscr_dk_achievable(3, 2, 0, 2), 0);
        assert_eq!(mscr_dk_achievable(2, 2, 0, 1), 1);
    }

    #[test]
    fn case_bounds() {
        let cb = eavesdropper_case_bounds(3, 3, 2, 1).unwrap();
        assert_eq!(cb.case1, q(8));
        assert_eq!(cb.case2, None);
        let c3 = cb.case3.unwrap();
        // beta (kd + (k-b)(t-k-b)/2) + beta' b(t-b) - S with a=1, b=1, S=6.
        assert_eq!(c3, q(2) * (q(9) + Q::new(2 * -2, 2)) + q(1) - q(6));
        assert!(c3 >= cb.case1);
        let cb = eavesdropper_case_bounds(2, 2, 2, 1).unwrap();
        assert_eq!((cb.case1, cb.case2), (q(3), Some(q(4))));
        let cb = eavesdropper_case_bounds(3, 4, 1, 0).unwrap();
        assert_eq!(cb.case1, q(mbcr_point(3, 4, 1, true).unwrap().m.to_integer()));
    }

    #[test]
    fn s_examples() {
        assert_eq!(s_max(3, 3, 2, 1, q(2), q(1)), Ok(q(6)));
        assert_eq!(s_max(3, 3, 2, 0, q(2), q(1)), Ok(q(0)));
        assert!(s_max(2, 2, 2, 1, q(2), q(1)).is_err());
    }

    #[test]
    fn nrbw_examples() {
        assert_eq!(nrbw(2, 2, 2, 1).unwrap(), Q::new(5, 3));
        assert_eq!(nrbw(3, 3, 2, 1).unwrap(), Q::new(7, 8));
        assert_eq!(nrbw(2, 2, 3, 0).unwrap(), Q::new(6, 10));
        assert_eq!(nrbw(2, 2, 2, 2), Err(BoundsError::ZeroSecureSize));
    }

    #[test]
    fn rendering() {
        assert_eq!(render(Q::new(1, 6), 4), "0.1667");
        assert_eq!(render(Q::new(1, 18), 4), "0.0556");
        assert_eq!(render(Q::new(1, 14), 4), "0.0714");
        assert_eq!(render(Q::new(1, 20000), 4), "0.0001");
        assert_eq!(render(q(3), 4), "3.0000");
    }

    #[test]
    fn small_table() {
        let rows = nrbw_table(4, Constraint::Equal);
        assert_eq!(rows.len(), 7);
        assert_eq!(rows[3].to_string(), "4,2,1,2,2,0.6667,0.3333,1.6667,8,3");
    }

    #[test]
    fn compositions_count() {
        // Compositions of 4 into parts of at most 2 are counted by Fibonacci.
        assert_eq!(compositions(4, 2).len(), 5);
        assert_eq!(compositions(5, 5).len(), 16);
    }

    proptest! {
        #[test]
        fn classical_is_t_equal_one(k in 1i64..6, extra in 0i64..4, a in 1i64..20, b in 1i64..5) {
            let d = k + extra;
            let p = TradeoffPoint { alpha: q(a), beta: q(b), beta_prime: q(7), gamma: q(0), m: q(0), normalized: true };
            let ones = vec![1; k as usize];
            prop_assert_eq!(coop_cutset_bound(k, d, 1, &p, &ones).unwrap(), classical_bound(k, d, q(a), q(b)));
        }

        #[test]
        fn mbcr_min_cut_is_file_size(k in 1i64..6, extra in 0i64..3, t in 1i64..4) {
            let d = k + extra;
            let p = mbcr_point(k, d, t, true).unwrap();
            prop_assert_eq!(min_coop_cutset(k, d, t, &p), p.m);
            prop_assert_eq!(coop_cutset_bound(k, d, t, &p, &vec![1; k as usize]).unwrap(), p.m);
        }

        #[test]
        fn mscr_ones_cut_is_file_size(k in 1i64..6, extra in 0i64..3, t in 1i64..4) {
            let d = k + extra;
            let p = mscr_point(k, d, t, true).unwrap();
            prop_assert_eq!(coop_cutset_bound(k, d, t, &p, &vec![1; k as usize]).unwrap(), p.m);
            prop_assert_eq!(p.gamma, q(d) * p.beta + q(t - 1) * p.beta_prime);
        }

        #[test]
        fn s_matches_expanded_identity(k in 2i64..7, extra in 0i64..3, t in 1i64..6, l1 in 0i64..6) {
            prop_assume!(t < k && l1 < k);
            let d = k + extra;
            let a = k / t;
            prop_assume!(l1 <= a * t);
            let bt = l1 % t;
            let s = s_max(k, d, t, l1, q(2), q(1)).unwrap();
            prop_assert_eq!(s, q(l1 * (2 * d - l1 + t) - bt * (t - bt)));
        }
    }
}
