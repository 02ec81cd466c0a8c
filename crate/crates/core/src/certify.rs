//! Rigorous certification of the registered inequalities by adaptive
//! bisection with interval arithmetic.
//!
//! Every claim is reduced to one or two conjuncts of the form
//! `expression >= threshold` where the expression is a closed form that is
//! nonsingular on the whole closed domain (see [`crate::scalar`]). Claims
//! whose original statement is tight at a domain endpoint (`f' in [0, 1]`
//! touches both bounds) are certified through an exact factorization: the
//! globally nonnegative factor (`cos r`, `sin^2 r`) is divided out and the
//! strictly positive cofactor is certified instead. Refutations are always
//! re-validated against the original inequality in plain double precision.
//!
//! The box queue is processed level-synchronously; each level's boxes are
//! evaluated in parallel and merged in canonical order, so certificates are
//! identical for any worker count.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::time::Instant;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::par;
use crate::params::WarpParams;
use crate::real::Real;
use crate::scalar::forms;

/// Expressions the interval evaluator knows about.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExprId {
    A,
    B,
    WarpF,
    WarpH,
    Fprime,
    NegFppOverF,
    NegFpHpOverFH,
    NegHppOverH,
    OneMinusHp2OverH2,
    OneMinusFp2OverF2,
    FprimeCofactor,
    OneMinusFprimeCofactor,
    C4Residual,
    HppBound,
    C6Residual,
    Hp2Bound,
    TermI,
    RicHH,
    RicUU,
    RicVV,
    RicMin,
}

impl ExprId {
    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "A" => Self::A,
            "B" => Self::B,
            "f" => Self::WarpF,
            "h" => Self::WarpH,
            "fprime" => Self::Fprime,
            "neg_fpp_over_f" => Self::NegFppOverF,
            "neg_fphp_over_fh" => Self::NegFpHpOverFH,
            "neg_hpp_over_h" => Self::NegHppOverH,
            "one_minus_hp2_over_h2" => Self::OneMinusHp2OverH2,
            "one_minus_fp2_over_f2" => Self::OneMinusFp2OverF2,
            "term_i" => Self::TermI,
            "ric_hh" => Self::RicHH,
            "ric_uu" => Self::RicUU,
            "ric_vv" => Self::RicVV,
            "ric_min" => Self::RicMin,
            other => return Err(Error::UnknownExpression(other.to_string())),
        })
    }

    fn eval<T: Real>(self, r: T, lam: f64, m: u32, n: u32) -> T {
        match self {
            Self::A => forms::aux_a(r, lam),
            Self::B => forms::aux_b(r, lam),
            Self::WarpF => forms::warp_f(r, lam),
            Self::WarpH => forms::warp_h(r, lam),
            Self::Fprime => forms::fprime(r, lam),
            Self::NegFppOverF => forms::neg_fpp_over_f(r, lam),
            Self::NegFpHpOverFH => forms::neg_fphp_over_fh(r, lam),
            Self::NegHppOverH => forms::neg_hpp_over_h(r, lam),
            Self::OneMinusHp2OverH2 => forms::one_minus_hp2_over_h2(r, lam),
            Self::OneMinusFp2OverF2 => forms::one_minus_fp2_over_f2(r, lam),
            Self::FprimeCofactor => forms::fprime_cofactor(r, lam),
            Self::OneMinusFprimeCofactor => forms::one_minus_fprime_cofactor(r, lam),
            Self::C4Residual => forms::c4_residual(r, lam),
            Self::HppBound => forms::hpp_bound(r, lam),
            Self::C6Residual => forms::c6_residual(r, lam),
            Self::Hp2Bound => forms::hp2_bound(r, lam),
            Self::TermI => forms::term_i(r, lam, m, n),
            Self::RicHH => forms::ric_hh(r, lam, m, n),
            Self::RicUU => forms::ric_uu(r, lam, m, n),
            Self::RicVV => forms::ric_vv(r, lam, m, n),
            Self::RicMin => forms::ric_min(r, lam, m, n),
        }
    }
}

/// Sound enclosure of an expression's range over an `r`-box.
pub fn interval_eval(expr: ExprId, r_box: Interval, lambda: f64, m: u32, n: u32) -> Interval {
    expr.eval(r_box, lambda, m, n)
}

/// Plain double-precision evaluation of the same expression.
pub fn point_eval(expr: ExprId, r: f64, lambda: f64, m: u32, n: u32) -> f64 {
    expr.eval(r, lambda, m, n)
}

/// The fixed claim registry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClaimId {
    C1,
    C2,
    C2Prime,
    C3,
    C4,
    C5a,
    C5b,
    C6,
    C7,
    C8,
    C9,
    C10,
}

impl ClaimId {
    pub const ALL: [ClaimId; 12] = [
        ClaimId::C1,
        ClaimId::C2,
        ClaimId::C2Prime,
        ClaimId::C3,
        ClaimId::C4,
        ClaimId::C5a,
        ClaimId::C5b,
        ClaimId::C6,
        ClaimId::C7,
        ClaimId::C8,
        ClaimId::C9,
        ClaimId::C10,
    ];

    pub fn token(self) -> &'static str {
        match self {
            ClaimId::C1 => "C1",
            ClaimId::C2 => "C2",
            ClaimId::C2Prime => "C2'",
            ClaimId::C3 => "C3",
            ClaimId::C4 => "C4",
            ClaimId::C5a => "C5a",
            ClaimId::C5b => "C5b",
            ClaimId::C6 => "C6",
            ClaimId::C7 => "C7",
            ClaimId::C8 => "C8",
            ClaimId::C9 => "C9",
            ClaimId::C10 => "C10",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "C1" => ClaimId::C1,
            "C2" => ClaimId::C2,
            "C2'" | "C2p" | "C2prime" => ClaimId::C2Prime,
            "C3" => ClaimId::C3,
            "C4" => ClaimId::C4,
            "C5a" => ClaimId::C5a,
            "C5b" => ClaimId::C5b,
            "C6" => ClaimId::C6,
            "C7" => ClaimId::C7,
            "C8" => ClaimId::C8,
            "C9" => ClaimId::C9,
            "C10" => ClaimId::C10,
            other => {
                return Err(Error::UnknownExpression(format!(
                    "unknown claim id '{other}' (expected C1, C2, C2', C3, C4, C5a, C5b, C6, C7, C8, C9, C10)"
                )))
            }
        })
    }

    pub fn description(self) -> &'static str {
        match self {
            ClaimId::C1 => "f' lies in [0, 1] on [0, pi/2]",
            ClaimId::C2 => "-f''/f >= 1 on [0, pi/2]",
            ClaimId::C2Prime => "-f''/f >= 1/2 on [0, pi/2]",
            ClaimId::C3 => "-f'h'/(f h) >= 1/2 on [0, pi/2]",
            ClaimId::C4 => "-h''/h >= -2 lambda^4 sin^2 r / A^2 + 1 on [0, pi/2]",
            ClaimId::C5a => "I >= 0 on [pi/4, pi/2] (given m >= 8(n-1))",
            ClaimId::C5b => "I >= 0 on [0, pi/4] (given m >= 8(n-1))",
            ClaimId::C6 => "(1-h'^2)/h^2 >= -lambda^4 sin^2 r (sin^2 r + 1)/A^2 on [0, pi/2]",
            ClaimId::C7 => "Ric(V,V) >= 1 on [0, pi/2] (given m >= 4n)",
            ClaimId::C8 => "Ric(H,H) >= 1 on [0, pi/2]",
            ClaimId::C9 => "Ric(U,U) >= 1 on [0, pi/2]",
            ClaimId::C10 => "all three Ricci components >= 1 on [0, pi/2]",
        }
    }

    /// Whether the parameters satisfy the claim's stated side condition.
    /// Informational: certification runs either way and reports what the
    /// arithmetic concludes.
    pub fn guard_met(self, m: u32, n: u32) -> bool {
        match self {
            ClaimId::C5a | ClaimId::C5b | ClaimId::C10 => m >= 8 * (n - 1),
            ClaimId::C7 => m >= 4 * n,
            _ => true,
        }
    }

    fn domain(self) -> (f64, f64) {
        match self {
            ClaimId::C5a => (FRAC_PI_4, FRAC_PI_2),
            ClaimId::C5b => (0.0, FRAC_PI_4),
            _ => (0.0, FRAC_PI_2),
        }
    }

    fn conjuncts(self) -> Vec<Conjunct> {
        match self {
            // f' >= 0: cos r >= 0 structurally on [0, pi/2]; certify the
            // cofactor (B+1)/(2B^{5/4}). f' <= 1: 1 - f' = sin^2 r * cofactor;
            // certify the cofactor.
            ClaimId::C1 => vec![
                Conjunct {
                    expr: ExprId::FprimeCofactor,
                    threshold: 0.0,
                    lhs: ExprId::Fprime,
                    bound: WitnessBound::Const(0.0),
                    dir: Dir::Ge,
                },
                Conjunct {
                    expr: ExprId::OneMinusFprimeCofactor,
                    threshold: 0.0,
                    lhs: ExprId::Fprime,
                    bound: WitnessBound::Const(1.0),
                    dir: Dir::Le,
                },
            ],
            ClaimId::C2 => vec![Conjunct::simple(ExprId::NegFppOverF, 1.0)],
            ClaimId::C2Prime => vec![Conjunct::simple(ExprId::NegFppOverF, 0.5)],
            ClaimId::C3 => vec![Conjunct::simple(ExprId::NegFpHpOverFH, 0.5)],
            ClaimId::C4 => vec![Conjunct {
                expr: ExprId::C4Residual,
                threshold: 0.0,
                lhs: ExprId::NegHppOverH,
                bound: WitnessBound::Expr(ExprId::HppBound),
                dir: Dir::Ge,
            }],
            ClaimId::C5a | ClaimId::C5b => vec![Conjunct::simple(ExprId::TermI, 0.0)],
            ClaimId::C6 => vec![Conjunct {
                expr: ExprId::C6Residual,
                threshold: 0.0,
                lhs: ExprId::OneMinusHp2OverH2,
                bound: WitnessBound::Expr(ExprId::Hp2Bound),
                dir: Dir::Ge,
            }],
            ClaimId::C7 => vec![Conjunct::simple(ExprId::RicVV, 1.0)],
            ClaimId::C8 => vec![Conjunct::simple(ExprId::RicHH, 1.0)],
            ClaimId::C9 => vec![Conjunct::simple(ExprId::RicUU, 1.0)],
            ClaimId::C10 => vec![Conjunct::simple(ExprId::RicMin, 1.0)],
        }
    }
}

impl std::fmt::Display for ClaimId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Debug, Clone, Copy)]
enum Dir {
    Ge,
    Le,
}

#[derive(Debug, Clone, Copy)]
enum WitnessBound {
    Const(f64),
    Expr(ExprId),
}

#[derive(Debug, Clone, Copy)]
struct Conjunct {
    /// Certified expression; the claim conjunct is `expr >= threshold`.
    expr: ExprId,
    threshold: f64,
    /// Original inequality, for witness reporting and refutation validation.
    lhs: ExprId,
    bound: WitnessBound,
    dir: Dir,
}

impl Conjunct {
    fn simple(expr: ExprId, threshold: f64) -> Self {
        Self {
            expr,
            threshold,
            lhs: expr,
            bound: WitnessBound::Const(threshold),
            dir: Dir::Ge,
        }
    }

    fn bound_at(&self, r: f64, lam: f64, m: u32, n: u32) -> f64 {
        match self.bound {
            WitnessBound::Const(c) => c,
            WitnessBound::Expr(e) => point_eval(e, r, lam, m, n),
        }
    }

    /// Signed violation of the original inequality at `r` (negative means
    /// violated).
    fn original_margin(&self, r: f64, lam: f64, m: u32, n: u32) -> f64 {
        let v = point_eval(self.lhs, r, lam, m, n);
        let b = self.bound_at(r, lam, m, n);
        match self.dir {
            Dir::Ge => v - b,
            Dir::Le => b - v,
        }
    }
}

/// Branch-and-bound budget.
#[derive(Debug, Clone, Copy)]
pub struct BnbOptions {
    pub max_depth: u32,
    pub min_width: f64,
}

impl Default for BnbOptions {
    fn default() -> Self {
        Self {
            max_depth: 48,
            min_width: 1e-14,
        }
    }
}

/// A refutation witness: the point, the original inequality's left-hand
/// value there, and the bound it had to meet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    pub r: f64,
    pub value: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CertStatus {
    Verified,
    Refuted(Witness),
    Inconclusive,
}

impl CertStatus {
    pub fn label(&self) -> &'static str {
        match self {
            CertStatus::Verified => "verified",
            CertStatus::Refuted(_) => "refuted",
            CertStatus::Inconclusive => "inconclusive",
        }
    }
}

/// Outcome of certifying one claim at one parameter point.
#[derive(Debug, Clone)]
pub struct Certificate {
    pub claim: ClaimId,
    pub lambda: f64,
    pub m: u32,
    pub n: u32,
    pub status: CertStatus,
    /// Enclosure of the minimum of the certified expression(s) over the
    /// domain (elementwise min across conjuncts for two-sided claims).
    pub min_enclosure: Interval,
    pub boxes: u64,
    pub depth: u32,
    pub wall_ms: u64,
}

#[derive(Debug, Clone, Copy)]
struct RBox {
    lo: f64,
    hi: f64,
    depth: u32,
}

struct ConjunctRun {
    verified: bool,
    refuted_at: Option<f64>,
    inconclusive: bool,
    boxes: u64,
    depth: u32,
    min_lo: f64,
    min_hi: f64,
}

/// Hard cap on total boxes per conjunct; exceeding it yields `inconclusive`.
const BOX_BUDGET: u64 = 4_000_000;

fn run_conjunct(c: &Conjunct, domain: (f64, f64), p: &WarpParams, opt: &BnbOptions) -> ConjunctRun {
    let lam = p.lambda;
    let (m, n) = (p.m, p.n);
    let root = RBox {
        lo: domain.0,
        hi: domain.1.next_up(),
        depth: 0,
    };
    let mut frontier = vec![root];
    let mut boxes: u64 = 0;
    let mut max_depth_seen = 0u32;
    let mut cover_min_lo = f64::INFINITY;
    let mut min_hi = f64::INFINITY;
    let mut inconclusive = false;
    let mut refuted_at: Option<f64> = None;

    #[derive(Clone, Copy)]
    enum Step {
        Cleared,
        Floor,
        Split,
        Refute(f64),
    }

    while !frontier.is_empty() {
        let level: Vec<(Interval, Step)> = par::map_slice(&frontier, |b| {
            let bx = Interval::new(b.lo, b.hi);
            let enc = c.expr.eval(bx, lam, m, n);
            // accept only strictly above threshold: a box touching the
            // threshold is split, not accepted
            if enc.lo > c.threshold {
                return (enc, Step::Cleared);
            }
            // midpoint refutation probe
            let mid = bx.mid();
            let pv = c.expr.eval(mid, lam, m, n);
            if pv < c.threshold {
                let pt = c.expr.eval(Interval::point(mid), lam, m, n);
                let err = pt.width();
                if pt.hi < c.threshold && c.threshold - pv > 10.0 * err {
                    return (enc, Step::Refute(mid));
                }
            }
            if b.hi - b.lo <= opt.min_width || b.depth >= opt.max_depth {
                return (enc, Step::Floor);
            }
            (enc, Step::Split)
        });

        let mut next = Vec::new();
        let mut level_refute: Option<f64> = None;
        for (b, (enc, step)) in frontier.iter().zip(level.iter()) {
            boxes += 1;
            max_depth_seen = max_depth_seen.max(b.depth);
            min_hi = min_hi.min(enc.hi);
            match step {
                Step::Cleared | Step::Floor => {
                    cover_min_lo = cover_min_lo.min(enc.lo);
                    if matches!(step, Step::Floor) {
                        inconclusive = true;
                    }
                }
                Step::Refute(at) => {
                    cover_min_lo = cover_min_lo.min(enc.lo);
                    if level_refute.is_none() {
                        level_refute = Some(*at);
                    }
                }
                Step::Split => {
                    let mid = 0.5 * (b.lo + b.hi);
                    next.push(RBox { lo: b.lo, hi: mid, depth: b.depth + 1 });
                    next.push(RBox { lo: mid, hi: b.hi, depth: b.depth + 1 });
                }
            }
        }

        if let Some(at) = level_refute {
            // remaining split boxes still belong to the cover; their parents
            // were already counted via enc.lo above
            refuted_at = Some(at);
            break;
        }
        if boxes + next.len() as u64 > BOX_BUDGET {
            for b in &next {
                let enc = c.expr.eval(Interval::new(b.lo, b.hi), lam, m, n);
                cover_min_lo = cover_min_lo.min(enc.lo);
                min_hi = min_hi.min(enc.hi);
            }
            inconclusive = true;
            break;
        }
        frontier = next;
    }

    ConjunctRun {
        verified: refuted_at.is_none() && !inconclusive,
        refuted_at,
        inconclusive,
        boxes,
        depth: max_depth_seen,
        min_lo: cover_min_lo,
        min_hi,
    }
}

/// Deterministic witness refinement: scan a uniform grid (endpoints included)
/// of the original inequality and return the point of strongest violation.
fn refine_witness(c: &Conjunct, domain: (f64, f64), p: &WarpParams, seed: f64) -> Witness {
    const GRID: usize = 4096;
    let mut best_r = seed;
    let mut best_margin = c.original_margin(seed, p.lambda, p.m, p.n);
    for i in 0..=GRID {
        let r = if i == GRID {
            domain.1
        } else {
            domain.0 + (domain.1 - domain.0) * i as f64 / GRID as f64
        };
        let margin = c.original_margin(r, p.lambda, p.m, p.n);
        if margin < best_margin {
            best_margin = margin;
            best_r = r;
        }
    }
    Witness {
        r: best_r,
        value: point_eval(c.lhs, best_r, p.lambda, p.m, p.n),
        bound: c.bound_at(best_r, p.lambda, p.m, p.n),
    }
}

/// Certify one registered claim at a parameter point by adaptive bisection.
///
/// The guard conditions on `(m, n)` are not enforced; the certificate reports
/// what the interval arithmetic concludes for the parameters given.
pub fn certify_claim(claim: ClaimId, p: &WarpParams, opt: &BnbOptions) -> Certificate {
    let t0 = Instant::now();
    let domain = claim.domain();
    let conjuncts = claim.conjuncts();

    let mut boxes = 0u64;
    let mut depth = 0u32;
    let mut min_lo = f64::INFINITY;
    let mut min_hi = f64::INFINITY;
    let mut refuted: Option<Witness> = None;
    let mut inconclusive = false;

    for c in &conjuncts {
        let run = run_conjunct(c, domain, p, opt);
        boxes += run.boxes;
        depth = depth.max(run.depth);
        min_lo = min_lo.min(run.min_lo);
        min_hi = min_hi.min(run.min_hi);
        if let Some(seed) = run.refuted_at {
            let w = refine_witness(c, domain, p, seed);
            // refutation must survive on the original inequality
            let margin = c.original_margin(w.r, p.lambda, p.m, p.n);
            if margin < 0.0 {
                refuted = Some(w);
                break;
            }
            inconclusive = true;
        } else if run.inconclusive {
            inconclusive = true;
        } else {
            debug_assert!(run.verified);
        }
    }

    let status = match refuted {
        Some(w) => CertStatus::Refuted(w),
        None if inconclusive => CertStatus::Inconclusive,
        None => CertStatus::Verified,
    };

    Certificate {
        claim,
        lambda: p.lambda,
        m: p.m,
        n: p.n,
        status,
        min_enclosure: Interval::new(min_lo, min_hi),
        boxes,
        depth,
        wall_ms: t0.elapsed().as_millis() as u64,
    }
}

/// Theorem-level run: C10 at each `lambda` of the list.
#[derive(Debug, Clone)]
pub struct TheoremReport {
    pub certificates: Vec<Certificate>,
    pub all_verified: bool,
}

pub fn certify_theorem(m: u32, n: u32, lambdas: &[f64], opt: &BnbOptions) -> Result<TheoremReport> {
    let certificates: Vec<Certificate> = lambdas
        .iter()
        .map(|&lam| WarpParams::new(lam, m, n).map(|p| certify_claim(ClaimId::C10, &p, opt)))
        .collect::<Result<_>>()?;
    let all_verified = certificates
        .iter()
        .all(|c| matches!(c.status, CertStatus::Verified));
    Ok(TheoremReport {
        certificates,
        all_verified,
    })
}

/// Status matrix over the whole registry at each `lambda`.
pub fn registry_report(m: u32, n: u32, lambdas: &[f64], opt: &BnbOptions) -> Result<Vec<Certificate>> {
    let mut out = Vec::with_capacity(ClaimId::ALL.len() * lambdas.len());
    for claim in ClaimId::ALL {
        for &lam in lambdas {
            let p = WarpParams::new(lam, m, n)?;
            out.push(certify_claim(claim, &p, opt));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(lambda: f64, m: u32, n: u32) -> WarpParams {
        WarpParams::new(lambda, m, n).unwrap()
    }

    #[test]
    fn degenerate_box_matches_point() {
        let enc = interval_eval(ExprId::NegFppOverF, Interval::point(0.0), 1.0, 8, 2);
        assert!(enc.contains(2.5));
        assert!(enc.width() <= 1e-12);
    }

    #[test]
    fn fprime_range_over_full_domain() {
        let enc = interval_eval(
            ExprId::Fprime,
            Interval::new(0.0, FRAC_PI_2.next_up()),
            1.0,
            8,
            2,
        );
        // crude range blow-up is fine here; it must still contain [0, 1]
        assert!(enc.lo <= 0.0 && enc.hi >= 1.0);
    }

    #[test]
    fn aux_a_range() {
        let enc = interval_eval(ExprId::A, Interval::new(0.0, FRAC_PI_2), 2.0, 8, 2);
        assert!(enc.lo <= 1.0 + 1e-12 && enc.hi >= 4.0 - 1e-12);
        assert!(enc.hi <= 4.0 + 1e-9);
    }

    #[test]
    fn c3_verifies_and_c2_refutes() {
        let opt = BnbOptions::default();
        let c3 = certify_claim(ClaimId::C3, &params(1.0, 8, 2), &opt);
        assert!(matches!(c3.status, CertStatus::Verified), "{:?}", c3.status);

        let c2 = certify_claim(ClaimId::C2, &params(1.0, 8, 2), &opt);
        match c2.status {
            CertStatus::Refuted(w) => {
                assert!((w.r - FRAC_PI_2).abs() < 1e-12, "witness at {}", w.r);
                assert_eq!(w.value, 0.75);
                assert_eq!(w.bound, 1.0);
            }
            other => panic!("C2 expected refuted, got {other:?}"),
        }
    }

    #[test]
    fn c4_refutes_at_lambda_two() {
        let cert = certify_claim(ClaimId::C4, &params(2.0, 8, 2), &BnbOptions::default());
        match cert.status {
            CertStatus::Refuted(w) => {
                assert!((w.r - FRAC_PI_2).abs() < 1e-12);
                assert_eq!(w.value, -1.25);
                assert_eq!(w.bound, -1.0);
            }
            other => panic!("C4 expected refuted, got {other:?}"),
        }
    }

    #[test]
    fn c10_verifies_for_the_theorem_grid() {
        let rep = certify_theorem(8, 2, &[1.0, 10.0], &BnbOptions::default()).unwrap();
        assert!(rep.all_verified);
        for c in &rep.certificates {
            assert!(c.min_enclosure.lo >= 1.0);
        }
    }

    #[test]
    fn c10_refutes_when_m_is_too_small() {
        // at lambda = 1 the minimum is 1.5, so use lambda = 2 where
        // Ric(H,H)(pi/2) = 0.6 - 1.25 < 1
        let cert = certify_claim(ClaimId::C10, &params(2.0, 1, 2), &BnbOptions::default());
        assert!(matches!(cert.status, CertStatus::Refuted(_)), "{:?}", cert.status);
    }

    #[test]
    fn c5_is_always_decided() {
        let opt = BnbOptions {
            max_depth: 40,
            min_width: 1e-14,
        };
        for n in [2u32, 3, 4] {
            let m = 8 * (n - 1);
            for lam in [1.0, 2.0, 10.0, 100.0] {
                for claim in [ClaimId::C5a, ClaimId::C5b] {
                    let cert = certify_claim(claim, &params(lam, m, n), &opt);
                    assert!(
                        matches!(cert.status, CertStatus::Verified),
                        "{claim} at lam={lam}, m={m}, n={n}: {:?}",
                        cert.status
                    );
                    assert!(cert.depth <= 40);
                }
            }
        }
    }

    #[test]
    fn c1_verifies_via_factored_cofactors() {
        for lam in [1.0, 2.0, 100.0] {
            let cert = certify_claim(ClaimId::C1, &params(lam, 8, 2), &BnbOptions::default());
            assert!(matches!(cert.status, CertStatus::Verified), "lam={lam}: {:?}", cert.status);
        }
    }

    #[test]
    fn guards_are_reported() {
        assert!(ClaimId::C7.guard_met(8, 2));
        assert!(!ClaimId::C7.guard_met(7, 2));
        assert!(ClaimId::C10.guard_met(8, 2));
        assert!(!ClaimId::C10.guard_met(15, 3));
    }

    #[test]
    fn claim_ids_roundtrip() {
        for c in ClaimId::ALL {
            assert_eq!(ClaimId::parse(c.token()).unwrap(), c);
        }
        assert!(ClaimId::parse("C99").is_err());
    }
}
