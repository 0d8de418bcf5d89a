//! Certificates for `vol(K) < 2π ln det(K)`.
//!
//! Certificates never claim hyperbolicity; the inequality is certified for the
//! link under the recorded hypotheses.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::bounds::{
    self, bound_report, threshold_burton, threshold_thm1, voldet_rhs, BoundReport, BoundsError,
    Check, FibonacciVariant, Hypotheses, Threshold,
};
use crate::determinant::det_of_diagram;
use crate::diagram::Diagram;
use crate::numerics::{PrecisionContext, Real};
use crate::tait::{detect_exceptions, is_arborescent, shade, Shading};
use crate::twist::{decompose, twist_reduced_heuristic, TwistDecomposition, TwistReducedCheck};

/// Extra digits used when replaying a decisive comparison.
pub const REPLAY_DIGITS: u32 = 10;

/// Largest smaller-shading size for which a combinatorial certificate also
/// records the determinant.
const DET_WITNESS_LIMIT: usize = 400;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertifyError {
    #[error("determinant must be at least 2, got {0}")]
    Determinant(BigInt),
    #[error("volume {0:?} is not a positive decimal")]
    Volume(String),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertMethod {
    Direct,
    Thm1Threshold,
    BurtonEqn6,
    BoundChain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Certified,
    Inconclusive,
    HypothesisFailed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub lhs_name: String,
    pub lhs: String,
    pub relation: &'static str,
    pub rhs_name: String,
    pub rhs: String,
    /// `rhs - lhs` for `<`, `lhs - rhs` for `>=`.
    pub margin: String,
    pub holds: bool,
    pub replay_digits: u32,
    pub replay_holds: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub method: CertMethod,
    pub verdict: Verdict,
    pub witnesses: BTreeMap<String, String>,
    pub comparison: Option<Comparison>,
    pub hypotheses: Vec<(&'static str, Check)>,
    pub failed_hypothesis: Option<&'static str>,
    /// The tested inequality fails on the supplied data.
    pub violation: bool,
    pub caveats: Vec<String>,
}

impl Certificate {
    fn new(method: CertMethod) -> Self {
        Certificate {
            method,
            verdict: Verdict::Inconclusive,
            witnesses: BTreeMap::new(),
            comparison: None,
            hypotheses: Vec::new(),
            failed_hypothesis: None,
            violation: false,
            caveats: Vec::new(),
        }
    }

    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::Certified
    }

    fn witness(&mut self, name: &str, value: impl ToString) {
        self.witnesses.insert(name.to_string(), value.to_string());
    }
}

/// Slack a certified comparison must exceed: `10^(5 - digits)`.
fn guard(ctx: &PrecisionContext) -> Real {
    let den = num_traits::pow(BigInt::from(10u32), ctx.digits() as usize - 5);
    Real::from_ratio(&BigInt::from(1), &den, ctx.bits())
}

fn parse_volume(volume: &str, ctx: &PrecisionContext) -> Result<Real, CertifyError> {
    match ctx.parse(volume) {
        Some(v) if v.is_positive() => Ok(v),
        _ => Err(CertifyError::Volume(volume.to_string())),
    }
}

/// Compares a supplied volume against `2π ln det`.
pub fn certify_direct(
    det: &BigInt,
    volume: &str,
    ctx: &PrecisionContext,
) -> Result<Certificate, CertifyError> {
    if *det < BigInt::from(2) {
        return Err(CertifyError::Determinant(det.clone()));
    }
    let vol = parse_volume(volume, ctx)?;
    let rhs = voldet_rhs(det, ctx)?;
    let margin = &rhs - &vol;
    let holds = margin > guard(ctx);

    let fine = ctx.refined(REPLAY_DIGITS);
    let replay = &voldet_rhs(det, &fine)? - &parse_volume(volume, &fine)?;
    let replay_holds = replay > guard(&fine);

    let mut cert = Certificate::new(CertMethod::Direct);
    cert.witness("det", det);
    cert.witness("volume", volume);
    cert.comparison = Some(Comparison {
        lhs_name: "volume".into(),
        lhs: ctx.render(&vol),
        relation: "<",
        rhs_name: "2 pi ln det".into(),
        rhs: ctx.render(&rhs),
        margin: ctx.render(&margin),
        holds,
        replay_digits: fine.digits(),
        replay_holds: Some(replay_holds),
    });
    cert.hypotheses = vec![(bounds::ALTERNATING, Check::Asserted), (bounds::HYPERBOLIC, Check::Asserted)];
    if holds && replay_holds {
        cert.verdict = Verdict::Certified;
    } else {
        cert.violation = margin.is_negative() || margin.is_zero();
        if cert.violation {
            cert.caveats
                .push("supplied volume violates the tested inequality; check the input data".into());
        } else {
            cert.caveats
                .push("margin is within the rounding guard of the working precision".into());
        }
    }
    Ok(cert)
}

/// Machine-checked diagram hypotheses shared by the diagram-level routes.
#[derive(Debug, Clone)]
pub struct DiagramFacts {
    pub hypotheses: Hypotheses,
    pub twist: Option<TwistDecomposition>,
    pub twist_check: Option<TwistReducedCheck>,
    pub first_failure: Option<&'static str>,
}

pub fn diagram_facts(d: &Diagram) -> DiagramFacts {
    let mut hyp = Hypotheses::asserted();
    let mut first_failure = None;
    let mut record = |hyp: &mut Hypotheses, name: &'static str, holds: bool| {
        hyp.set(name, holds);
        if !holds && first_failure.is_none() {
            first_failure = Some(name);
        }
    };
    record(&mut hyp, bounds::NON_SPLIT, d.is_connected());
    record(&mut hyp, bounds::ALTERNATING, d.is_alternating());
    if d.is_connected() {
        record(&mut hyp, bounds::PRIME, d.is_prime());
        record(&mut hyp, bounds::REDUCED, d.is_reduced());
    }
    let twist = if d.is_connected() {
        decompose(d).ok()
    } else {
        None
    };
    if twist.is_none() && first_failure.is_none() {
        first_failure = Some("at least 2 crossings");
    }
    let twist_check = twist.as_ref().map(|td| twist_reduced_heuristic(d, td));
    if d.is_connected() && d.is_alternating() {
        if let Ok(arb) = is_arborescent(d) {
            hyp.set(bounds::ARBORESCENT, arb);
        }
        let exception = [Shading::Black, Shading::White]
            .iter()
            .filter_map(|&s| shade(d, s).ok())
            .any(|tg| detect_exceptions(&tg.graph).is_exception());
        hyp.set(bounds::NO_EXCEPTION_GRAPH, !exception);
    }
    DiagramFacts {
        hypotheses: hyp,
        twist,
        twist_check,
        first_failure,
    }
}

fn twist_caveat(check: &TwistReducedCheck) -> String {
    match check {
        TwistReducedCheck::Pass => {
            "twist-reduced asserted; face-pair heuristic found no flype candidates".into()
        }
        TwistReducedCheck::Suspect { pairs } => format!(
            "twist-reduced asserted but face-pair heuristic flags region pairs {pairs:?}; t may be overcounted"
        ),
    }
}

fn hypothesis_list(hyp: &Hypotheses, names: &[&'static str]) -> Vec<(&'static str, Check)> {
    names.iter().map(|&n| (n, hyp.status(n))).collect()
}

fn threshold_comparison(
    c: u64,
    th: &Threshold,
    name: &str,
    fine: Option<&Threshold>,
    ctx: &PrecisionContext,
) -> Comparison {
    let cr = ctx.int(c);
    let margin = &cr - &th.value;
    Comparison {
        lhs_name: "c".into(),
        lhs: c.to_string(),
        relation: ">=",
        rhs_name: name.into(),
        rhs: th.value.to_fixed(ctx.digits() as usize),
        margin: margin.to_fixed(ctx.digits() as usize),
        holds: BigInt::from(c) >= th.min_c,
        replay_digits: 2 * ctx.digits(),
        replay_holds: fine.map(|f| ctx.int(c) >= f.value.with_bits(ctx.bits()) && BigInt::from(c) >= f.min_c),
    }
}

/// Crossing-count certificate from the twist number alone.
pub fn certify_combinatorial(d: &Diagram, ctx: &PrecisionContext) -> Certificate {
    let facts = diagram_facts(d);
    let c = d.crossing_count() as u64;
    let names = [
        bounds::NON_SPLIT,
        bounds::ALTERNATING,
        bounds::PRIME,
        bounds::REDUCED,
        bounds::TWIST_REDUCED,
        bounds::HYPERBOLIC,
    ];
    let mut cert = Certificate::new(CertMethod::Thm1Threshold);
    cert.hypotheses = hypothesis_list(&facts.hypotheses, &names);
    cert.witness("c", c);
    if let Some(failed) = facts.first_failure {
        cert.verdict = Verdict::HypothesisFailed;
        cert.failed_hypothesis = Some(failed);
        return cert;
    }
    let td = facts.twist.as_ref().expect("twist decomposition exists when hypotheses hold");
    let t = td.t() as u64;
    cert.witness("t", t);
    if let Some(check) = &facts.twist_check {
        cert.caveats.push(twist_caveat(check));
    }
    if let Ok(tg) = crate::tait::smaller_shading(d) {
        if tg.graph.n <= DET_WITNESS_LIMIT {
            if let Ok(det) = det_of_diagram(d) {
                cert.witness("det", det.value);
            }
        }
    }

    let doubled = ctx.refined(ctx.digits());
    if t > 8 {
        if let Ok(th) = threshold_thm1(t, ctx) {
            cert.witness("threshold_thm1", th.value.to_fixed(ctx.digits() as usize));
            if BigInt::from(c) >= th.min_c {
                let fine = threshold_thm1(t, &doubled).ok();
                let cmp = threshold_comparison(c, &th, "threshold_thm1", fine.as_ref(), ctx);
                let ok = cmp.holds && cmp.replay_holds == Some(true);
                cert.comparison = Some(cmp);
                cert.verdict = if ok { Verdict::Certified } else { Verdict::Inconclusive };
                return cert;
            }
        }
    }
    if t >= 2 {
        if let Ok(th) = threshold_burton(t, ctx) {
            cert.witness("threshold_burton", th.value.to_fixed(ctx.digits() as usize));
            let fine = threshold_burton(t, &doubled).ok();
            let cmp = threshold_comparison(c, &th, "threshold_burton", fine.as_ref(), ctx);
            if cmp.holds {
                cert.method = CertMethod::BurtonEqn6;
                cert.verdict = if cmp.replay_holds == Some(true) {
                    Verdict::Certified
                } else {
                    Verdict::Inconclusive
                };
            }
            cert.comparison = Some(cmp);
        }
    }
    if cert.verdict != Verdict::Certified {
        cert.caveats
            .push("crossing number is below every applicable threshold".into());
    }
    cert
}

/// Every volume bound evaluated on the diagram's `t`, `c` and the exact
/// determinant, with hypotheses filled in from the diagram.
pub fn volume_bound_chain(
    d: &Diagram,
    det: &BigInt,
    variant: FibonacciVariant,
    ctx: &PrecisionContext,
) -> BoundReport {
    let facts = diagram_facts(d);
    let t = facts.twist.as_ref().map_or(0, |td| td.t() as u64);
    bound_report(
        t,
        d.crossing_count() as u64,
        Some(det),
        variant,
        &facts.hypotheses,
        ctx,
    )
}

/// Certificate from the smallest applicable volume upper bound.
pub fn certify_bound_chain(
    d: &Diagram,
    det: &BigInt,
    variant: FibonacciVariant,
    ctx: &PrecisionContext,
) -> Result<Certificate, CertifyError> {
    if *det < BigInt::from(2) {
        return Err(CertifyError::Determinant(det.clone()));
    }
    let facts = diagram_facts(d);
    let report = volume_bound_chain(d, det, variant, ctx);
    let mut cert = Certificate::new(CertMethod::BoundChain);
    cert.witness("det", det);
    cert.witness("c", d.crossing_count());
    cert.witness("t", report.t);
    if let Some(check) = &facts.twist_check {
        cert.caveats.push(twist_caveat(check));
    }
    if let Some(failed) = facts.first_failure {
        cert.verdict = Verdict::HypothesisFailed;
        cert.failed_hypothesis = Some(failed);
        return Ok(cert);
    }
    let rhs = voldet_rhs(det, ctx)?;
    let Some(best) = report
        .vol_upper
        .iter()
        .filter(|e| e.applicable)
        .filter_map(|e| e.real.as_ref().map(|v| (e, v)))
        .min_by(|a, b| a.1.cmp(b.1))
    else {
        return Ok(cert);
    };
    let (entry, value) = best;
    cert.hypotheses = entry.hypotheses.clone();
    if let Some(note) = &entry.note {
        cert.caveats.push(note.clone());
    }
    let margin = &rhs - value;
    let holds = margin > guard(ctx);
    let fine_ctx = ctx.refined(REPLAY_DIGITS);
    let fine = volume_bound_chain(d, det, variant, &fine_ctx);
    let replay_holds = fine
        .vol_upper
        .iter()
        .find(|e| e.name == entry.name)
        .and_then(|e| e.real.as_ref())
        .map(|v| &voldet_rhs(det, &fine_ctx).expect("det checked") - v > guard(&fine_ctx));
    cert.comparison = Some(Comparison {
        lhs_name: format!("vol_ub_{}", entry.name),
        lhs: ctx.render(value),
        relation: "<",
        rhs_name: "2 pi ln det".into(),
        rhs: ctx.render(&rhs),
        margin: ctx.render(&margin),
        holds,
        replay_digits: fine_ctx.digits(),
        replay_holds,
    });
    if holds && replay_holds == Some(true) {
        cert.verdict = Verdict::Certified;
    }
    Ok(cert)
}
