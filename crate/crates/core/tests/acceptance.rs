//! One line per acceptance criterion: verdict, measured value, tolerance and
//! elapsed time against its budget. Exits non-zero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use voldet::bounds::{
    det_lb_burton, det_lb_fibonacci, det_lb_ito, det_lb_stoimenow, threshold_burton,
    threshold_thm1, vol_ub_lat, vol_ub_ve, ArborescentCoefficients, FibonacciVariant,
    LogCoefficients,
};
use voldet::certify::certify_direct;
use voldet::determinant::{
    det_bracket, det_goeritz, det_spanning_trees, DEFAULT_STATE_LIMIT, DEFAULT_TREE_LIMIT,
};
use voldet::diagram::Diagram;
use voldet::numerics::{cached_constants, compute_constants, PrecisionContext, Real};
use voldet::pipeline::{ingest_csv, validate_table, ValidateOptions};
use voldet::tait::{detect_exceptions, goeritz, is_arborescent, medial_diagram, shade, Shading};
use voldet::twist::{decompose, twist_reduced_heuristic};

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn trunc6(x: &Real) -> String {
    x.to_fixed_truncated(6)
}

fn expect_eq(label: &str, got: String, want: &str) -> Result<String, String> {
    if got == want {
        Ok(format!("{label}={got}"))
    } else {
        Err(format!("{label}={got}, expected {want}"))
    }
}

fn c1_constants() -> Outcome {
    let ctx = compute_constants(32).map_err(|e| e.to_string())?;
    let parts = [
        expect_eq("gamma", trunc6(ctx.gamma()), "1.425299")?,
        expect_eq("v_tet", trunc6(ctx.v_tet()), "1.014941")?,
        expect_eq("xi", trunc6(ctx.xi()), "5.029546")?,
    ];
    Ok(format!("{} (6-decimal truncation, exact match)", parts.join(" ")))
}

fn c2_thresholds() -> Outcome {
    let ctx = compute_constants(50).map_err(|e| e.to_string())?;
    let burton = threshold_burton(9, &ctx).map_err(|e| e.to_string())?;
    let thm1 = threshold_thm1(9, &ctx).map_err(|e| e.to_string())?;
    let b = burton.min_c.clone();
    let t = thm1.min_c.clone();
    let msg = format!(
        "ceil burton(9)={b} in [409452,409454]; ceil thm1(9)={t} vs 37055 +-10; thm1(9) exact={}",
        thm1.value.to_fixed(20)
    );
    let ok_b = b >= BigInt::from(409452) && b <= BigInt::from(409454);
    let ok_t = (&t - BigInt::from(37055)).magnitude() <= &10u32.into();
    if ok_b && ok_t {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn c3_coefficients() -> Outcome {
    let ctx = compute_constants(40).map_err(|e| e.to_string())?;
    let log = LogCoefficients::new(&ctx);
    let arb = ArborescentCoefficients::new(FibonacciVariant::Standard, &ctx);
    let (b_shift, c_shift) = log.shifted(&ctx);
    let parts = [
        expect_eq("A", trunc6(&log.a), "28.639760")?,
        expect_eq("A3", trunc6(&arb.a), "21.091368")?,
        expect_eq("B21", trunc6(&arb.b), "0.024922")?,
        expect_eq("C21", trunc6(&arb.c), "23.625039")?,
        expect_eq("D", trunc6(&arb.d), "0.001388")?,
        expect_eq("E", trunc6(&arb.e), "27.684806")?,
        expect_eq("B-4v", trunc6(&b_shift), "15.791802")?,
        expect_eq("C-4v", trunc6(&c_shift), "19.851568")?,
    ];
    Ok(format!(
        "{}; symbolic B={} C={} (shifted values subtract 4 v_tet)",
        parts.join(" "),
        trunc6(&log.b),
        trunc6(&log.c)
    ))
}

fn c4_eleven_crossing_example() -> Outcome {
    let ctx = cached_constants(50).map_err(|e| e.to_string())?;
    let d = common::braid_diagram(common::K11A47_BRAID);
    let td = decompose(&d).map_err(|e| e.to_string())?;
    let mut sizes = td.sizes();
    sizes.sort_unstable();
    let tg = shade(&d, Shading::Black).map_err(|e| e.to_string())?;
    let g = det_goeritz(&goeritz(&tg)).value;
    let b = det_bracket(&d, DEFAULT_STATE_LIMIT).map_err(|e| e.to_string())?.value;
    let s = det_spanning_trees(&tg, DEFAULT_TREE_LIMIT)
        .map_err(|e| e.to_string())?
        .value;
    let cert = certify_direct(&g, "15.597714", &ctx).map_err(|e| e.to_string())?;
    let margin: f64 = cert
        .comparison
        .as_ref()
        .map(|c| c.margin.parse().unwrap_or(f64::NAN))
        .unwrap_or(f64::NAN);
    let msg = format!(
        "c={} alternating={} t={} sizes={sizes:?} det goeritz/bracket/trees={g}/{b}/{s} verdict={:?} margin={margin:.9} (tol 1e-9 of 14.323907297)",
        d.crossing_count(),
        d.is_alternating(),
        td.t(),
        cert.verdict
    );
    let ok = d.crossing_count() == 11
        && d.is_alternating()
        && td.t() == 6
        && sizes == [1, 1, 2, 2, 2, 3]
        && [&g, &b, &s].iter().all(|v| **v == BigInt::from(117))
        && cert.is_certified()
        && (margin - 14.323907297).abs() < 1e-9;
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

/// All three determinant routes, with Goeritz taken on both shadings.
fn three_dets(d: &Diagram) -> Result<[BigInt; 4], String> {
    let black = shade(d, Shading::Black).map_err(|e| e.to_string())?;
    let white = shade(d, Shading::White).map_err(|e| e.to_string())?;
    let small = if black.graph.n <= white.graph.n { &black } else { &white };
    Ok([
        det_goeritz(&goeritz(&black)).value,
        det_goeritz(&goeritz(&white)).value,
        det_bracket(d, DEFAULT_STATE_LIMIT).map_err(|e| e.to_string())?.value,
        det_spanning_trees(small, DEFAULT_TREE_LIMIT)
            .map_err(|e| e.to_string())?
            .value,
    ])
}

fn c5_oracle_equivalence() -> Outcome {
    let census = ingest_csv(common::census_path()).map_err(|e| e.to_string())?;
    let mut census_n = 0;
    let mut mismatches = Vec::new();
    for row in census.rows.iter().filter(|r| r.crossings.is_some_and(|c| c <= 10)) {
        let d = Diagram::build(row.pd.as_ref().ok_or("census row without pd")?)
            .map_err(|e| e.to_string())?;
        let dets = three_dets(&d)?;
        let tab = row.det.clone().ok_or("census row without det")?;
        if dets.iter().any(|v| *v != tab) {
            mismatches.push(format!("{}: {dets:?} vs {tab}", row.name));
        }
        census_n += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut sp_n = 0;
    while sp_n < 100 {
        let g = common::random_sp_graph(&mut rng, 12);
        let d = medial_diagram(&g).map_err(|e| e.to_string())?;
        if !is_arborescent(&d).map_err(|e| e.to_string())? {
            return Err("SP-generated diagram not recognized as arborescent".into());
        }
        let dets = three_dets(&d)?;
        if dets.iter().any(|v| *v != dets[0]) {
            mismatches.push(format!("sp#{sp_n}: {dets:?}"));
        }
        sp_n += 1;
    }
    let msg = format!(
        "{} diagrams ({census_n} census c<=10 also matched against tabulated det, {sp_n} SP arborescent c<=12), {} mismatches",
        census_n + sp_n,
        mismatches.len()
    );
    if mismatches.is_empty() && census_n + sp_n >= 200 {
        Ok(msg)
    } else {
        Err(format!("{msg}: {:?}", &mismatches[..mismatches.len().min(5)]))
    }
}

fn close(a: &Real, b: &Real, ctx: &PrecisionContext) -> bool {
    let tol = ctx.parse(&format!("1e-{}", ctx.digits() - 5)).expect("tolerance");
    (a - b).abs() <= tol
}

fn c6_inequalities() -> Outcome {
    let ctx = cached_constants(40).map_err(|e| e.to_string())?;
    let err = |e: voldet::bounds::BoundsError| e.to_string();
    let mut pairs = 0;
    for t in 2..=100u64 {
        let sto = det_lb_stoimenow(t, &ctx).map_err(err)?;
        for c in t..=100 {
            let bur = det_lb_burton(t, c, &ctx).map_err(err)?;
            let ito = det_lb_ito(t, c, &ctx).map_err(err)?;
            // at c = t all three coincide up to rounding
            let (ito_eq, bur_eq) = (close(&ito, &bur, &ctx), close(&bur, &sto, &ctx));
            if (ito < bur && !ito_eq) || (bur < sto && !bur_eq) {
                return Err(format!("LB ordering fails at t={t} c={c}"));
            }
            if ito_eq != (c == t) || bur_eq != (c == t) {
                return Err(format!("LB equality mismatch at t={t} c={c}"));
            }
            pairs += 1;
        }
    }
    let four_v = ctx.v_tet().mul_int(4);
    for t in 9..=200u64 {
        let lat = vol_ub_lat(t, &ctx).map_err(err)?;
        let ve = vol_ub_ve(t, &ctx).map_err(err)?;
        if !close(&ve, &(&lat - &four_v), &ctx) {
            return Err(format!("ve != lat - 4 v_tet at t={t}"));
        }
        let th1 = threshold_thm1(t, &ctx).map_err(err)?;
        let thb = threshold_burton(t, &ctx).map_err(err)?;
        if th1.value >= thb.value {
            return Err(format!("threshold_thm1 >= threshold_burton at t={t}"));
        }
    }
    let mut replays = 0;
    let two_pi = ctx.pi().mul_int(2);
    // thresholds pass u64 near t = 27
    for t in 9..=25u64 {
        let th1 = threshold_thm1(t, &ctx).map_err(err)?;
        let rhs = &ctx.v_tet().mul_int(10) * &(&ctx.int(t) - &ctx.ratio(14, 10));
        for c in [th1.min_c.clone(), &th1.min_c + 1, &th1.min_c * 2] {
            let c64: u64 = c.clone().try_into().map_err(|_| "c overflow")?;
            let lhs = &two_pi * &det_lb_ito(t, c64, &ctx).map_err(err)?.ln();
            if lhs < rhs {
                return Err(format!("threshold replay fails at t={t} c={c}"));
            }
            replays += 1;
        }
    }
    Ok(format!(
        "LB ordering on {pairs} (t,c) pairs; ve = lat - 4v_tet for t=9..200 (tol 1e-35); thm1 < burton threshold t=9..200; {replays} threshold replays"
    ))
}

fn c7_fibonacci() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut kept, mut attempts, mut excluded) = (0, 0, 0);
    let mut violations = Vec::new();
    while kept < 500 && attempts < 20_000 {
        attempts += 1;
        let g = common::random_sp_graph(&mut rng, 14);
        let d = medial_diagram(&g).map_err(|e| e.to_string())?;
        let exception = [Shading::Black, Shading::White]
            .iter()
            .any(|&s| shade(&d, s).map(|tg| detect_exceptions(&tg.graph).is_exception()).unwrap_or(true));
        if exception || !d.is_reduced() {
            excluded += 1;
            continue;
        }
        let td = decompose(&d).map_err(|e| e.to_string())?;
        if !twist_reduced_heuristic(&d, &td).is_pass() {
            excluded += 1;
            continue;
        }
        let det = det_goeritz(&goeritz(&shade(&d, Shading::Black).map_err(|e| e.to_string())?)).value;
        let fib = det_lb_fibonacci(td.t() as u64, FibonacciVariant::Standard)
            .map_err(|e| e.to_string())?;
        if num_rational::BigRational::from_integer(det.clone()) < fib {
            violations.push(format!("t={} det={det} F={fib}", td.t()));
        }
        kept += 1;
    }
    let msg = format!(
        "{kept} diagrams checked ({excluded} excluded as non-reduced, exception or twist-heuristic suspect), {} violations of det >= F(t+3)",
        violations.len()
    );
    if kept >= 500 && violations.is_empty() {
        Ok(msg)
    } else {
        Err(format!("{msg}: {:?}", &violations[..violations.len().min(5)]))
    }
}

fn c8_census() -> Outcome {
    let ctx = cached_constants(50).map_err(|e| e.to_string())?;
    let census = ingest_csv(common::census_path()).map_err(|e| e.to_string())?;
    let report = validate_table(
        &census,
        &ctx,
        ValidateOptions {
            parallel: true,
            ..Default::default()
        },
        None,
    );
    let s = &report.summary;
    let max_c = census.rows.iter().filter_map(|r| r.crossings).max().unwrap_or(0);
    let msg = format!(
        "{} rows (c<={max_c}): certified {} violations {} det discrepancies {} errors {}",
        s.rows,
        s.certified,
        s.violations,
        s.discrepancies,
        s.ingest_errors + s.row_errors
    );
    if s.rows > 0 && s.certified == s.rows && report.is_clean() && max_c <= 12 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "constants regression", budget: Duration::from_secs(1), run: c1_constants },
        Criterion { id: 2, name: "threshold reproduction", budget: Duration::from_secs(1), run: c2_thresholds },
        Criterion { id: 3, name: "coefficient regression", budget: Duration::from_secs(1), run: c3_coefficients },
        Criterion { id: 4, name: "eleven-crossing example end-to-end", budget: Duration::from_secs(5), run: c4_eleven_crossing_example },
        Criterion { id: 5, name: "determinant oracle equivalence", budget: Duration::from_secs(120), run: c5_oracle_equivalence },
        Criterion { id: 6, name: "inequality suite", budget: Duration::from_secs(60), run: c6_inequalities },
        Criterion { id: 7, name: "Fibonacci bound validation", budget: Duration::from_secs(120), run: c7_fibonacci },
        Criterion { id: 8, name: "census validation", budget: Duration::from_secs(300), run: c8_census },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let in_time = elapsed <= c.budget;
        let (ok, detail) = match outcome {
            Ok(m) => (in_time, m),
            Err(m) => (false, m),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {} [{}] {}: {} ({} ms, budget {} ms)",
            c.id,
            if ok { "PASS" } else { "FAIL" },
            c.name,
            detail,
            elapsed.as_millis(),
            c.budget.as_millis()
        );
    }
    println!("acceptance: {} passed, {} failed", criteria.len() - failed, failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
