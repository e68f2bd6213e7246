//! Every cross-module oracle, run on the configured field, family and
//! modulus. One row per check; any failure makes the run exit with status 1.

use ffvar_core::algebra::{enumerate_monic, ExtensionField, FieldParams, IrreducibleSieve};
use ffvar_core::apstats::{classical_lambda_sum, classical_lambda_sum_by_factoring, direct_coprime_sum};
use ffvar_core::curve::{CurveFamily, PrimePower, DFT_BUDGET};
use ffvar_core::lfun::{theta_class, Classification, ROUND_TRIP_TOLERANCE};
use ffvar_core::rmt::{trace_moments, HaarSampler};
use num_complex::Complex64;
use serde_json::json;

use crate::config::{Resolved, Setup};
use crate::experiments::{census, Outcome, Prepared};
use crate::report::Table;
use crate::RunError;

type Check = Result<String, String>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

pub fn run(r: &Resolved) -> Result<Outcome, RunError> {
    let setup = &r.setups[0];
    let mut checks: Vec<(&'static str, Check)> = vec![
        ("prime_polynomial_theorem", prime_polynomial_theorem(&setup.field)),
        ("haar_unitarity", haar_unitarity(r.seed)),
        ("haar_trace_moments", haar_moments(r.seed)),
    ];
    if let Some(curve) = setup.curve() {
        checks.push(("global_l_triviality", global_triviality(curve, 4)));
        checks.push(("genus_two_l_triviality", global_triviality(&CurveFamily::genus_two_example(&setup.field), 3)));
        checks.push(("dft_matches_naive", dft_matches_naive(curve)));
        checks.push(("lambda_table_matches_scratch", lambda_scratch(curve)));
    }
    match Prepared::new(setup, setup.r_c()?.max(1), r.trace_mode) {
        Ok(prep) => checks.extend(l_function_checks(setup, &prep)),
        Err(e) => checks.push(("prepare_trace_data", Err(e.to_string()))),
    }
    let mut table = Table::new(&["check", "status", "detail"]);
    let mut failures = Vec::new();
    for (name, result) in checks {
        let (status, detail) = match result {
            Ok(d) => ("pass", d),
            Err(d) => {
                failures.push(format!("{name}: {d}"));
                ("fail", d)
            }
        };
        table.push(vec![name.into(), status.into(), detail]);
    }
    let summary = json!({
        "modulus": setup.modulus.to_string(),
        "checks": table.rows.len(),
        "failed": failures.len(),
    });
    Ok(Outcome { table, summary, failures })
}

fn prime_polynomial_theorem(f: &FieldParams) -> Check {
    let q = f.q() as u64;
    let max = if q <= 5 { 6 } else { 4 };
    let sieve = IrreducibleSieve::new(f, max).map_err(err)?;
    for n in 1..=max {
        let s = classical_lambda_sum(&sieve, n);
        if s != q.pow(n as u32) {
            return Err(format!("n = {n}: sum Lambda = {s}, q^n = {}", q.pow(n as u32)));
        }
    }
    for n in 1..=max.min(3) {
        let s = classical_lambda_sum_by_factoring(f, n);
        if s != q.pow(n as u32) {
            return Err(format!("n = {n}: factoring gives {s}"));
        }
    }
    Ok(format!("sum over M_n of Lambda = q^n for n <= {max}"))
}

fn global_triviality(curve: &CurveFamily, max: usize) -> Check {
    let table = ffvar_core::curve::TraceTable::for_curve(curve, max, ffvar_core::curve::TraceMode::Auto).map_err(err)?;
    for n in 1..=max {
        let total: i64 = table.degree(n).map_err(err)?.entries.iter().map(PrimePower::lambda).sum();
        if total != 0 {
            return Err(format!("f = {}: sum over M_{n} of Lambda = {total}", curve.f()));
        }
    }
    Ok(format!("f = {}: sum over M_n of Lambda = 0 for n <= {max}", curve.f()))
}

fn dft_matches_naive(curve: &CurveFamily) -> Check {
    for d in 1..=3 {
        let ext = ExtensionField::new(curve.field(), d).map_err(err)?;
        let batch = curve.a_trace_batch(&ext, DFT_BUDGET).map_err(err)?;
        if let Some(t0) = ext.elements().find(|&t0| batch[t0.index() as usize] != curve.a_trace_naive(&ext, t0)) {
            return Err(format!("D = {d}: mismatch at element {}", t0.index()));
        }
    }
    Ok("batched traces equal the naive sums for D <= 3".into())
}

fn lambda_scratch(curve: &CurveFamily) -> Check {
    let f = curve.field();
    let table = ffvar_core::curve::TraceTable::for_curve(curve, 2, ffvar_core::curve::TraceMode::Auto).map_err(err)?;
    for n in 1..=2 {
        for g in enumerate_monic(f, n) {
            let (a, b) = (table.von_mangoldt(&g).map_err(err)?, curve.von_mangoldt(&g).map_err(err)?);
            if a != b {
                return Err(format!("Lambda({g}): table {a}, scratch {b}"));
            }
        }
    }
    Ok("table lookups agree with from-scratch evaluation for n <= 2".into())
}

fn l_function_checks(setup: &Setup, prep: &Prepared) -> Vec<(&'static str, Check)> {
    let r_c = prep.r_c;
    let rank = setup.curve().map(CurveFamily::rank).unwrap_or(1);
    let polys = match prep.l_polynomials() {
        Ok(p) => p,
        Err(e) => return vec![("l_polynomials", Err(e.to_string()))],
    };
    let mut out = Vec::new();

    let bad_degree = polys.iter().filter(|(_, l)| !l.has_full_degree(r_c)).count();
    out.push((
        "degree_formula",
        if bad_degree == 0 {
            Ok(format!("all {} characters give degree r_C = {r_c}", polys.len()))
        } else {
            Err(format!("{bad_degree} characters miss degree {r_c}"))
        },
    ));

    let round_trip = polys.iter().map(|(s, l)| l.round_trip_error(&s.b)).fold(0.0, f64::max);
    out.push((
        "newton_round_trip",
        if round_trip <= ROUND_TRIP_TOLERANCE {
            Ok(format!("max error {round_trip:.2e}"))
        } else {
            Err(format!("max error {round_trip:.2e}"))
        },
    ));

    let c = census(setup, &polys, rank);
    out.push((
        "non_good_bound",
        if c.within_bound() {
            Ok(format!("{} good, {} mixed, {} heavy; bound {}", c.good, c.mixed, c.heavy, c.bound))
        } else {
            Err(format!("{} non-good exceed bound {}", c.mixed + c.heavy, c.bound))
        },
    ));
    if rank >= 2 {
        out.push((
            "no_heavy_characters",
            if c.heavy == 0 { Ok("none".into()) } else { Err(format!("{} heavy characters", c.heavy)) },
        ));
    }

    let mut theta_gap: f64 = 0.0;
    for (s, l) in &polys {
        if l.classification == Classification::Good {
            let theta = theta_class(l).expect("good");
            for (n, bstar) in s.normalized.iter().enumerate() {
                let tr: Complex64 = theta.iter().map(|z| z.powu(n as u32 + 1)).sum();
                theta_gap = theta_gap.max((-tr - bstar).norm());
            }
        }
    }
    out.push((
        "theta_traces",
        if theta_gap <= 1e-3 { Ok(format!("max gap {theta_gap:.2e}")) } else { Err(format!("max gap {theta_gap:.2e}")) },
    ));

    let mut conj_gap: f64 = 0.0;
    for (s, _) in &polys {
        let j = prep.group.character_index(&prep.group.conj(&s.character));
        for (a, b) in s.b.iter().zip(&polys[j].0.b) {
            conj_gap = conj_gap.max((a.conj() - b).norm());
        }
    }
    out.push((
        "conjugate_character",
        if conj_gap <= 1e-6 { Ok(format!("max gap {conj_gap:.2e}")) } else { Err(format!("max gap {conj_gap:.2e}")) },
    ));

    let trivial = &polys[0].0;
    let mut integral = Ok(format!("b_n(chi0) integral for n <= {r_c}"));
    for (n, b) in trivial.b.iter().enumerate() {
        if b.im.abs() > 1e-6 || (b.re - b.re.round()).abs() > 1e-6 {
            integral = Err(format!("b_{}(chi0) = {b}", n + 1));
        }
    }
    if let (Ok(_), Some(curve)) = (&integral, setup.curve()) {
        for n in 1..=r_c.min(3) {
            match direct_coprime_sum(curve, &setup.modulus, n) {
                Ok(d) if d as f64 == trivial.b[n - 1].re => {}
                Ok(d) => integral = Err(format!("b_{n}(chi0) = {} but the direct coprime sum is {d}", trivial.b[n - 1].re)),
                Err(e) => integral = Err(e.to_string()),
            }
        }
    }
    out.push(("trivial_character_sum", integral));

    let mut spectral = Ok(format!("spectral identity and mean formula hold for n <= {}", r_c.max(1)));
    for n in 1..=r_c.max(1) {
        if let Err(e) = prep.variance(n) {
            spectral = Err(e.to_string());
            break;
        }
    }
    out.push(("spectral_identity", spectral));
    out
}

fn haar_unitarity(seed: u64) -> Check {
    for dim in 1..=8 {
        let mut s = HaarSampler::new(dim, seed).map_err(err)?;
        for _ in 0..20 {
            let d = s.sample().unitarity_defect();
            if d > 1e-10 {
                return Err(format!("dimension {dim}: defect {d:.2e}"));
            }
        }
    }
    Ok("samples unitary to 1e-10 for R <= 8".into())
}

fn haar_moments(seed: u64) -> Check {
    for m in trace_moments(1, 6, 1000, seed).map_err(err)? {
        if (m.mean - 1.0).abs() > 1e-12 {
            return Err(format!("R = 1, n = {}: mean {}", m.n, m.mean));
        }
    }
    let ms = trace_moments(5, 7, 20_000, seed).map_err(err)?;
    match ms.iter().find(|m| m.z_score() > 4.0) {
        Some(m) => Err(format!("R = 5, n = {}: mean {} vs {} ({:.1} standard errors)", m.n, m.mean, m.exact, m.z_score())),
        None => Ok("E|Tr U^n|^2 within 4 standard errors of min{n, 5} for n <= 7".into()),
    }
}
